"""Context-specific graphs: the stage-line rule and minimal-context detection."""

from __future__ import annotations

import itertools

from .csi import CsiStatement
from .graphs import ContextDag, Dag, saturated_statements
from .model import (
    Context,
    CStreeSpec,
    VariableSystem,
    context_subtree,
    level_stage_map,
)
from .algebra import (
    outcome_probabilities,
    random_point,
    statement_holds,
    statement_zero_at,
)


def context_dag(tree: CStreeSpec, context=Context()) -> ContextDag:
    """The DAG over the unpinned variables read off the staging.

    An earlier variable i parents j when some pair of vertices of the
    context subtree, differing only in coordinate i, lies in two different
    stages of j's level; a constant line means j ignores i there.
    """
    ctx = Context.of(context)
    sub = context_subtree(tree, ctx) if ctx else tree
    system = sub.system
    edges = set()
    for pos, var in enumerate(system.variables):
        if pos == 0:
            continue
        smap = level_stage_map(sub, var)
        for i in range(pos):
            hit = False
            for v in system.level_vertices(pos):
                if v[i] != 0:
                    continue
                base = smap[v]
                for x in range(1, system.cards[i]):
                    if smap[v[:i] + (x,) + v[i + 1 :]] != base:
                        hit = True
                        break
                if hit:
                    break
            if hit:
                edges.add((system.variables[i], var))
    return ContextDag(ctx, Dag.of(system.variables, edges))


def all_contexts(system: VariableSystem) -> tuple:
    """Every context on a proper subset of the variables, ordered by size
    then lexicographically."""
    out = [Context()]
    for size in range(1, system.p):
        for vars_ in itertools.combinations(system.variables, size):
            for vals in itertools.product(*(range(system.card(v)) for v in vars_)):
                out.append(Context(tuple(zip(vars_, vals))))
    return tuple(out)


class _StatementOracle:
    """Memoized semantic validity of statements on one tree.

    Two independent rational points give fast exact refutations; a
    statement surviving both is confirmed by the symbolic vanishing check,
    so the verdict is never a guess.
    """

    def __init__(self, tree: CStreeSpec, seed=0):
        self.tree = tree
        self.system = tree.system
        self._probs = [
            outcome_probabilities(tree, random_point(tree, seed)),
            outcome_probabilities(tree, random_point(tree, seed + 1)),
        ]
        self._cache = {}

    def holds(self, statement: CsiStatement) -> bool:
        key = statement.canonicalize()
        verdict = self._cache.get(key)
        if verdict is None:
            verdict = all(
                statement_zero_at(key, self.system, probs) for probs in self._probs
            ) and statement_holds(self.tree, key)
            self._cache[key] = verdict
        return verdict


def _context_statements(system: VariableSystem, ctx: Context):
    """Candidate statements within one context, canonical pairs only.

    Unassigned free variables are marginalized out, so this ranges over
    every (A, B, S) choice, saturated or not.
    """
    free = [v for v in system.variables if ctx.get(v) is None]
    for split in itertools.product((0, 1, 2, 3), repeat=len(free)):
        a = frozenset(v for v, t in zip(free, split) if t == 0)
        b = frozenset(v for v, t in zip(free, split) if t == 1)
        if not a or not b or min(a) > min(b):
            continue
        s = frozenset(v for v, t in zip(free, split) if t == 2)
        yield CsiStatement(a, b, s, ctx)


def _absorbable(oracle: _StatementOracle, statement: CsiStatement) -> bool:
    """Whether some nonempty part of the context can move into the
    conditioning set without breaking validity."""
    keys = statement.context.keys
    for size in range(len(keys), 0, -1):
        for t in itertools.combinations(keys, size):
            wider = CsiStatement(
                statement.a,
                statement.b,
                statement.s | set(t),
                statement.context.drop(t),
            )
            if oracle.holds(wider):
                return True
    return False


def minimal_contexts(tree: CStreeSpec, seed=0) -> tuple:
    """The contexts that carry irreducible independence, with their graphs.

    A context is kept when some statement valid in it stays tied to it:
    un-pinning any nonempty part of the context breaks the statement.  The
    empty context always leads the list (a complete graph when no global
    statement holds).  Validity is decided by the semantic oracle; the
    graphs come from ``context_dag``.
    """
    oracle = _StatementOracle(tree, seed)
    kept = [context_dag(tree, Context())]
    for ctx in all_contexts(tree.system)[1:]:
        for statement in _context_statements(tree.system, ctx):
            if oracle.holds(statement) and not _absorbable(oracle, statement):
                kept.append(context_dag(tree, ctx))
                break
    return tuple(kept)


def separation_disagreements(tree: CStreeSpec, cdags, seed=0) -> tuple:
    """Separation claims of context graphs that the semantic oracle refutes.

    A sound graph produces nothing: every saturated statement it separates
    is true of the model.  The reverse direction is not audited, since the
    staging genuinely carries more independence than any one graph shows.
    Graphs of contexts pinning late variables can overclaim (conditioning
    on a later outcome reweights the earlier levels), which is exactly what
    this surfaces.
    """
    oracle = _StatementOracle(tree, seed)
    out = []
    for cdag in cdags:
        for statement in saturated_statements(cdag.dag, cdag.context):
            if not oracle.holds(statement):
                out.append((cdag.context, statement))
    return tuple(out)
