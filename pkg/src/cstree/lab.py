"""Exhaustive and randomized studies over small variable systems.

Enumeration walks every staging of a system level by level; the three-
variable classifier and the accompanying census check the structure theory
on everything the budget allows.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import (
    BudgetExceededError,
    GapError,
    NotP3Error,
    OverlapError,
    PreconditionError,
)
from .graphs import Dag, is_perfect
from .model import (
    Context,
    CStreeSpec,
    Stage,
    VariableSystem,
    _resolve_stage,
    spec_to_json,
    stage_members,
    tree_of_dag,
    validate,
)
from .algebra import is_balanced
from .contexts import minimal_contexts


def _subsets(positions):
    for size in range(len(positions) + 1):
        yield from itertools.combinations(positions, size)


def _level_partitions(system: VariableSystem, pos: int):
    """All partitions of layer ``pos`` into context cylinders.

    Splits on the lex-smallest uncovered vertex, trying every containing
    cylinder in (size, lex) context order, so each partition appears once
    and the order is deterministic.
    """
    variables = system.variables
    subsets = tuple(_subsets(tuple(range(pos))))

    def cylinder(vertex, fixed):
        ctx = Context(tuple((variables[i], vertex[i]) for i in fixed))
        stage = Stage(variables[pos], ctx)
        return stage, frozenset(stage_members(system, stage))

    def split(uncovered):
        if not uncovered:
            yield ()
            return
        v = min(uncovered)
        for fixed in subsets:
            stage, members = cylinder(v, fixed)
            if members <= uncovered:
                for rest in split(uncovered - members):
                    yield (stage,) + rest

    yield from split(frozenset(system.level_vertices(pos)))


def validate_level_partition(system: VariableSystem, var: int, stages) -> tuple:
    """Check an explicit stage list partitions its layer.

    Raises Overlap on collisions, Gap on uncovered vertices, and the usual
    cylinder errors for bad stages; returns the resolved stages.
    """
    pos = system.position(var)
    resolved = [_resolve_stage(system, st) for st in stages]
    covered = set()
    for st in resolved:
        members = set(stage_members(system, st))
        if covered & members:
            raise OverlapError(f"stage [{st.context}] overlaps earlier stages")
        covered |= members
    missing = set(system.level_vertices(pos)) - covered
    if missing:
        raise GapError(f"layer {pos} vertices {sorted(missing)} are uncovered")
    return tuple(resolved)


@dataclass
class EnumerationCursor:
    """Resumable enumeration state: per-level partition lists plus a flat
    index into their product, decoded mixed-radix."""

    system: VariableSystem
    partitions: tuple
    index: int = 0

    @property
    def total(self) -> int:
        out = 1
        for parts in self.partitions:
            out *= len(parts)
        return out

    @property
    def remaining(self) -> int:
        return self.total - self.index

    def __iter__(self):
        return self

    def __next__(self) -> CStreeSpec:
        if self.index >= self.total:
            raise StopIteration
        digits = []
        idx = self.index
        for parts in reversed(self.partitions):
            idx, d = divmod(idx, len(parts))
            digits.append(d)
        digits.reverse()
        self.index += 1
        levels = tuple(self.partitions[k][d] for k, d in enumerate(digits))
        return validate(CStreeSpec(self.system, levels))


def enumeration_cursor(system: VariableSystem, max_trees=200_000) -> EnumerationCursor:
    per_level = []
    total = 1
    for pos in range(system.p):
        parts = tuple(_level_partitions(system, pos))
        per_level.append(parts)
        total *= len(parts)
        if max_trees is not None and total > max_trees:
            raise BudgetExceededError(
                f"at least {total} stagings, budget is {max_trees}"
            )
    return EnumerationCursor(system, tuple(per_level))


def enumerate_cstrees(system: VariableSystem, max_trees=200_000):
    """Every staging of the system, validated, in deterministic order.

    Refuses to start once the partition-count product exceeds the budget.
    """
    return iter(enumeration_cursor(system, max_trees))


def count_cstrees(system: VariableSystem, max_trees=200_000) -> int:
    return enumeration_cursor(system, max_trees).total


def random_cstree(system: VariableSystem, rng) -> CStreeSpec:
    """One random staging: each layer is carved by repeatedly choosing a
    random admissible cylinder around its smallest uncovered vertex.  Not
    uniform, but every staging has positive probability."""
    levels = []
    for pos in range(system.p):
        uncovered = set(system.level_vertices(pos))
        stages = []
        subsets = tuple(_subsets(tuple(range(pos))))
        while uncovered:
            v = min(uncovered)
            options = []
            for fixed in subsets:
                ctx = Context(tuple((system.variables[i], v[i]) for i in fixed))
                stage = Stage(system.variables[pos], ctx)
                if set(stage_members(system, stage)) <= uncovered:
                    options.append(stage)
            stage = options[rng.randrange(len(options))]
            uncovered -= set(stage_members(system, stage))
            stages.append(stage)
        levels.append(tuple(stages))
    return validate(CStreeSpec(system, tuple(levels)))


def random_dag(vertices, rng, edge_prob=0.5) -> Dag:
    """A random order-respecting DAG; ``vertices`` may be a count or names."""
    if isinstance(vertices, int):
        vertices = tuple(range(1, vertices + 1))
    edges = {
        (u, v)
        for u, v in itertools.combinations(sorted(vertices), 2)
        if rng.random() < edge_prob
    }
    return Dag.of(vertices, edges)


@dataclass(frozen=True)
class Classification:
    """Which bucket a three-variable tree falls into.

    ``kind`` is ``dag_tree`` or ``family_1`` .. ``family_4``; DAG trees
    carry their graph, families the context variable and the pinned
    outcome set I.
    """

    kind: str
    dag: Dag | None = None
    variable: int | None = None
    outcomes: tuple = ()


_COLLIDER_EDGES = frozenset({(1, 3), (2, 3)})


def _family_tree(system: VariableSystem, collider: bool, var: int, outcomes) -> CStreeSpec:
    level2 = () if not collider else (Stage(2, Context()),)
    level3 = tuple(Stage(3, Context(((var, x),))) for x in sorted(outcomes))
    return validate(CStreeSpec(system, ((), level2, level3)))


def classify_p3(tree: CStreeSpec) -> Classification:
    """Sort a three-variable tree into the DAG bucket or one of the four
    one-variable-context families, verifying by reconstruction.

    Family 1: first level pooled, third staged by X2 = x for x in I.
    Family 2: the same with X1 as the context variable.
    Families 3 and 4: likewise, but with the first level fully split.
    """
    system = tree.system
    if system.p != 3 or system.variables != (1, 2, 3):
        raise NotP3Error(f"need variables (1, 2, 3), got {system.variables}")
    contexts = minimal_contexts(tree)
    if len(contexts) == 1:
        graph = contexts[0].dag
        if tree == tree_of_dag(graph, system.cards):
            return Classification("dag_tree", dag=graph)
        raise NotP3Error(f"{spec_to_json(tree)} escapes every bucket")
    graph = contexts[0].dag
    complete = len(graph.edges) == 3
    collider = graph.edges == _COLLIDER_EDGES
    keys = {cd.context.keys for cd in contexts[1:]}
    if (complete or collider) and len(keys) == 1:
        (key,) = keys
        if len(key) == 1:
            var = key[0]
            outcomes = tuple(sorted(cd.context.get(var) for cd in contexts[1:]))
            if var in (1, 2) and tree == _family_tree(system, collider, var, outcomes):
                number = {
                    (False, 2): 1,
                    (False, 1): 2,
                    (True, 2): 3,
                    (True, 1): 4,
                }[(collider, var)]
                return Classification(
                    f"family_{number}", variable=var, outcomes=outcomes
                )
    raise NotP3Error(f"{spec_to_json(tree)} escapes every bucket")


@dataclass
class TheoremReport:
    """Census of a three-variable system.

    ``violations`` lists trees where balancedness and all-context-graphs-
    perfect disagree; the claim is that it stays empty.
    """

    total: int = 0
    balanced: int = 0
    perfect_contexts: int = 0
    histogram: dict = field(default_factory=dict)
    violations: tuple = ()

    def as_dict(self) -> dict:
        return {
            "total": self.total,
            "balanced": self.balanced,
            "perfect_contexts": self.perfect_contexts,
            "histogram": dict(sorted(self.histogram.items())),
            "violations": list(self.violations),
        }


def check_theorem_p3(cards=(2, 2, 2), max_trees=200_000) -> TheoremReport:
    """Exhaustively compare balancedness against perfectness of all minimal
    context graphs, and classify every tree, over one p = 3 system."""
    system = VariableSystem(tuple(cards))
    if system.p != 3:
        raise NotP3Error(f"need exactly three variables, got {system.p}")
    report = TheoremReport()
    violations = []
    for tree in enumerate_cstrees(system, max_trees):
        report.total += 1
        balanced, _ = is_balanced(tree)
        contexts = minimal_contexts(tree)
        perfect = all(is_perfect(cd.dag) for cd in contexts)
        if balanced:
            report.balanced += 1
        if perfect:
            report.perfect_contexts += 1
        if balanced != perfect:
            violations.append(
                {
                    "tree": spec_to_json(tree),
                    "balanced": balanced,
                    "perfect_contexts": perfect,
                }
            )
        kind = classify_p3(tree).kind
        report.histogram[kind] = report.histogram.get(kind, 0) + 1
    report.violations = tuple(violations)
    return report


def find_nonperfect_balanced(system: VariableSystem, max_trees=200_000):
    """Balanced trees with some non-perfect minimal context graph.

    None exist on three variables, hence the precondition; on four or more
    this yields counterexamples to the tempting converse.
    """
    if system.p < 4:
        raise PreconditionError("needs at least four variables")
    for tree in enumerate_cstrees(system, max_trees):
        balanced, _ = is_balanced(tree)
        if not balanced:
            continue
        if any(not is_perfect(cd.dag) for cd in minimal_contexts(tree)):
            yield tree
