"""Edge labels, interpolating polynomials, balance, and vanishing checks.

A tree's monomial parametrization sends each outcome coordinate p_x to the
product of edge labels along the root-to-leaf path of x.  Everything here
works in the plain polynomial ring over those labels; sum-to-one relations
enter only through explicit elimination inside ``vanishes``.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .csi import CsiStatement
from .errors import BadIndexError, BoundTooLargeError, NotSameStageError
from .model import (
    Context,
    CStreeSpec,
    Stage,
    VariableSystem,
    level_stage_map,
    level_stages,
    stage_members,
    stage_of,
)
from .poly import Monomial, SparsePoly


@dataclass(frozen=True, order=True)
class EdgeLabel:
    """Symbolic parameter for one stage/outcome pair.

    Two edges share a label exactly when their source vertices share a
    stage and they emit the same outcome; the stage is carried by its
    defining context, so listed and implicit singleton stages coincide.
    """

    level: int
    stage_context: tuple
    outcome: int

    def __str__(self):
        ctx = ",".join(f"X{v}={x}" for v, x in self.stage_context) or "-"
        return f"q{self.level}({ctx};{self.outcome})"


def edge_label(stage: Stage, outcome: int) -> EdgeLabel:
    return EdgeLabel(stage.level, stage.context.items, outcome)


def tree_labels(tree: CStreeSpec) -> tuple:
    """All labels of the tree, ordered by level, stage context, outcome."""
    out = []
    for var in tree.system.variables:
        d = tree.system.card(var)
        for stage in level_stages(tree, var):
            out.extend(edge_label(stage, o) for o in range(d))
    return tuple(out)


@lru_cache(maxsize=512)
def _psi_table(tree: CStreeSpec) -> dict:
    """outcome -> monomial of path labels."""
    system = tree.system
    maps = [level_stage_map(tree, var) for var in system.variables]
    out = {}
    for x in system.outcomes():
        labels = [edge_label(maps[k][x[:k]], x[k]) for k in range(system.p)]
        out[x] = Monomial.of(*labels)
    return out


def psi_monomial(tree: CStreeSpec, outcome) -> Monomial:
    """Image of the coordinate p_x: the label product along x's path."""
    return _psi_table(tree)[tuple(outcome)]


@lru_cache(maxsize=512)
def _interpolant_tables(tree: CStreeSpec) -> tuple:
    system = tree.system
    tables = [None] * (system.p + 1)
    tables[system.p] = {x: SparsePoly.constant(1) for x in system.outcomes()}
    for k in range(system.p - 1, -1, -1):
        var = system.variables[k]
        smap = level_stage_map(tree, var)
        nxt = tables[k + 1]
        layer = {}
        for v in system.level_vertices(k):
            st = smap[v]
            total = SparsePoly.zero()
            for o in range(system.cards[k]):
                total = total + SparsePoly.variable(edge_label(st, o)) * nxt[v + (o,)]
            layer[v] = total
        tables[k] = layer
    return tuple(tables)


def interpolant(tree: CStreeSpec, vertex) -> SparsePoly:
    """Sum over completions of the vertex of its below-path label products;
    leaves give 1."""
    vertex = tuple(vertex)
    return _interpolant_tables(tree)[len(vertex)][vertex]


def balanced_pair(tree: CStreeSpec, v, w) -> bool:
    """Whether two same-stage vertices satisfy the cross-product identity
    t(v s) t(w r) = t(v r) t(w s) for every outcome pair, in the plain ring."""
    v, w = tuple(v), tuple(w)
    if len(v) != len(w) or stage_of(tree, v) != stage_of(tree, w):
        raise NotSameStageError(f"{v} and {w} are staged apart")
    table = _interpolant_tables(tree)[len(v) + 1]
    d = tree.system.cards[len(v)]
    for s, r in itertools.combinations(range(d), 2):
        if table[v + (s,)] * table[w + (r,)] != table[v + (r,)] * table[w + (s,)]:
            return False
    return True


@dataclass(frozen=True)
class BalanceWitness:
    """An unbalanced same-stage pair: where, which vertices, which outcomes."""

    level: int
    context: Context
    pair: tuple
    outcomes: tuple

    def __str__(self):
        v, w = self.pair
        s, r = self.outcomes
        return (
            f"vertices {v} and {w} in stage [{self.context}] fail at outcomes {s},{r}"
        )


def is_balanced(tree: CStreeSpec, audit_all_pairs=False):
    """Check the cross-product identity across every stage.

    Returns (True, None) or (False, witness).  By default each stage is
    checked against a fixed representative, which suffices because the
    interpolants have positive coefficients and equality is transitive
    through the representative; ``audit_all_pairs`` checks every pair
    anyway.
    """
    system = tree.system
    for k, var in enumerate(system.variables):
        table = _interpolant_tables(tree)[k + 1]
        d = system.cards[k]
        for stage in tree.listed_stages(var):
            members = stage_members(system, stage)
            if audit_all_pairs:
                pairs = itertools.combinations(members, 2)
            else:
                rep = members[0]
                pairs = ((rep, m) for m in members[1:])
            for v, w in pairs:
                for s, r in itertools.combinations(range(d), 2):
                    left = table[v + (s,)] * table[w + (r,)]
                    right = table[v + (r,)] * table[w + (s,)]
                    if left != right:
                        witness = BalanceWitness(k, stage.context, (v, w), (s, r))
                        return False, witness
    return True, None


@dataclass(frozen=True)
class MarginalQuadric:
    """One 2x2 minor of a statement: two outcomes on each block, a fixed
    conditioning assignment, and the statement's context; coordinates not
    mentioned are summed out."""

    a_vars: tuple
    b_vars: tuple
    s_vars: tuple
    x_a: tuple
    y_a: tuple
    x_b: tuple
    y_b: tuple
    x_s: tuple
    context: Context

    def support(self, system: VariableSystem, a_val, b_val) -> tuple:
        assign = dict(zip(self.a_vars, a_val))
        assign.update(zip(self.b_vars, b_val))
        assign.update(zip(self.s_vars, self.x_s))
        assign.update(self.context.items)
        return _marginal_support(system, assign)

    def expand(self, system: VariableSystem) -> SparsePoly:
        def marg(a_val, b_val):
            return SparsePoly(
                {Monomial.of(x): 1 for x in self.support(system, a_val, b_val)}
            )

        return marg(self.x_a, self.x_b) * marg(self.y_a, self.y_b) - marg(
            self.x_a, self.y_b
        ) * marg(self.y_a, self.x_b)


def _marginal_support(system: VariableSystem, assign: dict) -> tuple:
    pinned = {system.position(v): x for v, x in assign.items()}
    axes = [
        (pinned[i],) if i in pinned else range(system.cards[i])
        for i in range(system.p)
    ]
    return tuple(itertools.product(*axes))


def _statement_ranges(statement: CsiStatement, system: VariableSystem):
    for v in statement.variables():
        system.position(v)
    for v, x in statement.context.items:
        if not 0 <= x < system.card(v):
            raise BadIndexError(f"context value {x} out of range for X{v}")
    a = tuple(sorted(statement.a))
    b = tuple(sorted(statement.b))
    s = tuple(sorted(statement.s))
    ra = tuple(itertools.product(*(range(system.card(v)) for v in a)))
    rb = tuple(itertools.product(*(range(system.card(v)) for v in b)))
    rs = tuple(itertools.product(*(range(system.card(v)) for v in s)))
    return a, b, s, ra, rb, rs


def statement_quadrics(statement: CsiStatement, system: VariableSystem) -> tuple:
    """All minor data of a statement, in deterministic order."""
    a, b, s, ra, rb, rs = _statement_ranges(statement, system)
    out = []
    for x_a, y_a in itertools.combinations(ra, 2):
        for x_b, y_b in itertools.combinations(rb, 2):
            for x_s in rs:
                out.append(
                    MarginalQuadric(
                        a, b, s, x_a, y_a, x_b, y_b, x_s, statement.context
                    )
                )
    return tuple(out)


def statement_polynomials(statement: CsiStatement, system: VariableSystem) -> tuple:
    """Exact polynomial translation of a statement: every 2x2 minor of every
    conditional slice, in marginalized outcome coordinates.  Minors that
    expand to zero are dropped."""
    out = []
    for quadric in statement_quadrics(statement, system):
        poly = quadric.expand(system)
        if not poly.is_zero():
            out.append(poly)
    return tuple(out)


@lru_cache(maxsize=512)
def _elimination(tree: CStreeSpec) -> dict:
    """Per stage, rewrite the last outcome's label as one minus the others."""
    subs = {}
    for var in tree.system.variables:
        d = tree.system.card(var)
        for stage in level_stages(tree, var):
            total = SparsePoly.constant(1)
            for o in range(d - 1):
                total = total - SparsePoly.variable(edge_label(stage, o))
            subs[edge_label(stage, d - 1)] = total
    return subs


def vanishes(tree: CStreeSpec, poly: SparsePoly) -> bool:
    """Whether a polynomial in outcome coordinates dies on the model.

    Coordinates map to their path label products; then each stage's last
    label is eliminated via the sum-to-one relation and the result must
    expand to the zero polynomial.  Exact, no sampling involved.
    """
    table = _psi_table(tree)
    image = SparsePoly.zero()
    for mono, coef in poly.terms.items():
        acc = Monomial()
        for x, e in mono.powers:
            path = table[tuple(x)]
            for _ in range(e):
                acc = acc * path
        image = image + SparsePoly({acc: coef})
    return image.substitute(_elimination(tree)).is_zero()


def statement_holds(tree: CStreeSpec, statement: CsiStatement) -> bool:
    """Semantic ground truth: every minor of the statement vanishes on the
    model.  Exact but slower than a point refutation; see
    ``statement_zero_at`` for the fast negative check."""
    return all(
        vanishes(tree, poly)
        for poly in statement_polynomials(statement, tree.system)
    )


def random_point(tree: CStreeSpec, seed=0) -> dict:
    """A deterministic exact parameter point: per stage, numerators drawn
    from 1..97 and normalized, so every label is a positive Fraction."""
    rng = random.Random(seed)
    point = {}
    for var in tree.system.variables:
        d = tree.system.card(var)
        for stage in level_stages(tree, var):
            nums = [rng.randint(1, 97) for _ in range(d)]
            total = sum(nums)
            for o in range(d):
                point[edge_label(stage, o)] = Fraction(nums[o], total)
    return point


def outcome_probabilities(tree: CStreeSpec, point: dict) -> dict:
    """The outcome distribution p_x induced by a parameter point."""
    out = {}
    for x, mono in _psi_table(tree).items():
        value = Fraction(1)
        for label, e in mono.powers:
            value *= point[label] ** e
        out[x] = value
    return out


def statement_zero_at(
    statement: CsiStatement, system: VariableSystem, probs: dict
) -> bool:
    """Whether every minor of the statement evaluates to zero at a table of
    outcome probabilities.  A nonzero minor refutes the statement exactly;
    all-zero only suggests it, so confirm symbolically."""
    a, b, s, ra, rb, rs = _statement_ranges(statement, system)
    ctx = statement.context.as_dict()
    value = {}
    for x_a in ra:
        for x_b in rb:
            for x_s in rs:
                assign = dict(ctx)
                assign.update(zip(a, x_a))
                assign.update(zip(b, x_b))
                assign.update(zip(s, x_s))
                value[x_a, x_b, x_s] = sum(
                    (probs[x] for x in _marginal_support(system, assign)),
                    Fraction(0),
                )
    for x_a, y_a in itertools.combinations(ra, 2):
        for x_b, y_b in itertools.combinations(rb, 2):
            for x_s in rs:
                left = value[x_a, x_b, x_s] * value[y_a, y_b, x_s]
                right = value[x_a, y_b, x_s] * value[y_a, x_b, x_s]
                if left != right:
                    return False
    return True


@dataclass(frozen=True)
class ExponentMatrix:
    """0/1 exponent matrix of the parametrization: rows are edge labels in
    canonical order, columns are full outcomes in lex order."""

    labels: tuple
    outcomes: tuple
    columns: tuple

    def marginal(self, table) -> tuple:
        """Row sums A u for a table aligned with ``outcomes``."""
        out = [0] * len(self.labels)
        for count, rows in zip(table, self.columns):
            if count:
                for r in rows:
                    out[r] += count
        return tuple(out)


def exponent_matrix(tree: CStreeSpec) -> ExponentMatrix:
    labels = tree_labels(tree)
    index = {label: i for i, label in enumerate(labels)}
    table = _psi_table(tree)
    outcomes = tuple(tree.system.outcomes())
    columns = []
    for x in outcomes:
        rows = []
        for label, e in table[x].powers:
            rows.extend([index[label]] * e)
        columns.append(tuple(sorted(rows)))
    return ExponentMatrix(labels, outcomes, tuple(columns))


@dataclass(frozen=True)
class FiberReport:
    """Outcome of a fiber connectivity sweep."""

    connected: bool
    bound: int
    tables: int
    fibers: int
    witness: tuple | None

    def __str__(self):
        if self.connected:
            return (
                f"all {self.fibers} fibers of {self.tables} tables "
                f"(total <= {self.bound}) connected"
            )
        marg, t1, t2 = self.witness
        return f"disconnected fiber: {t1} and {t2} share marginal {marg}"


def _tables(total: int, length: int):
    if length == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _tables(total - head, length - 1):
            yield (head,) + rest


def fibers_connected(
    matrix: ExponentMatrix, moves, bound=2, table_budget=2_000_000
) -> FiberReport:
    """Check that a move set connects every fiber of small tables.

    Tables are nonnegative integer vectors over the outcomes with total at
    most ``bound``; a fiber collects tables with equal row marginals under
    the exponent matrix.  Moves apply in both directions wherever they keep
    the table nonnegative.  A disconnected fiber is reported through two
    tables from different components.
    """
    n = len(matrix.outcomes)
    expected = math.comb(n + bound, bound)
    if expected > table_budget:
        raise BoundTooLargeError(
            f"{expected} tables at bound {bound} exceed the budget {table_budget}"
        )
    position = {x: i for i, x in enumerate(matrix.outcomes)}
    vectors = set()
    for move in moves:
        vec = [0] * n
        for pair, sign in ((move.plus, 1), (move.minus, -1)):
            for x in pair:
                vec[position[x]] += sign
        if any(vec):
            vec = tuple(vec)
            vectors.add(vec)
            vectors.add(tuple(-d for d in vec))
    fibers = {}
    total_tables = 0
    for total in range(bound + 1):
        for table in _tables(total, n):
            total_tables += 1
            fibers.setdefault(matrix.marginal(table), []).append(table)
    for marginal, tables in sorted(fibers.items()):
        if len(tables) == 1:
            continue
        index = {t: i for i, t in enumerate(tables)}
        parent = list(range(len(tables)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for t in tables:
            i = find(index[t])
            for vec in vectors:
                moved = tuple(a + d for a, d in zip(t, vec))
                j = index.get(moved)
                if j is not None:
                    parent[find(j)] = i
        roots = {}
        for t in tables:
            roots.setdefault(find(index[t]), t)
        if len(roots) > 1:
            first, second = list(roots.values())[:2]
            return FiberReport(
                False, bound, total_tables, len(fibers), (marginal, first, second)
            )
    return FiberReport(True, bound, total_tables, len(fibers), None)
