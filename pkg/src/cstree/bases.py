"""Binomial generating sets for the toric ideal of a balanced tree.

Three routes: minors of saturated separation statements over the minimal
context graphs, the quadratic-plus-lift recursion on levels, and the same
saturated route after perfecting each graph.  All binomials live in the
plain outcome-coordinate ring.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass

from .csi import CsiStatement, is_saturated
from .errors import PreconditionError, UnbalancedError, UnbalancedWarning
from .graphs import saturated_statements, to_perfect
from .model import (
    Context,
    CStreeSpec,
    VariableSystem,
    format_outcome,
    level_stage_map,
    level_stages,
    stage_members,
    validate,
)
from .algebra import is_balanced
from .contexts import minimal_contexts
from .poly import Monomial, SparsePoly


@dataclass(frozen=True)
class SaturatedBinomial:
    """p_{u1} p_{u2} - p_{v1} p_{v2} in canonical form.

    Within each pair the outcomes are sorted and the lex-smaller pair
    carries the plus sign.  ``source`` records how the binomial arose
    (``quad``, ``lift``, or ``sat``); ``context`` the statement's context
    for the saturated route.  Neither participates in deduplication.
    """

    plus: tuple
    minus: tuple
    source: str = "sat"
    context: Context | None = None

    def key(self) -> tuple:
        return (self.plus, self.minus)

    def to_poly(self) -> SparsePoly:
        return SparsePoly(
            {Monomial.of(*self.plus): 1, Monomial.of(*self.minus): -1}
        )

    def as_text(self) -> str:
        u1, u2 = self.plus
        v1, v2 = self.minus
        return (
            f"p{format_outcome(u1)}*p{format_outcome(u2)}"
            f" - p{format_outcome(v1)}*p{format_outcome(v2)}"
        )

    def __str__(self):
        return self.as_text()


def canonical_binomial(plus, minus, source="sat", context=None):
    """Build the canonical form, or None when the two pairs coincide."""
    plus = tuple(sorted(tuple(x) for x in plus))
    minus = tuple(sorted(tuple(x) for x in minus))
    if plus == minus:
        return None
    if minus < plus:
        plus, minus = minus, plus
    return SaturatedBinomial(plus, minus, source, context)


def statement_binomials(
    statement: CsiStatement, system: VariableSystem, source="sat"
) -> tuple:
    """The minors of a saturated statement, which are pure binomials.

    Degenerate minors (both pairs equal) are skipped.  Non-saturated
    statements are refused: their minors are not binomial.
    """
    if not is_saturated(statement, system):
        raise PreconditionError(f"statement {statement} is not saturated")
    a = tuple(sorted(statement.a))
    b = tuple(sorted(statement.b))
    s = tuple(sorted(statement.s))
    positions = {v: system.position(v) for v in system.variables}
    base = [None] * system.p
    for v, x in statement.context.items:
        base[positions[v]] = x

    def outcome(x_a, x_b, x_s):
        vals = list(base)
        for v, x in zip(a, x_a):
            vals[positions[v]] = x
        for v, x in zip(b, x_b):
            vals[positions[v]] = x
        for v, x in zip(s, x_s):
            vals[positions[v]] = x
        return tuple(vals)

    ra = tuple(itertools.product(*(range(system.card(v)) for v in a)))
    rb = tuple(itertools.product(*(range(system.card(v)) for v in b)))
    rs = tuple(itertools.product(*(range(system.card(v)) for v in s)))
    out = []
    for x_a, y_a in itertools.combinations(ra, 2):
        for x_b, y_b in itertools.combinations(rb, 2):
            for x_s in rs:
                binomial = canonical_binomial(
                    (outcome(x_a, x_b, x_s), outcome(y_a, y_b, x_s)),
                    (outcome(x_a, y_b, x_s), outcome(y_a, x_b, x_s)),
                    source,
                    statement.context,
                )
                if binomial:
                    out.append(binomial)
    return tuple(out)


def _dedup(binomials) -> tuple:
    seen = set()
    out = []
    for binomial in binomials:
        if binomial and binomial.key() not in seen:
            seen.add(binomial.key())
            out.append(binomial)
    return tuple(out)


def markov_basis_saturated(tree: CStreeSpec, contexts=None) -> tuple:
    """Minors of every saturated separation statement of every context graph.

    ``contexts`` defaults to the minimal ones.  An unbalanced tree gets a
    warning and the binomials anyway; they still lie in the kernel but need
    not generate it.
    """
    balanced, witness = is_balanced(tree)
    if not balanced:
        warnings.warn(
            UnbalancedWarning(
                f"tree is not balanced ({witness}); "
                "the saturated binomials may not generate"
            )
        )
    if contexts is None:
        contexts = minimal_contexts(tree)
    out = []
    for cdag in contexts:
        for statement in saturated_statements(cdag.dag, cdag.context):
            out.extend(statement_binomials(statement, tree.system))
    return _dedup(out)


def perfect_context_basis(tree: CStreeSpec, contexts=None) -> tuple:
    """Same as the saturated route, but each context graph is first closed
    under directed moralization, enlarging parent sets until perfect."""
    balanced, witness = is_balanced(tree)
    if not balanced:
        warnings.warn(
            UnbalancedWarning(
                f"tree is not balanced ({witness}); "
                "the perfected binomials may not generate"
            )
        )
    if contexts is None:
        contexts = minimal_contexts(tree)
    out = []
    for cdag in contexts:
        perfected, _ = to_perfect(cdag.dag)
        for statement in saturated_statements(perfected, cdag.context):
            out.extend(statement_binomials(statement, tree.system))
    return _dedup(out)


def truncate(tree: CStreeSpec) -> CStreeSpec:
    """Drop the last variable and its staging."""
    system = tree.system
    if system.p < 2:
        raise PreconditionError("cannot truncate a one-variable tree")
    sub = VariableSystem(system.cards[:-1], system.variables[:-1])
    return validate(CStreeSpec(sub, tree.levels[: system.p - 1]))


def quad_lift_basis(tree: CStreeSpec) -> tuple:
    """Kernel generators by recursion on levels.

    Quad: per last-level stage, the minors mixing two member vertices and
    two outcomes.  Lift: each generator of the truncated tree, its minus
    pair aligned with the plus pair stage by stage, extended by every pair
    of last-level outcomes.  Unbalanced trees are refused, since the
    stage-wise grading the lift relies on breaks down.
    """
    balanced, witness = is_balanced(tree)
    if not balanced:
        raise UnbalancedError(f"tree is not balanced: {witness}")

    def build(t: CStreeSpec) -> tuple:
        system = t.system
        if system.p == 1:
            return ()
        lower = build(truncate(t))
        var = system.variables[-1]
        d = system.cards[-1]
        produced = []
        for stage in level_stages(t, var):
            members = stage_members(system, stage)
            for x, y in itertools.combinations(members, 2):
                for k1, k2 in itertools.combinations(range(d), 2):
                    produced.append(
                        canonical_binomial(
                            (x + (k1,), y + (k2,)),
                            (x + (k2,), y + (k1,)),
                            "quad",
                        )
                    )
        smap = level_stage_map(t, var)
        for g in lower:
            a, b = g.plus
            c1, c2 = g.minus
            s_a, s_b = smap[a], smap[b]
            s_c1, s_c2 = smap[c1], smap[c2]
            alignments = set()
            if s_a == s_c1 and s_b == s_c2:
                alignments.add((c1, c2))
            if s_a == s_c2 and s_b == s_c1:
                alignments.add((c2, c1))
            if not alignments:
                raise UnbalancedError(
                    f"no stage-aligned lift for {g.as_text()} at level {var}"
                )
            for m1, m2 in sorted(alignments):
                for z1 in range(d):
                    for z2 in range(d):
                        produced.append(
                            canonical_binomial(
                                (a + (z1,), b + (z2,)),
                                (m1 + (z1,), m2 + (z2,)),
                                "lift",
                            )
                        )
        return _dedup(produced)

    return build(tree)


def basis_to_json(binomials) -> dict:
    return {
        "binomials": [
            {
                "plus": [format_outcome(u) for u in binomial.plus],
                "minus": [format_outcome(v) for v in binomial.minus],
                "source": binomial.source,
                "context": (
                    str(binomial.context) if binomial.context is not None else None
                ),
            }
            for binomial in binomials
        ]
    }


def basis_to_text(binomials) -> str:
    return "\n".join(binomial.as_text() for binomial in binomials) + "\n"
