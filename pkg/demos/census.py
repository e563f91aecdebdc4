"""Enumerate every staging of a small system and test the structure theory.

On three variables, balancedness coincides with all minimal context graphs
being perfect, and every tree falls into the DAG bucket or one of four
context families.  On four variables the coincidence breaks: enumeration
finds a balanced tree with an imperfect graph, and it is exactly the
staging shipped as fig3.json.
"""

from pathlib import Path

from cstree import (
    VariableSystem,
    check_theorem_p3,
    classify_p3,
    count_cstrees,
    find_nonperfect_balanced,
    load_spec,
    spec_to_json,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def main():
    for cards in ((2, 2, 2), (2, 3, 2)):
        report = check_theorem_p3(cards)
        print(f"cards {cards}: {report.total} stagings")
        print(f"  balanced: {report.balanced}, all-graphs-perfect: {report.perfect_contexts}")
        print(f"  buckets: {dict(sorted(report.histogram.items()))}")
        print(f"  balance/perfection disagreements: {len(report.violations)}")
    print()

    fig1 = load_spec(FIXTURES / "fig1.json")
    result = classify_p3(fig1)
    print(
        f"fig1.json classifies as {result.kind}"
        f" (context variable X{result.variable}, outcomes {list(result.outcomes)})"
    )
    print()

    system = VariableSystem((2, 2, 2, 2))
    print(f"four binary variables: {count_cstrees(system)} stagings")
    first = next(find_nonperfect_balanced(system))
    print("first balanced tree with an imperfect minimal context graph:")
    print(f"  {spec_to_json(first)['levels']}")
    fig3 = load_spec(FIXTURES / "fig3.json")
    print(f"  equals the fig3.json staging: {first == fig3}")


if __name__ == "__main__":
    main()
