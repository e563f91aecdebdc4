"""Walk through staging, minimal contexts, and the balance check.

Two small trees: fig1.json stages one inner level and turns out unbalanced;
fig3.json stages two levels, is balanced, and still produces an imperfect
empty-context graph, which is why balance cannot be read off one DAG.
"""

from pathlib import Path

from cstree import (
    interpolant,
    is_balanced,
    is_perfect,
    load_spec,
    minimal_contexts,
    stage_members,
    tree_statements,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def show(path):
    tree = load_spec(path)
    print(f"== {path.name} ==")
    print(f"variables: {tree.system.variables}, cards: {tree.system.cards}")
    for var in tree.system.variables:
        for stage in tree.listed_stages(var):
            members = ", ".join(
                "".join(map(str, v)) for v in stage_members(tree.system, stage)
            )
            print(f"  level {var}: stage [{stage.context}] pools {{{members}}}")
    print("statements read off the staging:")
    for statement in tree_statements(tree):
        print(f"  {statement}")

    print("minimal contexts and their graphs:")
    for cdag in minimal_contexts(tree):
        label = str(cdag.context) or "(empty)"
        edges = ", ".join(f"{u}->{v}" for u, v in cdag.dag.sorted_edges()) or "none"
        flag = "perfect" if is_perfect(cdag.dag) else "imperfect"
        print(f"  {label}: vertices {cdag.dag.vertices}, edges {edges} [{flag}]")

    balanced, witness = is_balanced(tree)
    print(f"balanced: {balanced}")
    if witness is not None:
        v, w = witness.pair
        print(f"  witness: {witness}")
        print(f"  interpolant at {v}: {interpolant(tree, v)}")
        print(f"  interpolant at {w}: {interpolant(tree, w)}")
    print()


def main():
    show(FIXTURES / "fig1.json")
    show(FIXTURES / "fig3.json")
    print(
        "fig3 shows the one-way street: every graph perfect forces balance,\n"
        "but a balanced tree may still have an imperfect context graph."
    )


if __name__ == "__main__":
    main()
