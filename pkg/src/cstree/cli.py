"""Command line interface.

Every subcommand reads JSON inputs and prints a JSON report on stdout
(``basis --format text`` prints plain lines instead).  Exit codes: 0 when
the requested check passes or output is produced, 1 for usage, IO, or
validation problems, 2 when a property was checked and found violated.
Failures print one JSON object on stderr.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
import warnings

from . import __version__
from .errors import CStreeError
from .model import (
    Context,
    VariableSystem,
    context_subtree,
    format_outcome,
    spec_from_json,
    spec_to_json,
    tree_statements,
)
from .graphs import (
    ContextDag,
    context_dag_to_dot,
    dag_from_json,
    dag_to_json,
    dags_from_json,
    directed_moralize,
    is_perfect,
    to_perfect,
)
from .algebra import (
    exponent_matrix,
    fibers_connected,
    is_balanced,
    outcome_probabilities,
    random_point,
    vanishes,
)
from .contexts import minimal_contexts, separation_disagreements
from .bases import (
    basis_to_json,
    basis_to_text,
    markov_basis_saturated,
    perfect_context_basis,
    quad_lift_basis,
)
from .lab import check_theorem_p3, classify_p3, count_cstrees


def _read(path):
    """One read per fixture, so pipes hash exactly what gets parsed."""
    with open(path, "rb") as fh:
        raw = fh.read()
    envelope = {
        "tool": "cstree",
        "version": __version__,
        "fixture": {
            "path": str(path),
            "sha256": hashlib.sha256(raw).hexdigest(),
        },
    }
    return raw, envelope


def _load_tree(path):
    raw, envelope = _read(path)
    return spec_from_json(json.loads(raw)), envelope


def _emit(report: dict):
    json.dump(report, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _fail(exc: Exception):
    name = type(exc).__name__
    if name.endswith("Error"):
        name = name[:-5]
    json.dump({"error": {"type": name, "message": str(exc)}}, sys.stderr)
    sys.stderr.write("\n")


def _parse_context(text: str) -> Context:
    text = (text or "").strip()
    if not text:
        return Context()
    pairs = {}
    for part in text.split(","):
        var, _, val = part.partition("=")
        pairs[int(var.strip().lstrip("X"))] = int(val.strip())
    return Context.of(pairs)


def _cmd_validate(args) -> int:
    tree, report = _load_tree(args.fixture)
    report.update(
        {
            "valid": True,
            "p": tree.system.p,
            "cards": list(tree.system.cards),
            "listed_stages": {
                str(var): len(tree.listed_stages(var))
                for var in tree.system.variables
                if tree.listed_stages(var)
            },
            "statements": [str(s) for s in tree_statements(tree)],
        }
    )
    _emit(report)
    return 0


def _cmd_contexts(args) -> int:
    tree, report = _load_tree(args.fixture)
    cdags = minimal_contexts(tree, seed=args.seed)
    report["contexts"] = [
        {
            "context": str(cd.context),
            "vertices": list(cd.dag.vertices),
            "edges": [list(e) for e in cd.dag.sorted_edges()],
            "perfect": is_perfect(cd.dag),
        }
        for cd in cdags
    ]
    if args.dot:
        os.makedirs(args.dot, exist_ok=True)
        written = []
        for cd in cdags:
            name = f"g_{cd.context}.dot" if cd.context else "g_empty.dot"
            path = os.path.join(args.dot, name)
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(context_dag_to_dot(cd))
            written.append(path)
        report["dot_files"] = written
    code = 0
    if args.check_oracle:
        mismatches = separation_disagreements(tree, cdags, seed=args.seed)
        report["oracle_disagreements"] = [
            {"context": str(ctx), "statement": str(st)} for ctx, st in mismatches
        ]
        if mismatches:
            code = 2
    _emit(report)
    return code


def _cmd_balance(args) -> int:
    tree, report = _load_tree(args.fixture)
    balanced, witness = is_balanced(tree, audit_all_pairs=args.audit_all_pairs)
    report["balanced"] = balanced
    if not balanced and args.witness:
        v, w = witness.pair
        report["witness"] = {
            "level": witness.level,
            "stage": str(witness.context),
            "vertices": [format_outcome(v), format_outcome(w)],
            "outcomes": list(witness.outcomes),
        }
    _emit(report)
    return 0 if balanced else 2


_METHODS = {
    "sat": markov_basis_saturated,
    "quad-lift": quad_lift_basis,
    "perfect": perfect_context_basis,
}


def _cmd_basis(args) -> int:
    tree, report = _load_tree(args.fixture)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        basis = _METHODS[args.method](tree)
    if args.format == "text":
        sys.stdout.write(basis_to_text(basis))
        return 0
    report.update(basis_to_json(basis))
    report["method"] = args.method
    report["count"] = len(basis)
    by_source = {}
    for binomial in basis:
        by_source[binomial.source] = by_source.get(binomial.source, 0) + 1
    report["count_by_source"] = by_source
    if caught:
        report["warnings"] = sorted(str(w.message) for w in caught)
    _emit(report)
    return 0


def _cmd_verify(args) -> int:
    tree, report = _load_tree(args.fixture)
    names = list(_METHODS) if args.method == "all" else [args.method]
    bound = args.fiber_bound
    cap = os.environ.get("CSTREE_MAX_FIBER")
    capped = cap is not None and bound > int(cap)
    if capped:
        bound = int(cap)
    matrix = exponent_matrix(tree)
    rng = random.Random(args.seed)
    run_random = args.random or not args.symbolic
    results = {}
    all_ok = True
    for name in names:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            basis = _METHODS[name](tree)
        entry = {"count": len(basis)}
        if run_random:
            ok = True
            for _ in range(args.trials):
                point = random_point(tree, rng.randrange(1 << 30))
                probs = outcome_probabilities(tree, point)
                for binomial in basis:
                    if binomial.to_poly().evaluate(probs) != 0:
                        ok = False
                        entry["random_failure"] = binomial.as_text()
                        break
                if not ok:
                    break
            entry["random_vanishing"] = ok
            all_ok = all_ok and ok
        if args.symbolic:
            ok = True
            for binomial in basis:
                if not vanishes(tree, binomial.to_poly()):
                    ok = False
                    entry["symbolic_failure"] = binomial.as_text()
                    break
            entry["symbolic_vanishing"] = ok
            all_ok = all_ok and ok
        fiber = fibers_connected(matrix, basis, bound=bound)
        entry["fibers"] = {
            "connected": fiber.connected,
            "bound": fiber.bound,
            "tables": fiber.tables,
            "count": fiber.fibers,
        }
        if capped:
            entry["fibers"]["fiber_bound_capped"] = True
        if not fiber.connected:
            _, t1, t2 = fiber.witness
            entry["fibers"]["witness_tables"] = [list(t1), list(t2)]
        all_ok = all_ok and fiber.connected
        results[name] = entry
    report["methods"] = results
    report["ok"] = all_ok
    _emit(report)
    return 0 if all_ok else 2


def _load_dag(path, index):
    raw, envelope = _read(path)
    data = json.loads(raw)
    if isinstance(data, dict) and "dags" in data:
        return dags_from_json(data)[index].dag, envelope
    parsed = dag_from_json(data)
    return (parsed.dag if isinstance(parsed, ContextDag) else parsed), envelope


def _cmd_moralize(args) -> int:
    dag, report = _load_dag(args.fixture, args.index)
    if args.iterate:
        final, passes = to_perfect(dag)
        report["passes"] = [[list(e) for e in round_] for round_ in passes]
    else:
        final, added = directed_moralize(dag)
        report["added"] = [list(e) for e in added]
    report["edges"] = [list(e) for e in final.sorted_edges()]
    report["perfect"] = is_perfect(final)
    _emit(report)
    return 0


def _cmd_subtree(args) -> int:
    tree, _ = _load_tree(args.fixture)
    sub = context_subtree(tree, _parse_context(args.context))
    json.dump(spec_to_json(sub), sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    return 0


def _cmd_enumerate(args) -> int:
    cards = tuple(int(c) for c in args.cards.split(","))
    report = {"tool": "cstree", "version": __version__, "cards": list(cards)}
    code = 0
    if args.census or args.classify:
        census = check_theorem_p3(cards, args.budget)
        if args.census:
            report.update(census.as_dict())
            if census.violations:
                code = 2
        else:
            report["total"] = census.total
            report["histogram"] = dict(sorted(census.histogram.items()))
    else:
        report["total"] = count_cstrees(VariableSystem(cards), args.budget)
    _emit(report)
    return code


def _cmd_classify(args) -> int:
    tree, report = _load_tree(args.fixture)
    result = classify_p3(tree)
    report["kind"] = result.kind
    if result.dag is not None:
        report["dag"] = dag_to_json(result.dag)
    if result.variable is not None:
        report["variable"] = result.variable
        report["outcomes"] = list(result.outcomes)
    _emit(report)
    return 0


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cstree",
        description="Staged event trees: validation, context graphs, "
        "balance, moralization, and binomial Markov bases.",
    )
    parser.add_argument(
        "--seed", type=int, default=0, help="seed for every randomized step"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a tree fixture, list its statements")
    p.add_argument("fixture")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("contexts", help="minimal contexts and their graphs")
    p.add_argument("fixture")
    p.add_argument("--dot", metavar="DIR", help="write one DOT file per graph")
    p.add_argument(
        "--check-oracle",
        action="store_true",
        help="replay graph separations against the semantic oracle",
    )
    p.set_defaults(func=_cmd_contexts)

    p = sub.add_parser("balance", help="exact balancedness check")
    p.add_argument("fixture")
    p.add_argument("--witness", action="store_true", help="report a failing pair")
    p.add_argument(
        "--audit-all-pairs",
        action="store_true",
        help="check every pair instead of one representative per stage",
    )
    p.set_defaults(func=_cmd_balance)

    p = sub.add_parser("basis", help="generate a binomial basis")
    p.add_argument("fixture")
    p.add_argument("--method", choices=tuple(_METHODS), default="sat")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=_cmd_basis)

    p = sub.add_parser("verify", help="check bases: vanishing and fibers")
    p.add_argument("fixture")
    p.add_argument("--method", choices=("all",) + tuple(_METHODS), default="all")
    p.add_argument(
        "--symbolic", action="store_true", help="exact symbolic vanishing"
    )
    p.add_argument(
        "--random", action="store_true", help="random-point vanishing (default)"
    )
    p.add_argument("--trials", type=int, default=3, help="random points per basis")
    p.add_argument(
        "--fiber-bound",
        type=int,
        default=2,
        help="largest table total for the fiber sweep "
        "(CSTREE_MAX_FIBER caps it)",
    )
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("moralize", help="directed moralization of a DAG fixture")
    p.add_argument("fixture")
    p.add_argument("--iterate", action="store_true", help="run to the fixed point")
    p.add_argument(
        "--index", type=int, default=0, help="entry to use in a collection fixture"
    )
    p.set_defaults(func=_cmd_moralize)

    p = sub.add_parser("subtree", help="pin a context, print the subtree fixture")
    p.add_argument("fixture")
    p.add_argument("--context", required=True, help='e.g. "2=0,3=1"')
    p.set_defaults(func=_cmd_subtree)

    p = sub.add_parser("enumerate", help="count or sweep all stagings")
    p.add_argument("--cards", required=True, help='e.g. "2,2,2"')
    p.add_argument("--budget", type=int, default=200_000)
    p.add_argument(
        "--census",
        action="store_true",
        help="p=3 only: compare balancedness with perfect context graphs "
        "on every staging",
    )
    p.add_argument(
        "--classify", action="store_true", help="p=3 only: bucket histogram"
    )
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("classify", help="bucket a three-variable tree")
    p.add_argument("fixture")
    p.set_defaults(func=_cmd_classify)

    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except CStreeError as exc:
        _fail(exc)
        return 1
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        _fail(exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
