"""Command-line surface: generate, solve, brute-force, verify, bench.

Exit codes: 0 ok, 2 parse failure, 3 infeasible, 4 audit violation,
5 size refusal.
"""

from __future__ import annotations

import argparse
import datetime
import json
import sys
from fractions import Fraction
from pathlib import Path

from .exact import brute_force_opt
from .generate import GenParams, generate_instance
from .instance import (
    InfeasibleError,
    ParseError,
    SizeRefusalError,
    frac_to_str,
    instance_to_json,
    parse_instance,
    parse_solution,
    solution_to_doc,
)
from .solver import report_to_doc, solve
from .verify import audit_run, audit_to_doc, check_feasible

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INFEASIBLE = 3
EXIT_VIOLATION = 4
EXIT_SIZE = 5


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _envelope(kind: str, payload: dict, no_timestamp: bool) -> str:
    doc = {"kind": kind}
    if not no_timestamp:
        doc["created"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    doc.update(payload)
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def cmd_gen(args) -> int:
    params = GenParams(
        nodes=args.nodes,
        terminals=args.terminals,
        k=args.k,
        density=Fraction(args.density),
        cost_lo=args.cost_lo,
        cost_hi=args.cost_hi,
        seed=args.seed,
        mode=args.mode,
        base_level=args.base_level,
        max_units=args.max_units,
    )
    inst = generate_instance(params)
    _write(args.out, instance_to_json(inst))
    return EXIT_OK


def cmd_solve(args) -> int:
    inst = parse_instance(Path(args.instance).read_text())
    report = solve(inst, prune=args.prune)
    payload = report_to_doc(report)
    _write(args.out, _envelope("solve-report", payload, args.no_timestamp))
    print(
        f"solved: cost {frac_to_str(report.solution.total_cost)}, "
        f"{len(report.phases)} phase(s), {len(report.solution.audit)} iteration(s)",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_brute(args) -> int:
    inst = parse_instance(Path(args.instance).read_text())
    sol = brute_force_opt(inst, max_units=args.max_brute_edges)
    _write(args.out, _envelope("solution", solution_to_doc(sol), args.no_timestamp))
    print(f"optimum: cost {frac_to_str(sol.total_cost)}", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    inst = parse_instance(Path(args.instance).read_text())
    if args.report:
        doc = json.loads(Path(args.report).read_text())
        doc.pop("kind", None)
        doc.pop("created", None)
        from .solver import report_from_doc

        run = report_from_doc(doc)
        solution = run.solution
    else:
        text = Path(args.solution).read_text()
        doc = json.loads(text)
        doc.pop("kind", None)
        doc.pop("created", None)
        solution = parse_solution(json.dumps(doc))
        run = None

    connectivity, feasible = check_feasible(inst, solution)
    if not feasible:
        payload = {
            "feasible": False,
            "connectivity": {str(t): v for t, v in sorted(connectivity.items())},
        }
        _write(args.out, _envelope("audit-report", payload, args.no_timestamp))
        return EXIT_INFEASIBLE

    if run is None:
        payload = {
            "feasible": True,
            "connectivity": {str(t): v for t, v in sorted(connectivity.items())},
        }
        _write(args.out, _envelope("audit-report", payload, args.no_timestamp))
        return EXIT_OK

    opt = None
    if args.opt:
        opt_doc = json.loads(Path(args.opt).read_text())
        opt_doc.pop("kind", None)
        opt_doc.pop("created", None)
        opt = parse_solution(json.dumps(opt_doc))
    elif args.brute:
        opt = brute_force_opt(inst, max_units=args.max_brute_edges)

    audit = audit_run(inst, run, opt, density_max_units=args.density_max_units)
    _write(args.out, _envelope("audit-report", audit_to_doc(audit), args.no_timestamp))
    return EXIT_OK if audit.clean else EXIT_VIOLATION


def cmd_bench(args) -> int:
    corpus = sorted(Path(args.corpus).glob("*.json"))
    rows = []
    ratios: list[Fraction] = []
    worst = EXIT_OK
    for path in corpus:
        row = {"file": path.name}
        try:
            inst = parse_instance(path.read_text())
        except ParseError as exc:
            row["status"] = f"parse error: {exc}"
            worst = max(worst, EXIT_PARSE)
            rows.append(row)
            continue
        row["units"] = len(inst.positive_units)
        try:
            report = solve(inst)
        except InfeasibleError as exc:
            row["status"] = f"infeasible: terminal {exc.terminal}"
            worst = max(worst, EXIT_INFEASIBLE)
            rows.append(row)
            continue
        row["cost"] = frac_to_str(report.solution.total_cost)
        opt = None
        if len(inst.positive_units) <= args.max_brute_edges:
            opt = brute_force_opt(inst, max_units=args.max_brute_edges)
            row["opt"] = frac_to_str(opt.total_cost)
        else:
            row["opt"] = None
        audit = audit_run(inst, report, opt)
        if not audit.clean:
            row["status"] = "audit violation"
            worst = max(worst, EXIT_VIOLATION)
        else:
            row["status"] = "ok" if opt is not None else "ok (brute skipped)"
        if audit.ratio is not None:
            ratios.append(audit.ratio)
            row["ratio"] = frac_to_str(audit.ratio)
        rows.append(row)

    summary = {"instances": rows, "ratio_summary": _ratio_summary(ratios)}
    _write(args.out, _envelope("bench-summary", summary, args.no_timestamp))
    _print_table(rows, ratios)
    return worst


def _ratio_summary(ratios: list[Fraction]) -> dict:
    if not ratios:
        return {"count": 0}
    return {
        "count": len(ratios),
        "min": frac_to_str(min(ratios)),
        "max": frac_to_str(max(ratios)),
        "mean": float(sum(ratios) / len(ratios)),
        "at_optimum": sum(1 for r in ratios if r == 1),
    }


def _print_table(rows: list[dict], ratios: list[Fraction]):
    header = f"{'file':<28} {'units':>5} {'cost':>8} {'opt':>8} {'ratio':>7}  status"
    print(header)
    print("-" * len(header))
    for row in rows:
        print(
            f"{row['file']:<28} {row.get('units', '-')!s:>5} "
            f"{row.get('cost', '-') or '-':>8} {row.get('opt') or '-':>8} "
            f"{row.get('ratio', '-') or '-':>7}  {row['status']}"
        )
    if ratios:
        mean = float(sum(ratios) / len(ratios))
        print(
            f"\nratios: n={len(ratios)} min={frac_to_str(min(ratios))} "
            f"max={frac_to_str(max(ratios))} mean={mean:.4f}"
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rkec",
        description="Rooted subset k-edge-connectivity solver and audit tools",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a random instance")
    gen.add_argument("--out", default="-")
    gen.add_argument("--nodes", type=int, required=True)
    gen.add_argument("--terminals", type=int, required=True)
    gen.add_argument("--k", type=int, required=True)
    gen.add_argument("--density", default="1/2", help="arc probability, e.g. 2/5")
    gen.add_argument("--cost-lo", type=int, default=1)
    gen.add_argument("--cost-hi", type=int, default=10)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--mode", choices=["quasi-bipartite", "augmentation"],
                     default="quasi-bipartite")
    gen.add_argument("--base-level", type=int, default=0)
    gen.add_argument("--max-units", type=int, default=None)
    gen.set_defaults(func=cmd_gen)

    slv = sub.add_parser("solve", help="run the approximation solver")
    slv.add_argument("--instance", required=True)
    slv.add_argument("--out", default="-")
    slv.add_argument("--prune", action="store_true")
    slv.add_argument("--no-timestamp", action="store_true")
    slv.set_defaults(func=cmd_solve)

    brt = sub.add_parser("brute", help="exact optimum by branch and bound")
    brt.add_argument("--instance", required=True)
    brt.add_argument("--out", default="-")
    brt.add_argument("--max-brute-edges", type=int, default=22)
    brt.add_argument("--no-timestamp", action="store_true")
    brt.set_defaults(func=cmd_brute)

    ver = sub.add_parser("verify", help="audit a solution or solve report")
    ver.add_argument("--instance", required=True)
    group = ver.add_mutually_exclusive_group(required=True)
    group.add_argument("--report", help="solve-report JSON to audit")
    group.add_argument("--solution", help="bare solution JSON to feasibility-check")
    ver.add_argument("--opt", help="known optimum solution JSON")
    ver.add_argument("--brute", action="store_true", help="brute-force the optimum")
    ver.add_argument("--max-brute-edges", type=int, default=22)
    ver.add_argument("--density-max-units", type=int, default=None)
    ver.add_argument("--out", default="-")
    ver.add_argument("--no-timestamp", action="store_true")
    ver.set_defaults(func=cmd_verify)

    ben = sub.add_parser("bench", help="solve and audit a corpus directory")
    ben.add_argument("--corpus", required=True)
    ben.add_argument("--out", default="-")
    ben.add_argument("--max-brute-edges", type=int, default=22)
    ben.add_argument("--no-timestamp", action="store_true")
    ben.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InfeasibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except SizeRefusalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


def entrypoint():
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
