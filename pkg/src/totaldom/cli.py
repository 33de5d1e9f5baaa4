"""Command line: ``totaldom {table1,simulate,compare,exact,verify}``.

Exit codes: 0 success or verified, 1 negative verdict, 2 usage error,
3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

from . import experiments, ode
from .graph import (
    GraphError,
    InstanceTooLarge,
    NoTotalDominatingSet,
    brute_force_gamma_t,
    from_spec,
    read_edgelist,
    verify_tds,
)
from .heuristics import InvariantViolation

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_INVARIANT = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _common(p: argparse.ArgumentParser, *, sim=False):
    p.add_argument("--eps-stop", type=float, default=1e-6, help="ODE stops when z_0 reaches this value")
    p.add_argument("--step", type=float, default=1e-5, help="RK4 step size")
    p.add_argument("--out", type=Path, help="directory for JSON/CSV artifacts")
    p.add_argument("--format", choices=("json", "csv"), default="json", help="stdout format")
    if sim:
        p.add_argument("--d", type=int, required=True)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="totaldom", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("table1", help="integrate the ODE and compare with the reference bounds")
    p.add_argument("--d", type=int, nargs="+", default=[3, 4, 5, 8])
    _common(p)

    p = sub.add_parser("simulate", help="seeded Monte-Carlo runs of a heuristic")
    _common(p, sim=True)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--variant", choices=("1c", "1l", "baseline"), default="1c")
    p.add_argument("--eps", type=float, default=0.0, help="stop the main loop below eps*n undominated")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--traces", action="store_true", help="write one trace CSV per trial")

    p = sub.add_parser("compare", help="simulation trajectory versus ODE solution")
    _common(p, sim=True)

    p = sub.add_parser("exact", help="exact total domination number by brute force")
    p.add_argument("graph", help="edge-list file or generator, e.g. petersen, cycle:11, complete_bipartite:5,5")
    p.add_argument("--max-vertices", type=int, default=24)
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("verify", help="check a candidate total dominating set")
    p.add_argument("graph", help="edge-list file or generator spec")
    p.add_argument("set_file", type=Path, help="whitespace-separated vertex ids")
    return parser


def _load_graph(spec: str):
    path = Path(spec)
    try:
        return read_edgelist(path) if path.exists() else from_spec(spec)
    except (GraphError, TypeError, ValueError) as exc:
        raise UsageError(f"cannot load graph {spec!r}: {exc}") from None


def _write(out: Path | None, name: str, text: str):
    if out is None:
        return
    out.mkdir(parents=True, exist_ok=True)
    (out / name).write_text(text)


def _rows_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    keys = list(dict.fromkeys(k for r in rows for k in r))
    w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def cmd_table1(args) -> int:
    bad = [d for d in args.d if d < 3]
    if bad:
        raise UsageError(f"d must be >= 3 (got {bad[0]})")
    rows = experiments.table1(args.d, eps_stop=args.eps_stop, step=args.step)
    tag = experiments.param_hash({"cmd": "table1", "d": args.d, "eps_stop": args.eps_stop, "step": args.step})
    if args.format == "csv":
        print(_rows_csv(rows), end="")
    else:
        print(f"{'d':>3} {'q(x*)':>12} {'rounded up':>10} {'reference':>9}  status")
        for r in rows:
            ref = "-" if r["reference"] is None else f"{r['reference']:.4f}"
            print(f"{r['d']:>3} {r['q_x_star']:12.8f} {r['q_rounded_up_4dp']:10.4f} {ref:>9}  {r['status']}")
            if "below_4_11" in r:
                print(f"    < 4/11: {'yes' if r['below_4_11'] else 'no'}")
    _write(args.out, f"table1-{tag}.json", json.dumps(rows, indent=2) + "\n")
    _write(args.out, f"table1-{tag}.csv", _rows_csv(rows))
    return EXIT_NEGATIVE if any(r["status"] == "FAIL" for r in rows) else EXIT_OK


def cmd_simulate(args) -> int:
    if args.d < 3 or args.n <= args.d or (args.n * args.d) % 2 or args.trials < 1:
        raise UsageError("need d >= 3, n > d, n*d even and trials >= 1")
    report, traces = experiments.simulate(
        args.d, args.n, args.trials, args.seed, args.variant, eps=args.eps,
        eps_stop=args.eps_stop, step=args.step, jobs=args.jobs, keep_traces=args.traces,
    )
    tag = experiments.param_hash(report.params)
    print(report.to_csv() if args.format == "csv" else report.to_json(), end="")
    _write(args.out, f"simulate-{tag}.json", report.to_json())
    for i, tr in enumerate(traces):
        _write(args.out, f"simulate-{tag}-trial{i}.csv", tr.to_csv())
    return EXIT_OK


def cmd_compare(args) -> int:
    if args.d < 3 or args.n <= args.d or (args.n * args.d) % 2:
        raise UsageError("need d >= 3, n > d and n*d even")
    report, dev = experiments.compare(args.d, args.n, args.seed, eps_stop=args.eps_stop, step=args.step)
    tag = experiments.param_hash(report["params"])
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    table = experiments.deviation_csv(dev, args.d)
    print(table if args.format == "csv" else text, end="")
    _write(args.out, f"compare-{tag}.json", text)
    _write(args.out, f"compare-{tag}.csv", table)
    return EXIT_OK


def cmd_exact(args) -> int:
    g = _load_graph(args.graph)
    try:
        size, best = brute_force_gamma_t(g, max_vertices=args.max_vertices)
    except InstanceTooLarge as exc:
        raise UsageError(str(exc)) from None
    except NoTotalDominatingSet as exc:
        print(f"no total dominating set: {exc}")
        return EXIT_NEGATIVE
    verdict = verify_tds(g, best)
    if not verdict:
        raise InvariantViolation(f"brute-force set fails verification at vertex {verdict.witness}")
    result = {"graph": args.graph, "n": g.n, "gamma_t": size, "set": sorted(best), "verified": True}
    if args.format == "csv":
        print("graph,n,gamma_t,set,verified")
        print(f"{args.graph},{g.n},{size},{' '.join(map(str, sorted(best)))},true")
    else:
        print(json.dumps(result))
    return EXIT_OK


def cmd_verify(args) -> int:
    g = _load_graph(args.graph)
    try:
        D = [int(tok) for tok in args.set_file.read_text().split()]
    except (OSError, ValueError) as exc:
        raise UsageError(f"malformed set file: {exc}") from None
    if any(not 0 <= v < g.n for v in D):
        raise UsageError(f"set file has vertex ids outside 0..{g.n - 1}")
    verdict = verify_tds(g, D)
    if verdict:
        print("TDS: yes")
        return EXIT_OK
    print(f"TDS: no (vertex {verdict.witness} has no neighbour in the set)")
    return EXIT_NEGATIVE


COMMANDS = {
    "table1": cmd_table1,
    "simulate": cmd_simulate,
    "compare": cmd_compare,
    "exact": cmd_exact,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return COMMANDS[args.cmd](args)
    except UsageError as exc:
        print(f"totaldom {args.cmd}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantViolation as exc:
        print(f"totaldom {args.cmd}: invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except ode.DomainError as exc:
        print(f"totaldom {args.cmd}: ODE left its domain: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
