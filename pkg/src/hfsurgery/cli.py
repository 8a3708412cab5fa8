"""Command-line interface.

Subcommands: brieskorn, plumbing, creature, cone, sweep, threshold.

Exit codes: 0 success, 2 invalid input, 3 failed internal cross-check (or a
failing sweep row). JSON output is deterministic (sorted keys, stable
ordering); the schemas are listed in the README.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from hfsurgery.brieskorn import BrieskornParams, decompose_creature, structural_checks
from hfsurgery.delta import creature_sequence
from hfsurgery.errors import InternalInconsistencyError
from hfsurgery.graded_root import FUModule, u_kills_red_at
from hfsurgery.mapping_cone import ConeConfig, SurgeryKnotData, cone_homology, obstruction_witness
from hfsurgery.obstruction import not_surgery_in_s3, poincare_sum_threshold, reduced_extent
from hfsurgery.pipeline import run_brieskorn
from hfsurgery.plumbing import graph_to_dot, max_char_square, plumbing_graph

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_INCONSISTENT = 3

SWEEP_BUDGET = 60


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _params(args) -> BrieskornParams:
    return BrieskornParams.of(args.p, args.q, args.r)


def cmd_brieskorn(args, out) -> int:
    res = run_brieskorn(_params(args), method=args.method)
    if args.format == "json":
        out.write(_dump(res.to_json()))
    elif args.format == "dot":
        out.write(res.dot())
    else:
        out.write(res.pretty())
    return EXIT_OK


def cmd_plumbing(args, out) -> int:
    graph = plumbing_graph(_params(args))
    if args.format == "dot":
        out.write(graph_to_dot(graph))
        return EXIT_OK
    best, k = max_char_square(graph, args.method)
    d = (best + len(graph)) // 4
    if args.format == "json":
        out.write(_dump({**graph.to_json(), "max_square": best, "maximizer": list(k.pairings), "d": d}))
    else:
        out.write(f"weights  = {list(graph.weights)}\n")
        out.write(f"edges    = {[list(e) for e in graph.edges]}\n")
        out.write(f"max K^2  = {best}\n")
        out.write(f"d        = {d}   (boundary orientation -Y; d(Y) = {-d})\n")
    return EXIT_OK


def cmd_creature(args, out) -> int:
    if args.decompose:
        dec = decompose_creature(args.p)
        if args.format == "json":
            out.write(_dump(dec.to_json()))
        else:
            out.write(f"cutoff   = {dec.cutoff}\n")
            out.write(f"prefix   = {dec.prefix}   (sinking)\n")
            out.write(f"creature = {dec.creature}\n")
        return EXIT_OK
    seq = creature_sequence(args.p)
    if args.format == "json":
        out.write(_dump(seq.to_json()))
    else:
        out.write(f"{seq}\n")
    return EXIT_OK


def _knot_data(args) -> SurgeryKnotData:
    if args.json is not None:
        text = sys.stdin.read() if args.json == "-" else open(args.json).read()
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValueError(f"bad JSON input: {exc}") from exc
        if args.n is not None:
            data["n"] = args.n
        return SurgeryKnotData.from_json(data)
    try:
        vs = tuple(int(x) for x in args.V.split(",") if x.strip()) if args.V else ()
    except ValueError as exc:
        raise ValueError(f"--V must be comma-separated integers: {args.V!r}") from exc
    return SurgeryKnotData(vs, 1 if args.n is None else args.n)


def cmd_cone(args, out) -> int:
    data = _knot_data(args)
    cfg = ConeConfig(args.radius, args.depth)
    m = cone_homology(data, cfg)
    verdict = not_surgery_in_s3(m)
    witness = obstruction_witness(data, cfg) if args.witness else None
    if args.format == "json":
        doc = {"data": data.to_json(), "module": m.to_json(), "d": m.d, "verdict": verdict.to_json()}
        if witness is not None:
            doc["witness"] = witness.to_json()
        out.write(_dump(doc))
    else:
        out.write(f"V = {list(data.V)}, n = {data.n}\n")
        out.write(f"HF+ = {m.pretty()}\n")
        out.write(f"d = {m.d}\n")
        out.write(f"verdict: {verdict.status} ({verdict.justification()})\n")
        if witness is not None:
            state = "found" if witness.found else "not found"
            out.write(f"witness {state}: {witness.to_json()}\n")
    return EXIT_OK


def expected_d(p: int) -> int:
    return -p if p % 2 == 0 else -p + 1


def sweep_row(p: int, checks: bool = False) -> dict:
    """One sweep line; errors are caught and reported in the row."""
    row = {"p": p, "ok": True, "error": None}
    try:
        res = run_brieskorn(BrieskornParams.family(p))
        m = res.module
        row.update(
            d=res.d,
            d_expected=expected_d(p),
            dim_H0=m.dim(0),
            dim_kerU0=m.ker_u_dim(0),
            U_kills_red0=u_kills_red_at(m, 0),
            verdict=res.verdict["status"],
        )
        row["ok"] = res.d == row["d_expected"]
        if p % 2 == 0 and p >= 4:
            try:
                decompose_creature(p, res.reduced)
                row["decomposition"] = "pass"
            except InternalInconsistencyError as exc:
                row["decomposition"] = f"fail: {exc}"
                row["ok"] = False
            row["ok"] = row["ok"] and row["U_kills_red0"] and row["dim_kerU0"] + 1 == row["dim_H0"]
        else:
            row["decomposition"] = "n/a"
        if checks and p % 2 == 0 and p >= 4:
            report = structural_checks(p, res.expanded)
            row["structural"] = "pass" if report.ok else "fail: " + ",".join(k for k, v in report.checks.items() if not v)
            row["ok"] = row["ok"] and report.ok
    except (ValueError, InternalInconsistencyError) as exc:
        row["ok"] = False
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def _sweep_ps(args) -> list[int]:
    if args.p_max > args.budget:
        raise ValueError(f"--p-max {args.p_max} exceeds the budget {args.budget}")
    if args.p_min < 2:
        raise ValueError("--p-min must be at least 2")
    ps = range(args.p_min, args.p_max + 1)
    if args.parity == "even":
        return [p for p in ps if p % 2 == 0]
    if args.parity == "odd":
        return [p for p in ps if p % 2 == 1]
    return list(ps)


def cmd_sweep(args, out) -> int:
    ps = _sweep_ps(args)
    if args.workers > 1 and len(ps) > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(sweep_row, ps, [args.checks] * len(ps)))
    else:
        rows = [sweep_row(p, args.checks) for p in ps]
    if args.format == "json":
        out.write(_dump(rows))
    else:
        header = f"{'p':>4} {'d':>5} {'dimH0':>6} {'kerU0':>6} {'decomp':>7} {'verdict':>13}"
        if args.checks:
            header += f" {'struct':>7}"
        out.write(header + "\n")
        for r in rows:
            if r["error"]:
                out.write(f"{r['p']:>4} ERROR {r['error']}\n")
                continue
            dec = r["decomposition"] if r["decomposition"] in ("pass", "n/a") else "FAIL"
            line = f"{r['p']:>4} {r['d']:>5} {r['dim_H0']:>6} {r['dim_kerU0']:>6} {dec:>7} {r['verdict']:>13}"
            if args.checks:
                st = r.get("structural", "n/a")
                line += f" {st if st in ('pass', 'n/a') else 'FAIL':>7}"
            if not r["ok"]:
                line += "  <-- failure"
            out.write(line + "\n")
    return EXIT_OK if all(r["ok"] for r in rows) else EXIT_INCONSISTENT


def cmd_threshold(args, out) -> int:
    if args.from_json is not None:
        text = sys.stdin.read() if args.from_json == "-" else open(args.from_json).read()
        doc = json.loads(text)
        if args.n_minus is None:
            raise ValueError("--from-json needs --n-minus: reduced homology of the mirror is not computed")
        m = FUModule.from_json(doc["module"])
        d_plus, d_minus = m.d, int(doc["d_mirror"])
        n_plus, n_minus = reduced_extent(m), args.n_minus
    else:
        d_plus, d_minus = args.d_plus, args.d_minus
        n_plus, n_minus = args.n_plus, 0 if args.n_minus is None else args.n_minus
    k = poincare_sum_threshold(d_plus, d_minus, n_plus, n_minus)
    if args.format == "json":
        out.write(_dump({"d_plus": d_plus, "d_minus": d_minus, "n_plus": n_plus, "n_minus": n_minus, "k": k}))
    else:
        out.write(f"{k}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hfsurgery", description="Heegaard Floer computations for Brieskorn spheres")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def fmt(sp, choices=("pretty", "json")):
        sp.add_argument("--format", choices=choices, default="pretty")

    sp = sub.add_parser("brieskorn", help="HF+, d and verdict for Sigma(p,q,r)")
    for name in ("p", "q", "r"):
        sp.add_argument(name, type=int)
    fmt(sp, ("pretty", "json", "dot"))
    sp.add_argument("--method", choices=("tree", "descent", "box"), default="tree")
    sp.set_defaults(func=cmd_brieskorn)

    sp = sub.add_parser("plumbing", help="plumbing graph and lattice d-invariant")
    for name in ("p", "q", "r"):
        sp.add_argument(name, type=int)
    fmt(sp, ("pretty", "json", "dot"))
    sp.add_argument("--method", choices=("tree", "descent", "box"), default="tree")
    sp.set_defaults(func=cmd_plumbing)

    sp = sub.add_parser("creature", help="creature sequence of Y_p")
    sp.add_argument("p", type=int)
    sp.add_argument("--decompose", action="store_true", help="split the reduced sequence of Y_p")
    fmt(sp)
    sp.set_defaults(func=cmd_creature)

    sp = sub.add_parser("cone", help="mapping cone for 1/n surgery")
    sp.add_argument("--V", default="", help="comma-separated V_0,V_1,... (trailing zeros implied)")
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--json", default=None, metavar="FILE", help='read {"V": [...], "n": n} from FILE or - for stdin')
    sp.add_argument("--witness", action="store_true")
    sp.add_argument("--radius", type=int, default=None)
    sp.add_argument("--depth", type=int, default=None)
    fmt(sp)
    sp.set_defaults(func=cmd_cone)

    sp = sub.add_parser("sweep", help="table over the family Y_p")
    sp.add_argument("--p-min", type=int, default=3)
    sp.add_argument("--p-max", type=int, default=20)
    sp.add_argument("--parity", choices=("even", "odd", "all"), default="all")
    sp.add_argument("--checks", action="store_true", help="also run the semigroup structural checks")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--budget", type=int, default=SWEEP_BUDGET)
    fmt(sp)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("threshold", help="number of Poincare sphere summands needed")
    sp.add_argument("--d-plus", type=int, default=0)
    sp.add_argument("--d-minus", type=int, default=0)
    sp.add_argument("--n-plus", type=int, default=0)
    sp.add_argument("--n-minus", type=int, default=None)
    sp.add_argument("--from-json", default=None, metavar="FILE", help="output of `brieskorn --format json`")
    fmt(sp)
    sp.set_defaults(func=cmd_threshold)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except InternalInconsistencyError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except (ValueError, OSError, KeyError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
