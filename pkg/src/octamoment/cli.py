"""Command-line surface: coefficient tables, expansions, verification
suites, the bijection, Monte Carlo runs, and the degenerate-stratum
report.

Every subcommand is deterministic given its arguments (seeds included);
identical invocations produce byte-identical output.  Exit codes:
0 success, 1 verification/validation failure, 2 flagged strata in strict
mode.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import closedform as cf
from . import forests as fo
from . import hypermaps as hm
from . import moments as mo
from .partitions import format_partition, format_rational, parse_partition
from .verify import SUITES, coeffs_self_check, lp_from_pairings, run_suite


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _json_dumps(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def cmd_coeffs(args) -> int:
    n = args.n
    for check in coeffs_self_check(n):
        if not check.ok:
            print(check.line(), file=sys.stderr)
            return 1
    rows: list[dict] = []
    if args.kind in ("L", "b", "c"):
        table = hm.L_table(n)
        b = hm.b_from_L(table)
        if args.kind == "L":
            for (lam, mu, r), value in sorted(
                table.entries.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2]), reverse=True
            ):
                rows.append(
                    {
                        "lambda": format_partition(lam),
                        "mu": format_partition(mu),
                        "r": r,
                        "L": value,
                        "b": 2**n * _factorial(n) * value,
                        "c": value if r == 0 else 0,
                    }
                )
        else:
            c = hm.c_from_L(table)
            source = b if args.kind == "b" else c
            for (lam, mu), value in sorted(
                source.items(), key=lambda kv: (kv[0][0], kv[0][1]), reverse=True
            ):
                rows.append(
                    {
                        "lambda": format_partition(lam),
                        "mu": format_partition(mu),
                        args.kind: value,
                    }
                )
    else:  # LP
        if args.per_array:
            tallies = hm.lp_by_array(n)
            payload = {a.serialize(): c for a, c in tallies.items()}
            _emit(_json_dumps(payload), args.out)
            return 0
        lp = lp_from_pairings(n)
        for (nu, rho, r), value in sorted(
            lp.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2]), reverse=True
        ):
            rows.append(
                {
                    "lambda": format_partition(nu),
                    "mu": format_partition(rho),
                    "r": r,
                    "LP": value,
                }
            )
    _emit(_format_rows(rows, args.format), args.out)
    return 0


def _factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def _format_rows(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return _json_dumps(rows)
    if fmt == "csv":
        buffer = io.StringIO()
        if rows:
            writer = csv.DictWriter(buffer, fieldnames=list(rows[0].keys()))
            writer.writeheader()
            writer.writerows(rows)
        return buffer.getvalue()
    # pretty: multiplicative partition notation, aligned columns
    if not rows:
        return "(empty)\n"
    pretty_rows = []
    for row in rows:
        shown = dict(row)
        for key in ("lambda", "mu"):
            if key in shown:
                shown[key] = format_partition(parse_partition(shown[key]), "mult")
        pretty_rows.append(shown)
    headers = list(pretty_rows[0].keys())
    widths = {
        h: max(len(h), *(len(str(r[h])) for r in pretty_rows)) for h in headers
    }
    lines = ["  ".join(h.ljust(widths[h]) for h in headers)]
    for row in pretty_rows:
        lines.append("  ".join(str(row[h]).ljust(widths[h]) for h in headers))
    return "\n".join(lines) + "\n"


def cmd_expansion(args) -> int:
    n = args.n
    if args.field == "complex":
        expansion = cf.complex_expansion(n)
        report = []
    else:
        if args.strict:
            expansion, strata = cf.real_expansion_strict(n)
            report = [d.to_json() for d in strata]
        else:
            try:
                expansion = cf.real_expansion(n, oracle_bound=args.oracle_max_n)
            except cf.DegenerateStrataError as err:
                payload = {
                    "n": n,
                    "field": args.field,
                    "error": "flagged strata beyond the oracle bound; "
                    "raise --oracle-max-n or use --strict for the report",
                    "degenerate_strata": [d.to_json() for d in err.strata],
                }
                _emit(_json_dumps(payload), args.out)
                return 2
            report = [d.to_json() for d in cf.real_expansion_report(n, args.oracle_max_n)]
    payload = {
        "n": n,
        "field": args.field,
        "terms": expansion.to_records(),
        "degenerate_strata": report,
    }
    _emit(_json_dumps(payload), args.out)
    if args.strict and report:
        return 2
    return 0


def cmd_verify(args) -> int:
    kwargs = {}
    if args.suite == "mc":
        kwargs = {"samples": args.samples, "seed": args.seed}
        results = run_suite(args.suite, **kwargs)
    else:
        results = run_suite(args.suite, n_max=args.n_max)
    failures = 0
    for check in results:
        print(check.line())
        failures += 0 if check.ok else 1
    print(f"{len(results) - failures}/{len(results)} checks passed")
    return 0 if failures == 0 else 1


def _hypermap_from_json(data: dict) -> hm.PartitionedHypermap:
    n = data["n"]
    pairs = [
        (hm.parse_element(str(a), n), hm.parse_element(str(b), n))
        for a, b in data["f3"]
    ]
    blocks1 = [
        {hm.parse_element(str(x), n) for x in block} for block in data["pi1"]
    ]
    blocks2 = [
        {hm.parse_element(str(x), n) for x in block} for block in data["pi2"]
    ]
    return hm.PartitionedHypermap.make(hm.Pairing.from_pairs(n, pairs), blocks1, blocks2)


def _hypermap_to_json(h: hm.PartitionedHypermap) -> dict:
    n = h.f3.n
    name = lambda x: hm.element_name(x, n)  # noqa: E731
    return {
        "n": n,
        "f3": [[name(a), name(b)] for a, b in h.f3.pairs()],
        "pi1": [[name(x) for x in sorted(block)] for block in h.pi1],
        "pi2": [[name(x) for x in sorted(block)] for block in h.pi2],
    }


def cmd_bijection(args) -> int:
    with open(args.input, "r", encoding="utf-8") as handle:
        data = json.load(handle)
    if "f3" in data:
        h = _hypermap_from_json(data)
        problems = h.validate()
        if problems:
            print(_json_dumps({"valid": False, "violations": problems}), end="")
            return 1
        forest = fo.theta_forward(h)
        payload = {
            "direction": "hypermap->forest",
            "degree_array": hm.degree_array(h).to_json(),
            "forest": fo.forest_to_json(forest),
        }
        dot = fo.forest_to_dot(forest)
    else:
        forest = fo.forest_from_json(data)
        problems = fo.validate_forest(forest)
        if problems:
            print(_json_dumps({"valid": False, "violations": problems}), end="")
            return 1
        h = fo.theta_inverse(forest)
        payload = {
            "direction": "forest->hypermap",
            "degree_array": fo.forest_degree(forest).to_json(),
            "hypermap": _hypermap_to_json(h),
            "pretty": str(h),
        }
        dot = fo.forest_to_dot(forest)
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as handle:
            handle.write(dot)
    _emit(_json_dumps(payload), args.out)
    return 0


def _matrix_from_args(path: str | None, eigs: str | None, dim_hint: int | None):
    if path:
        with open(path, "r", encoding="utf-8") as handle:
            return mo.MatrixSpec.from_json(json.load(handle))
    if eigs:
        return mo.MatrixSpec.from_eigs([Fraction(tok) for tok in eigs.split(",")])
    if dim_hint:
        return mo.MatrixSpec.identity(dim_hint)
    raise SystemExit("need --x-eigs/--y-eigs, matrix files, or --dim")


def cmd_mc(args) -> int:
    x = _matrix_from_args(args.matrix_x, args.x_eigs, args.dim)
    y = _matrix_from_args(args.matrix_y, args.y_eigs, args.dim)
    if args.field == "real":
        estimate = mo.mc_moment_real(args.n, x, y, args.samples, args.seed)
    else:
        estimate = mo.mc_moment_complex(args.n, x, y, args.samples, args.seed)
    exact = None
    if x.eigs is not None and y.eigs is not None:
        try:
            if args.field == "real":
                exact = mo.moment_real_exact(args.n, x, y)
            else:
                exact = mo.moment_complex_exact(args.n, x, y)
        except (hm.BoundExceededError, cf.DegenerateStrataError):
            exact = None
    payload = estimate.to_json(exact)
    if exact is not None:
        payload["exact_rational"] = format_rational(exact)
    _emit(_json_dumps(payload), args.out)
    return 0


def cmd_report(args) -> int:
    report = [d.to_json() for d in cf.real_expansion_report(args.n, args.oracle_max_n)]
    _emit(_json_dumps(report), args.out)
    if args.strict and report:
        return 2
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="octamoment",
        description=(
            "Exact moments of XUYU^t / XUYU^* for Gaussian U: closed formulas "
            "with enumeration oracles, the hypermap<->forest bijection, and "
            "Monte Carlo checks."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", help="connection coefficient tables")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kind", choices=["b", "c", "L", "LP"], required=True)
    p.add_argument("--format", choices=["json", "csv", "pretty"], default="pretty")
    p.add_argument("--per-array", action="store_true",
                   help="with --kind LP: JSON tallies keyed by serialized degree array")
    p.add_argument("--out")
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("expansion", help="monomial expansion of a moment")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--field", choices=["real", "complex"], required=True)
    p.add_argument("--strict", action="store_true",
                   help="exit 2 instead of substituting the oracle on flagged strata")
    p.add_argument("--oracle-max-n", type=int, default=hm.DEFAULT_PARTITIONED_BOUND)
    p.add_argument("--out")
    p.set_defaults(func=cmd_expansion)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", choices=sorted(SUITES), required=True)
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--samples", type=int, default=200_000)
    p.add_argument("--seed", type=int, default=20240801)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bijection", help="map a hypermap JSON to its forest or back")
    p.add_argument("--input", required=True)
    p.add_argument("--dot", help="also write a Graphviz rendering here")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bijection)

    p = sub.add_parser("mc", help="Monte Carlo moment estimate")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--field", choices=["real", "complex"], default="real")
    p.add_argument("--samples", type=int, default=200_000)
    p.add_argument("--seed", type=int, default=20240801)
    p.add_argument("--dim", type=int, help="use identity matrices of this size")
    p.add_argument("--x-eigs", help="comma list of rational eigenvalues for X")
    p.add_argument("--y-eigs", help="comma list of rational eigenvalues for Y")
    p.add_argument("--matrix-x", help="JSON file {dim, eigs|entries}")
    p.add_argument("--matrix-y", help="JSON file {dim, eigs|entries}")
    p.add_argument("--out")
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("report", help="degenerate-stratum report for the real expansion")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--oracle-max-n", type=int, default=hm.DEFAULT_PARTITIONED_BOUND)
    p.add_argument("--strict", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
