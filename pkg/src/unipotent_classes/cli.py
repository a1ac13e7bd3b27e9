"""Command-line interface: compute class-count polynomials, cross-check them
against the brute-force oracle and the closed-form coefficient predictions,
verify family partitions, and persist JSON artifacts."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .coeffs import predict_low_coeffs
from .counting import CountPolynomial
from .engine import EngineOptions, RunResult, run
from .oracle import (count_orbits_burnside, count_orbits_unionfind,
                     timed_orbit_count, verify_partition)
from .roots import build, parse_label


def _parse_q_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _artifact(result: RunResult) -> dict:
    doc = result.to_json_dict()
    doc["version"] = __version__
    return doc


def _engine_options(args) -> EngineOptions:
    return EngineOptions(
        series_term=args.series,
        normalize=not args.no_normalize,
        normalize_skip=frozenset(args.skip_normalization or ()),
        trace=args.trace,
        workers=args.workers,
    )


def cmd_count(args) -> int:
    result = run(build(args.type), _engine_options(args))
    basis = args.basis
    if basis in ("v", "both"):
        print(result.polynomial.render("v"))
    if basis in ("q", "both"):
        print(result.polynomial.render("q"))
    print(f"families: {sum(result.census.values())}  census by m: "
          f"{ {m: c for m, c in sorted(result.census.items())} }")
    print(f"primes logged: {list(result.primes)}")
    status = 0
    if result.bad:
        print(f"partial: bad families present ({len(result.bad)})", file=sys.stderr)
        status = 1
    for q in args.oracle or ():
        got = count_orbits_burnside(args.type, q, min_height=args.series)
        want = result.polynomial.evaluate_q(q)
        tag = "ok" if got == want else "MISMATCH"
        print(f"oracle q={q}: burnside={got} polynomial={want} {tag}")
        if got != want:
            status = 1
    if args.output:
        path = Path(args.output)
        if path.is_dir() or args.output.endswith("/"):
            path.mkdir(parents=True, exist_ok=True)
            path = path / f"{result.label}_l{result.series_term}_v{__version__}.json"
        path.write_text(json.dumps(_artifact(result), indent=2, sort_keys=True) + "\n")
        print(f"artifact written to {path}")
    return status


def _check(checks: list, name: str, ok: bool, detail: str = "") -> None:
    checks.append({"check": name, "pass": bool(ok), "detail": detail})


def cmd_validate(args) -> int:
    if args.artifact:
        doc = json.loads(Path(args.artifact).read_text())
        label = doc["type"]
        series = doc.get("series_term", 1)
        coeffs_v = list(doc["polynomial"]["v"])
        census = {int(k): v for k, v in doc.get("census", {}).items()}
        bad = doc.get("bad_families", [])
    else:
        if not args.type:
            print("either --artifact or --type is required", file=sys.stderr)
            return 2
        result = run(build(args.type), _engine_options(args))
        label = result.label
        series = result.series_term
        coeffs_v = list(result.polynomial.coeffs_v)
        census = result.census
        bad = result.bad
    rs = build(label)
    poly = CountPolynomial.from_v(coeffs_v)
    checks: list[dict] = []
    _check(checks, "no-bad-families", not bad, f"{len(bad)} bad")
    _check(checks, "nonnegative-v-coefficients", all(c >= 0 for c in coeffs_v))
    if series == 1:
        pred = predict_low_coeffs(rs)
        _check(checks, "constant-coefficient-is-1", poly.coefficient(0) == pred.c0,
               f"got {poly.coefficient(0)}")
        _check(checks, "linear-coefficient-is-N", poly.coefficient(1) == pred.c1,
               f"got {poly.coefficient(1)}, want {pred.c1}")
        _check(checks, "quadratic-coefficient", poly.coefficient(2) == pred.c2,
               f"got {poly.coefficient(2)}, want {pred.c2}")
        if census:
            _check(checks, "m1-family-count-is-N", census.get(1, 0) == rs.N,
                   f"got {census.get(1, 0)}")
    for q in args.oracle or ():
        got = count_orbits_burnside(label, q, min_height=series)
        _check(checks, f"oracle-q{q}", got == poly.evaluate_q(q),
               f"oracle {got}, polynomial {poly.evaluate_q(q)}")
    if args.equal_to:
        other = json.loads(Path(args.equal_to).read_text())
        _check(checks, "polynomials-equal",
               list(other["polynomial"]["v"]) == coeffs_v,
               f"{other['type']} vs {label}")
    print(json.dumps({"type": label, "checks": checks}, indent=2))
    return 0 if all(c["pass"] for c in checks) else 1


def cmd_oracle(args) -> int:
    methods = ["unionfind", "burnside"] if args.method == "both" else [args.method]
    out = [timed_orbit_count(args.type, args.q, m, args.series) for m in methods]
    print(json.dumps(out if len(out) > 1 else out[0], indent=2))
    if len(out) > 1 and out[0]["count"] != out[1]["count"]:
        print("oracle methods disagree", file=sys.stderr)
        return 1
    return 0


def cmd_predict_coeffs(args) -> int:
    rs = build(args.type)
    pred = predict_low_coeffs(rs)
    print(f"{rs.label}: degree 0 -> {pred.c0}, degree 1 -> {pred.c1}, "
          f"degree 2 -> {pred.c2}")
    if args.check:
        result = run(rs, _engine_options(args))
        got = tuple(result.polynomial.coefficient(k) for k in (0, 1, 2))
        ok = got == (pred.c0, pred.c1, pred.c2)
        print(f"computed: {result.polynomial.render()} -> low coefficients {got} "
              f"{'match' if ok else 'MISMATCH'}")
        return 0 if ok else 1
    return 0


def cmd_partition_check(args) -> int:
    opts = EngineOptions(series_term=args.series, normalize=False)
    result = run(build(args.type), opts)
    if result.bad:
        print("engine produced bad families; cannot verify", file=sys.stderr)
        return 1
    report = verify_partition(args.type, args.q, result)
    print(report)
    return 0 if report.ok else 1


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--series", type=int, default=1, metavar="L",
                   help="count classes inside the L-th central series term")
    p.add_argument("--trace", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--no-normalize", action="store_true",
                   help="disable torus normalization of coordinates")
    p.add_argument("--skip-normalization", type=lambda s: [int(x) for x in s.split(",")],
                   default=None, metavar="I,J,...",
                   help="enumeration indices whose coordinates stay unnormalized")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="unipotent-classes",
        description="Count conjugacy classes of Sylow p-subgroups of Chevalley "
                    "groups as polynomials in v = q-1.")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="run the engine and print/persist k(U(q))")
    p.add_argument("--type", required=True, metavar="B3")
    p.add_argument("--basis", choices=("v", "q", "both"), default="v")
    p.add_argument("--oracle", type=_parse_q_list, default=None, metavar="Q,Q",
                   help="cross-check against the Burnside oracle at these q")
    p.add_argument("--output", default=None, metavar="PATH")
    _add_common(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("validate", help="check a run or artifact against theory")
    p.add_argument("--artifact", default=None, metavar="PATH")
    p.add_argument("--type", default=None)
    p.add_argument("--oracle", type=_parse_q_list, default=None, metavar="Q,Q")
    p.add_argument("--equal-to", default=None, metavar="PATH",
                   help="check polynomial equality with another artifact")
    _add_common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("oracle", help="brute-force orbit count")
    p.add_argument("--type", required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--method", choices=("unionfind", "burnside", "both"),
                   default="unionfind")
    p.add_argument("--series", type=int, default=1)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("predict-coeffs", help="closed-form low coefficients")
    p.add_argument("--type", required=True)
    p.add_argument("--check", action="store_true",
                   help="also run the engine and compare")
    _add_common(p)
    p.set_defaults(func=cmd_predict_coeffs)

    p = sub.add_parser("partition-check",
                       help="verify that family points biject with orbits")
    p.add_argument("--type", required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--series", type=int, default=1)
    p.set_defaults(func=cmd_partition_check)

    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose > 1 else
        logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
