"""Command-line surface.

Subcommands: sieve, sum, criterion, zeros, verify-inversion, window-sum,
abel-scan, euler-product.  Exit codes: 0 success, 1 usage error, 2
numeric failure.  Reports go to --out (format picked by extension:
.json/.csv) or stdout.

Sequence caching: materialized sequences are stored in the binary cache
format under --cache-dir (or $CMO_CACHE_DIR), keyed by the canonical spec
JSON and length, so repeated runs are byte-identical to cold ones.
"""

from __future__ import annotations

import argparse
import hashlib
import io
import json
import os
import sys
from pathlib import Path
from typing import List, Optional

from . import analytic, arith, criteria, inversion, zerofinder
from .characters import character
from .specs import MODE_CM, InvalidSpecError, PrimeValueSpec, parse_spec

USAGE_ERROR = 1
NUMERIC_ERROR = 2

# precondition violations (DomainError, InvalidSpecError, bad flags) exit
# with 1; failures of the numerics themselves with 2
_NUMERIC_ERRORS = (analytic.PoleError, analytic.QuadratureError,
                   analytic.TailBoundError, zerofinder.BoundaryZeroError,
                   ZeroDivisionError, ArithmeticError)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(USAGE_ERROR)


def _resolve_spec(text: str) -> PrimeValueSpec:
    """Shorthand, JSON literal, file path, or zero:<q>:<index>:first."""
    if text.startswith("zero:"):
        parts = text.split(":")
        if len(parts) != 4 or parts[3] != "first":
            raise InvalidSpecError(
                "zero spec shorthand is zero:<q>:<index>:first")
        chi = character(int(parts[1]), int(parts[2]))
        recs = zerofinder.locate_zeros(chi, (0.0, 30.0), tol=1e-6)
        if not recs:
            raise InvalidSpecError(
                f"no zero of L(s, chi_{parts[1]},{parts[2]}) in t <= 30")
        return zerofinder.cmo_from_zero(chi, recs[0].rho)
    p = Path(text)
    if text.startswith("@"):
        p = Path(text[1:])
        return PrimeValueSpec.from_json_dict(json.loads(p.read_text()))
    if p.suffix == ".json" and p.exists():
        return PrimeValueSpec.from_json_dict(json.loads(p.read_text()))
    return parse_spec(text)


def _cache_dir(args) -> Optional[Path]:
    d = getattr(args, "cache_dir", None) or os.environ.get("CMO_CACHE_DIR")
    if not d:
        return None
    path = Path(d)
    path.mkdir(parents=True, exist_ok=True)
    return path


def cached_sequence(spec: PrimeValueSpec, n: int,
                    cache_dir: Optional[Path]):
    """Build (or load) the sequence for a spec, using the binary cache."""
    if cache_dir is None:
        return _build(spec, n)
    key = hashlib.sha256(
        f"{spec.canonical_json()}|{n}".encode()).hexdigest()[:32]
    path = cache_dir / f"seq-{key}.cmo"
    if path.exists():
        return arith.load_sequence(path)
    seq = _build(spec, n)
    arith.save_sequence(seq, path)
    return seq


def _build(spec: PrimeValueSpec, n: int):
    if spec.mode == MODE_CM:
        return arith.build_cm_sequence(spec, n)
    return arith.build_mult_sequence(spec, n)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _emit_report(report, out: Optional[str]) -> None:
    """JSON by default; CSV when the target has a .csv suffix."""
    if out and out.endswith(".csv"):
        buf = io.StringIO()
        report.write_csv(buf)
        Path(out).write_text(buf.getvalue())
    else:
        _emit(json.dumps(report.to_json_dict(), indent=2), out)


def _parse_checkpoints(text: str, n: int) -> List[int]:
    if text == "decades":
        return list(criteria.decade_checkpoints(n, start=min(100, n)))
    return [int(v) for v in text.split(",")]


# ----------------------------------------------------------------------
# subcommand handlers

def _cmd_sieve(args) -> int:
    table = arith.sieve_primes(args.n)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write("p\n")
            for p in table.primes:
                fh.write(f"{p}\n")
    stats = {"n": table.limit, "prime_count": int(len(table.primes)),
             "largest": int(table.primes[-1])}
    sys.stdout.write(json.dumps(stats) + "\n")
    return 0


def _cmd_sum(args) -> int:
    spec = _resolve_spec(args.spec)
    seq = cached_sequence(spec, args.n, _cache_dir(args))
    cps = _parse_checkpoints(args.checkpoints, args.n)
    report = arith.partial_sums(seq, args.weight, cps)
    if args.out and not args.out.endswith(".json"):
        buf = io.StringIO()
        report.write_csv(buf)
        Path(args.out).write_text(buf.getvalue())
    else:
        _emit(json.dumps(report.to_json_dict(), indent=2), args.out)
    return 0


def _cmd_criterion(args) -> int:
    spec = _resolve_spec(args.spec)
    which = args.which
    if which == "bounds":
        seq = cached_sequence(spec, args.pmax, _cache_dir(args))
        report = criteria.bounds_diagnostics(seq)
    elif which == "neg-real-sum":
        report = criteria.negative_real_sum(spec, P=args.pmax)
    elif which == "rotated-sum":
        grid = criteria.TauGrid.default(
            [float(t) for t in args.taus.split(",")] if args.taus else ())
        report = criteria.rotated_sum(spec, grid, P=args.pmax)
    elif which == "real-part-sum":
        report = criteria.real_part_sum(spec, P=args.pmax)
    elif which == "deviation-density":
        report = criteria.deviation_density(
            spec, x_list=criteria.decade_checkpoints(args.pmax))
    elif which == "deviation-integral":
        report = criteria.deviation_integral_report(spec, P=args.pmax)
    else:  # pragma: no cover - argparse choices guard this
        raise InvalidSpecError(which)
    _emit_report(report, args.out)
    return 0


def _cmd_zeros(args) -> int:
    chi = character(args.q, args.index)
    recs = zerofinder.locate_zeros(chi, (args.tmin, args.tmax), tol=args.tol)
    _emit(json.dumps([r.to_json_dict() for r in recs], indent=2), args.out)
    return 0


def _cmd_verify_inversion(args) -> int:
    spec = _resolve_spec(args.f_spec)
    n = args.n
    f_seq = cached_sequence(spec, n, _cache_dir(args))
    g = arith.dirichlet_convolve(f_seq, arith.ones_sequence(n))
    model = inversion.InversionModel(tau=args.tau, kind="zero")
    xs = _parse_checkpoints(args.x_list, n)
    if args.form == "harmonic":
        report = inversion.verify_harmonic_inversion(f_seq, g, model, xs)
    else:
        report = inversion.verify_plain_inversion(f_seq, g, model, xs)
    _emit_report(report, args.out)
    return 0


def _cmd_window_sum(args) -> int:
    params = analytic.WindowParams(x=args.x, a=args.a)
    model = analytic.BoundarySeriesModel(args.model)
    value = analytic.window_sum(model, params, T=args.T, tol=args.tol)
    _emit(json.dumps({"model": args.model, "x": args.x, "a": args.a,
                      "T": args.T, "tol": args.tol, "value": value}),
          args.out)
    return 0


def _cmd_abel_scan(args) -> int:
    spec = _resolve_spec(args.spec)
    sigmas = [float(s) for s in args.sigmas.split(",")]
    rows = analytic.abel_limit_scan(spec, sigmas, args.n)
    lines = ["sigma,partial_re,partial_im,closed_re,closed_im"]
    for r in rows:
        c = r.closed_form
        lines.append(f"{r.sigma},{r.partial_sum.real!r},{r.partial_sum.imag!r},"
                     + (f"{c.real!r},{c.imag!r}" if c is not None else ","))
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_euler_product(args) -> int:
    spec = _resolve_spec(args.spec)
    s = complex(args.s_re, args.s_im)
    value = analytic.euler_product(spec, s, args.pmax)
    _emit(json.dumps({"s": [s.real, s.imag], "pmax": args.pmax,
                      "re": value.real, "im": value.imag}), args.out)
    return 0


def build_parser() -> _Parser:
    p = _Parser(prog="cmolab",
                description="laboratory for completely multiplicative "
                            "functions of zero sum")
    sub = p.add_subparsers(dest="command", required=True)

    def add_common(sp):
        sp.add_argument("--out", help="output file (.csv or .json)")
        sp.add_argument("--cache-dir",
                        help="sequence cache directory (or $CMO_CACHE_DIR)")

    sp = sub.add_parser("sieve", help="smallest-prime-factor sieve")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--out", help="write primes as CSV")
    sp.set_defaults(func=_cmd_sieve)

    sp = sub.add_parser("sum", help="checkpointed partial sums")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--weight", choices=["1", "1/n"], default="1")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--checkpoints", default="decades")
    add_common(sp)
    sp.set_defaults(func=_cmd_sum)

    sp = sub.add_parser("criterion", help="zero-sum criterion evaluators")
    sp.add_argument("--which", required=True,
                    choices=["bounds", "neg-real-sum", "rotated-sum",
                             "real-part-sum", "deviation-density",
                             "deviation-integral"])
    sp.add_argument("--spec", required=True)
    sp.add_argument("--pmax", type=int, default=criteria.DEFAULT_P)
    sp.add_argument("--taus", help="extra tau values, comma separated")
    add_common(sp)
    sp.set_defaults(func=_cmd_criterion)

    sp = sub.add_parser("zeros", help="locate L-function zeros")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--index", type=int, required=True)
    sp.add_argument("--tmin", type=float, default=0.0)
    sp.add_argument("--tmax", type=float, default=30.0)
    sp.add_argument("--tol", type=float, default=1e-6)
    sp.add_argument("--out")
    sp.set_defaults(func=_cmd_zeros)

    sp = sub.add_parser("verify-inversion",
                        help="inversion relation residuals")
    sp.add_argument("--form", choices=["harmonic", "plain"], required=True)
    sp.add_argument("--f-spec", required=True)
    sp.add_argument("--tau", type=float, default=0.0)
    sp.add_argument("--n", type=int, default=10**6)
    sp.add_argument("--x-list", default="decades")
    add_common(sp)
    sp.set_defaults(func=_cmd_verify_inversion)

    sp = sub.add_parser("window-sum", help="smoothed boundary-value sum")
    sp.add_argument("--model", choices=["liouville", "mobius"], required=True)
    sp.add_argument("--x", type=float, required=True)
    sp.add_argument("--a", type=float, required=True)
    sp.add_argument("--T", type=float, default=5000.0)
    sp.add_argument("--tol", type=float, default=1e-2)
    sp.add_argument("--out")
    sp.set_defaults(func=_cmd_window_sum)

    sp = sub.add_parser("abel-scan", help="vertical limit scan sigma -> 1+")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--sigmas", required=True,
                    help="descending comma-separated values > 1")
    sp.add_argument("--n", type=int, default=10**6)
    sp.add_argument("--out")
    sp.set_defaults(func=_cmd_abel_scan)

    sp = sub.add_parser("euler-product", help="truncated Euler product")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--s-re", type=float, required=True)
    sp.add_argument("--s-im", type=float, default=0.0)
    sp.add_argument("--pmax", type=int, default=10**6)
    sp.add_argument("--out")
    sp.set_defaults(func=_cmd_euler_product)

    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    try:
        return args.func(args)
    except _NUMERIC_ERRORS as exc:
        sys.stderr.write(f"numeric failure: {exc}\n")
        return NUMERIC_ERROR
    except (InvalidSpecError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
