"""Command-line interface.

Exit status: 0 success, 1 verification failure, 2 usage or input error,
3 I/O error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .exceptions import DomainError, NumericalError

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


def _floats(text: str, count: int, flag: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError:
        raise DomainError(f"{flag} expects {count} comma-separated numbers, got {text!r}") from None
    if len(values) != count:
        raise DomainError(f"{flag} expects {count} comma-separated numbers, got {len(values)}")
    return values


def resolve_state(args, check: bool = True) -> np.ndarray:
    """Source CM from the state flags; ``check=False`` skips the physicality test for ``--cm``."""
    from .states import cm_from_entries, family_cm, thermal_cm

    if args.cm is not None:
        a, c, b = _floats(args.cm, 3, "--cm")
        return cm_from_entries(a, c, b) if check else np.array([[a, c], [c, b]])
    if args.thermal_ns is not None:
        return thermal_cm(args.thermal_ns)
    if args.family_trace is not None:
        if args.ns is None:
            raise DomainError("--family-trace needs --ns")
        return family_cm(args.family_trace, args.ns)
    raise DomainError("give the source state with --cm, --thermal-ns or --family-trace/--ns")


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _emit(record: dict, as_json: bool) -> None:
    if as_json:
        sys.stdout.write(json.dumps(record, indent=2) + "\n")
        return
    for key, value in record.items():
        sys.stdout.write(f"{key}: {value}\n")


def _matrix(a) -> list:
    return np.asarray(a).tolist()


def cmd_state_check(args) -> int:
    from .ratedist import analyze_source, clipping_point
    from .symcore import bosonic_entropy, check_uncertainty

    gamma = resolve_state(args, check=False)
    report = check_uncertainty(gamma)
    record = {"cm": _matrix(gamma), "valid": report.valid, "min_eigenvalue": report.min_eigenvalue}
    if not report.valid:
        _emit(record, args.json)
        return EXIT_USAGE
    src = analyze_source(gamma)
    record.update(
        gamma_s=src.gamma_s,
        n_s=src.n_s,
        entropy=bosonic_entropy(src.n_s, args.base),
        d_min=src.minimum.d_min,
        omega=src.omega,
        M_star=_matrix(src.minimum.M_star),
        clipping_point=clipping_point(gamma, args.base, source=src),
        base=args.base,
    )
    _emit(record, args.json)
    return EXIT_OK


def cmd_channel_apply(args) -> int:
    from .channel import GaussianChannel, apply, joint_cm, normalize_gain, validate_channel
    from .coherent import coherent_info_from_cm
    from .distortion import canonical_distortion

    gamma = resolve_state(args)
    m = _floats(args.m, 4, "--m")
    a, c, b = _floats(args.noise, 3, "--noise")
    chan = GaussianChannel(np.array(m).reshape(2, 2), np.array([[a, c], [c, b]]))
    rep = validate_channel(chan)
    record = {"output_cm": _matrix(apply(chan, gamma)), "gain": chan.gain, "valid": rep.valid, "slack": rep.slack}
    if rep.valid and chan.gain > 0:
        unit, k = normalize_gain(chan)
        dist = canonical_distortion(unit, gamma)
        record.update(
            k=k,
            average_distortion=dist.d_bar,
            d_min=dist.d_min,
            canonical_distortion=dist.n_n,
            coherent_info=coherent_info_from_cm(joint_cm(unit, gamma), args.base),
            base=args.base,
        )
    _emit(record, args.json)
    return EXIT_OK if rep.valid else EXIT_USAGE


def cmd_rd_point(args) -> int:
    from .ratedist import rate_distortion

    p = rate_distortion(resolve_state(args), args.nn, args.base)
    record = {k: v for k, v in zip(p.FIELDS, p.row())}
    record.update(i_c=p.i_c, base=args.base)
    _emit(record, args.json)
    return EXIT_OK


def cmd_rd_curve(args) -> int:
    from .figure import curve_csv
    from .ratedist import rd_curve

    if args.steps < 2:
        raise DomainError("--steps must be at least 2")
    if not args.nn_max >= 0:
        raise DomainError("--nn-max must be nonnegative")
    grid = np.linspace(0.0, args.nn_max, args.steps)
    _write(curve_csv(rd_curve(resolve_state(args), grid, args.base)), args.out)
    return EXIT_OK


def cmd_figure1(args) -> int:
    from .figure import curve_csv, figure1_curves, figure1_filename

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for ns, points in figure1_curves(args.base).items():
        path = out / figure1_filename(ns)
        _write(curve_csv(points), str(path))
        sys.stderr.write(f"wrote {path}\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import report, run_checks

    if args.cases < 1:
        raise DomainError("--cases must be positive")
    if not 0 <= args.seed < 2**64:
        raise DomainError("--seed must be a 64-bit unsigned integer")
    results = run_checks(args.seed, args.cases)
    _write(json.dumps(report(results), indent=2) + "\n", args.out)
    for r in results:
        sys.stderr.write(f"{'PASS' if r.passed else 'FAIL'} {r.name} worst={r.worst_error:.3e} tol={r.tolerance:g}\n")
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


def _state_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--cm", metavar="A,C,B", help="explicit CM [[a, c], [c, b]]")
    g.add_argument("--thermal-ns", type=float, metavar="X", help="thermal state with mean photon number X")
    g.add_argument("--family-trace", type=float, metavar="T", help="diag(a, b) with a + b = T (needs --ns)")
    p.add_argument("--ns", type=float, metavar="X", help="photon number for --family-trace")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--base", choices=("bits", "nats"), default="bits")
    p.add_argument("--json", action="store_true", help="machine-readable output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gaussrd", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    state = sub.add_parser("state", help="inspect a source state").add_subparsers(dest="action", required=True)
    p = state.add_parser("check", help="validity, Williamson data and distortion floor")
    _state_flags(p)
    _common(p)
    p.set_defaults(func=cmd_state_check)

    chan = sub.add_parser("channel", help="apply a Gaussian channel").add_subparsers(dest="action", required=True)
    p = chan.add_parser("apply", help="output CM, validity and canonical distortion")
    _state_flags(p)
    _common(p)
    p.add_argument("--m", default="1,0,0,1", metavar="M11,M12,M21,M22")
    p.add_argument("--noise", default="0,0,0", metavar="A,C,B", help="noise matrix [[a, c], [c, b]]")
    p.set_defaults(func=cmd_channel_apply)

    rd = sub.add_parser("rd", help="rate-distortion values").add_subparsers(dest="action", required=True)
    p = rd.add_parser("point", help="R^I at one canonical distortion")
    _state_flags(p)
    _common(p)
    p.add_argument("--nn", type=float, required=True)
    p.set_defaults(func=cmd_rd_point)
    p = rd.add_parser("curve", help="CSV curve on a uniform N_n grid")
    _state_flags(p)
    _common(p)
    p.add_argument("--nn-max", type=float, required=True)
    p.add_argument("--steps", type=int, default=201)
    p.add_argument("--out", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_rd_curve)

    p = sub.add_parser("figure1", help="six curves of the trace-3 source family")
    _common(p)
    p.add_argument("--out", default=".", help="output directory")
    p.set_defaults(func=cmd_figure1)

    p = sub.add_parser("verify", help="run the seeded oracle suite")
    _common(p)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--cases", type=int, default=1000)
    p.add_argument("--out", help="JSON report path (default stdout)")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, NumericalError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        sys.stderr.write(f"I/O error: {exc}\n")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
