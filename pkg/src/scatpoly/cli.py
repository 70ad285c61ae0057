"""Command-line front end: ``scatpoly {poly,medium,greens,spectrum,verify}``.

Exit codes: 0 every check passed, 1 a check failed, 2 bad input,
3 an enumeration budget was exceeded (partial output is still written).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import numpy as np

from scatpoly._rational import format_float, format_rational, parse_rational
from scatpoly.greens import (
    DEFAULT_POINT_BUDGET, BudgetExceeded, budget_from_env, energy, spectrum_poly, synthesize,
)
from scatpoly.media import MediumError, from_params, load_medium
from scatpoly.polyengine import InconsistencyError, eigen_check, scattering_poly
from scatpoly.raytrace import DEFAULT_SEGMENT_BUDGET, compare_oracle, trace_paths
from scatpoly.torus import backward_spectrum
from scatpoly.verify import SUITES

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3

GREENS_HELP = """\
CSV columns: time, amplitude (exact num/den), contributors (lattice points
sharing that time, entries space-separated, points separated by ';'); with
--float also time_float, amplitude_float (17 significant digits).
JSON: {"horizon", "medium", "complete", "arrivals": [{"time", "amplitude",
"contributors"}]}. --compare prints "MATCH, N arrivals" or a JSON diff list
of {time, oracleAmp, latticeAmp}.
"""

SPECTRUM_HELP = """\
CSV columns: sigma, re, im, abs (truncated Green's function spectrum),
backward_re, backward_im, backward_abs (backward recurrence), error
(|backward - truncated|). All values use 17 significant digits.
"""


def _emit(text: str):
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)


def _complex_arg(text: str) -> complex:
    try:
        return complex(text.strip().replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}")


def _rational_arg(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _positive_int(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _budget(flag, default):
    return flag if flag is not None else budget_from_env(default)


def cmd_poly(args) -> int:
    sp = scattering_poly(args.p, args.q)
    if args.p >= 1 and args.q >= 1 and not eigen_check(args.p, args.q):
        print(f"error: eigenvalue identity fails for ({args.p}, {args.q})", file=sys.stderr)
        return EXIT_FAIL
    if args.eval is not None:
        value = sp(args.eval)
        out = {"p": sp.p, "q": sp.q, "point": [format_float(args.eval.real), format_float(args.eval.imag)],
               "value": [format_float(value.real), format_float(value.imag)]}
    elif args.radial:
        out = {"p": sp.p, "q": sp.q, "radial": [format_rational(c) for c in sp.radial]}
        if args.float:
            out["radial_float"] = [format_float(c) for c in sp.radial]
    else:
        out = sp.to_json()
        if args.float:
            for term in out["terms"]:
                term["float"] = format_float(Fraction(int(term["num"]), int(term["den"])))
    _emit(_dumps(out))
    return EXIT_OK


def cmd_medium(args) -> int:
    params = load_medium(args.file)
    if args.to == "params":
        _emit(_dumps(params.to_json()))
    else:
        _emit(_dumps(from_params(params).to_json()))
    return EXIT_OK


def _render_truncation(trunc, args) -> str:
    if args.format == "json":
        return _dumps(trunc.to_json())
    return trunc.to_csv(with_float=args.float)


def cmd_greens(args) -> int:
    params = load_medium(args.file)
    points = _budget(args.max_points, DEFAULT_POINT_BUDGET)
    segments = _budget(args.max_segments, DEFAULT_SEGMENT_BUDGET)
    try:
        if args.energy:
            value = energy(params, args.T, points)
            _emit(format_rational(value) + (f",{format_float(value)}" if args.float else ""))
            return EXIT_OK
        if args.compare:
            report = compare_oracle(params, args.T, segments)
            if args.format == "json":
                _emit(report.to_json())
            else:
                _emit(report.summary())
                if not report.match:
                    _emit(report.to_json())
            return EXIT_OK if report.match else EXIT_FAIL
        if args.oracle:
            trunc = trace_paths(params, args.T, segments)
        else:
            trunc = synthesize(params, args.T, points)
    except BudgetExceeded as exc:
        print(f"warning: {exc}; output below is partial", file=sys.stderr)
        partial = exc.partial
        if hasattr(partial, "to_csv"):
            sys.stdout.write(_render_truncation(partial, args))
        return EXIT_BUDGET
    sys.stdout.write(_render_truncation(trunc, args))
    return EXIT_OK


def cmd_spectrum(args) -> int:
    params = load_medium(args.file)
    if args.sigma_max < args.sigma_min:
        raise ValueError("--sigma-max must not be below --sigma-min")
    points = _budget(args.max_points, DEFAULT_POINT_BUDGET)
    try:
        trunc = synthesize(params, args.T, points)
    except BudgetExceeded as exc:
        print(f"warning: {exc}; no spectrum written", file=sys.stderr)
        return EXIT_BUDGET
    sigma = np.linspace(args.sigma_min, args.sigma_max, args.steps)
    poly = np.atleast_1d(spectrum_poly(params, args.T, sigma, trunc))
    back = np.atleast_1d(backward_spectrum(params, sigma))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["sigma", "re", "im", "abs", "backward_re", "backward_im", "backward_abs", "error"])
    for s, a, b in zip(sigma, poly, back):
        writer.writerow([format_float(x) for x in
                         (s, a.real, a.imag, abs(a), b.real, b.imag, abs(b), abs(b - a))])
    sys.stdout.write(buf.getvalue())
    return EXIT_OK


VERIFY_OPTIONS = {
    "eigen": ["pmax"],
    "ortho": ["pmax", "order"],
    "recurrence": ["mmax", "numax"],
    "identity": ["n", "trials", "seed", "grid"],
    "pde": ["nmax", "trials", "seed", "h"],
    "oracle": ["trials", "seed", "nmax"],
    "energy": ["trials", "seed", "nmax"],
}


def cmd_verify(args) -> int:
    kwargs = {}
    for name in VERIFY_OPTIONS[args.suite]:
        value = getattr(args, name)
        if value is not None:
            kwargs[name] = value
    ignored = [name for name in ("pmax", "order", "mmax", "numax", "n", "trials", "seed", "grid", "nmax", "h")
               if getattr(args, name) is not None and name not in kwargs]
    if ignored:
        raise ValueError(f"options {', '.join('--' + x for x in ignored)} do not apply to {args.suite}")
    report = SUITES[args.suite](**kwargs)
    if args.json:
        _emit(_dumps({"suite": report.name, "passed": report.passed,
                      "failures": report.failures, "checks": report.lines}))
    else:
        _emit(report.render())
    return EXIT_OK if report.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scatpoly",
        description="Scattering polynomials and layered-media Green's functions.",
        epilog="SCATTER_BUDGET overrides the default lattice-point and ray-segment caps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("poly", help="scattering polynomial phi^(p,q)")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--coeffs", action="store_true", help="JSON terms (default)")
    mode.add_argument("--eval", type=_complex_arg, metavar="POINT", help="evaluate at a complex point, e.g. 0.5+0.1i")
    mode.add_argument("--radial", action="store_true", help="radial profile coefficients in powers of rho")
    p.add_argument("--float", action="store_true", help="add 17-digit float renderings")
    p.set_defaults(func=cmd_poly)

    p = sub.add_parser("medium", help="convert between profile and (tau, r) forms")
    p.add_argument("file")
    p.add_argument("--to", choices=["params", "profile"], default="params")
    p.set_defaults(func=cmd_medium)

    p = sub.add_parser("greens", help="truncated Green's function", epilog=GREENS_HELP,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("file")
    p.add_argument("--T", type=_rational_arg, required=True, help="horizon (rational)")
    action = p.add_mutually_exclusive_group()
    action.add_argument("--oracle", action="store_true", help="use the ray-path oracle")
    action.add_argument("--compare", action="store_true", help="compare oracle with lattice synthesis")
    action.add_argument("--energy", action="store_true", help="sum of squared lattice amplitudes")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--float", action="store_true")
    p.add_argument("--max-points", type=_positive_int, help="lattice-point cap")
    p.add_argument("--max-segments", type=_positive_int, help="ray-segment cap")
    p.set_defaults(func=cmd_greens)

    p = sub.add_parser("spectrum", help="truncated vs backward-recurrence spectrum",
                       epilog=SPECTRUM_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("file")
    p.add_argument("--T", type=_rational_arg, required=True)
    p.add_argument("--sigma-min", type=float, default=0.0)
    p.add_argument("--sigma-max", type=float, required=True)
    p.add_argument("--steps", type=_positive_int, default=256)
    p.add_argument("--max-points", type=_positive_int, help="lattice-point cap")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("verify", help="run a seeded verification suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=_positive_int)
    p.add_argument("--n", type=_positive_int, help="identity: number of layers (1-3)")
    p.add_argument("--nmax", type=_positive_int, help="pde/oracle/energy: largest n")
    p.add_argument("--pmax", type=_positive_int)
    p.add_argument("--order", type=_positive_int, help="ortho: quadrature order")
    p.add_argument("--mmax", type=int)
    p.add_argument("--numax", type=_positive_int)
    p.add_argument("--grid", type=_positive_int, help="identity: DFT grid size")
    p.add_argument("--h", type=float, help="pde: finite-difference step")
    p.add_argument("--json", action="store_true", help="JSON report")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InconsistencyError as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (MediumError, ValueError, TypeError, OSError, KeyError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceeded as exc:
        print(f"warning: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
