"""Command-line front end.

Exit codes: 0 success, 2 usage or parse error, 3 internal consistency
failure, 4 state unsupported by the path ledger.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .datasets import (
    FIGURES,
    contour_dataset,
    figure_datasets,
    fmt,
    kd_grid,
    parse_kd,
    parse_state,
    scan_dataset,
    theta_grid,
)
from .geometry import ChainGeometry
from .engine import ConsistencyError, intensity
from .paths import UnsupportedStateError, build_ledger, ledger_to_dict
from .states import load_state_spec, make_from_spec

EXIT_USAGE = 2
EXIT_CONSISTENCY = 3
EXIT_UNSUPPORTED = 4

ANGLE_HELP = "in units of pi, e.g. 0.5 means pi/2"
KD_HELP = "raw number or '<x>pi' shorthand, e.g. 1.5pi"


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _kd(text: str) -> float:
    try:
        return parse_kd(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _add_state_args(p: argparse.ArgumentParser) -> None:
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--state", help="builtin state: W:n_e,N (symmetric W) or S:n_e,n_g (separable)")
    group.add_argument("--spec-file", help="state spec file, one '<signed-int> <config>' per line")


def _add_theta_args(p: argparse.ArgumentParser, steps: int) -> None:
    p.add_argument("--theta-min", type=_fraction, default=Fraction(-1, 2), help=ANGLE_HELP)
    p.add_argument("--theta-max", type=_fraction, default=Fraction(1, 2), help=ANGLE_HELP)
    p.add_argument("--theta-steps", type=int, default=steps)


def _add_output_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", help="output file (default: standard output)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entangled-emission",
        description="Far-field intensity of entangled two-level atom chains.",
        epilog="Angles are given in units of pi; kd accepts '<x>pi'.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    scan = sub.add_parser("scan", help="angular intensity scan")
    _add_state_args(scan)
    scan.add_argument("--kd", type=_kd, default=parse_kd("1.5pi"), help=KD_HELP)
    _add_theta_args(scan, 1001)
    _add_output_args(scan)

    contour = sub.add_parser("contour", help="intensity over a kd-theta grid")
    _add_state_args(contour)
    contour.add_argument("--kd-min", type=_kd, required=True, help=KD_HELP)
    contour.add_argument("--kd-max", type=_kd, required=True, help=KD_HELP)
    contour.add_argument("--kd-steps", type=int, default=51)
    _add_theta_args(contour, 401)
    _add_output_args(contour)

    ledger = sub.add_parser("ledger", help="interfering-path ledger as JSON")
    _add_state_args(ledger)
    ledger.add_argument("--kd", type=_kd, default=parse_kd("1.5pi"), help=KD_HELP)
    ledger.add_argument("--out", help="output file (default: standard output)")

    figure = sub.add_parser("figure", help="emit the preset figure datasets")
    figure.add_argument("id", choices=FIGURES)
    figure.add_argument("--format", choices=("csv", "json"), default="csv")
    figure.add_argument("--out", default=".", help="output directory (default: current)")
    return parser


def _load(args):
    if args.spec_file:
        spec = load_state_spec(args.spec_file)
        return make_from_spec(spec), spec
    return parse_state(args.state)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _run(args) -> int:
    if args.command == "scan":
        state, _ = _load(args)
        theta = theta_grid(args.theta_min, args.theta_max, args.theta_steps)
        _emit(scan_dataset(state, args.kd, theta).serialize(args.format), args.out)
    elif args.command == "contour":
        state, _ = _load(args)
        theta = theta_grid(args.theta_min, args.theta_max, args.theta_steps)
        kds = kd_grid(args.kd_min, args.kd_max, args.kd_steps)
        _emit(contour_dataset(state, kds, theta).serialize(args.format), args.out)
    elif args.command == "ledger":
        state, spec = _load(args)
        report = {"state": state.label or "custom", **ledger_to_dict(build_ledger(spec))}
        report["intensity_theta0"] = float(fmt(intensity(state, ChainGeometry(state.n_atoms, args.kd), 0.0)))
        _emit(json.dumps(report, indent=1) + "\n", args.out)
    elif args.command == "figure":
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        for ds in figure_datasets(args.id):
            path = out_dir / f"{ds.name}.{args.format}"
            path.write_text(ds.serialize(args.format))
            print(path)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args)
    except ConsistencyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except UnsupportedStateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
