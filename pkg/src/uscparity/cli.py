"""Command-line interface.

Subcommands: phase-portrait, time-trace, heatmap, cut, oracle-check.
Common flags select the config file, output path, model, and integration
overrides; USCPARITY_* environment variables override config-file values,
and explicit flags override both.
"""

from __future__ import annotations

import argparse
import sys

from . import harness
from .config import RunConfig, SweepSpec, load_config
from .errors import UscParityError
from .model import ParityLabel


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", metavar="PATH", help="JSON config file")
    sub.add_argument("--out", metavar="PATH", default="-",
                     help="output CSV path (default: stdout)")
    sub.add_argument("--model", choices=["exact", "rwa", "both"],
                     help="which pointer model(s) to run (default: both)")
    sub.add_argument("--tol", type=float, help="integration tolerance")
    sub.add_argument("--t-end", type=float, dest="t_end",
                     help="integration horizon in units of 1/kappa")
    sub.add_argument("--g-over-kappa", type=float, dest="g_over_kappa")
    sub.add_argument("--g-over-omega-r", type=float, dest="g_over_omega_r")
    sub.add_argument("--g-over-delta", type=float, dest="g_over_delta")
    sub.add_argument("--eps-over-kappa", type=float, dest="eps_over_kappa")
    sub.add_argument("--delta-r-over-kappa", type=float, dest="delta_r_over_kappa")
    sub.add_argument("--workers", type=int,
                     help="sweep worker threads (0: all cores, default 1)")


def _config_from(args: argparse.Namespace) -> RunConfig:
    overrides = {
        name: getattr(args, name, None)
        for name in (
            "model", "tol", "t_end", "g_over_kappa", "g_over_omega_r",
            "g_over_delta", "eps_over_kappa", "delta_r_over_kappa", "workers",
        )
    }
    return load_config(path=args.config, overrides=overrides)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uscparity",
        description=(
            "Pointer-state dynamics and homodyne parity-measurement fidelity "
            "of a driven dispersive two-qubit readout, with and without the "
            "rotating-wave approximation."
        ),
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser(
        "phase-portrait",
        help="steady (I, Q) pointer positions for all four labels",
    )
    _add_common(p)

    p = subs.add_parser(
        "time-trace", help="Re/Im of one label's pointer amplitude vs time"
    )
    _add_common(p)
    p.add_argument("--label", default="ee",
                   choices=[lab.value for lab in ParityLabel])
    p.add_argument("--points", type=int, default=2001,
                   help="output grid size (default 2001)")

    p = subs.add_parser(
        "heatmap",
        help="average fidelity over a (g/kappa, g/omega_r) grid "
             "(defaults: [5,50] x [0.01,0.5], 40x40 linear)",
    )
    _add_common(p)
    p.add_argument("--gk-min", type=float, default=5.0)
    p.add_argument("--gk-max", type=float, default=50.0)
    p.add_argument("--gk-points", type=int, default=40)
    p.add_argument("--gk-log", action="store_true")
    p.add_argument("--gw-min", type=float, default=0.01)
    p.add_argument("--gw-max", type=float, default=0.5)
    p.add_argument("--gw-points", type=int, default=40)
    p.add_argument("--gw-log", action="store_true")

    p = subs.add_parser(
        "cut", help="fidelity line cuts along g/omega_r at fixed g/kappa"
    )
    _add_common(p)
    p.add_argument("--g-over-kappa-values", default="15,50",
                   help="comma-separated g/kappa values (default 15,50)")
    p.add_argument("--gw-min", type=float, default=0.01)
    p.add_argument("--gw-max", type=float, default=0.5)
    p.add_argument("--gw-points", type=int, default=40)

    p = subs.add_parser(
        "oracle-check",
        help="master-equation and quadrature certification at one point "
             "(nonzero exit on any tolerance breach)",
    )
    _add_common(p)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _config_from(args)
        with harness.open_output(args.out) as out:
            if args.command == "phase-portrait":
                harness.run_phase_portrait(config, out)
            elif args.command == "time-trace":
                harness.run_time_trace(
                    config, ParityLabel(args.label), out, n_points=args.points
                )
            elif args.command == "heatmap":
                sweep = SweepSpec(
                    gk_min=args.gk_min, gk_max=args.gk_max,
                    gk_points=args.gk_points, gk_log=args.gk_log,
                    gw_min=args.gw_min, gw_max=args.gw_max,
                    gw_points=args.gw_points, gw_log=args.gw_log,
                )
                harness.run_fidelity_heatmap(sweep, config, out)
            elif args.command == "cut":
                gk_values = [
                    float(v) for v in args.g_over_kappa_values.split(",") if v
                ]
                gw_values = SweepSpec(
                    gw_min=args.gw_min, gw_max=args.gw_max,
                    gw_points=args.gw_points,
                ).gw_values()
                harness.run_fidelity_cut(config, gk_values, out, gw_values)
            elif args.command == "oracle-check":
                ok = harness.run_oracle_check(config, out)
                return 0 if ok else 1
    except UscParityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
