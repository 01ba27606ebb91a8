"""``zgrid``, ``zconv``, ``embed-unbroken`` and ``selftest``."""

from __future__ import annotations

import argparse
import math
from dataclasses import asdict

from PTSim.logger import logger
from PTSim.repro import run_selftest, verify_unbroken_example, write_grid_csv, z_convergence, z_grid

from . import CommandContext, emit_json, register_command

DEFAULT_TIMES = [0.2, 0.1, 0.05, 0.025]


def _add_model_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--r", type=float, default=math.sqrt(2.0), help="Modulus r (default: sqrt(2))")
    parser.add_argument("--theta", type=float, default=math.pi / 4.0, help="Phase theta (default: pi/4)")


# ==================== zgrid ====================


def _configure_zgrid(parser: argparse.ArgumentParser) -> None:
    _add_model_arguments(parser)
    parser.add_argument("--t-max", type=float, default=0.2, help="Largest time (default: 0.2)")
    parser.add_argument("--s-max", type=float, default=0.2, help="Largest coupling s (default: 0.2)")
    parser.add_argument("--steps", type=int, default=None, help="Grid points per axis (default: 41)")
    parser.add_argument("--out", default=None, help="CSV path (default: zgrid.csv in the output directory)")


def _run_zgrid(args: argparse.Namespace, ctx: CommandContext) -> int:
    report = z_grid(
        r=args.r,
        theta=args.theta,
        t_max=args.t_max,
        s_max=args.s_max,
        steps=ctx.steps,
        threads=ctx.threads,
        tol=ctx.tol,
    )
    out = args.out or ctx.output_path("zgrid.csv")
    write_grid_csv(report, out)
    emit_json(report.maxima(), compact=True)
    return 0


# ==================== zconv ====================


def _configure_zconv(parser: argparse.ArgumentParser) -> None:
    _add_model_arguments(parser)
    parser.add_argument("--s", type=float, default=0.1, help="Coupling s (default: 0.1)")
    parser.add_argument(
        "--t",
        "--times",
        dest="t",
        type=float,
        nargs="+",
        default=DEFAULT_TIMES,
        help="Times to evaluate (default: 0.2 0.1 0.05 0.025)",
    )


def _run_zconv(args: argparse.Namespace, ctx: CommandContext) -> int:
    points = z_convergence(args.r, args.theta, args.s, args.t, ctx.tol)
    emit_json({"r": args.r, "theta": args.theta, "s": args.s, "points": [asdict(p) for p in points]})
    return 0


# ==================== embed-unbroken ====================


def _configure_embed(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--E0", type=float, default=1.0, help="Energy offset (default: 1)")
    parser.add_argument("--s", type=float, default=0.5, help="Coupling s (default: 0.5)")
    parser.add_argument("--theta", type=float, default=math.pi / 3.0, help="Angle theta (default: pi/3)")
    parser.add_argument(
        "--t",
        "--times",
        dest="t",
        type=float,
        nargs="+",
        default=[0.1, 0.5, 1.0, 5.0],
        help="Evolution times to sample (default: 0.1 0.5 1 5)",
    )


def _run_embed(args: argparse.Namespace, ctx: CommandContext) -> int:
    report = verify_unbroken_example(args.E0, args.s, args.theta, args.t, ctx.tol)
    emit_json(report.to_dict())
    return 0 if report.passed else 1


# ==================== selftest ====================


def _configure_selftest(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--scenario", default=None, help="Scenario YAML (default: bundled reduced scenario)")


def _run_selftest(args: argparse.Namespace, ctx: CommandContext) -> int:
    seed = ctx.seed if ctx.seed_overridden else None
    report = run_selftest(args.scenario, seed=seed, tol=ctx.tol)
    emit_json(report.to_dict())
    if not report.passed:
        logger.warning(f"selftest failed: {report.failures}")
        return 1
    return 0


register_command("zgrid", "Sweep Z11, Z22, Z12, Z21 over a (t, s) grid and write CSV", _configure_zgrid, _run_zgrid)
register_command("zconv", "Z values along decreasing times at fixed s", _configure_zconv, _run_zconv)
register_command("embed-unbroken", "Verify the closed-form unbroken embedding", _configure_embed, _run_embed)
register_command("selftest", "Run the reproduction self-test scenario", _configure_selftest, _run_selftest)
