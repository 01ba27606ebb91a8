"""CLI entry point for PTSim."""

import argparse
import sys
from pathlib import Path

from PTSim import __version__

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_FORMAT = 2


def build_parser() -> argparse.ArgumentParser:
    from PTSim.commands import COMMAND_REGISTRY

    parser = argparse.ArgumentParser(
        prog="ptsim",
        allow_abbrev=False,
        description="PTSim - Hermitian dilations and weak measurements of PT-symmetric Hamiltonians",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--tol",
        type=float,
        default=None,
        help="Residual tolerance (default: 1e-10, or PTSIM_TOL / config file)",
    )
    parser.add_argument(
        "--seed",
        type=int,
        default=None,
        help="Seed for randomized checks (default: 0, or PTSIM_SEED / config file)",
    )
    parser.add_argument(
        "--threads",
        type=int,
        default=None,
        help="Worker threads for grid sweeps (default: 1, or PTSIM_THREADS / config file)",
    )
    parser.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        default="WARNING",
        help="Console (stderr) log level (default: WARNING)",
    )
    parser.add_argument(
        "--log-file",
        default=None,
        help="Log file path, e.g. logs/ptsim_{time:YYYY-MM-DD}.log (default: no file log)",
    )
    parser.add_argument(
        "--metrics-file",
        default=None,
        help="Write residual metrics in Prometheus textfile format after the command",
    )
    parser.add_argument(
        "--config",
        default=None,
        help="Config file path (default: ~/.config/ptsim/config.json)",
    )
    parser.add_argument(
        "--output-dir",
        default=None,
        help="Directory for generated files without an explicit path",
    )

    subparsers = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for command in COMMAND_REGISTRY.values():
        sub = subparsers.add_parser(command.name, help=command.help, description=command.help, allow_abbrev=False)
        command.configure(sub)
    return parser


def main(argv: list[str] | None = None) -> int:
    """Run one ``ptsim`` subcommand and return its exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)

    from PTSim.commands import CommandContext, get_command
    from PTSim.config_manager import ConfigSource, config_manager
    from PTSim.exceptions import DomainError, FormatError
    from PTSim.logger import configure_logger, logger, route_numpy_errors
    from PTSim.metrics import write_metrics

    configure_logger(console_level=args.log_level, log_file=args.log_file)

    # ==================== Configuration (CLI > ENV > FILE > DEFAULT) ====================

    if args.config:
        config_manager.set_config_path(args.config)
    config_manager.set_cli_config(
        residual_tol=args.tol,
        seed=args.seed,
        threads=args.threads,
        steps=getattr(args, "steps", None),
        output_dir=args.output_dir,
    )
    config_manager.load_env_config()
    config_manager.load_file_config()
    effective = config_manager.get_effective_config()

    ctx = CommandContext(
        tol=config_manager.get_tolerance(),
        grid=config_manager.get_grid(),
        seed=effective.seed,
        seed_overridden=config_manager.get_field_source("seed") != ConfigSource.DEFAULT,
        threads=effective.threads,
        steps=effective.steps,
        output_dir=Path(effective.output_dir) if effective.output_dir else None,
    )
    logger.debug(f"ptsim {args.command}: tol={ctx.tol.residual_tol:g}, seed={ctx.seed}, threads={ctx.threads}")

    try:
        with route_numpy_errors():
            code = get_command(args.command).run(args, ctx)
    except DomainError as e:
        logger.error(f"{args.command} failed: {type(e).__name__}: {e}")
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        code = EXIT_DOMAIN
    except FormatError as e:
        logger.error(f"{args.command} failed: {type(e).__name__}: {e}")
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        code = EXIT_FORMAT
    except OSError as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        code = EXIT_FORMAT
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        code = EXIT_FORMAT

    if args.metrics_file:
        try:
            write_metrics(args.metrics_file)
        except OSError as e:
            logger.error(f"Could not write metrics to {args.metrics_file}: {e}")
            code = code or EXIT_FORMAT

    return code


if __name__ == "__main__":
    sys.exit(main())
