"""Subcommand registry for the ``ptsim`` CLI.

Each module in this package registers its subcommands at import time, so a
new subcommand needs no change to the entry point.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict

from PTSim.config import DEFAULT_GRID, DEFAULT_TOLERANCE, GridConfig, ToleranceConfig
from PTSim.logger import logger


@dataclass(frozen=True)
class CommandContext:
    """Effective run configuration handed to every subcommand."""

    tol: ToleranceConfig = DEFAULT_TOLERANCE
    grid: GridConfig = DEFAULT_GRID
    seed: int = 0
    seed_overridden: bool = False
    threads: int = 1
    steps: int = 41
    output_dir: Path | None = None

    def output_path(self, name: str) -> Path:
        return (self.output_dir or Path.cwd()) / name


@dataclass(frozen=True)
class Command:
    name: str
    help: str
    configure: Callable[[argparse.ArgumentParser], None]
    run: Callable[[argparse.Namespace, CommandContext], int]


# Command registry: name -> Command
COMMAND_REGISTRY: Dict[str, Command] = {}


def register_command(
    name: str,
    help: str,
    configure: Callable[[argparse.ArgumentParser], None],
    run: Callable[[argparse.Namespace, CommandContext], int],
) -> None:
    """
    Register a subcommand.

    Args:
        name: Subcommand name as typed on the command line (e.g., "zgrid")
        help: One-line description for ``ptsim --help``
        configure: Adds the subcommand's arguments to its parser
        run: Executes the subcommand and returns the exit code
    """
    if name in COMMAND_REGISTRY:
        logger.warning(f"Command '{name}' already registered, overwriting")
    COMMAND_REGISTRY[name] = Command(name=name, help=help, configure=configure, run=run)
    logger.debug(f"Registered command: {name}")


def list_commands() -> list[str]:
    return list(COMMAND_REGISTRY.keys())


def is_command_registered(name: str) -> bool:
    return name in COMMAND_REGISTRY


def get_command(name: str) -> Command:
    if name not in COMMAND_REGISTRY:
        available = ", ".join(COMMAND_REGISTRY.keys())
        raise ValueError(f"Unknown command: '{name}'. Available commands: {available}")
    return COMMAND_REGISTRY[name]


def emit_json(payload: Any, compact: bool = False) -> None:
    """Write ``payload`` as JSON to stdout."""
    if compact:
        sys.stdout.write(json.dumps(payload) + "\n")
    else:
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    sys.stdout.flush()


# ==================== Built-in commands ====================

from . import dilate, pointer, repro, settings, system, weak  # noqa: E402,F401
