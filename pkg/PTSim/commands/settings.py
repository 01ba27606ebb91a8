"""``config``: show the effective run configuration or save settings to the config file."""

from __future__ import annotations

import argparse

from PTSim.config_manager import CONFIG_KEYS, ConfigModel, config_manager

from . import CommandContext, emit_json, register_command


def parse_assignment(text: str) -> tuple[str, str]:
    """``"steps=81"`` -> ``("steps", "81")``."""
    key, sep, value = text.partition("=")
    key = key.strip()
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"expected KEY=VALUE, got {text!r}")
    if key not in CONFIG_KEYS:
        raise argparse.ArgumentTypeError(f"unknown key {key!r}; known keys: {', '.join(CONFIG_KEYS)}")
    return key, value.strip()


def _configure_config(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--set",
        dest="assignments",
        metavar="KEY=VALUE",
        type=parse_assignment,
        action="append",
        default=[],
        help="Save a setting to the config file (repeatable)",
    )
    parser.add_argument(
        "--replace",
        action="store_true",
        help="Drop keys of the existing config file that are not set here",
    )


def _run_config(args: argparse.Namespace, ctx: CommandContext) -> int:
    if not args.assignments:
        emit_json(
            {
                "path": str(config_manager.get_config_path()),
                "values": config_manager.to_dict(),
                "sources": {key: config_manager.get_field_source(key).name for key in CONFIG_KEYS},
            }
        )
        return 0

    values = dict(args.assignments)
    # Raises pydantic.ValidationError (a ValueError) before anything is written.
    checked = ConfigModel(**(ConfigModel().model_dump() | values))
    typed = {key: getattr(checked, key) for key in values}
    if not config_manager.save_file_config(merge_mode=not args.replace, **typed):
        raise OSError(f"could not write {config_manager.get_config_path()}")
    emit_json({"path": str(config_manager.get_config_path()), "saved": typed})
    return 0


register_command(
    "config",
    "Show the effective configuration, or save KEY=VALUE settings to the config file",
    _configure_config,
    _run_config,
)
