"""Run configuration for the CLI.

Priority: CLI arguments > environment variables > config file > defaults.
The merged result is validated by pydantic; the file layer is re-read only
when its mtime changes and is written atomically.
"""

import json
import os
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Optional

from pydantic import BaseModel, ValidationError, field_validator

from PTSim.config import GridConfig, ToleranceConfig
from PTSim.logger import logger

DEFAULT_CONFIG_PATH = Path.home() / ".config" / "ptsim" / "config.json"

# ==================== Config sources ====================


class ConfigSource(str, Enum):
    """Configuration sources, highest priority first."""

    CLI = "CLI arguments"
    ENV = "environment variables"
    FILE = "config file (~/.config/ptsim/config.json)"
    DEFAULT = "default"


# ==================== Type-safe model ====================


class ConfigModel(BaseModel):
    """Run configuration: tolerance overrides, grid parameters, output paths and seed."""

    residual_tol: float = 1e-10
    verify_tol: float = 1e-9
    cond_floor: float = 1e-12
    cluster_gap: float = 1e-6

    seed: int = 0
    threads: int = 1

    steps: int = 41
    grid_points: int = 4096
    span_widths: float = 8.0

    output_dir: str | None = None

    @field_validator("residual_tol", "verify_tol", "cond_floor", "cluster_gap", "span_widths")
    @classmethod
    def validate_positive(cls, v: float) -> float:
        if not v > 0:
            raise ValueError("tolerances and widths must be positive")
        return v

    @field_validator("steps")
    @classmethod
    def validate_steps(cls, v: int) -> int:
        if v < 2:
            raise ValueError("steps must be >= 2")
        return v

    @field_validator("threads")
    @classmethod
    def validate_threads(cls, v: int) -> int:
        if v < 1:
            raise ValueError("threads must be >= 1")
        return v

    @field_validator("grid_points")
    @classmethod
    def validate_grid_points(cls, v: int) -> int:
        if v < 2:
            raise ValueError("grid_points must be >= 2")
        return v

    @field_validator("seed")
    @classmethod
    def validate_seed(cls, v: int) -> int:
        if v < 0:
            raise ValueError("seed must be non-negative")
        return v


CONFIG_KEYS = tuple(ConfigModel.model_fields)

# Environment variable -> (field, parser)
ENV_VARS: dict[str, tuple[str, type]] = {
    "PTSIM_TOL": ("residual_tol", float),
    "PTSIM_SEED": ("seed", int),
    "PTSIM_THREADS": ("threads", int),
}


# ==================== Config layer ====================


@dataclass
class ConfigLayer:
    """Values one source sets; absent keys defer to lower layers."""

    source: ConfigSource
    values: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def of(cls, source: ConfigSource, **values: Any) -> "ConfigLayer":
        return cls(source, {k: v for k, v in values.items() if k in CONFIG_KEYS and v is not None})

    def has_value(self, key: str) -> bool:
        return key in self.values


def _read_env() -> dict[str, Any]:
    values: dict[str, Any] = {}
    for name, (key, kind) in ENV_VARS.items():
        raw = os.getenv(name)
        if not raw:
            continue
        try:
            values[key] = kind(raw)
        except ValueError:
            logger.warning(f"Ignoring {name}={raw!r}: not a valid {kind.__name__}")
    return values


# ==================== Unified manager ====================


class UnifiedConfigManager:
    """
    Layered run configuration (singleton).

    Layers are kept in priority order; the first one holding a key wins.
    """

    _instance: Optional["UnifiedConfigManager"] = None
    _initialized: bool = False

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance._initialized = False
        return cls._instance

    def __init__(self):
        if self._initialized:
            return
        self._config_path = DEFAULT_CONFIG_PATH
        self._layers: dict[ConfigSource, ConfigLayer] = {
            source: ConfigLayer(source) for source in (ConfigSource.CLI, ConfigSource.ENV, ConfigSource.FILE)
        }
        self._layers[ConfigSource.DEFAULT] = ConfigLayer(ConfigSource.DEFAULT, ConfigModel().model_dump())
        self._file_mtime: Optional[float] = None
        self._effective: Optional[ConfigModel] = None
        self._initialized = True

    def _set_layer(self, layer: ConfigLayer) -> None:
        self._layers[layer.source] = layer
        self._effective = None
        logger.debug(f"{layer.source.value}: {layer.values}")

    # ==================== Sources ====================

    def set_config_path(self, path: str | Path) -> None:
        """Point the file layer at another JSON file (``--config``)."""
        self._config_path = Path(path).expanduser()
        self._clear_file_layer()

    def set_cli_config(
        self,
        residual_tol: Optional[float] = None,
        seed: Optional[int] = None,
        threads: Optional[int] = None,
        steps: Optional[int] = None,
        output_dir: Optional[str] = None,
    ) -> None:
        """
        Set CLI overrides (highest priority). ``None`` leaves a key to lower layers.

        Args:
            residual_tol: Value of --tol
            seed: Value of --seed
            threads: Value of --threads
            steps: Value of zgrid --steps
            output_dir: Value of --output-dir
        """
        self._set_layer(
            ConfigLayer.of(
                ConfigSource.CLI,
                residual_tol=residual_tol,
                seed=seed,
                threads=threads,
                steps=steps,
                output_dir=output_dir,
            )
        )

    def load_env_config(self) -> None:
        """Read PTSIM_TOL, PTSIM_SEED and PTSIM_THREADS; unparsable values are ignored."""
        self._set_layer(ConfigLayer.of(ConfigSource.ENV, **_read_env()))

    def load_file_config(self, force_reload: bool = False) -> bool:
        """
        (Re)read the config file unless its mtime is unchanged.

        Returns:
            bool: True if the file layer was replaced from disk
        """
        path = self._config_path
        if not path.exists():
            logger.debug(f"No config file at {path}")
            self._clear_file_layer()
            return False

        try:
            mtime = path.stat().st_mtime
            if not force_reload and mtime == self._file_mtime:
                return False
            data = json.loads(path.read_text(encoding="utf-8"))
            if not isinstance(data, dict):
                raise ValueError("top level must be an object")
        except (OSError, ValueError) as e:
            logger.warning(f"Ignoring config file {path}: {e}")
            self._clear_file_layer()
            return False

        self._file_mtime = mtime
        self._set_layer(ConfigLayer.of(ConfigSource.FILE, **data))
        logger.info(f"Config file loaded from {path}")
        return True

    def _clear_file_layer(self) -> None:
        self._file_mtime = None
        self._set_layer(ConfigLayer(ConfigSource.FILE))

    def save_file_config(self, merge_mode: bool = True, **values: Any) -> bool:
        """
        Write settings to the config file (temp file + rename).

        Args:
            merge_mode: Keep keys of the existing file that are not given
            **values: ConfigModel fields

        Returns:
            bool: True on success
        """
        unknown = sorted(set(values) - set(CONFIG_KEYS))
        if unknown:
            logger.error(f"Unknown config keys: {unknown}")
            return False

        path = self._config_path
        payload = {k: v for k, v in values.items() if v is not None}
        if merge_mode and path.exists():
            try:
                existing = json.loads(path.read_text(encoding="utf-8"))
                payload = {k: existing[k] for k in CONFIG_KEYS if k in existing} | payload
            except (OSError, ValueError) as e:
                logger.warning(f"Overwriting unreadable config file {path}: {e}")

        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            staging = path.with_suffix(".tmp")
            staging.write_text(json.dumps(payload, indent=2), encoding="utf-8")
            staging.replace(path)
        except OSError as e:
            logger.error(f"Could not write config file {path}: {e}")
            return False

        logger.info(f"Configuration saved to {path}")
        self.load_file_config(force_reload=True)
        return True

    # ==================== Merged view ====================

    def get_effective_config(self, reload_file: bool = False) -> ConfigModel:
        """
        Merged configuration, CLI > ENV > FILE > DEFAULT.

        A merged result that fails validation is replaced by the defaults.
        """
        if reload_file or (self._file_mtime is None and self._config_path.exists()):
            self.load_file_config(force_reload=reload_file)

        if self._effective is None:
            merged = {key: self._layers[self.get_field_source(key)].values[key] for key in CONFIG_KEYS}
            try:
                self._effective = ConfigModel(**merged)
            except ValidationError as e:
                logger.error(f"Invalid configuration, using defaults: {e}")
                self._effective = ConfigModel()
        return self._effective

    def get_field_source(self, key: str) -> ConfigSource:
        return next(source for source, layer in self._layers.items() if layer.has_value(key))

    def get_tolerance(self) -> ToleranceConfig:
        """Effective numerical tolerances."""
        config = self.get_effective_config()
        return ToleranceConfig(
            residual_tol=config.residual_tol,
            verify_tol=config.verify_tol,
            cond_floor=config.cond_floor,
            cluster_gap=config.cluster_gap,
        )

    def get_grid(self) -> GridConfig:
        config = self.get_effective_config()
        return GridConfig(points=config.grid_points, span_widths=config.span_widths)

    def get_config_path(self) -> Path:
        return self._config_path

    def reset(self) -> None:
        """Drop the CLI, ENV and file layers."""
        self._set_layer(ConfigLayer(ConfigSource.CLI))
        self._set_layer(ConfigLayer(ConfigSource.ENV))
        self._clear_file_layer()

    def to_dict(self) -> dict[str, Any]:
        return self.get_effective_config().model_dump()


config_manager = UnifiedConfigManager()
