"""PTSim package metadata and public API."""

from PTSim.config import DEFAULT_GRID, DEFAULT_TOLERANCE, GridConfig, ToleranceConfig
from PTSim.exceptions import DomainError, FormatError, PTSimError
from PTSim.logger import logger
from PTSim.version import APP_VERSION as __version__

__all__ = [
    "DEFAULT_GRID",
    "DEFAULT_TOLERANCE",
    "DomainError",
    "FormatError",
    "GridConfig",
    "PTSimError",
    "ToleranceConfig",
    "__version__",
    "logger",
]
