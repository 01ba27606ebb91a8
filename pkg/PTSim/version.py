"""Package version helper."""

from importlib.metadata import version as get_version

try:
    APP_VERSION = get_version("ptsim")
except Exception:
    APP_VERSION = "dev"
