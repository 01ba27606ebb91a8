"""Prometheus metrics collector for PTSim verification residuals."""

from __future__ import annotations

import sys
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING

from prometheus_client import write_to_textfile
from prometheus_client.core import CollectorRegistry, CounterMetricFamily, GaugeMetricFamily
from prometheus_client.registry import Collector

if TYPE_CHECKING:
    from prometheus_client.core import Metric

from PTSim.logger import logger
from PTSim.version import APP_VERSION


@dataclass
class _CheckTally:
    passed: int = 0
    failed: int = 0


class ResidualBook:
    """Thread-safe store of the latest residual per (check, name) and pass/fail tallies."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._residuals: dict[tuple[str, str], float] = {}
        self._tallies: dict[str, _CheckTally] = {}

    def record(self, check: str, name: str, value: float, passed: bool) -> None:
        with self._lock:
            self._residuals[(check, name)] = float(value)
            tally = self._tallies.setdefault(check, _CheckTally())
            if passed:
                tally.passed += 1
            else:
                tally.failed += 1

    def snapshot(self) -> tuple[dict[tuple[str, str], float], dict[str, _CheckTally]]:
        with self._lock:
            tallies = {k: _CheckTally(v.passed, v.failed) for k, v in self._tallies.items()}
            return dict(self._residuals), tallies

    def clear(self) -> None:
        with self._lock:
            self._residuals.clear()
            self._tallies.clear()


_book = ResidualBook()


def record_residual(check: str, name: str, value: float, passed: bool = True) -> None:
    """Record one residual produced by a verification step."""
    _book.record(check, name, value, passed)


def reset_residuals() -> None:
    _book.clear()


def residual_snapshot() -> dict[tuple[str, str], float]:
    residuals, _ = _book.snapshot()
    return residuals


class ResidualCollector(Collector):
    """
    Custom Prometheus collector over recorded residuals.

    Metrics are built on demand from a snapshot of the residual book, so a
    scrape or textfile export always reflects the latest verification.
    """

    def collect(self) -> list[Metric]:
        metrics: list[Metric] = []

        try:
            metrics.extend(self._collect_residuals())
            metrics.append(self._collect_build_info())
        except Exception as e:
            logger.error(f"Error collecting Prometheus metrics: {e}")

        return metrics

    def _collect_residuals(self) -> list[Metric]:
        residuals, tallies = _book.snapshot()

        residual_gauge = GaugeMetricFamily(
            "ptsim_residual",
            "Latest verification residual",
            labels=["check", "name"],
        )
        for (check, name), value in sorted(residuals.items()):
            residual_gauge.add_metric([check, name], value)

        checks_counter = CounterMetricFamily(
            "ptsim_checks",
            "Verification outcomes by check",
            labels=["check", "status"],
        )
        for check, tally in sorted(tallies.items()):
            checks_counter.add_metric([check, "passed"], tally.passed)
            checks_counter.add_metric([check, "failed"], tally.failed)

        return [residual_gauge, checks_counter]

    def _collect_build_info(self) -> Metric:
        build_info = GaugeMetricFamily(
            "ptsim_build_info",
            "Build information",
            labels=["version", "python_version"],
        )

        python_version = f"{sys.version_info.major}.{sys.version_info.minor}.{sys.version_info.micro}"
        build_info.add_metric([APP_VERSION, python_version], 1)

        return build_info


# Global collector instance (registered once)
_collector_registry: CollectorRegistry | None = None
_collector_instance: ResidualCollector | None = None


def get_metrics_registry() -> CollectorRegistry:
    """
    Get or create the Prometheus registry with the residual collector.

    Returns:
        CollectorRegistry: Registry instance for prometheus_client
    """
    global _collector_registry, _collector_instance

    if _collector_registry is None:
        _collector_registry = CollectorRegistry()
        _collector_instance = ResidualCollector()
        _collector_registry.register(_collector_instance)
        logger.debug("Prometheus residual collector registered")

    return _collector_registry


def write_metrics(path: str | Path) -> None:
    """Write the registry in node-exporter textfile format."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    write_to_textfile(str(target), get_metrics_registry())
    logger.info(f"Metrics written to {target}")
