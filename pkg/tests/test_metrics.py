"""Tests for the Prometheus residual metrics."""

from prometheus_client import generate_latest

from PTSim.metrics import (
    ResidualBook,
    get_metrics_registry,
    record_residual,
    reset_residuals,
    residual_snapshot,
    write_metrics,
)


def _scrape() -> str:
    return generate_latest(get_metrics_registry()).decode("utf-8")


def test_residual_gauge_carries_latest_value():
    """Recording a residual twice keeps only the latest value."""
    record_residual("dilation", "frame", 3e-15)
    record_residual("dilation", "frame", 5e-15)
    output = _scrape()
    assert 'ptsim_residual{check="dilation",name="frame"} 5e-15' in output


def test_check_counter_tallies_outcomes():
    """Pass/fail outcomes are counted per check."""
    record_residual("embedding", "isometry", 1e-16, passed=True)
    record_residual("embedding", "isometry", 1e-3, passed=False)
    output = _scrape()
    assert 'ptsim_checks_total{check="embedding",status="passed"} 1.0' in output
    assert 'ptsim_checks_total{check="embedding",status="failed"} 1.0' in output


def test_metrics_format_valid():
    """Metrics follow the Prometheus exposition format."""
    output = _scrape()
    assert "# TYPE ptsim_" in output
    assert "# HELP ptsim_" in output
    assert "ptsim_build_info{" in output
    assert 'python_version="' in output


def test_reset_clears_residuals():
    record_residual("selftest", "collapse-rule", 0.0)
    reset_residuals()
    assert residual_snapshot() == {}
    assert "ptsim_residual{" not in _scrape()


def test_registry_is_shared():
    assert get_metrics_registry() is get_metrics_registry()


def test_write_metrics_textfile(tmp_path):
    """The textfile export creates parent directories."""
    record_residual("unbroken_example", "frame", 2e-16)
    target = tmp_path / "metrics" / "ptsim.prom"
    write_metrics(target)
    content = target.read_text(encoding="utf-8")
    assert 'ptsim_residual{check="unbroken_example",name="frame"}' in content


def test_book_snapshot_is_a_copy():
    book = ResidualBook()
    book.record("a", "x", 1.0, True)
    residuals, tallies = book.snapshot()
    residuals[("a", "y")] = 2.0
    tallies["a"].passed = 10
    again, again_tallies = book.snapshot()
    assert ("a", "y") not in again
    assert again_tallies["a"].passed == 1
