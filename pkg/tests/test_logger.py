import io

import numpy as np
import pytest

from PTSim.logger import configure_logger, error_log_path, logger, route_numpy_errors


@pytest.fixture
def console():
    stream = io.StringIO()
    configure_logger(console_level="DEBUG", console=stream)
    yield stream
    configure_logger()


@pytest.mark.parametrize(
    ("log_file", "expected"),
    [
        ("logs/ptsim_2026-01-01.log", "logs/errors_2026-01-01.log"),
        ("run.log", "errors_run.log"),
    ],
)
def test_error_log_path(log_file, expected):
    assert error_log_path(log_file).as_posix() == expected


def test_console_stream(console):
    logger.info("dilation built")
    assert "dilation built" in console.getvalue()


def test_numpy_errors_are_logged(console):
    with route_numpy_errors():
        np.float64(1.0) / np.float64(0.0)
    assert "numpy floating-point error: divide by zero" in console.getvalue()


def test_numpy_error_state_is_restored():
    before = (np.geterr(), np.geterrcall())
    with route_numpy_errors():
        assert np.geterr()["divide"] == "call"
    assert (np.geterr(), np.geterrcall()) == before


def test_configure_logger_leaves_numpy_state_alone(tmp_path):
    before = (np.geterr(), np.geterrcall())
    try:
        configure_logger(console_level="DEBUG", log_file=str(tmp_path / "ptsim_run.log"))
        assert (np.geterr(), np.geterrcall()) == before
    finally:
        configure_logger()


def test_file_handlers(tmp_path):
    log_file = tmp_path / "logs" / "ptsim_test.log"
    configure_logger(log_file=str(log_file))
    try:
        logger.error("verification failed")
    finally:
        configure_logger()
    assert "verification failed" in log_file.read_text(encoding="utf-8")
    assert "verification failed" in (tmp_path / "logs" / "errors_test.log").read_text(encoding="utf-8")
