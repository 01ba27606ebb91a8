"""Shared fixtures for the PTSim test suite."""

import json
import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from PTSim.config_manager import config_manager
from PTSim.dilation import build_dilation
from PTSim.metrics import reset_residuals
from PTSim.pt import bender_model, gunther_samsonov_model
from PTSim.serialization import matrix_to_model

SQRT2 = math.sqrt(2.0)
QUARTER_PI = math.pi / 4.0

# The autouse config fixture is function scoped; it holds no per-example state.
settings.register_profile("ptsim", suppress_health_check=[HealthCheck.function_scoped_fixture], deadline=None)
settings.load_profile("ptsim")


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    """Point the config singleton at an empty temp file and clear env overrides."""
    for name in ("PTSIM_TOL", "PTSIM_SEED", "PTSIM_THREADS"):
        monkeypatch.delenv(name, raising=False)
    config_manager.set_config_path(tmp_path / "config.json")
    config_manager.reset()
    reset_residuals()
    yield
    config_manager.reset()


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture
def bender():
    """Broken two-level model at r = sqrt(2), theta = pi/4, s = 0.1."""
    return bender_model(SQRT2, QUARTER_PI, 0.1)


@pytest.fixture
def bender_dilation(bender):
    """Unscaled dilation with Xi = Psi, matching the closed form."""
    return build_dilation(bender.system.H, bender.canon, rescale=False)


@pytest.fixture
def gunther_samsonov():
    return gunther_samsonov_model(1.0, 0.5, math.pi / 3.0)


def matrix_json(a) -> dict:
    return matrix_to_model(np.asarray(a, dtype=np.complex128)).model_dump()


@pytest.fixture
def write_json_file(tmp_path):
    """Write a JSON payload into tmp_path and return its path."""

    def _write(name: str, payload) -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(payload), encoding="utf-8")
        return path

    return _write


@pytest.fixture
def bender_system_file(bender, write_json_file):
    system = bender.system
    return write_json_file(
        "bender.json",
        {"H": matrix_json(system.H), "P": matrix_json(system.P), "T": matrix_json(system.T_conj)},
    )


@pytest.fixture
def bender_frame_file(bender, write_json_file):
    """Bender system with its closed-form canonical frame."""
    system = bender.system
    return write_json_file(
        "bender_frame.json",
        {
            "H": matrix_json(system.H),
            "P": matrix_json(system.P),
            "T": matrix_json(system.T_conj),
            "Psi": matrix_json(bender.canon.psi_prime),
            "J": matrix_json(bender.canon.J),
            "S": matrix_json(bender.canon.S),
        },
    )
