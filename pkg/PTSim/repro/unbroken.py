"""Residual report for the closed-form unbroken embedding."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any

from PTSim.config import ToleranceConfig, resolve_tolerance
from PTSim.dilation import evolution_residual
from PTSim.linalg import adjoint, fro
from PTSim.logger import logger
from PTSim.metrics import record_residual
from PTSim.pt import gunther_samsonov_model


@dataclass(frozen=True)
class UnbrokenExampleReport:
    E0: float
    s: float
    theta: float
    residuals: dict[str, float] = field(default_factory=dict)
    thresholds: dict[str, float] = field(default_factory=dict)

    @property
    def failures(self) -> list[str]:
        return [name for name, value in self.residuals.items() if value > self.thresholds[name]]

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict[str, Any]:
        return {
            "E0": self.E0,
            "s": self.s,
            "theta": self.theta,
            "passed": self.passed,
            "residuals": self.residuals,
            "failures": self.failures,
        }


def verify_unbroken_example(
    E0: float,
    s: float,
    theta: float,
    t_samples: Sequence[float] = (0.0, 0.5, 1.0),
    tol: ToleranceConfig | None = None,
) -> UnbrokenExampleReport:
    """Check the closed-form embedding of the unbroken two-level model.

    Failures are carried in the report, never raised.
    """
    tol = resolve_tolerance(tol)
    model = gunther_samsonov_model(E0, s, theta)
    h_tilde = model.H_tilde
    psi_tilde = model.Psi_tilde
    phi_adj = adjoint(model.Phi_tilde)
    j = model.J
    scale = max(1.0, fro(h_tilde))

    residuals = {
        "frame": fro(phi_adj @ psi_tilde - model.S),
        "spectral": fro(phi_adj @ h_tilde @ psi_tilde - model.S @ j) / scale,
        "intertwining": fro(h_tilde @ psi_tilde - psi_tilde @ j) / scale,
        "hermiticity": fro(h_tilde - adjoint(h_tilde)),
        "subspace": fro(model.H @ model.Psi - model.Psi @ j) / max(1.0, fro(model.H)),
    }
    thresholds = dict.fromkeys(residuals, tol.residual_tol)
    for t in t_samples:
        name = f"evolution_t={t:g}"
        residuals[name] = evolution_residual(h_tilde, psi_tilde, j, float(t))
        thresholds[name] = tol.residual_tol * max(1.0, abs(t) * scale)

    report = UnbrokenExampleReport(
        E0=E0, s=s, theta=theta, residuals=residuals, thresholds=thresholds
    )
    for name, value in residuals.items():
        record_residual("unbroken_example", name, value, value <= thresholds[name])
    if report.passed:
        logger.info(f"unbroken example (E0={E0}, s={s}, theta={theta:.6g}) verified")
    else:
        logger.warning(f"unbroken example failed checks: {report.failures}")
    return report
