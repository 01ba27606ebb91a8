"""Short-time agreement between dilated and eta-evolutions of the two-level model.

For each (t, s) the four deviations

    Z11 = |<phi~_1| e^{-itH~} |psi~_1>|
    Z22 = |<phi~_2| e^{-itH~} |psi~_2>|
    Z12 = |<phi~_1| e^{-itH~} |psi~_2> - <psi_1, e^{-itH} psi_2>_eta| / |<psi_1, e^{-itH} psi_2>_eta|
    Z21 = same with the indices exchanged

are recorded. Z11 and Z22 are absolute because the eta-side diagonal is
identically zero in the broken phase.
"""

from __future__ import annotations

import csv
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numpy.typing import NDArray

from PTSim.config import ToleranceConfig, resolve_tolerance
from PTSim.dilation import DilationResult, build_dilation
from PTSim.exceptions import ExceptionalPoint, RegimeViolation, SingularFrame, SingularMatrix, UnbrokenRegime
from PTSim.logger import logger
from PTSim.pt import bender_model
from PTSim.types import ZMaxima
from PTSim.weak import evolution_overlaps

CSV_COLUMNS = ("t", "s", "z11", "z22", "z12", "z21")
Z_NAMES = ("z11", "z22", "z12", "z21")


@dataclass(frozen=True)
class ZValues:
    z11: float
    z22: float
    z12: float
    z21: float


@dataclass(frozen=True)
class GridReport:
    """Z surfaces over a (t, s) grid; arrays are indexed [t, s]."""

    r: float
    theta: float
    t_axis: NDArray[np.float64]
    s_axis: NDArray[np.float64]
    z11: NDArray[np.float64]
    z22: NDArray[np.float64]
    z12: NDArray[np.float64]
    z21: NDArray[np.float64]

    @property
    def max_z11(self) -> float:
        return float(np.max(self.z11))

    @property
    def max_z22(self) -> float:
        return float(np.max(self.z22))

    @property
    def max_z12(self) -> float:
        return float(np.max(self.z12))

    @property
    def max_z21(self) -> float:
        return float(np.max(self.z21))

    def maxima(self) -> ZMaxima:
        return {
            "max_z11": self.max_z11,
            "max_z22": self.max_z22,
            "max_z12": self.max_z12,
            "max_z21": self.max_z21,
        }

    def to_csv_rows(self) -> list[dict[str, str]]:
        """Rows in t-major order, floats in shortest round-trip form."""
        rows = []
        for ti, t in enumerate(self.t_axis):
            for si, s in enumerate(self.s_axis):
                rows.append(
                    {
                        "t": repr(float(t)),
                        "s": repr(float(s)),
                        "z11": repr(float(self.z11[ti, si])),
                        "z22": repr(float(self.z22[ti, si])),
                        "z12": repr(float(self.z12[ti, si])),
                        "z21": repr(float(self.z21[ti, si])),
                    }
                )
        return rows


@dataclass(frozen=True)
class ConvergencePoint:
    t: float
    z11: float
    z12: float
    z22: float = 0.0
    z21: float = 0.0


def broken_dilation(r: float, theta: float, s: float, tol: ToleranceConfig | None = None) -> DilationResult:
    """Unscaled two-level dilation with Xi = Psi.

    Raises:
        RegimeViolation: If (r, theta, s) is not in the broken phase or
            det(S - Psi^dag Psi) vanishes.
    """
    try:
        model = bender_model(r, theta, s, tol)
        return build_dilation(model.system.H, model.canon, rescale=False, tol=tol)
    except (UnbrokenRegime, ExceptionalPoint, SingularFrame, SingularMatrix) as e:
        raise RegimeViolation(f"(r={r}, theta={theta}, s={s}) leaves the supported regime: {e}") from e


def z_values(d: DilationResult, t: float, tol: ToleranceConfig | None = None) -> ZValues:
    ov = evolution_overlaps(d, t, tol)
    tilde, eta = ov.tilde, ov.eta_side
    return ZValues(
        z11=float(abs(tilde[0, 0])),
        z22=float(abs(tilde[1, 1])),
        z12=float(abs(tilde[0, 1] - eta[0, 1]) / abs(eta[0, 1])),
        z21=float(abs(tilde[1, 0] - eta[1, 0]) / abs(eta[1, 0])),
    )


def _column(args: tuple[float, float, float, NDArray[np.float64], ToleranceConfig]) -> list[ZValues]:
    r, theta, s, t_axis, tol = args
    d = broken_dilation(r, theta, float(s), tol)
    return [z_values(d, float(t), tol) for t in t_axis]


def z_grid(
    r: float,
    theta: float,
    t_max: float,
    s_max: float,
    steps: int = 41,
    threads: int = 1,
    tol: ToleranceConfig | None = None,
) -> GridReport:
    """Evaluate the Z surfaces on a uniform ``steps`` x ``steps`` grid including endpoints.

    One dilation is built per s value. Columns may be evaluated on a thread
    pool; results are gathered in grid order, so the report does not depend
    on ``threads``.

    Raises:
        RegimeViolation: If any s leaves the broken phase.
    """
    tol = resolve_tolerance(tol)
    if steps < 2:
        raise ValueError(f"steps must be at least 2, got {steps}")
    if threads < 1:
        raise ValueError(f"threads must be at least 1, got {threads}")

    t_axis = np.linspace(0.0, t_max, steps)
    s_axis = np.linspace(0.0, s_max, steps)
    jobs = [(r, theta, float(s), t_axis, tol) for s in s_axis]

    if threads == 1:
        columns = [_column(job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            columns = list(pool.map(_column, jobs))

    arrays = {name: np.zeros((steps, steps), dtype=np.float64) for name in Z_NAMES}
    for si, column in enumerate(columns):
        for ti, values in enumerate(column):
            for name in Z_NAMES:
                arrays[name][ti, si] = getattr(values, name)

    report = GridReport(r=r, theta=theta, t_axis=t_axis, s_axis=s_axis, **arrays)
    logger.info(f"z_grid: {steps}x{steps} points, maxima={report.maxima()}")
    return report


def z_convergence(
    r: float,
    theta: float,
    s: float,
    t_points: Sequence[float],
    tol: ToleranceConfig | None = None,
) -> list[ConvergencePoint]:
    """Z values along the given times for one fixed s."""
    d = broken_dilation(r, theta, s, tol)
    points = []
    for t in t_points:
        z = z_values(d, float(t), tol)
        points.append(ConvergencePoint(t=float(t), z11=z.z11, z12=z.z12, z22=z.z22, z21=z.z21))
    return points


def write_grid_csv(report: GridReport, path: str | Path) -> Path:
    """Write the report as CSV with header t, s, z11, z22, z12, z21."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with target.open("w", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=list(CSV_COLUMNS), lineterminator="\n")
        writer.writeheader()
        writer.writerows(report.to_csv_rows())
    logger.info(f"Grid written to {target}")
    return target
