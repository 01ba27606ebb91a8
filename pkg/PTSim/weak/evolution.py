"""Short-time evolution in the dilation versus the eta-evolution in the system."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from PTSim.config import ToleranceConfig, resolve_tolerance
from PTSim.dilation.theorem import DilationResult
from PTSim.exceptions import IndexOutOfRange
from PTSim.linalg import CMatrix, adjoint, expm


@dataclass(frozen=True)
class SmallTimePair:
    """<phi~_i| e^{-itH~} |psi~_j> and <psi_i| eta e^{-itH} |psi_j>."""

    tilde: complex
    eta_side: complex

    @property
    def relative_gap(self) -> float:
        return abs(self.tilde - self.eta_side) / abs(self.eta_side)


@dataclass(frozen=True)
class EvolutionOverlaps:
    """All n x n overlaps at one time t, indexed 0-based."""

    t: float
    tilde: NDArray[np.complex128]
    eta_side: NDArray[np.complex128]

    def pair(self, i: int, j: int) -> SmallTimePair:
        return SmallTimePair(tilde=complex(self.tilde[i - 1, j - 1]), eta_side=complex(self.eta_side[i - 1, j - 1]))


def evolution_overlaps(d: DilationResult, t: float, tol: ToleranceConfig | None = None) -> EvolutionOverlaps:
    """Phi~^dag e^{-itH~} Psi~ and Psi^dag eta e^{-itH} Psi.

    At t = 0 both equal S.
    """
    tol = resolve_tolerance(tol)
    if t < 0:
        raise ValueError(f"evolution time must be non-negative, got {t}")
    big: CMatrix = expm(-1j * t * d.H_tilde, tol)
    small: CMatrix = expm(-1j * t * d.H, tol)
    tilde = adjoint(d.Phi_tilde) @ big @ d.Psi_tilde
    eta_side = adjoint(d.Psi) @ d.eta @ small @ d.Psi
    return EvolutionOverlaps(t=t, tilde=tilde, eta_side=eta_side)


def small_time_pair(
    d: DilationResult,
    i: int,
    j: int,
    t: float,
    tol: ToleranceConfig | None = None,
) -> SmallTimePair:
    """Dilated and eta-side amplitudes for 1-based indices ``i``, ``j`` at time ``t``."""
    for idx in (i, j):
        if not 1 <= idx <= d.n:
            raise IndexOutOfRange(f"frame index {idx} outside 1..{d.n}")
    return evolution_overlaps(d, t, tol).pair(i, j)
