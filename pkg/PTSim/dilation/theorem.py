"""Hermitian dilation of a pseudo-Hermitian Hamiltonian.

Given canonical data (Psi', J, S) for an n-dimensional H, build a 2n x 2n
Hermitian H~ with frames Psi~ = [Psi; Xi] and Phi~ = [Psi; Sigma] such that

    Phi~^dag Psi~ = S,    Phi~^dag H~ Psi~ = S J.

Blocks:
    Sigma = (Xi^{-1})^dag (S - Psi^dag Psi)
    H1    = eta H,                 eta = (Psi^{-1})^dag S Psi^{-1}
    H2    = (Psi^dag)^{-1} Xi^dag
    H4    = -H2^dag Psi Xi^{-1} - (Sigma^dag)^{-1} Psi^dag H2
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike

from PTSim.config import ToleranceConfig, resolve_tolerance
from PTSim.exceptions import (
    DimensionMismatch,
    IndexOutOfRange,
    SingularFrame,
    SingularMatrix,
    VerificationFailure,
)
from PTSim.linalg import (
    CMatrix,
    CVector,
    adjoint,
    as_cmatrix,
    eigh_hermitian,
    fro,
    inverse,
    reciprocal_condition,
    require_square,
    solve,
)
from PTSim.logger import logger
from PTSim.metrics import record_residual
from PTSim.pt.canonical import CanonicalData


@dataclass(frozen=True)
class FrameScale:
    """Scaling constant c and the scaled frame Psi = c Psi'."""

    c: float
    Psi: CMatrix


@dataclass(frozen=True)
class DilationResult:
    H_tilde: CMatrix
    Psi_tilde: CMatrix
    Phi_tilde: CMatrix
    Psi: CMatrix
    Xi: CMatrix
    Sigma: CMatrix
    eta: CMatrix
    S: CMatrix
    J: CMatrix
    c: float
    H1: CMatrix
    H2: CMatrix
    H4: CMatrix
    H: CMatrix
    perm: tuple[int, ...]
    residuals: dict[str, float] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return int(self.Psi.shape[0])


@dataclass(frozen=True)
class FrameVectors:
    psi_tilde: CVector
    phi_tilde: CVector
    mu_tilde: CVector


def scale_frame(psi_prime: ArrayLike, tol: ToleranceConfig | None = None) -> FrameScale:
    """Scale Psi' so that Psi^dag Psi >= 2I.

    c = sqrt(2 / lambda_min(Psi'^dag Psi')), which keeps S - Psi^dag Psi
    invertible because ||S|| = 1.

    Raises:
        SingularMatrix: If Psi' is rank deficient.
    """
    tol = resolve_tolerance(tol)
    psi = as_cmatrix(psi_prime, "Psi'")
    require_square(psi, "Psi'")
    values, _ = eigh_hermitian(adjoint(psi) @ psi)
    lam_min, lam_max = float(values[0]), float(values[-1])
    if lam_min <= tol.rank_floor * lam_max:
        raise SingularMatrix(
            f"frame is rank deficient: lambda_min(Psi'^dag Psi') = {lam_min:.3e}, "
            f"lambda_max = {lam_max:.3e}"
        )
    c = float(np.sqrt(2.0 / lam_min))
    logger.debug(f"scale_frame: lambda_min={lam_min:.6g}, c={c:.6g}")
    return FrameScale(c=c, Psi=c * psi)


def _relative(residual: CMatrix, scale: float) -> float:
    return fro(residual) / max(1.0, scale)


def build_dilation(
    h: ArrayLike,
    canon: CanonicalData,
    xi: ArrayLike | None = None,
    *,
    rescale: bool = True,
    tol: ToleranceConfig | None = None,
) -> DilationResult:
    """Construct the Hermitian dilation of H and verify it.

    Args:
        h: The n x n Hamiltonian.
        canon: Canonical data for ``h``.
        xi: Lower frame block; any invertible n x n matrix. Defaults to Psi.
        rescale: Route Psi' through ``scale_frame`` first. With ``False`` the
            unscaled frame is used and S - Psi'^dag Psi' must be invertible.
        tol: Tolerances.

    Raises:
        SingularFrame: If S - Psi^dag Psi is numerically singular.
        VerificationFailure: If a frame identity or Hermiticity residual
            exceeds ``verify_tol``.
    """
    tol = resolve_tolerance(tol)
    h_mat = as_cmatrix(h, "H")
    n = require_square(h_mat, "H")
    if canon.n != n:
        raise DimensionMismatch(f"canonical data has dimension {canon.n}, H has {n}")

    if rescale:
        frame = scale_frame(canon.psi_prime, tol)
        c, psi = frame.c, frame.Psi
    else:
        c, psi = 1.0, canon.psi_prime.copy()

    xi_mat = psi.copy() if xi is None else as_cmatrix(xi, "Xi")
    if xi_mat.shape != (n, n):
        raise DimensionMismatch(f"Xi has shape {xi_mat.shape}, expected {(n, n)}")

    s = canon.S
    j = canon.J
    gap = s - adjoint(psi) @ psi
    rcond = reciprocal_condition(gap)
    if rcond < tol.cond_floor:
        raise SingularFrame(f"S - Psi^dag Psi is singular (reciprocal condition {rcond:.3e})")

    psi_adj = adjoint(psi)
    xi_adj = adjoint(xi_mat)

    sigma = solve(xi_adj, gap, tol)
    psi_inv = inverse(psi, tol)
    eta = adjoint(psi_inv) @ s @ psi_inv
    h1 = eta @ h_mat
    h2 = solve(psi_adj, xi_adj, tol)
    psi_xi_inv = adjoint(solve(xi_adj, psi_adj, tol))
    h4 = -adjoint(h2) @ psi_xi_inv - solve(adjoint(sigma), psi_adj @ h2, tol)

    h_tilde = np.block([[h1, h2], [adjoint(h2), h4]])
    hermiticity = _relative(h_tilde - adjoint(h_tilde), fro(h_tilde))
    h1_hermiticity = _relative(h1 - adjoint(h1), fro(h1))
    h_tilde = 0.5 * (h_tilde + adjoint(h_tilde))

    psi_tilde = np.vstack([psi, xi_mat])
    phi_tilde = np.vstack([psi, sigma])
    phi_adj = adjoint(phi_tilde)
    frame_scale = fro(phi_tilde) * fro(psi_tilde)
    residuals = {
        "hermiticity": hermiticity,
        "h1_hermiticity": h1_hermiticity,
        "frame": _relative(phi_adj @ psi_tilde - s, frame_scale),
        "spectral": _relative(phi_adj @ h_tilde @ psi_tilde - s @ j, frame_scale * fro(h_tilde)),
    }

    failed = []
    for name, value in residuals.items():
        passed = value <= tol.verify_tol
        record_residual("dilation", name, value, passed)
        if not passed:
            failed.append(f"{name}={value:.3e}")
    if failed:
        logger.error(f"dilation verification failed: {', '.join(failed)}")
        raise VerificationFailure(
            f"dilation residuals exceed {tol.verify_tol:.1e}: {', '.join(failed)}"
        )

    logger.info(
        f"build_dilation: n={n}, c={c:.6g}, frame={residuals['frame']:.2e}, "
        f"spectral={residuals['spectral']:.2e}"
    )
    return DilationResult(
        H_tilde=h_tilde,
        Psi_tilde=psi_tilde,
        Phi_tilde=phi_tilde,
        Psi=psi,
        Xi=xi_mat,
        Sigma=sigma,
        eta=eta,
        S=s.copy(),
        J=j,
        c=c,
        H1=h1,
        H2=h2,
        H4=h4,
        H=h_mat,
        perm=canon.perm,
        residuals=residuals,
    )


def frame_vectors(d: DilationResult, i: int) -> FrameVectors:
    """Columns psi~_i, phi~_i and mu~_i = phi~_{s(i)} for 1-based ``i``.

    <mu~_i|psi~_j> = delta_ij and <mu~_i|H~|psi~_j> = J_ij.
    """
    if not 1 <= i <= d.n:
        raise IndexOutOfRange(f"frame index {i} outside 1..{d.n}")
    k = i - 1
    return FrameVectors(
        psi_tilde=d.Psi_tilde[:, k].copy(),
        phi_tilde=d.Phi_tilde[:, k].copy(),
        mu_tilde=d.Phi_tilde[:, d.perm[k]].copy(),
    )
