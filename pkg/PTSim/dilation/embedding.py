"""Isometric embedding for unbroken Hamiltonians.

When S = I there is an isometry Psi~ = [Psi; Xi] (Psi~^dag Psi~ = I) and a
Hermitian H~ with H~ Psi~ = Psi~ J, so e^{-itH~} Psi~ = Psi~ e^{-itJ} for
every t.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike

from PTSim.config import ToleranceConfig, resolve_tolerance
from PTSim.exceptions import BrokenSymmetry, DimensionMismatch, VerificationFailure
from PTSim.linalg import (
    CMatrix,
    adjoint,
    as_cmatrix,
    eigh_hermitian,
    expm,
    fro,
    orthonormal_complement,
    require_square,
)
from PTSim.logger import logger
from PTSim.metrics import record_residual
from PTSim.pt.canonical import CanonicalData

DEFAULT_EVOLUTION_TIMES: tuple[float, ...] = (0.1, 0.5, 1.0, 5.0)


def evolution_residual(h_tilde: CMatrix, psi_tilde: CMatrix, j: CMatrix, t: float) -> float:
    """||e^{-itH~} Psi~ - Psi~ e^{-itJ}||_F."""
    lhs = expm(-1j * t * h_tilde) @ psi_tilde
    rhs = psi_tilde @ expm(-1j * t * j)
    return fro(lhs - rhs)


@dataclass(frozen=True)
class UnbrokenEmbedding:
    H_tilde: CMatrix
    Psi_tilde: CMatrix
    J: CMatrix
    Psi: CMatrix
    Xi: CMatrix
    H: CMatrix
    c: float
    residuals: dict[str, float] = field(default_factory=dict)

    def evolution_residual(self, t: float) -> float:
        return evolution_residual(self.H_tilde, self.Psi_tilde, self.J, t)


def embed_unbroken(
    h: ArrayLike,
    canon: CanonicalData,
    t_samples: Sequence[float] = DEFAULT_EVOLUTION_TIMES,
    tol: ToleranceConfig | None = None,
) -> UnbrokenEmbedding:
    """Build the isometric embedding of an unbroken H.

    Psi = c Psi' with c = 1 / sqrt(2 lambda_max(Psi'^dag Psi')), so that
    Psi^dag Psi <= I/2 and Xi = (I - Psi^dag Psi)^{1/2} exists. The dilated
    Hamiltonian acts as J on range(Psi~) and on its orthogonal complement.

    Raises:
        BrokenSymmetry: If S != I.
        VerificationFailure: If an embedding identity fails.
    """
    tol = resolve_tolerance(tol)
    h_mat = as_cmatrix(h, "H")
    n = require_square(h_mat, "H")
    if canon.n != n:
        raise DimensionMismatch(f"canonical data has dimension {canon.n}, H has {n}")
    if not canon.is_unbroken:
        raise BrokenSymmetry("S != I: no isometric embedding exists in the broken phase")

    gram_values, _ = eigh_hermitian(adjoint(canon.psi_prime) @ canon.psi_prime)
    c = float(1.0 / np.sqrt(2.0 * gram_values[-1]))
    psi = c * canon.psi_prime

    values, vectors = eigh_hermitian(np.eye(n) - adjoint(psi) @ psi)
    xi = vectors @ np.diag(np.sqrt(values)) @ adjoint(vectors)

    psi_tilde = np.vstack([psi, xi])
    complement = orthonormal_complement(psi_tilde)
    j = np.diag(np.diag(canon.J).real).astype(np.complex128)
    h_tilde = psi_tilde @ j @ adjoint(psi_tilde) + complement @ j @ adjoint(complement)
    h_tilde = 0.5 * (h_tilde + adjoint(h_tilde))

    scale = max(1.0, fro(h_tilde))
    residuals = {
        "isometry": fro(adjoint(psi_tilde) @ psi_tilde - np.eye(n)),
        "intertwining": fro(h_tilde @ psi_tilde - psi_tilde @ j) / scale,
        "subspace": fro(h_mat @ psi - psi @ j) / max(1.0, fro(h_mat)),
    }
    for t in t_samples:
        residuals[f"evolution_t={t:g}"] = evolution_residual(h_tilde, psi_tilde, j, t)

    failed = []
    for name, value in residuals.items():
        limit = tol.verify_tol
        if name.startswith("evolution"):
            limit = tol.verify_tol * max(1.0, scale * max((abs(t) for t in t_samples), default=0.0))
        passed = value <= limit
        record_residual("embedding", name, value, passed)
        if not passed:
            failed.append(f"{name}={value:.3e}")
    if failed:
        logger.error(f"embedding verification failed: {', '.join(failed)}")
        raise VerificationFailure(f"embedding residuals too large: {', '.join(failed)}")

    logger.info(f"embed_unbroken: n={n}, c={c:.6g}, isometry={residuals['isometry']:.2e}")
    return UnbrokenEmbedding(
        H_tilde=h_tilde,
        Psi_tilde=psi_tilde,
        J=j,
        Psi=psi,
        Xi=xi,
        H=h_mat,
        c=c,
        residuals=residuals,
    )
