"""Closed-form two-level models.

``BenderModel`` is the broken-phase two-level system
H = [[r e^{i theta}, s], [s, r e^{-i theta}]] with P = swap and T = I,
assembled analytically from Delta = s^2 - r^2 sin^2(theta) < 0.
``GuntherSamsonovModel`` is the unbroken two-level system with its
isometric four-dimensional embedding.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from PTSim.config import ToleranceConfig, resolve_tolerance
from PTSim.exceptions import ExceptionalPoint, SingularMatrix, UnbrokenRegime
from PTSim.linalg import CMatrix, adjoint
from PTSim.logger import logger
from PTSim.pt.canonical import (
    CanonicalData,
    JordanBlockDesc,
    PTSystem,
    metric_from_frame,
    permutation_matrix,
    verify_canonical,
)

SWAP = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)


@dataclass(frozen=True)
class BenderModel:
    """Closed-form broken-phase data for one parameter point (r, theta, s)."""

    r: float
    theta: float
    s: float
    system: PTSystem
    canon: CanonicalData

    @property
    def delta(self) -> float:
        return self.s**2 - (self.r * math.sin(self.theta)) ** 2

    @property
    def u(self) -> float:
        return math.sqrt(-self.delta) + self.r * math.sin(self.theta)

    @property
    def det_gap(self) -> float:
        """det(S - Psi^dag Psi) = -4 Delta u^2 - 1 for the unscaled frame."""
        return -4.0 * self.delta * self.u**2 - 1.0

    @property
    def lambda1(self) -> complex:
        return complex(self.r * math.cos(self.theta), math.sqrt(-self.delta))

    def closed_form_psi_inverse(self) -> CMatrix:
        u, s = self.u, self.s
        return np.array([[1j * u, s], [-s, 1j * u]], dtype=np.complex128) / (s**2 - u**2)

    def closed_form_H_tilde(self) -> CMatrix:
        """Four-dimensional Hermitian dilation for Xi = Psi (unscaled)."""
        u, s, r, theta = self.u, self.s, self.r, self.theta
        d = u**2 - s**2
        k = 1.0 / self.det_gap
        a1 = s / d
        a2 = r * cmath.exp(-1j * theta) / d
        a3 = r * cmath.exp(1j * theta) / d
        h4_diag = -1.0 + k * d**2
        h4_off = k * d
        return np.array(
            [
                [a1, a2, 1.0, 0.0],
                [a3, a1, 0.0, 1.0],
                [1.0, 0.0, h4_diag, h4_off],
                [0.0, 1.0, h4_off, h4_diag],
            ],
            dtype=np.complex128,
        )

    def closed_form_phi_tilde_adjoint(self) -> CMatrix:
        """Rows of Phi~^dag = [Psi^dag, Sigma^dag] for Xi = Psi (unscaled)."""
        u, s = self.u, self.s
        k2 = 1.0 / (s**2 - u**2)
        return np.array(
            [
                [-1j * u, s, 1j * u - k2 * s, 1j * k2 * u - s],
                [-s, -1j * u, 1j * k2 * u + s, 1j * u + k2 * s],
            ],
            dtype=np.complex128,
        )


def bender_model(
    r: float,
    theta: float,
    s: float,
    tol: ToleranceConfig | None = None,
) -> BenderModel:
    """Assemble the broken-phase two-level model analytically.

    The frame is Psi = [[iu, -s], [s, iu]] with u = sqrt(-Delta) + r sin(theta),
    J = diag(r cos(theta) + i sqrt(-Delta), r cos(theta) - i sqrt(-Delta))
    and S = swap. The metric is (Psi^{-1})^dag S Psi^{-1} = swap / (u^2 - s^2).

    Raises:
        ExceptionalPoint: If Delta = 0 within tolerance.
        UnbrokenRegime: If Delta > 0.
        SingularMatrix: If the frame degenerates (s = 0 with sin(theta) < 0).
    """
    tol = resolve_tolerance(tol)
    delta = s**2 - (r * math.sin(theta)) ** 2
    scale = max(1.0, s**2, r**2)
    if abs(delta) <= tol.residual_tol * scale:
        raise ExceptionalPoint(f"Delta = {delta:.3e} vanishes at r={r}, theta={theta}, s={s}")
    if delta > 0:
        raise UnbrokenRegime(f"Delta = {delta:.6g} > 0: the model is in the unbroken phase")

    w = math.sqrt(-delta)
    u = w + r * math.sin(theta)
    if abs(u**2 - s**2) <= tol.rank_floor * scale:
        raise SingularMatrix(f"closed-form frame is singular (u^2 - s^2 = {u**2 - s**2:.3e})")

    h = np.array(
        [[r * cmath.exp(1j * theta), s], [s, r * cmath.exp(-1j * theta)]],
        dtype=np.complex128,
    )
    system = PTSystem(H=h, P=SWAP.copy(), T_conj=np.eye(2, dtype=np.complex128))

    psi = np.array([[1j * u, -s], [s, 1j * u]], dtype=np.complex128)
    lam = complex(r * math.cos(theta), w)
    blocks = (
        JordanBlockDesc(eigenvalue=lam, size=1, paired_with=1),
        JordanBlockDesc(eigenvalue=lam.conjugate(), size=1, paired_with=0),
    )
    perm = (1, 0)
    s_mat = permutation_matrix(perm)
    psi_inv = np.array([[1j * u, s], [-s, 1j * u]], dtype=np.complex128) / (s**2 - u**2)
    eta = adjoint(psi_inv) @ s_mat @ psi_inv

    canon = CanonicalData(
        psi_prime=psi,
        blocks=blocks,
        S=s_mat,
        perm=perm,
        eta=eta,
        epsilons=(1, 1),
    )
    verify_canonical(h, canon, tol)
    model = BenderModel(r=r, theta=theta, s=s, system=system, canon=canon)
    logger.debug(f"bender_model: Delta={delta:.6g}, u={u:.6g}, det_gap={model.det_gap:.6g}")
    return model


@dataclass(frozen=True)
class GuntherSamsonovModel:
    """Unbroken two-level model H = [[E0 + i s sin(theta), s], [s, E0 - i s sin(theta)]]
    with its closed-form isometric embedding (Psi~^dag Psi~ = I, S = I)."""

    E0: float
    s: float
    theta: float

    @property
    def H(self) -> CMatrix:
        e0, s, th = self.E0, self.s, self.theta
        return np.array(
            [[e0 + 1j * s * math.sin(th), s], [s, e0 - 1j * s * math.sin(th)]],
            dtype=np.complex128,
        )

    @property
    def system(self) -> PTSystem:
        return PTSystem(H=self.H, P=SWAP.copy(), T_conj=np.eye(2, dtype=np.complex128))

    @property
    def J(self) -> CMatrix:
        c = self.s * math.cos(self.theta)
        return np.diag([self.E0 + c, self.E0 - c]).astype(np.complex128)

    @property
    def S(self) -> CMatrix:
        return np.eye(2, dtype=np.complex128)

    @property
    def H_tilde(self) -> CMatrix:
        e0, s, th = self.E0, self.s, self.theta
        a = s * math.cos(th) ** 2
        b = 1j * s * math.cos(th) * math.sin(th)
        return np.array(
            [
                [e0, a, b, 0.0],
                [a, e0, 0.0, -b],
                [-b, 0.0, e0, a],
                [0.0, b, a, e0],
            ],
            dtype=np.complex128,
        )

    @property
    def Psi_tilde(self) -> CMatrix:
        p = cmath.exp(0.5j * self.theta)
        m = cmath.exp(-0.5j * self.theta)
        return 0.5 * np.array(
            [
                [p, 1j * m],
                [m, -1j * p],
                [m, 1j * p],
                [p, -1j * m],
            ],
            dtype=np.complex128,
        )

    @property
    def Phi_tilde(self) -> CMatrix:
        return self.Psi_tilde

    @property
    def Psi(self) -> CMatrix:
        return self.Psi_tilde[:2]

    @property
    def Xi(self) -> CMatrix:
        return self.Psi_tilde[2:]

    def canonical(self, tol: ToleranceConfig | None = None) -> CanonicalData:
        """Canonical data with Psi' = Psi and eta = (Psi^{-1})^dag Psi^{-1}."""
        c = self.s * math.cos(self.theta)
        blocks = (
            JordanBlockDesc(eigenvalue=complex(self.E0 + c), size=1),
            JordanBlockDesc(eigenvalue=complex(self.E0 - c), size=1),
        )
        canon = CanonicalData(
            psi_prime=self.Psi,
            blocks=blocks,
            S=self.S,
            perm=(0, 1),
            eta=metric_from_frame(self.Psi, self.S, tol),
            epsilons=(1, 1),
        )
        verify_canonical(self.H, canon, tol)
        return canon


def gunther_samsonov_model(E0: float, s: float, theta: float) -> GuntherSamsonovModel:
    return GuntherSamsonovModel(E0=E0, s=s, theta=theta)
