"""Eta inner products, weak values, expectations and the collapse rule."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike

from PTSim.config import DEFAULT_TOLERANCE, ToleranceConfig, resolve_tolerance
from PTSim.dilation.theorem import DilationResult
from PTSim.exceptions import (
    DimensionMismatch,
    IndexOutOfRange,
    NullDenominator,
    NullEtaNorm,
    VanishingOverlap,
    VerificationFailure,
)
from PTSim.linalg import CMatrix, CVector, as_cmatrix, as_vector, fro, hermitian_residual
from PTSim.logger import logger
from PTSim.pt.canonical import CanonicalData


def eta_inner(v: ArrayLike, w: ArrayLike, eta: ArrayLike) -> complex:
    """<v|eta|w>.

    Raises:
        DimensionMismatch: If v, w and eta do not share one dimension.
    """
    v_vec = as_vector(v, "v")
    w_vec = as_vector(w, "w")
    eta_mat = as_cmatrix(eta, "eta")
    n = v_vec.shape[0]
    if w_vec.shape[0] != n or eta_mat.shape != (n, n):
        raise DimensionMismatch(
            f"eta inner product needs matching sizes, got v={v_vec.shape}, "
            f"w={w_vec.shape}, eta={eta_mat.shape}"
        )
    return complex(np.vdot(v_vec, eta_mat @ w_vec))


@dataclass(frozen=True)
class WeakSetup:
    """Observable, pre/post-selected states, coupling g and pointer width.

    Validated on construction: the observable must be Hermitian and the
    pre- and post-selected states must overlap.
    """

    observable: CMatrix
    pre: CVector
    post: CVector
    g: float
    pointer_width: float = 1.0
    tol: ToleranceConfig = field(default=DEFAULT_TOLERANCE, compare=False, repr=False)

    def __post_init__(self) -> None:
        a = as_cmatrix(self.observable, "observable")
        pre = as_vector(self.pre, "pre")
        post = as_vector(self.post, "post")
        n = a.shape[0]
        if a.shape != (n, n) or pre.shape[0] != n or post.shape[0] != n:
            raise DimensionMismatch(
                f"observable {a.shape}, pre {pre.shape} and post {post.shape} do not match"
            )
        if hermitian_residual(a) > self.tol.verify_tol * max(1.0, fro(a)):
            raise VerificationFailure("observable is not Hermitian")
        if not self.pointer_width > 0:
            raise ValueError(f"pointer width must be positive, got {self.pointer_width}")

        object.__setattr__(self, "observable", a)
        object.__setattr__(self, "pre", pre)
        object.__setattr__(self, "post", post)
        object.__setattr__(self, "g", float(self.g))
        object.__setattr__(self, "pointer_width", float(self.pointer_width))

        if abs(self.overlap) <= self.tol.overlap_floor:
            raise VanishingOverlap(
                f"|<phi_f|phi_i>| = {abs(self.overlap):.3e} is below {self.tol.overlap_floor:.1e}"
            )

    @property
    def n(self) -> int:
        return int(self.pre.shape[0])

    @property
    def overlap(self) -> complex:
        return complex(np.vdot(self.post, self.pre))


def weak_value(setup: WeakSetup) -> complex:
    """<phi_f|A|phi_i> / <phi_f|phi_i>; complex in general and scale invariant in pre and post."""
    overlap = setup.overlap
    if abs(overlap) <= setup.tol.overlap_floor:
        raise VanishingOverlap(f"|<phi_f|phi_i>| = {abs(overlap):.3e}")
    return complex(np.vdot(setup.post, setup.observable @ setup.pre)) / overlap


@dataclass(frozen=True)
class ExpectationPair:
    """eta-expectation in the system (lhs) and its dilated weak-value form (rhs)."""

    lhs: complex
    rhs: complex

    @property
    def discrepancy(self) -> float:
        return abs(self.lhs - self.rhs) / max(1.0, abs(self.lhs))


def expectation_eta(
    d: DilationResult,
    coeffs: ArrayLike,
    tol: ToleranceConfig | None = None,
) -> ExpectationPair:
    """Compare <u|H|u>_eta / <u|u>_eta with <u1~|H~|u2~> / <u1~|u2~>.

    u = sum_i a_i psi_i in the system; u1~ = sum_i a_{s(i)} mu~_i and
    u2~ = sum_i a_i psi~_i in the dilation.

    Raises:
        NullEtaNorm: If <u|u>_eta vanishes.
    """
    tol = resolve_tolerance(tol)
    a = as_vector(coeffs, "coefficients")
    if a.shape[0] != d.n:
        raise DimensionMismatch(f"expected {d.n} coefficients, got {a.shape[0]}")

    u = d.Psi @ a
    norm = complex(np.vdot(u, d.eta @ u))
    scale = max(1.0, fro(d.eta) * fro(u) ** 2)
    if abs(norm) <= tol.residual_tol * scale:
        raise NullEtaNorm(f"<u|u>_eta = {norm:.3e} vanishes")
    lhs = complex(np.vdot(u, d.eta @ (d.H @ u))) / norm

    # mu~_i = phi~_{s(i)}, so sum_i a_{s(i)} mu~_i = Phi~ a
    mu_tilde = d.Phi_tilde[:, list(d.perm)]
    u1 = mu_tilde @ a[list(d.perm)]
    u2 = d.Psi_tilde @ a
    rhs = complex(np.vdot(u1, d.H_tilde @ u2)) / complex(np.vdot(u1, u2))

    logger.debug(f"expectation_eta: lhs={lhs:.12g}, rhs={rhs:.12g}")
    return ExpectationPair(lhs=lhs, rhs=rhs)


@dataclass(frozen=True)
class CollapseOutcome:
    """Detected value, normalised post-measurement state and the index pair (i, s(i)), 1-based."""

    detected_value: float
    post_state: CVector
    pair: tuple[int, int]
    imag_residual: float = 0.0


def collapse(
    canon: CanonicalData,
    coeffs: ArrayLike,
    i: int,
    tol: ToleranceConfig | None = None,
) -> CollapseOutcome:
    """Conditional post-measurement state for outcome index ``i`` (1-based).

    With z = a_i conj(a_{s(i)}) the detected value is
    (z lambda_i + conj(z) conj(lambda_i)) / (z + conj(z)) and the state is
    (a_i psi_i + a_{s(i)} psi_{s(i)}) / |z + conj(z)|^{1/2}. For i = s(i) the
    state is a_i psi_i / |a_i| and the detected value is lambda_i.

    Raises:
        IndexOutOfRange: If ``i`` is outside 1..n.
        NullDenominator: If z + conj(z) vanishes.
    """
    tol = resolve_tolerance(tol)
    a = as_vector(coeffs, "coefficients")
    n = canon.n
    if a.shape[0] != n:
        raise DimensionMismatch(f"expected {n} coefficients, got {a.shape[0]}")
    if not 1 <= i <= n:
        raise IndexOutOfRange(f"collapse index {i} outside 1..{n}")

    k = i - 1
    m = canon.perm[k]
    lam = complex(canon.eigenvalues[k])
    psi = canon.psi_prime

    if k == m:
        if abs(a[k]) <= tol.residual_tol:
            raise NullDenominator(f"a_{i} vanishes")
        return CollapseOutcome(
            detected_value=lam.real,
            post_state=a[k] * psi[:, k] / abs(a[k]),
            pair=(i, i),
            imag_residual=abs(lam.imag),
        )

    z = complex(a[k] * np.conj(a[m]))
    denominator = z + z.conjugate()
    if abs(denominator) <= tol.residual_tol * max(abs(z), tol.residual_tol):
        raise NullDenominator(
            f"a_{i} conj(a_{m + 1}) + conj(a_{i}) a_{m + 1} = {denominator:.3e} vanishes"
        )
    detected = (z * lam + z.conjugate() * lam.conjugate()) / denominator
    state = (a[k] * psi[:, k] + a[m] * psi[:, m]) / np.sqrt(abs(denominator))
    return CollapseOutcome(
        detected_value=detected.real,
        post_state=state,
        pair=(i, m + 1),
        imag_residual=abs(detected.imag),
    )
