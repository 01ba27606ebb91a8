"""Seeded random canonical data for property checks."""

from __future__ import annotations

import numpy as np

from PTSim.config import ToleranceConfig
from PTSim.linalg import CMatrix, CVector, inverse
from PTSim.pt import CanonicalData, canonical_from_frame, permutation_matrix


def random_invertible(rng: np.random.Generator, n: int, spread: float = 0.5) -> CMatrix:
    """I + spread * G / sqrt(n) with complex Gaussian G; well conditioned for spread < 1."""
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return np.eye(n, dtype=np.complex128) + spread * g / np.sqrt(2.0 * n)


def random_coefficients(rng: np.random.Generator, n: int) -> CVector:
    return (rng.normal(size=n) + 1j * rng.normal(size=n)).astype(np.complex128)


def random_spectrum(rng: np.random.Generator, n: int, pairs: int | None = None) -> tuple[CMatrix, tuple[int, ...]]:
    """Diagonal J with ``pairs`` conjugate pairs first and distinct reals after.

    Returns J and the permutation s(.) swapping each pair.
    """
    if pairs is None:
        pairs = int(rng.integers(1, n // 2 + 1))
    if not 0 <= 2 * pairs <= n:
        raise ValueError(f"cannot place {pairs} conjugate pairs in dimension {n}")

    values: list[complex] = []
    perm: list[int] = []
    for k in range(pairs):
        lam = complex(rng.uniform(-2.0, 2.0), rng.uniform(0.5, 2.0))
        values.extend([lam, lam.conjugate()])
        perm.extend([2 * k + 1, 2 * k])
    reals = np.sort(rng.uniform(-3.0, 3.0, size=n - 2 * pairs))
    # keep real eigenvalues well separated
    reals = reals + 0.5 * np.arange(reals.shape[0])
    for x in reals:
        perm.append(len(values))
        values.append(complex(x))
    return np.diag(values).astype(np.complex128), tuple(perm)


def random_canonical(
    rng: np.random.Generator,
    n: int,
    pairs: int | None = None,
    tol: ToleranceConfig | None = None,
) -> tuple[CMatrix, CanonicalData]:
    """Random H = Psi' J Psi'^{-1} together with its verified canonical data."""
    j, perm = random_spectrum(rng, n, pairs)
    psi = random_invertible(rng, n)
    h = psi @ j @ inverse(psi, tol)
    canon = canonical_from_frame(h, psi, j, permutation_matrix(perm), tol=tol)
    return h, canon
