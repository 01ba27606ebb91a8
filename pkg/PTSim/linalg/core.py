"""Dense complex linear algebra kernels.

A ``CMatrix`` is a two-dimensional ``numpy`` array of dtype ``complex128``.
All functions are pure; inputs are never modified in place.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from numpy.typing import ArrayLike, NDArray

from PTSim.config import ToleranceConfig, resolve_tolerance
from PTSim.exceptions import (
    ConvergenceFailure,
    DimensionMismatch,
    OverflowRisk,
    SingularMatrix,
)
from PTSim.logger import logger

CMatrix = NDArray[np.complex128]
CVector = NDArray[np.complex128]


@dataclass(frozen=True)
class EigResult:
    """Eigendecomposition with eigenvalues paired to the columns of ``right_vectors``."""

    eigenvalues: CVector
    right_vectors: CMatrix
    condition_estimate: float

    @property
    def n(self) -> int:
        return int(self.eigenvalues.shape[0])


def as_cmatrix(a: ArrayLike, name: str = "matrix") -> CMatrix:
    """Validate and convert to a finite complex 2-D array.

    Raises:
        DimensionMismatch: If the input is not two-dimensional or empty.
        ValueError: If any entry is NaN or infinite.
    """
    arr = np.array(a, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise DimensionMismatch(f"{name} must be a non-empty 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def as_vector(v: ArrayLike, name: str = "vector") -> CVector:
    """Validate and convert to a finite complex 1-D array."""
    arr = np.array(v, dtype=np.complex128)
    if arr.ndim == 2 and 1 in arr.shape:
        arr = arr.reshape(-1)
    if arr.ndim != 1 or arr.shape[0] == 0:
        raise DimensionMismatch(f"{name} must be a non-empty vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def require_square(a: CMatrix, name: str = "matrix") -> int:
    """Return the dimension of a square matrix or raise ``DimensionMismatch``."""
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {a.shape}")
    return int(a.shape[0])


def adjoint(a: ArrayLike) -> CMatrix:
    """Conjugate transpose."""
    return np.conj(as_cmatrix(a)).T


def fro(a: ArrayLike) -> float:
    """Frobenius norm (2-norm for vectors)."""
    return float(np.linalg.norm(a))


def max_abs(a: ArrayLike) -> float:
    """Largest entry modulus; 0.0 for empty input."""
    arr = np.asarray(a)
    return float(np.max(np.abs(arr))) if arr.size else 0.0


def rel_residual(residual: ArrayLike, scale: float) -> float:
    """Frobenius norm of ``residual`` relative to ``max(1, scale)``."""
    return fro(residual) / max(1.0, scale)


def hermitian_residual(a: ArrayLike) -> float:
    """Frobenius norm of A - A^dagger."""
    arr = np.asarray(a, dtype=np.complex128)
    return fro(arr - np.conj(arr).T)


def reciprocal_condition(a: CMatrix) -> float:
    """Reciprocal 1-norm condition number; 0.0 for exactly singular input."""
    try:
        with np.errstate(divide="ignore", invalid="ignore"):
            cond = float(np.real(np.linalg.cond(a, 1)))
    except np.linalg.LinAlgError:
        return 0.0
    if not np.isfinite(cond) or cond <= 0.0:
        return 0.0
    return float(1.0 / cond)


def solve(a: ArrayLike, b: ArrayLike, tol: ToleranceConfig | None = None) -> NDArray[np.complex128]:
    """Solve A X = B by LU factorisation.

    Args:
        a: Square coefficient matrix.
        b: Right-hand side, matrix or vector with matching row count.
        tol: Tolerances; ``cond_floor`` bounds the reciprocal condition number.

    Returns:
        X with the shape of ``b``.

    Raises:
        DimensionMismatch: If A is not square or B has the wrong row count.
        SingularMatrix: If the reciprocal condition estimate is below the floor.
    """
    tol = resolve_tolerance(tol)
    a_mat = as_cmatrix(a, "A")
    n = require_square(a_mat, "A")
    b_arr = np.array(b, dtype=np.complex128)
    if b_arr.ndim not in (1, 2) or b_arr.shape[0] != n:
        raise DimensionMismatch(f"right-hand side has shape {b_arr.shape}, expected {n} rows")

    rcond = reciprocal_condition(a_mat)
    if rcond < tol.cond_floor:
        raise SingularMatrix(f"reciprocal condition {rcond:.3e} below floor {tol.cond_floor:.1e}")

    lu, piv = scipy.linalg.lu_factor(a_mat, check_finite=False)
    x = scipy.linalg.lu_solve((lu, piv), b_arr, check_finite=False)
    logger.debug(f"solve: n={n}, rcond={rcond:.3e}")
    return np.asarray(x, dtype=np.complex128)


def inverse(a: ArrayLike, tol: ToleranceConfig | None = None) -> CMatrix:
    """Materialise A^{-1} as ``solve(A, I)``."""
    a_mat = as_cmatrix(a, "A")
    n = require_square(a_mat, "A")
    return solve(a_mat, np.eye(n, dtype=np.complex128), tol)


def eig(a: ArrayLike, tol: ToleranceConfig | None = None) -> EigResult:
    """Eigendecomposition of a general square matrix.

    Eigenvalues are unordered but paired with the columns of
    ``right_vectors`` (unit 2-norm each).

    Raises:
        DimensionMismatch: If A is not square.
        ConvergenceFailure: If the QR iteration fails to converge.
    """
    tol = resolve_tolerance(tol)
    a_mat = as_cmatrix(a, "A")
    require_square(a_mat, "A")
    try:
        values, vectors = np.linalg.eig(a_mat)
    except np.linalg.LinAlgError as e:
        raise ConvergenceFailure(f"eigenvalue iteration did not converge: {e}") from e

    values = np.asarray(values, dtype=np.complex128)
    vectors = np.asarray(vectors, dtype=np.complex128)
    try:
        with np.errstate(divide="ignore", invalid="ignore"):
            cond = float(np.linalg.cond(vectors))
    except np.linalg.LinAlgError:
        cond = float("inf")
    if not np.isfinite(cond):
        cond = float("inf")

    scale = max(1.0, fro(a_mat))
    residual = fro(a_mat @ vectors - vectors * values[np.newaxis, :])
    if residual > tol.verify_tol * scale * max(1.0, fro(vectors)):
        logger.warning(f"eig residual {residual:.3e} is large for ||A||={scale:.3e}")
    logger.debug(f"eig: n={values.shape[0]}, cond(V)={cond:.3e}, residual={residual:.3e}")
    return EigResult(eigenvalues=values, right_vectors=vectors, condition_estimate=cond)


def eigh_hermitian(a: ArrayLike) -> tuple[NDArray[np.float64], CMatrix]:
    """Eigendecomposition of a Hermitian matrix (ascending real eigenvalues)."""
    a_mat = as_cmatrix(a, "A")
    require_square(a_mat, "A")
    herm = 0.5 * (a_mat + np.conj(a_mat).T)
    try:
        values, vectors = scipy.linalg.eigh(herm)
    except np.linalg.LinAlgError as e:
        raise ConvergenceFailure(f"Hermitian eigensolver failed: {e}") from e
    return np.asarray(values, dtype=np.float64), np.asarray(vectors, dtype=np.complex128)


def expm(a: ArrayLike, tol: ToleranceConfig | None = None) -> CMatrix:
    """Matrix exponential by scaling and squaring with a Pade approximant.

    Works for non-Hermitian and defective inputs.

    Raises:
        OverflowRisk: If ||A||_1 exceeds ``tol.overflow_bound``.
    """
    tol = resolve_tolerance(tol)
    a_mat = as_cmatrix(a, "A")
    require_square(a_mat, "A")
    norm1 = float(np.linalg.norm(a_mat, 1))
    if norm1 > tol.overflow_bound:
        raise OverflowRisk(f"||A||_1 = {norm1:.3e} exceeds bound {tol.overflow_bound:.1e}")
    return np.asarray(scipy.linalg.expm(a_mat), dtype=np.complex128)


def cluster_eigenvalues(values: ArrayLike, gap: float) -> list[list[int]]:
    """Group indices whose eigenvalues are chained within ``gap`` of each other.

    Clusters are returned sorted by (real, imag) of their mean, indices
    within a cluster ascending.
    """
    vals = np.asarray(values, dtype=np.complex128)
    n = vals.shape[0]
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(vals[i] - vals[j]) <= gap:
                parent[find(i)] = find(j)

    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)

    clusters = [sorted(g) for g in groups.values()]
    clusters.sort(key=lambda g: (float(np.mean(vals[g]).real), float(np.mean(vals[g]).imag)))
    return clusters


def orthonormal_complement(a: ArrayLike) -> CMatrix:
    """Orthonormal basis of the orthogonal complement of range(A)."""
    a_mat = as_cmatrix(a, "A")
    return np.asarray(scipy.linalg.null_space(np.conj(a_mat).T), dtype=np.complex128)
