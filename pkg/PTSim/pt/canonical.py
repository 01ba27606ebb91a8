"""PT systems, symmetry classification and the canonical pair (J, S).

For a PT-symmetric H with metric eta there is a frame Psi' such that
Psi'^{-1} H Psi' = J (Jordan form with complex eigenvalues in conjugate
pairs) and Psi'^dag eta Psi' = S (direct sum of sip matrices). This module
produces that data numerically for diagonalizable inputs and verifies
caller-supplied frames for everything else.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from numpy.typing import ArrayLike

from PTSim.config import ToleranceConfig, resolve_tolerance
from PTSim.exceptions import (
    DimensionMismatch,
    NegativeEpsilon,
    NotPTSymmetric,
    SingularMatrix,
    UnsupportedStructure,
    VerificationFailure,
)
from PTSim.linalg import (
    CMatrix,
    adjoint,
    as_cmatrix,
    cluster_eigenvalues,
    eig,
    eigh_hermitian,
    fro,
    inverse,
    max_abs,
    require_square,
    solve,
)
from PTSim.logger import logger
from PTSim.types import ValidationJSON


class SymmetryClass(str, Enum):
    """PT-symmetry phase of a Hamiltonian."""

    UNBROKEN = "unbroken"
    BROKEN = "broken"


@dataclass(frozen=True)
class PTSystem:
    """A Hamiltonian with its parity and time-reversal operators.

    ``T_conj`` is the linear part of the anti-linear T: T v = T_conj conj(v).
    """

    H: CMatrix
    P: CMatrix
    T_conj: CMatrix

    def __post_init__(self) -> None:
        object.__setattr__(self, "H", as_cmatrix(self.H, "H"))
        object.__setattr__(self, "P", as_cmatrix(self.P, "P"))
        object.__setattr__(self, "T_conj", as_cmatrix(self.T_conj, "T"))

    @property
    def n(self) -> int:
        return int(self.H.shape[0])


@dataclass(frozen=True)
class RelationResidual:
    name: str
    residual: float
    threshold: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.threshold


@dataclass(frozen=True)
class ValidationReport:
    """Residuals of the four defining PT relations."""

    relations: tuple[RelationResidual, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.relations)

    def residual(self, name: str) -> float:
        for rel in self.relations:
            if rel.name == name:
                return rel.residual
        raise KeyError(name)

    def to_dict(self) -> ValidationJSON:
        return {
            "pt_symmetric": self.passed,
            "relations": [
                {
                    "name": r.name,
                    "residual": r.residual,
                    "threshold": r.threshold,
                    "passed": r.passed,
                }
                for r in self.relations
            ],
        }


@dataclass(frozen=True)
class JordanBlockDesc:
    """One Jordan block of J; ``paired_with`` indexes the conjugate partner block."""

    eigenvalue: complex
    size: int = 1
    paired_with: int | None = None


@dataclass(frozen=True)
class CanonicalData:
    """Canonical frame Psi', Jordan blocks, sip permutation S and metric eta.

    ``perm`` is the 0-based permutation s(.) induced by S (S[i, perm[i]] = 1).
    """

    psi_prime: CMatrix
    blocks: tuple[JordanBlockDesc, ...]
    S: CMatrix
    perm: tuple[int, ...]
    eta: CMatrix
    epsilons: tuple[int, ...] = field(default=())

    @property
    def n(self) -> int:
        return int(self.psi_prime.shape[0])

    @property
    def J(self) -> CMatrix:
        return assemble_jordan(self.blocks)

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.diag(self.J).copy()

    @property
    def is_unbroken(self) -> bool:
        return bool(np.array_equal(self.S, np.eye(self.n)))

    def partner(self, i: int) -> int:
        """1-based s(i)."""
        if not 1 <= i <= self.n:
            raise IndexError(f"index {i} outside 1..{self.n}")
        return self.perm[i - 1] + 1


# ==================== helpers ====================


def assemble_jordan(blocks: tuple[JordanBlockDesc, ...] | list[JordanBlockDesc]) -> CMatrix:
    """Block-diagonal J with lambda on the diagonal and ones on each block's superdiagonal."""
    n = sum(b.size for b in blocks)
    j = np.zeros((n, n), dtype=np.complex128)
    pos = 0
    for block in blocks:
        for k in range(block.size):
            j[pos + k, pos + k] = block.eigenvalue
            if k + 1 < block.size:
                j[pos + k, pos + k + 1] = 1.0
        pos += block.size
    return j


def sip_permutation(blocks: tuple[JordanBlockDesc, ...] | list[JordanBlockDesc]) -> tuple[int, ...]:
    """Permutation of the sip direct sum matching ``blocks``.

    A block paired with the block right after it forms one S_{2k}; an
    unpaired block of size m forms S_m.
    """
    starts = []
    pos = 0
    for block in blocks:
        starts.append(pos)
        pos += block.size
    perm = list(range(pos))

    idx = 0
    while idx < len(blocks):
        block = blocks[idx]
        start = starts[idx]
        width = block.size
        if block.paired_with is not None:
            if block.paired_with != idx + 1 or blocks[idx + 1].size != block.size:
                raise UnsupportedStructure(
                    f"block {idx} must be followed by its conjugate partner of equal size"
                )
            width = 2 * block.size
            idx += 2
        else:
            idx += 1
        for a in range(width):
            perm[start + a] = start + width - 1 - a
    return tuple(perm)


def permutation_matrix(perm: tuple[int, ...]) -> CMatrix:
    n = len(perm)
    s = np.zeros((n, n), dtype=np.complex128)
    for i, j in enumerate(perm):
        s[i, j] = 1.0
    return s


def permutation_from_matrix(s: ArrayLike, tol: ToleranceConfig | None = None) -> tuple[int, ...]:
    """Read s(.) off a symmetric 0/1 permutation matrix with S^2 = I."""
    tol = resolve_tolerance(tol)
    s_mat = as_cmatrix(s, "S")
    n = require_square(s_mat, "S")
    rounded = np.round(s_mat.real)
    if max_abs(s_mat - rounded) > tol.residual_tol or not np.all(np.isin(rounded, (0.0, 1.0))):
        raise UnsupportedStructure("S must be a 0/1 matrix (only epsilon = +1 is supported)")
    if not np.all(rounded.sum(axis=0) == 1) or not np.all(rounded.sum(axis=1) == 1):
        raise UnsupportedStructure("S must be a permutation matrix")
    if not np.array_equal(rounded, rounded.T):
        raise UnsupportedStructure("S must be symmetric (S^2 = I)")
    return tuple(int(np.argmax(rounded[i])) for i in range(n))


def _phase_normalize(psi: CMatrix) -> CMatrix:
    """Unit columns with the largest-modulus entry real positive."""
    out = psi.copy()
    for k in range(out.shape[1]):
        col = out[:, k]
        col = col / np.linalg.norm(col)
        pivot = col[int(np.argmax(np.abs(col)))]
        out[:, k] = col * (abs(pivot) / pivot)
    return out


def metric_from_frame(psi_prime: CMatrix, s: CMatrix, tol: ToleranceConfig | None = None) -> CMatrix:
    """eta = (Psi'^{-1})^dag S Psi'^{-1}, symmetrised."""
    psi_inv = inverse(psi_prime, tol)
    eta = adjoint(psi_inv) @ s @ psi_inv
    return 0.5 * (eta + adjoint(eta))


def geometric_multiplicity(h: CMatrix, value: complex, threshold: float) -> int:
    """Dimension of ker(H - value I) with singular values below ``threshold`` counted as zero."""
    n = h.shape[0]
    sv = np.linalg.svd(h - value * np.eye(n), compute_uv=False)
    return int(np.sum(sv <= threshold))


# ==================== operations ====================


def validate_pt(system: PTSystem, tol: ToleranceConfig | None = None) -> ValidationReport:
    """Check P^2 = I, T conj(T) = I, P T = T conj(P) and H P T = P T conj(H).

    Residuals are largest entry moduli; a relation passes when its residual
    is at most ``residual_tol * max(1, largest entry of the terms)``.

    Raises:
        DimensionMismatch: If the matrices are not square of one size.
    """
    tol = resolve_tolerance(tol)
    n = require_square(system.H, "H")
    if require_square(system.P, "P") != n or require_square(system.T_conj, "T") != n:
        raise DimensionMismatch(
            f"H, P and T must share one dimension, got {system.H.shape}, "
            f"{system.P.shape}, {system.T_conj.shape}"
        )

    h, p, t = system.H, system.P, system.T_conj
    eye = np.eye(n, dtype=np.complex128)
    pt = p @ t
    terms = [
        ("P^2 = I", p @ p, eye),
        ("T conj(T) = I", t @ np.conj(t), eye),
        ("P T = T conj(P)", pt, t @ np.conj(p)),
        ("H P T = P T conj(H)", h @ pt, pt @ np.conj(h)),
    ]
    relations = []
    for name, lhs, rhs in terms:
        residual = max_abs(lhs - rhs)
        threshold = tol.residual_tol * max(1.0, max_abs(lhs), max_abs(rhs))
        relations.append(RelationResidual(name=name, residual=residual, threshold=threshold))
        logger.debug(f"validate_pt: {name}: residual={residual:.3e}")
    return ValidationReport(relations=tuple(relations))


def classify(h: ArrayLike, tol: ToleranceConfig | None = None) -> SymmetryClass:
    """Unbroken iff H is diagonalizable with an entirely real spectrum."""
    tol = resolve_tolerance(tol)
    h_mat = as_cmatrix(h, "H")
    require_square(h_mat, "H")
    result = eig(h_mat, tol)
    scale = max(1.0, fro(h_mat))

    if result.condition_estimate > tol.eigvec_cond_max:
        logger.debug(f"classify: eigenvector condition {result.condition_estimate:.3e} -> defective")
        return SymmetryClass.BROKEN

    gap = tol.cluster_gap * scale
    for cluster in cluster_eigenvalues(result.eigenvalues, gap):
        if len(cluster) > 1:
            centre = complex(np.mean(result.eigenvalues[cluster]))
            if geometric_multiplicity(h_mat, centre, gap) < len(cluster):
                logger.debug(f"classify: cluster at {centre:.6g} is defective")
                return SymmetryClass.BROKEN

    max_imag = float(np.max(np.abs(result.eigenvalues.imag)))
    if max_imag > tol.residual_tol * scale:
        return SymmetryClass.BROKEN
    return SymmetryClass.UNBROKEN


def verify_canonical(h: CMatrix, canon: CanonicalData, tol: ToleranceConfig | None = None) -> dict[str, float]:
    """Check every CanonicalData invariant; return the residuals.

    Raises:
        VerificationFailure: If a residual exceeds ``verify_tol``.
    """
    tol = resolve_tolerance(tol)
    psi = canon.psi_prime
    j = canon.J
    s = canon.S
    eta = canon.eta

    similarity = fro(solve(psi, h @ psi, tol) - j) / max(1.0, fro(h))
    congruence = fro(adjoint(psi) @ eta @ psi - s) / max(1.0, fro(eta) * fro(psi) ** 2)
    pseudo_herm = fro(adjoint(h) @ eta - eta @ h) / max(1.0, fro(eta) * fro(h))
    eta_herm = fro(eta - adjoint(eta)) / max(1.0, fro(eta))
    residuals = {
        "similarity": similarity,
        "congruence": congruence,
        "pseudo_hermiticity": pseudo_herm,
        "eta_hermiticity": eta_herm,
    }
    for name, value in residuals.items():
        if value > tol.verify_tol:
            logger.error(f"canonical data check '{name}' failed: {value:.3e}")
            raise VerificationFailure(f"canonical {name} residual {value:.3e} exceeds {tol.verify_tol:.1e}")

    if not np.array_equal(s @ s, np.eye(canon.n)):
        raise VerificationFailure("S^2 != I")
    if any(e != 1 for e in canon.epsilons):
        raise NegativeEpsilon("a canonical sign is -1")
    return residuals


def canonical_pair(
    system: PTSystem,
    eta_hint: ArrayLike | None = None,
    tol: ToleranceConfig | None = None,
) -> CanonicalData:
    """Canonical frame, Jordan data, S and metric for a diagonalizable PT system.

    Conjugate pairs come first, ordered by (Re, Im) of the member with
    positive imaginary part, which precedes its partner; real eigenvalues
    follow in ascending order.

    Args:
        system: Validated PT system.
        eta_hint: Metric to canonicalise against. Without it the metric is
            built from the normalised frame as (Psi'^{-1})^dag S Psi'^{-1}.
        tol: Tolerances.

    Raises:
        NotPTSymmetric: If the system fails validation.
        UnsupportedStructure: For defective or degenerate-complex spectra.
        NegativeEpsilon: If ``eta_hint`` gives a real cluster a negative sign.
    """
    tol = resolve_tolerance(tol)
    report = validate_pt(system, tol)
    if not report.passed:
        failed = [r.name for r in report.relations if not r.passed]
        raise NotPTSymmetric(f"system fails PT relations: {', '.join(failed)}")

    h = system.H
    n = system.n
    scale = max(1.0, fro(h))
    gap = tol.cluster_gap * scale
    result = eig(h, tol)
    if result.condition_estimate > tol.eigvec_cond_max:
        raise UnsupportedStructure(
            f"H is numerically defective (eigenvector condition {result.condition_estimate:.3e})"
        )

    values = result.eigenvalues
    vectors = result.right_vectors
    clusters = cluster_eigenvalues(values, gap)

    real_clusters: list[list[int]] = []
    upper: list[int] = []
    lower: list[int] = []
    for cluster in clusters:
        centre = complex(np.mean(values[cluster]))
        if abs(centre.imag) <= tol.residual_tol * scale:
            if geometric_multiplicity(h, centre, gap) < len(cluster):
                raise UnsupportedStructure(f"real eigenvalue {centre.real:.6g} is defective")
            real_clusters.append(cluster)
        elif len(cluster) > 1:
            raise UnsupportedStructure(f"complex eigenvalue {centre:.6g} is degenerate")
        elif centre.imag > 0:
            upper.append(cluster[0])
        else:
            lower.append(cluster[0])

    pairs: list[tuple[int, int]] = []
    remaining = list(lower)
    for k in upper:
        target = np.conj(values[k])
        match = min(remaining, key=lambda m: abs(values[m] - target), default=None)
        if match is None or abs(values[match] - target) > gap:
            raise UnsupportedStructure(f"eigenvalue {values[k]:.6g} has no conjugate partner")
        remaining.remove(match)
        pairs.append((k, match))
    if remaining:
        raise UnsupportedStructure("unpaired complex eigenvalues in the spectrum")

    pairs.sort(key=lambda pr: (float(values[pr[0]].real), float(values[pr[0]].imag)))
    real_clusters.sort(key=lambda c: float(np.mean(values[c]).real))

    order: list[int] = []
    blocks: list[JordanBlockDesc] = []
    for k, m in pairs:
        lam = 0.5 * (values[k] + np.conj(values[m]))
        idx = len(blocks)
        blocks.append(JordanBlockDesc(eigenvalue=complex(lam), size=1, paired_with=idx + 1))
        blocks.append(JordanBlockDesc(eigenvalue=complex(np.conj(lam)), size=1, paired_with=idx))
        order.extend([k, m])
    real_groups: list[list[int]] = []
    for cluster in real_clusters:
        start = len(order)
        for k in cluster:
            blocks.append(JordanBlockDesc(eigenvalue=complex(values[k].real, 0.0), size=1))
            order.append(k)
        real_groups.append(list(range(start, start + len(cluster))))

    psi = _phase_normalize(vectors[:, order])
    perm = sip_permutation(blocks)
    s = permutation_matrix(perm)

    if eta_hint is None:
        eta = metric_from_frame(psi, s, tol)
    else:
        eta = as_cmatrix(eta_hint, "eta")
        if eta.shape != (n, n):
            raise DimensionMismatch(f"eta has shape {eta.shape}, expected {(n, n)}")
        psi = _normalize_against_metric(h, psi, eta, len(pairs), real_groups, tol)

    canon = CanonicalData(
        psi_prime=psi,
        blocks=tuple(blocks),
        S=s,
        perm=perm,
        eta=eta,
        epsilons=tuple(1 for _ in blocks),
    )
    residuals = verify_canonical(h, canon, tol)
    logger.info(
        f"canonical_pair: n={n}, pairs={len(pairs)}, real={n - 2 * len(pairs)}, "
        f"similarity={residuals['similarity']:.2e}"
    )
    return canon


def _normalize_against_metric(
    h: CMatrix,
    psi: CMatrix,
    eta: CMatrix,
    n_pairs: int,
    real_groups: list[list[int]],
    tol: ToleranceConfig,
) -> CMatrix:
    """Rescale frame columns so that Psi'^dag eta Psi' lands on S."""
    scale = max(1.0, fro(h))
    if fro(eta - adjoint(eta)) > tol.verify_tol * max(1.0, fro(eta)):
        raise VerificationFailure("eta_hint is not Hermitian")
    if fro(adjoint(h) @ eta - eta @ h) > tol.verify_tol * max(1.0, fro(eta)) * scale:
        raise VerificationFailure("eta_hint is not a metric for H (H^dag eta != eta H)")

    out = psi.copy()
    gram = adjoint(out) @ eta @ out
    floor = tol.rank_floor * max(1.0, fro(gram))

    for p in range(n_pairs):
        i, j = 2 * p, 2 * p + 1
        g = gram[i, j]
        if abs(g) <= floor:
            raise SingularMatrix(f"eta_hint pairs columns {i + 1} and {j + 1} with zero weight")
        out[:, j] = out[:, j] / g

    for group in real_groups:
        block = gram[np.ix_(group, group)]
        d, v = eigh_hermitian(block)
        if np.any(d < -floor):
            raise NegativeEpsilon(
                f"eta_hint gives the real cluster at columns {[g + 1 for g in group]} a negative sign"
            )
        if np.any(np.abs(d) <= floor):
            raise SingularMatrix("eta_hint is singular on a real eigenvalue cluster")
        out[:, group] = out[:, group] @ v @ np.diag(1.0 / np.sqrt(d))
    return out


def _blocks_from_jordan(j: CMatrix, perm: tuple[int, ...], tol: ToleranceConfig) -> tuple[JordanBlockDesc, ...]:
    """Split a Jordan matrix into blocks and attach conjugate partners via s(.)."""
    n = j.shape[0]
    off = j.copy()
    for i in range(n):
        off[i, i] = 0.0
        if i + 1 < n:
            off[i, i + 1] = 0.0
    if max_abs(off) > tol.residual_tol * max(1.0, max_abs(j)):
        raise UnsupportedStructure("J is not upper bidiagonal")

    starts: list[int] = []
    sizes: list[int] = []
    i = 0
    while i < n:
        size = 1
        while (
            i + size < n
            and abs(j[i + size - 1, i + size] - 1.0) <= tol.residual_tol
            and abs(j[i + size, i + size] - j[i, i]) <= tol.residual_tol * max(1.0, abs(j[i, i]))
        ):
            size += 1
        if i + size < n and abs(j[i + size - 1, i + size]) > tol.residual_tol:
            raise UnsupportedStructure(f"superdiagonal entry at row {i + size} is neither 0 nor 1")
        starts.append(i)
        sizes.append(size)
        i += size

    block_of = {}
    for b, (start, size) in enumerate(zip(starts, sizes)):
        for k in range(size):
            block_of[start + k] = b

    blocks = []
    for b, (start, size) in enumerate(zip(starts, sizes)):
        partner = block_of[perm[start]]
        blocks.append(
            JordanBlockDesc(
                eigenvalue=complex(j[start, start]),
                size=size,
                paired_with=None if partner == b else partner,
            )
        )
    return tuple(blocks)


def canonical_from_frame(
    h: ArrayLike,
    psi_prime: ArrayLike,
    j: ArrayLike,
    s: ArrayLike,
    eta: ArrayLike | None = None,
    tol: ToleranceConfig | None = None,
) -> CanonicalData:
    """Wrap and verify a caller-supplied canonical frame.

    This is the route for defective Hamiltonians, whose Jordan structure
    cannot be computed reliably in floating point.

    Raises:
        UnsupportedStructure: If S is not a symmetric 0/1 permutation or J
            is not in Jordan form.
        VerificationFailure: If Psi'^{-1} H Psi' != J or Psi'^dag eta Psi' != S.
    """
    tol = resolve_tolerance(tol)
    h_mat = as_cmatrix(h, "H")
    n = require_square(h_mat, "H")
    psi = as_cmatrix(psi_prime, "Psi'")
    j_mat = as_cmatrix(j, "J")
    if psi.shape != (n, n) or j_mat.shape != (n, n):
        raise DimensionMismatch("Psi', J and H must share one square shape")

    perm = permutation_from_matrix(s, tol)
    s_mat = permutation_matrix(perm)
    blocks = _blocks_from_jordan(j_mat, perm, tol)
    eta_mat = metric_from_frame(psi, s_mat, tol) if eta is None else as_cmatrix(eta, "eta")

    canon = CanonicalData(
        psi_prime=psi,
        blocks=blocks,
        S=s_mat,
        perm=perm,
        eta=eta_mat,
        epsilons=tuple(1 for _ in blocks),
    )
    verify_canonical(h_mat, canon, tol)
    return canon
