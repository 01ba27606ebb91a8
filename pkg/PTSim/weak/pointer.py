"""Gaussian pointer states after pre- and post-selected weak coupling.

The pointer starts as G(Q) = (2 pi D^2)^{-1/4} exp(-Q^2 / 4 D^2). After the
interaction exp(-i g A M) and post-selection on <phi_f| it becomes

    exact:  sum_a <phi_f|Pi_a|phi_i> G(Q - g a)
    weak:   <phi_f|phi_i> G(Q - g A_w)

where the weak form takes the complex shift g A_w literally. Distributions
are kept as Gaussian mixtures; inner products and first moments have closed
forms, grids are used only for sampled comparisons.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, replace

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.integrate import trapezoid

from PTSim.config import DEFAULT_GRID, GridConfig, ToleranceConfig, resolve_tolerance
from PTSim.linalg import CMatrix, cluster_eigenvalues, eigh_hermitian, fro
from PTSim.logger import logger
from PTSim.weak.measurement import WeakSetup, weak_value


def gaussian_pointer(q: ArrayLike, width: float, shift: complex = 0.0) -> NDArray[np.complex128]:
    """(2 pi width^2)^{-1/4} exp(-(q - shift)^2 / (4 width^2)); ``shift`` may be complex."""
    q_arr = np.asarray(q, dtype=np.complex128)
    norm = (2.0 * np.pi * width**2) ** -0.25
    return norm * np.exp(-((q_arr - shift) ** 2) / (4.0 * width**2))


@dataclass(frozen=True)
class PointerTerm:
    weight: complex
    shift: complex


@dataclass(frozen=True)
class PointerGrid:
    q: NDArray[np.float64]
    amplitudes: NDArray[np.complex128]

    @property
    def q_min(self) -> float:
        return float(self.q[0])

    @property
    def q_max(self) -> float:
        return float(self.q[-1])

    @property
    def points(self) -> int:
        return int(self.q.shape[0])


def _gram(left: Sequence[PointerTerm], right: Sequence[PointerTerm], width: float) -> NDArray[np.complex128]:
    """<G(. - a_j)|G(. - b_k)> = exp(-(conj(a_j) - b_k)^2 / (8 width^2))."""
    a = np.array([t.shift for t in left], dtype=np.complex128)
    b = np.array([t.shift for t in right], dtype=np.complex128)
    diff = np.conj(a)[:, np.newaxis] - b[np.newaxis, :]
    return np.exp(-(diff**2) / (8.0 * width**2))


@dataclass(frozen=True)
class PointerDistribution:
    """Complex-weighted mixture of shifted Gaussians with an optional sampled grid."""

    terms: tuple[PointerTerm, ...]
    width: float
    grid: PointerGrid | None = None

    def amplitude(self, q: ArrayLike) -> NDArray[np.complex128]:
        q_arr = np.asarray(q, dtype=np.float64)
        total = np.zeros(q_arr.shape, dtype=np.complex128)
        for term in self.terms:
            total += term.weight * gaussian_pointer(q_arr, self.width, term.shift)
        return total

    def sample(
        self,
        q_min: float | None = None,
        q_max: float | None = None,
        points: int | None = None,
    ) -> PointerDistribution:
        """Copy of this distribution carrying amplitudes on a uniform grid."""
        default = default_grid([self], points=points)
        lo = default[0] if q_min is None else q_min
        hi = default[-1] if q_max is None else q_max
        n = default.shape[0] if points is None else points
        if n < 2 or not hi > lo:
            raise ValueError(f"invalid grid [{lo}, {hi}] with {n} points")
        q = np.linspace(lo, hi, n)
        return replace(self, grid=PointerGrid(q=q, amplitudes=self.amplitude(q)))

    def weights(self) -> NDArray[np.complex128]:
        return np.array([t.weight for t in self.terms], dtype=np.complex128)

    def norm_squared(self) -> float:
        w = self.weights()
        return float(np.real(np.conj(w) @ _gram(self.terms, self.terms, self.width) @ w))

    def mean_position(self) -> float:
        """Closed-form <Q> = int Q |psi|^2 / int |psi|^2."""
        w = self.weights()
        shifts = np.array([t.shift for t in self.terms], dtype=np.complex128)
        gram = _gram(self.terms, self.terms, self.width)
        centres = 0.5 * (np.conj(shifts)[:, np.newaxis] + shifts[np.newaxis, :])
        numerator = np.conj(w) @ (gram * centres) @ w
        denominator = np.conj(w) @ gram @ w
        return float(np.real(numerator / denominator))

    def shifts(self) -> list[complex]:
        return [t.shift for t in self.terms]


def overlap(p1: PointerDistribution, p2: PointerDistribution) -> complex:
    """Closed-form <p1|p2>."""
    if not np.isclose(p1.width, p2.width):
        raise ValueError(f"pointer widths differ: {p1.width} != {p2.width}")
    return complex(np.conj(p1.weights()) @ _gram(p1.terms, p2.terms, p1.width) @ p2.weights())


def _difference(p1: PointerDistribution, p2: PointerDistribution) -> PointerDistribution:
    merged: dict[complex, complex] = {}
    for term in p1.terms:
        merged[term.shift] = merged.get(term.shift, 0.0) + term.weight
    for term in p2.terms:
        merged[term.shift] = merged.get(term.shift, 0.0) - term.weight
    terms = tuple(PointerTerm(weight=w, shift=s) for s, w in merged.items())
    return PointerDistribution(terms=terms, width=p1.width)


def l2_distance(p1: PointerDistribution, p2: PointerDistribution) -> float:
    """||p1 - p2|| / ||p1||, evaluated in closed form."""
    if not np.isclose(p1.width, p2.width):
        raise ValueError(f"pointer widths differ: {p1.width} != {p2.width}")
    reference = p1.norm_squared()
    if reference <= 0.0:
        raise ValueError("reference pointer state has zero norm")
    diff = _difference(p1, p2).norm_squared()
    return float(np.sqrt(max(diff, 0.0) / reference))


def grid_l2_distance(p1: PointerDistribution, p2: PointerDistribution, q: ArrayLike | None = None) -> float:
    """Sampled ||p1 - p2|| / ||p1|| by trapezoidal integration."""
    q_arr = default_grid([p1, p2]) if q is None else np.asarray(q, dtype=np.float64)
    a1 = p1.amplitude(q_arr)
    a2 = p2.amplitude(q_arr)
    reference = trapezoid(np.abs(a1) ** 2, q_arr)
    if reference <= 0.0:
        raise ValueError("reference pointer state has zero norm on the grid")
    return float(np.sqrt(trapezoid(np.abs(a1 - a2) ** 2, q_arr) / reference))


def default_grid(
    distributions: Sequence[PointerDistribution],
    points: int | None = None,
    grid: GridConfig = DEFAULT_GRID,
) -> NDArray[np.float64]:
    """Uniform grid spanning ``span_widths`` widths beyond the extreme real shifts."""
    shifts = [s.real for p in distributions for s in p.shifts()] or [0.0]
    width = max(p.width for p in distributions)
    margin = grid.span_widths * width
    n = grid.points if points is None else points
    return np.linspace(min(shifts) - margin, max(shifts) + margin, n)


def projectors(a: ArrayLike, tol: ToleranceConfig | None = None) -> list[tuple[float, CMatrix]]:
    """Spectral projectors of a Hermitian matrix, one per eigenvalue cluster."""
    tol = resolve_tolerance(tol)
    values, vectors = eigh_hermitian(a)
    gap = tol.cluster_gap * max(1.0, fro(np.asarray(a)))
    result = []
    for cluster in cluster_eigenvalues(values, gap):
        v = vectors[:, cluster]
        result.append((float(np.mean(values[cluster])), v @ np.conj(v).T))
    return result


def pointer_exact(setup: WeakSetup, tol: ToleranceConfig | None = None) -> PointerDistribution:
    """Exact post-selected pointer: one term per distinct eigenvalue of the observable.

    For g = 0 every shift coincides and the mixture is a single Gaussian
    with weight <phi_f|phi_i>.
    """
    if setup.g == 0.0:
        return PointerDistribution(
            terms=(PointerTerm(weight=setup.overlap, shift=0.0),),
            width=setup.pointer_width,
        )
    terms = []
    for value, proj in projectors(setup.observable, tol):
        weight = complex(np.vdot(setup.post, proj @ setup.pre))
        terms.append(PointerTerm(weight=weight, shift=complex(setup.g * value)))
    logger.debug(f"pointer_exact: {len(terms)} terms, g={setup.g:.3g}")
    return PointerDistribution(terms=tuple(terms), width=setup.pointer_width)


def pointer_weak_approx(setup: WeakSetup) -> PointerDistribution:
    """Single Gaussian with weight <phi_f|phi_i> shifted by the complex g A_w."""
    shift = setup.g * weak_value(setup)
    return PointerDistribution(
        terms=(PointerTerm(weight=setup.overlap, shift=complex(shift)),),
        width=setup.pointer_width,
    )


def unselected_density(setup: WeakSetup, q: ArrayLike, tol: ToleranceConfig | None = None) -> NDArray[np.float64]:
    """Pointer density without post-selection: sum_a ||Pi_a phi_i||^2 |G(Q - g a)|^2.

    Integrates to ||phi_i||^2 for every g.
    """
    q_arr = np.asarray(q, dtype=np.float64)
    density = np.zeros(q_arr.shape, dtype=np.float64)
    for value, proj in projectors(setup.observable, tol):
        weight = float(np.real(np.vdot(setup.pre, proj @ setup.pre)))
        density += weight * np.abs(gaussian_pointer(q_arr, setup.pointer_width, setup.g * value)) ** 2
    return density
