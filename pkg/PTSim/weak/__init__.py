"""Weak measurement on dilated systems."""

from .evolution import EvolutionOverlaps, SmallTimePair, evolution_overlaps, small_time_pair
from .measurement import (
    CollapseOutcome,
    ExpectationPair,
    WeakSetup,
    collapse,
    eta_inner,
    expectation_eta,
    weak_value,
)
from .pointer import (
    PointerDistribution,
    PointerGrid,
    PointerTerm,
    default_grid,
    gaussian_pointer,
    grid_l2_distance,
    l2_distance,
    overlap,
    pointer_exact,
    pointer_weak_approx,
    projectors,
    unselected_density,
)

__all__ = [
    "CollapseOutcome",
    "EvolutionOverlaps",
    "ExpectationPair",
    "PointerDistribution",
    "PointerGrid",
    "PointerTerm",
    "SmallTimePair",
    "WeakSetup",
    "collapse",
    "default_grid",
    "eta_inner",
    "evolution_overlaps",
    "expectation_eta",
    "gaussian_pointer",
    "grid_l2_distance",
    "l2_distance",
    "overlap",
    "pointer_exact",
    "pointer_weak_approx",
    "projectors",
    "small_time_pair",
    "unselected_density",
    "weak_value",
]
