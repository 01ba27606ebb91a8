"""PTSim core configuration definitions.

Numerical thresholds are grouped in one immutable object that every module
accepts as an optional ``tol`` argument, so a single override (CLI flag,
``PTSIM_TOL`` or the config file) reaches the whole pipeline.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical tolerances.

    Attributes:
        residual_tol: Absolute/relative residual bound for identities (default 1e-10)
        cond_floor: Reciprocal condition number below which a solve is refused
        rank_floor: Relative eigenvalue floor for rank decisions on Gram matrices
        cluster_gap: Eigenvalue clustering gap, relative to ||H|| (default 1e-6)
        eigvec_cond_max: Eigenvector-matrix condition above which H counts as defective
        overflow_bound: Largest 1-norm accepted by expm
        overlap_floor: Smallest |<phi_f|phi_i>| accepted by weak values
        verify_tol: Relative bound for self-verification of constructions (1e-9)
    """

    residual_tol: float = 1e-10
    cond_floor: float = 1e-12
    rank_floor: float = 1e-12
    cluster_gap: float = 1e-6
    eigvec_cond_max: float = 1e8
    overflow_bound: float = 1e6
    overlap_floor: float = 1e-10
    verify_tol: float = 1e-9


@dataclass(frozen=True)
class GridConfig:
    """Pointer sampling grid.

    Attributes:
        points: Number of uniformly spaced samples (default 4096)
        span_widths: Margin beyond the extreme shifts, in pointer widths
    """

    points: int = 4096
    span_widths: float = 8.0


DEFAULT_TOLERANCE = ToleranceConfig()
DEFAULT_GRID = GridConfig()


def resolve_tolerance(tol: ToleranceConfig | None) -> ToleranceConfig:
    """Return ``tol`` or the process-wide default."""
    return tol if tol is not None else DEFAULT_TOLERANCE
