"""Dense complex linear algebra kernels."""

from .core import (
    CMatrix,
    CVector,
    EigResult,
    adjoint,
    as_cmatrix,
    as_vector,
    cluster_eigenvalues,
    eig,
    eigh_hermitian,
    expm,
    fro,
    hermitian_residual,
    inverse,
    max_abs,
    orthonormal_complement,
    reciprocal_condition,
    rel_residual,
    require_square,
    solve,
)

__all__ = [
    "CMatrix",
    "CVector",
    "EigResult",
    "adjoint",
    "as_cmatrix",
    "as_vector",
    "cluster_eigenvalues",
    "eig",
    "eigh_hermitian",
    "expm",
    "fro",
    "hermitian_residual",
    "inverse",
    "max_abs",
    "orthonormal_complement",
    "reciprocal_condition",
    "rel_residual",
    "require_square",
    "solve",
]
