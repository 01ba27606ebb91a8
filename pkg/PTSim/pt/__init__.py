"""PT systems, canonical forms and closed-form models."""

from .canonical import (
    CanonicalData,
    JordanBlockDesc,
    PTSystem,
    RelationResidual,
    SymmetryClass,
    ValidationReport,
    assemble_jordan,
    canonical_from_frame,
    canonical_pair,
    classify,
    metric_from_frame,
    permutation_from_matrix,
    permutation_matrix,
    sip_permutation,
    validate_pt,
    verify_canonical,
)
from .models import BenderModel, GuntherSamsonovModel, bender_model, gunther_samsonov_model

__all__ = [
    "BenderModel",
    "CanonicalData",
    "GuntherSamsonovModel",
    "JordanBlockDesc",
    "PTSystem",
    "RelationResidual",
    "SymmetryClass",
    "ValidationReport",
    "assemble_jordan",
    "bender_model",
    "canonical_from_frame",
    "canonical_pair",
    "classify",
    "gunther_samsonov_model",
    "metric_from_frame",
    "permutation_from_matrix",
    "permutation_matrix",
    "sip_permutation",
    "validate_pt",
    "verify_canonical",
]
