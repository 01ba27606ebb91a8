"""Hermitian dilations and unbroken-phase embeddings."""

from .embedding import DEFAULT_EVOLUTION_TIMES, UnbrokenEmbedding, embed_unbroken, evolution_residual
from .theorem import DilationResult, FrameScale, FrameVectors, build_dilation, frame_vectors, scale_frame

__all__ = [
    "DEFAULT_EVOLUTION_TIMES",
    "DilationResult",
    "FrameScale",
    "FrameVectors",
    "UnbrokenEmbedding",
    "build_dilation",
    "embed_unbroken",
    "evolution_residual",
    "frame_vectors",
    "scale_frame",
]
