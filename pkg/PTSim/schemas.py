"""Pydantic models for PTSim files: matrices, systems, bundles, pointer setups, scenarios."""

import math
import re
from typing import Any, Literal

from pydantic import BaseModel, Field, field_validator

ComplexPair = list[float]

FRAME_REFERENCE = re.compile(r"^(?:(psi|phi|mu):)?([1-9][0-9]*)$")


def _check_pair(pair: list[float], where: str) -> None:
    if len(pair) != 2:
        raise ValueError(f"{where}: expected a [re, im] pair, got {len(pair)} numbers")
    if not all(math.isfinite(x) for x in pair):
        raise ValueError(f"{where}: non-finite value")


class MatrixFile(BaseModel):
    """Row-major complex matrix with entries as [re, im] pairs."""

    rows: int
    cols: int
    data: list[list[ComplexPair]]

    @field_validator("rows", "cols")
    @classmethod
    def validate_dimension(cls, v: int) -> int:
        if v <= 0:
            raise ValueError("dimensions must be positive")
        return v

    @field_validator("data")
    @classmethod
    def validate_data(cls, v: list[list[ComplexPair]], info) -> list[list[ComplexPair]]:
        rows = info.data.get("rows")
        cols = info.data.get("cols")
        if rows is not None and len(v) != rows:
            raise ValueError(f"expected {rows} rows, got {len(v)}")
        for i, row in enumerate(v):
            if cols is not None and len(row) != cols:
                raise ValueError(f"row {i}: expected {cols} entries, got {len(row)}")
            for j, pair in enumerate(row):
                _check_pair(pair, f"entry ({i}, {j})")
        return v


class VectorFile(BaseModel):
    """Complex vector as a list of [re, im] pairs."""

    data: list[ComplexPair]

    @field_validator("data")
    @classmethod
    def validate_data(cls, v: list[ComplexPair]) -> list[ComplexPair]:
        if not v:
            raise ValueError("vector must not be empty")
        for i, pair in enumerate(v):
            _check_pair(pair, f"entry {i}")
        return v


class SystemFile(BaseModel):
    """H, P and T (linear part) of a PT system.

    Optional keys: ``eta`` (metric hint) and a caller-supplied canonical
    frame ``Psi``, ``J``, ``S``, which must be given together.
    """

    H: MatrixFile
    P: MatrixFile
    T: MatrixFile
    eta: MatrixFile | None = None
    Psi: MatrixFile | None = None
    J: MatrixFile | None = None
    S: MatrixFile | None = None


class DilationBundle(BaseModel):
    """Everything ``ptsim dilate`` produces; versioned by ``format``."""

    format: Literal[1] = 1
    H: MatrixFile
    H_tilde: MatrixFile
    Psi_tilde: MatrixFile
    Phi_tilde: MatrixFile
    eta: MatrixFile
    S: MatrixFile
    J: MatrixFile
    c: float
    perm: list[int]
    residuals: dict[str, float] = Field(default_factory=dict)

    @field_validator("c")
    @classmethod
    def validate_c(cls, v: float) -> float:
        if not (math.isfinite(v) and v > 0):
            raise ValueError("scaling constant c must be positive and finite")
        return v

    @field_validator("perm")
    @classmethod
    def validate_perm(cls, v: list[int]) -> list[int]:
        if sorted(v) != list(range(len(v))):
            raise ValueError("perm must be a permutation of 0..n-1")
        if any(v[v[i]] != i for i in range(len(v))):
            raise ValueError("perm must be an involution")
        return v


class PointerSetupFile(BaseModel):
    """Weak-measurement setup for ``ptsim pointer``.

    ``observable`` is a matrix or the string ``"bundle"`` (use H~ of the
    bundle at ``bundle``). ``pre`` and ``post`` are vectors or frame
    references ``psi:i``, ``phi:i``, ``mu:i`` (1-based; a bare ``i`` means
    ``psi:i``), which need a bundle.
    """

    observable: MatrixFile | Literal["bundle"] = "bundle"
    bundle: str | None = None
    pre: list[ComplexPair] | str
    post: list[ComplexPair] | str
    g: float
    width: float = 1.0

    @field_validator("width")
    @classmethod
    def validate_width(cls, v: float) -> float:
        if not v > 0:
            raise ValueError("pointer width must be positive")
        return v

    @field_validator("g")
    @classmethod
    def validate_g(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("g must be finite")
        return v

    @field_validator("pre", "post")
    @classmethod
    def validate_state(cls, v: list[ComplexPair] | str) -> list[ComplexPair] | str:
        if isinstance(v, str):
            if not FRAME_REFERENCE.match(v):
                raise ValueError(f"invalid frame reference {v!r}; use psi:i, phi:i or mu:i")
            return v
        if not v:
            raise ValueError("state vector must not be empty")
        for i, pair in enumerate(v):
            _check_pair(pair, f"entry {i}")
        return v


class CheckSpec(BaseModel):
    """One self-test check: a registered ``kind`` and its parameters."""

    kind: str
    name: str = ""
    params: dict[str, Any] = Field(default_factory=dict)

    @field_validator("kind")
    @classmethod
    def validate_kind(cls, v: str) -> str:
        # Imported lazily to avoid a circular import
        from PTSim.repro.selftest import is_check_registered

        if not is_check_registered(v):
            raise ValueError(f"Unknown check kind: '{v}'")
        return v


class SelftestScenario(BaseModel):
    name: str
    description: str = ""
    seed: int = 0
    checks: list[CheckSpec] = Field(min_length=1)
