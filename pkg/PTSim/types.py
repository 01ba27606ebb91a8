"""TypedDicts for the JSON documents printed by the CLI."""

from __future__ import annotations

from typing import TypedDict


class ComplexJSON(TypedDict):
    re: float
    im: float


class RelationJSON(TypedDict):
    name: str
    residual: float
    threshold: float
    passed: bool


class PointerTermJSON(TypedDict):
    weight: ComplexJSON
    shift: ComplexJSON


class ZMaxima(TypedDict):
    max_z11: float
    max_z22: float
    max_z12: float
    max_z21: float


# "class" is a keyword, so this one uses the functional form
ValidationJSON = TypedDict(
    "ValidationJSON",
    {"pt_symmetric": bool, "relations": list[RelationJSON], "class": str},
    total=False,
)
