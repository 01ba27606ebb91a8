"""JSON I/O for matrices, systems, dilation bundles and pointer setups.

Complex numbers are written as [re, im] pairs. Floats go through ``json``,
which emits the shortest repr that round-trips, so every file written here
re-parses to bit-identical values.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np
from numpy.typing import ArrayLike
from pydantic import BaseModel, ValidationError

from PTSim.config import ToleranceConfig, resolve_tolerance
from PTSim.dilation import DilationResult, frame_vectors
from PTSim.exceptions import BundleFormatError, IndexOutOfRange, MatrixFormatError, UnsupportedStructure
from PTSim.linalg import CMatrix, CVector, adjoint, fro
from PTSim.logger import logger
from PTSim.pt import PTSystem, permutation_from_matrix
from PTSim.schemas import FRAME_REFERENCE, DilationBundle, MatrixFile, PointerSetupFile, SystemFile, VectorFile
from PTSim.types import ComplexJSON
from PTSim.weak import WeakSetup

# ==================== primitives ====================


def matrix_to_model(a: ArrayLike) -> MatrixFile:
    arr = np.asarray(a, dtype=np.complex128)
    return MatrixFile(
        rows=arr.shape[0],
        cols=arr.shape[1],
        data=[[[float(z.real), float(z.imag)] for z in row] for row in arr],
    )


def model_to_matrix(m: MatrixFile) -> CMatrix:
    return np.array([[complex(re, im) for re, im in row] for row in m.data], dtype=np.complex128)


def vector_to_pairs(v: ArrayLike) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=np.complex128).reshape(-1)]


def pairs_to_vector(pairs: list[list[float]]) -> CVector:
    return np.array([complex(re, im) for re, im in pairs], dtype=np.complex128)


def complex_to_json(z: complex) -> ComplexJSON:
    return {"re": float(z.real), "im": float(z.imag)}


def _describe(e: ValidationError) -> str:
    parts = []
    for err in e.errors():
        loc = ".".join(str(p) for p in err["loc"]) or "<root>"
        parts.append(f"'{loc}': {err['msg']}")
    return "; ".join(parts)


def read_json(path: str | Path, error: type[Exception] = MatrixFormatError) -> Any:
    """Parse a JSON file, mapping I/O and syntax errors to ``error``."""
    p = Path(path)
    try:
        with open(p, "r", encoding="utf-8") as f:
            return json.load(f)
    except OSError as e:
        raise error(f"{p}: cannot read file: {e}") from e
    except json.JSONDecodeError as e:
        raise error(f"{p}: malformed JSON at line {e.lineno}, column {e.colno}: {e.msg}") from e


def write_json(obj: Any, path: str | Path) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    payload = obj.model_dump() if isinstance(obj, BaseModel) else obj
    with open(target, "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2)
        f.write("\n")
    logger.info(f"Wrote {target}")
    return target


def _validate(model: type[BaseModel], data: Any, source: str, error: type[Exception]) -> Any:
    try:
        return model.model_validate(data)
    except ValidationError as e:
        raise error(f"{source}: invalid {model.__name__}: {_describe(e)}") from e


def load_matrix(path: str | Path) -> CMatrix:
    return model_to_matrix(_validate(MatrixFile, read_json(path), str(path), MatrixFormatError))


def save_matrix(a: ArrayLike, path: str | Path) -> Path:
    return write_json(matrix_to_model(a), path)


def load_vector(path: str | Path) -> CVector:
    data = read_json(path)
    if isinstance(data, list):
        data = {"data": data}
    return pairs_to_vector(_validate(VectorFile, data, str(path), MatrixFormatError).data)


# ==================== systems ====================


@dataclass(frozen=True)
class LoadedSystem:
    system: PTSystem
    eta: CMatrix | None = None
    frame: tuple[CMatrix, CMatrix, CMatrix] | None = None


def load_system(path: str | Path) -> LoadedSystem:
    """Read a system file with keys H, P, T and optional eta."""
    model = _validate(SystemFile, read_json(path), str(path), MatrixFormatError)
    system = PTSystem(H=model_to_matrix(model.H), P=model_to_matrix(model.P), T_conj=model_to_matrix(model.T))
    eta = model_to_matrix(model.eta) if model.eta is not None else None
    given = [key for key in ("Psi", "J", "S") if getattr(model, key) is not None]
    if given and len(given) != 3:
        missing = sorted({"Psi", "J", "S"} - set(given))
        raise MatrixFormatError(f"{path}: frame keys must be given together; missing {missing}")
    frame = None
    if given:
        frame = (model_to_matrix(model.Psi), model_to_matrix(model.J), model_to_matrix(model.S))
    return LoadedSystem(system=system, eta=eta, frame=frame)


def save_system(system: PTSystem, path: str | Path, eta: ArrayLike | None = None) -> Path:
    model = SystemFile(
        H=matrix_to_model(system.H),
        P=matrix_to_model(system.P),
        T=matrix_to_model(system.T_conj),
        eta=matrix_to_model(eta) if eta is not None else None,
    )
    return write_json(model, path)


# ==================== bundles ====================


def bundle_from_dilation(d: DilationResult) -> DilationBundle:
    return DilationBundle(
        H=matrix_to_model(d.H),
        H_tilde=matrix_to_model(d.H_tilde),
        Psi_tilde=matrix_to_model(d.Psi_tilde),
        Phi_tilde=matrix_to_model(d.Phi_tilde),
        eta=matrix_to_model(d.eta),
        S=matrix_to_model(d.S),
        J=matrix_to_model(d.J),
        c=d.c,
        perm=list(d.perm),
        residuals=dict(d.residuals),
    )


def save_bundle(d: DilationResult, path: str | Path) -> Path:
    return write_json(bundle_from_dilation(d), path)


def bundle_residuals(
    h: CMatrix,
    h_tilde: CMatrix,
    psi_tilde: CMatrix,
    phi_tilde: CMatrix,
    eta: CMatrix,
    s: CMatrix,
    j: CMatrix,
) -> dict[str, float]:
    """Relative residuals re-checked when a bundle is loaded."""
    n = h.shape[0]
    psi = psi_tilde[:n]
    phi_adj = adjoint(phi_tilde)
    frame_scale = max(1.0, fro(phi_tilde) * fro(psi_tilde))
    return {
        "hermiticity": fro(h_tilde - adjoint(h_tilde)) / max(1.0, fro(h_tilde)),
        "frame": fro(phi_adj @ psi_tilde - s) / frame_scale,
        "spectral": fro(phi_adj @ h_tilde @ psi_tilde - s @ j) / (frame_scale * max(1.0, fro(h_tilde))),
        "shared_block": fro(phi_tilde[:n] - psi) / max(1.0, fro(psi)),
        "metric": fro(adjoint(psi) @ eta @ psi - s) / max(1.0, fro(eta) * fro(psi) ** 2),
        "h1": fro(h_tilde[:n, :n] - eta @ h) / max(1.0, fro(eta) * fro(h)),
    }


def load_bundle(path: str | Path, tol: ToleranceConfig | None = None) -> DilationResult:
    """Read and re-verify a dilation bundle.

    Raises:
        BundleFormatError: If the file is malformed or any residual exceeds
            ``verify_tol``.
    """
    tol = resolve_tolerance(tol)
    model = _validate(DilationBundle, read_json(path, BundleFormatError), str(path), BundleFormatError)

    h = model_to_matrix(model.H)
    h_tilde = model_to_matrix(model.H_tilde)
    psi_tilde = model_to_matrix(model.Psi_tilde)
    phi_tilde = model_to_matrix(model.Phi_tilde)
    eta = model_to_matrix(model.eta)
    s = model_to_matrix(model.S)
    j = model_to_matrix(model.J)

    n = h.shape[0]
    shapes = {
        "H": (h.shape, (n, n)),
        "H_tilde": (h_tilde.shape, (2 * n, 2 * n)),
        "Psi_tilde": (psi_tilde.shape, (2 * n, n)),
        "Phi_tilde": (phi_tilde.shape, (2 * n, n)),
        "eta": (eta.shape, (n, n)),
        "S": (s.shape, (n, n)),
        "J": (j.shape, (n, n)),
    }
    for key, (actual, expected) in shapes.items():
        if actual != expected:
            raise BundleFormatError(f"{path}: '{key}' has shape {actual}, expected {expected}")
    if len(model.perm) != n:
        raise BundleFormatError(f"{path}: 'perm' has length {len(model.perm)}, expected {n}")
    try:
        perm_of_s = permutation_from_matrix(s, tol)
    except UnsupportedStructure as e:
        raise BundleFormatError(f"{path}: 'S' is not a sip permutation: {e}") from e
    if tuple(model.perm) != perm_of_s:
        raise BundleFormatError(f"{path}: 'perm' {model.perm} disagrees with S, which encodes {list(perm_of_s)}")

    residuals = bundle_residuals(h, h_tilde, psi_tilde, phi_tilde, eta, s, j)
    failed = {k: v for k, v in residuals.items() if v > tol.verify_tol}
    if failed:
        detail = ", ".join(f"{k}={v:.3e}" for k, v in failed.items())
        logger.error(f"bundle {path} failed its residual re-check: {detail}")
        raise BundleFormatError(f"{path}: bundle fails its residual re-check ({detail})")

    return DilationResult(
        H_tilde=h_tilde,
        Psi_tilde=psi_tilde,
        Phi_tilde=phi_tilde,
        Psi=psi_tilde[:n],
        Xi=psi_tilde[n:],
        Sigma=phi_tilde[n:],
        eta=eta,
        S=s,
        J=j,
        c=model.c,
        H1=h_tilde[:n, :n],
        H2=h_tilde[:n, n:],
        H4=h_tilde[n:, n:],
        H=h,
        perm=tuple(model.perm),
        residuals=residuals,
    )


# ==================== frame references and setups ====================


def resolve_frame_reference(d: DilationResult, ref: str) -> CVector:
    """``psi:i``, ``phi:i`` or ``mu:i`` (a bare ``i`` means ``psi:i``) to a dilated frame vector."""
    match = FRAME_REFERENCE.match(ref.strip())
    if match is None:
        raise MatrixFormatError(f"invalid frame reference {ref!r}; use psi:i, phi:i or mu:i")
    kind = match.group(1) or "psi"
    index = int(match.group(2))
    if index > d.n:
        raise IndexOutOfRange(f"frame index {index} outside 1..{d.n}")
    vectors = frame_vectors(d, index)
    return {"psi": vectors.psi_tilde, "phi": vectors.phi_tilde, "mu": vectors.mu_tilde}[kind]


def resolve_state(d: DilationResult | None, spec: str, base_dir: Path | None = None) -> CVector:
    """A state given as a frame reference (needs a bundle) or a vector file path."""
    if FRAME_REFERENCE.match(spec.strip()):
        if d is None:
            raise MatrixFormatError(f"frame reference {spec!r} needs a dilation bundle")
        return resolve_frame_reference(d, spec)
    path = Path(spec)
    if base_dir is not None and not path.is_absolute():
        path = base_dir / path
    return load_vector(path)


def load_pointer_setup(path: str | Path, tol: ToleranceConfig | None = None) -> WeakSetup:
    """Build a ``WeakSetup`` from a pointer setup file."""
    tol = resolve_tolerance(tol)
    p = Path(path)
    model = _validate(PointerSetupFile, read_json(p), str(p), MatrixFormatError)

    bundle = None
    if model.bundle is not None:
        bundle_path = Path(model.bundle)
        if not bundle_path.is_absolute():
            bundle_path = p.parent / bundle_path
        bundle = load_bundle(bundle_path, tol)

    if model.observable == "bundle":
        if bundle is None:
            raise MatrixFormatError(f"{p}: observable 'bundle' needs a 'bundle' path")
        observable = bundle.H_tilde
    else:
        observable = model_to_matrix(model.observable)

    def state(value: list[list[float]] | str) -> CVector:
        if isinstance(value, str):
            if bundle is None:
                raise MatrixFormatError(f"{p}: frame reference {value!r} needs a 'bundle' path")
            return resolve_frame_reference(bundle, value)
        return pairs_to_vector(value)

    return WeakSetup(
        observable=observable,
        pre=state(model.pre),
        post=state(model.post),
        g=model.g,
        pointer_width=model.width,
        tol=tol,
    )
