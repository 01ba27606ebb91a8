"""``check`` and ``canon``: PT validation, classification and canonical data."""

from __future__ import annotations

import argparse
from typing import Any

from PTSim.config import ToleranceConfig
from PTSim.exceptions import NotPTSymmetric
from PTSim.logger import logger
from PTSim.pt import CanonicalData, canonical_from_frame, canonical_pair, classify, validate_pt
from PTSim.serialization import LoadedSystem, complex_to_json, load_system, matrix_to_model, write_json

from . import CommandContext, emit_json, register_command


def canonical_for(loaded: LoadedSystem, tol: ToleranceConfig) -> CanonicalData:
    """Canonical data from the file's own frame when given, otherwise computed numerically.

    Raises:
        NotPTSymmetric: If the system fails validation.
    """
    if loaded.frame is None:
        return canonical_pair(loaded.system, eta_hint=loaded.eta, tol=tol)

    report = validate_pt(loaded.system, tol)
    if not report.passed:
        failed = [r.name for r in report.relations if not r.passed]
        raise NotPTSymmetric(f"system fails PT relations: {', '.join(failed)}")
    psi, j, s = loaded.frame
    logger.info("Using the canonical frame supplied by the system file")
    return canonical_from_frame(loaded.system.H, psi, j, s, eta=loaded.eta, tol=tol)


def canonical_to_dict(canon: CanonicalData) -> dict[str, Any]:
    return {
        "eigenvalues": [complex_to_json(z) for z in canon.eigenvalues],
        "perm": [k + 1 for k in canon.perm],
        "blocks": [
            {
                "eigenvalue": complex_to_json(b.eigenvalue),
                "size": b.size,
                "paired_with": b.paired_with,
            }
            for b in canon.blocks
        ],
        "unbroken": canon.is_unbroken,
        "Psi_prime": matrix_to_model(canon.psi_prime).model_dump(),
        "J": matrix_to_model(canon.J).model_dump(),
        "S": matrix_to_model(canon.S).model_dump(),
        "eta": matrix_to_model(canon.eta).model_dump(),
    }


# ==================== check ====================


def _configure_check(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("system", help="System JSON file with keys H, P, T")


def _run_check(args: argparse.Namespace, ctx: CommandContext) -> int:
    loaded = load_system(args.system)
    report = validate_pt(loaded.system, ctx.tol)
    payload = report.to_dict()
    payload["class"] = classify(loaded.system.H, ctx.tol).value
    emit_json(payload)
    if not report.passed:
        logger.warning(f"{args.system}: PT relations fail")
        return 1
    return 0


# ==================== canon ====================


def _configure_canon(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("system", help="System JSON file with keys H, P, T (optional eta, Psi/J/S)")
    parser.add_argument("--out", default=None, help="Write the canonical data here instead of stdout")


def _run_canon(args: argparse.Namespace, ctx: CommandContext) -> int:
    canon = canonical_for(load_system(args.system), ctx.tol)
    payload = canonical_to_dict(canon)
    if args.out:
        write_json(payload, args.out)
        emit_json({"out": str(args.out), "eigenvalues": payload["eigenvalues"], "perm": payload["perm"]})
    else:
        emit_json(payload)
    return 0


register_command("check", "Validate the PT relations of a system and classify it", _configure_check, _run_check)
register_command("canon", "Compute the canonical frame, Jordan data, S and metric", _configure_canon, _run_canon)
