"""``dilate``: Hermitian dilation bundle (or unbroken embedding) of a system file."""

from __future__ import annotations

import argparse
from typing import Any

from PTSim.dilation import UnbrokenEmbedding, build_dilation, embed_unbroken
from PTSim.logger import logger
from PTSim.serialization import bundle_from_dilation, load_matrix, load_system, matrix_to_model, write_json

from . import CommandContext, emit_json, register_command
from .system import canonical_for


def embedding_to_dict(e: UnbrokenEmbedding) -> dict[str, Any]:
    return {
        "mode": "embed",
        "H": matrix_to_model(e.H).model_dump(),
        "H_tilde": matrix_to_model(e.H_tilde).model_dump(),
        "Psi_tilde": matrix_to_model(e.Psi_tilde).model_dump(),
        "J": matrix_to_model(e.J).model_dump(),
        "c": e.c,
        "residuals": e.residuals,
    }


def _configure(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("system", help="System JSON file")
    parser.add_argument(
        "--xi",
        default="psi",
        help="Lower frame block: 'psi' (Xi = Psi) or a MatrixFile path (default: psi)",
    )
    parser.add_argument(
        "--mode",
        choices=["theorem", "embed"],
        default="theorem",
        help="theorem: 2n-dimensional dilation; embed: isometric embedding (unbroken only)",
    )
    parser.add_argument(
        "--no-rescale",
        action="store_true",
        help="Use the canonical frame as is instead of scaling it so that Psi^dag Psi >= 2I",
    )
    parser.add_argument("--out", default=None, help="Bundle path (default: stdout)")


def _run(args: argparse.Namespace, ctx: CommandContext) -> int:
    loaded = load_system(args.system)
    canon = canonical_for(loaded, ctx.tol)
    h = loaded.system.H

    if args.mode == "embed":
        payload = embedding_to_dict(embed_unbroken(h, canon, tol=ctx.tol))
    else:
        xi = None if args.xi == "psi" else load_matrix(args.xi)
        d = build_dilation(h, canon, xi, rescale=not args.no_rescale, tol=ctx.tol)
        payload = bundle_from_dilation(d).model_dump()

    if args.out:
        write_json(payload, args.out)
        emit_json({"out": str(args.out), "mode": args.mode, "c": payload["c"], "residuals": payload["residuals"]})
    else:
        emit_json(payload)
    logger.info(f"dilate ({args.mode}) finished for {args.system}")
    return 0


register_command("dilate", "Build the Hermitian dilation bundle of a system", _configure, _run)
