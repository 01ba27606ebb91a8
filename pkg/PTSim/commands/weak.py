"""``weak-value``: weak value of H~ between frame vectors or file states of a bundle."""

from __future__ import annotations

import argparse

from PTSim.serialization import complex_to_json, load_bundle, resolve_state
from PTSim.weak import WeakSetup, weak_value

from . import CommandContext, emit_json, register_command


def _configure(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("bundle", help="Dilation bundle written by 'ptsim dilate'")
    parser.add_argument("--pre", required=True, help="Index i, psi:i, phi:i, mu:i or a vector file")
    parser.add_argument("--post", required=True, help="Index i, psi:i, phi:i, mu:i or a vector file")


def _run(args: argparse.Namespace, ctx: CommandContext) -> int:
    d = load_bundle(args.bundle, ctx.tol)
    setup = WeakSetup(
        observable=d.H_tilde,
        pre=resolve_state(d, args.pre),
        post=resolve_state(d, args.post),
        g=0.0,
        tol=ctx.tol,
    )
    emit_json(complex_to_json(weak_value(setup)))
    return 0


register_command("weak-value", "Weak value <post|H~|pre> / <post|pre> on a dilation bundle", _configure, _run)
