"""``pointer``: exact versus weak-approximated post-selected pointer states."""

from __future__ import annotations

import argparse

import numpy as np

from PTSim.serialization import complex_to_json, load_pointer_setup
from PTSim.types import PointerTermJSON
from PTSim.weak import (
    PointerDistribution,
    default_grid,
    grid_l2_distance,
    l2_distance,
    pointer_exact,
    pointer_weak_approx,
    weak_value,
)

from . import CommandContext, emit_json, register_command


def _terms(p: PointerDistribution) -> list[PointerTermJSON]:
    return [{"weight": complex_to_json(t.weight), "shift": complex_to_json(t.shift)} for t in p.terms]


def _configure(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("setup", help="Pointer setup JSON (observable, pre, post, g, width)")
    parser.add_argument("--grid", type=int, default=None, help="Number of grid points (default: from config, 4096)")
    parser.add_argument("--qmin", type=float, default=None, help="Lower end of the grid")
    parser.add_argument("--qmax", type=float, default=None, help="Upper end of the grid")


def _run(args: argparse.Namespace, ctx: CommandContext) -> int:
    setup = load_pointer_setup(args.setup, ctx.tol)
    exact = pointer_exact(setup, ctx.tol)
    weak = pointer_weak_approx(setup)

    points = args.grid if args.grid is not None else ctx.grid.points
    if points < 2:
        raise ValueError(f"--grid must be at least 2, got {points}")
    span = default_grid([exact, weak], points=points, grid=ctx.grid)
    q_min = span[0] if args.qmin is None else args.qmin
    q_max = span[-1] if args.qmax is None else args.qmax
    if not q_max > q_min:
        raise ValueError(f"empty grid [{q_min}, {q_max}]")
    q = np.linspace(q_min, q_max, points)

    emit_json(
        {
            "g": setup.g,
            "width": setup.pointer_width,
            "weak_value": complex_to_json(weak_value(setup)),
            "exact_terms": _terms(exact),
            "weak_term": _terms(weak)[0],
            "l2_distance": l2_distance(exact, weak),
            "grid_l2_distance": grid_l2_distance(exact, weak, q),
            "mean_shift_exact": exact.mean_position(),
            "mean_shift_weak": weak.mean_position(),
            "grid": {"q_min": float(q_min), "q_max": float(q_max), "points": points},
        }
    )
    return 0


register_command("pointer", "Compare the exact and weak-approximated pointer states", _configure, _run)
