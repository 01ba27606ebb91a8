"""End-to-end self-test driven by a YAML scenario.

Each scenario entry names a registered check kind and its parameters. The
bundled scenario runs the reproduction checks at reduced cost; a full-size
scenario can be passed on the command line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict

import numpy as np
import yaml
from pydantic import ValidationError

from PTSim.config import ToleranceConfig, resolve_tolerance
from PTSim.dilation import build_dilation, embed_unbroken, frame_vectors
from PTSim.exceptions import DomainError, NullDenominator, ScenarioFormatError
from PTSim.logger import logger
from PTSim.metrics import record_residual
from PTSim.pt import bender_model, gunther_samsonov_model
from PTSim.weak import WeakSetup, collapse, expectation_eta, l2_distance, pointer_exact, pointer_weak_approx, weak_value

from .random_systems import random_canonical, random_coefficients, random_invertible
from .unbroken import verify_unbroken_example
from .zgrid import broken_dilation, z_convergence, z_grid

DEFAULT_SCENARIO = Path(__file__).parent / "scenarios" / "selftest.yaml"

SQRT2 = math.sqrt(2.0)
QUARTER_PI = math.pi / 4.0


@dataclass(frozen=True)
class CheckResult:
    kind: str
    name: str
    passed: bool
    value: float
    threshold: float
    detail: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "name": self.name,
            "passed": self.passed,
            "value": self.value,
            "threshold": self.threshold,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class SelftestReport:
    scenario: str
    seed: int
    results: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> list[str]:
        return [r.name for r in self.results if not r.passed]

    def to_dict(self) -> dict[str, Any]:
        return {
            "scenario": self.scenario,
            "seed": self.seed,
            "passed": self.passed,
            "checks": [r.to_dict() for r in self.results],
        }


CheckFn = Callable[[str, dict[str, Any], np.random.Generator, ToleranceConfig], CheckResult]

# Check registry: kind -> check function
CHECK_REGISTRY: Dict[str, CheckFn] = {}


def register_check(kind: str, check: CheckFn) -> None:
    """
    Register a self-test check kind.

    Args:
        kind: Identifier used in scenario files (e.g., "zgrid_maxima")
        check: Function (name, params, rng, tol) -> CheckResult
    """
    if kind in CHECK_REGISTRY:
        logger.warning(f"Check kind '{kind}' already registered, overwriting")
    CHECK_REGISTRY[kind] = check
    logger.debug(f"Registered check kind: {kind}")


def list_check_kinds() -> list[str]:
    return list(CHECK_REGISTRY.keys())


def is_check_registered(kind: str) -> bool:
    return kind in CHECK_REGISTRY


def _result(kind: str, name: str, value: float, threshold: float, detail: str = "", passed: bool | None = None) -> CheckResult:
    ok = value <= threshold if passed is None else passed
    record_residual("selftest", name, value, ok)
    return CheckResult(kind=kind, name=name, passed=ok, value=float(value), threshold=float(threshold), detail=detail)


def strictly_decreasing(values: list[float]) -> bool:
    return all(b < a for a, b in zip(values, values[1:]))


# ==================== Built-in checks ====================


def _check_zgrid_maxima(name: str, params: dict[str, Any], rng: np.random.Generator, tol: ToleranceConfig) -> CheckResult:
    report = z_grid(
        r=float(params.get("r", SQRT2)),
        theta=float(params.get("theta", QUARTER_PI)),
        t_max=float(params.get("t_max", 0.2)),
        s_max=float(params.get("s_max", 0.2)),
        steps=int(params.get("steps", 41)),
        threads=int(params.get("threads", 1)),
        tol=tol,
    )
    diag_bound = float(params.get("diagonal_bound", 2e-2))
    cross_bound = float(params.get("cross_bound", 6e-2))
    maxima = report.maxima()
    diag = max(maxima["max_z11"], maxima["max_z22"])
    cross = max(maxima["max_z12"], maxima["max_z21"])
    passed = diag < diag_bound and cross < cross_bound
    detail = ", ".join(f"{k}={v:.4g}" for k, v in maxima.items())
    return _result("zgrid_maxima", name, cross, cross_bound, detail, passed)


def _check_dilation_identities(name: str, params: dict[str, Any], rng: np.random.Generator, tol: ToleranceConfig) -> CheckResult:
    trials = int(params.get("trials", 100))
    dims = [int(n) for n in params.get("dims", [2, 3, 4])]
    bound = float(params.get("bound", 1e-9))
    worst = 0.0
    for _ in range(trials):
        n = dims[int(rng.integers(len(dims)))]
        h, canon = random_canonical(rng, n, tol=tol)
        d = build_dilation(h, canon, random_invertible(rng, n), tol=tol)
        worst = max(worst, d.residuals["hermiticity"], d.residuals["frame"], d.residuals["spectral"])
    return _result("dilation_identities", name, worst, bound, f"{trials} random dilations")


def _check_bender_weak_value(name: str, params: dict[str, Any], rng: np.random.Generator, tol: ToleranceConfig) -> CheckResult:
    r = float(params.get("r", SQRT2))
    theta = float(params.get("theta", QUARTER_PI))
    s = float(params.get("s", 0.1))
    bound = float(params.get("bound", 1e-9))
    model = bender_model(r, theta, s, tol)
    d = build_dilation(model.system.H, model.canon, rescale=False, tol=tol)
    vectors = frame_vectors(d, 1)
    setup = WeakSetup(observable=d.H_tilde, pre=vectors.psi_tilde, post=vectors.mu_tilde, g=0.0, tol=tol)
    value = weak_value(setup)
    expected = complex(r * math.cos(theta), math.sqrt((r * math.sin(theta)) ** 2 - s**2))
    closed_form_gap = float(np.max(np.abs(d.H_tilde - model.closed_form_H_tilde())))
    error = abs(value - expected)
    return _result(
        "bender_weak_value",
        name,
        max(error, closed_form_gap),
        bound,
        f"weak value {value.real:.12g}{value.imag:+.12g}i, closed-form H~ gap {closed_form_gap:.2e}",
    )


def _check_expectation_identity(name: str, params: dict[str, Any], rng: np.random.Generator, tol: ToleranceConfig) -> CheckResult:
    trials = int(params.get("trials", 100))
    dims = [int(n) for n in params.get("dims", [2, 3, 4])]
    bound = float(params.get("bound", 1e-9))
    worst = 0.0
    for _ in range(trials):
        n = dims[int(rng.integers(len(dims)))]
        h, canon = random_canonical(rng, n, tol=tol)
        d = build_dilation(h, canon, tol=tol)
        pair = expectation_eta(d, random_coefficients(rng, n), tol)
        worst = max(worst, pair.discrepancy)
    return _result("expectation_identity", name, worst, bound, f"{trials} random coefficient vectors")


def _check_pointer_convergence(name: str, params: dict[str, Any], rng: np.random.Generator, tol: ToleranceConfig) -> CheckResult:
    r = float(params.get("r", SQRT2))
    theta = float(params.get("theta", QUARTER_PI))
    s = float(params.get("s", 0.1))
    width = float(params.get("width", 1.0))
    ratios = [float(x) for x in params.get("ratios", [0.2, 0.1, 0.05, 0.025])]
    final_ratio = float(params.get("final_ratio", 0.01))
    bound = float(params.get("bound", 1e-3))

    d = broken_dilation(r, theta, s, tol)
    vectors = frame_vectors(d, 1)

    def distance(ratio: float) -> float:
        setup = WeakSetup(
            observable=d.H_tilde,
            pre=vectors.psi_tilde,
            post=vectors.mu_tilde,
            g=ratio * width,
            pointer_width=width,
            tol=tol,
        )
        return l2_distance(pointer_exact(setup, tol), pointer_weak_approx(setup))

    sweep = [distance(x) for x in ratios]
    final = distance(final_ratio)
    monotone = strictly_decreasing(sweep)
    detail = "L2 " + ", ".join(f"{x:g}:{v:.3e}" for x, v in zip(ratios, sweep)) + f"; {final_ratio:g}:{final:.3e}"
    return _result("pointer_convergence", name, final, bound, detail, monotone and final < bound)


def _check_unbroken_embedding(name: str, params: dict[str, Any], rng: np.random.Generator, tol: ToleranceConfig) -> CheckResult:
    cases = params.get("cases", [[1.0, 0.5, math.pi / 3.0], [0.0, 1.0, 0.2]])
    times = [float(t) for t in params.get("times", [0.1, 0.5, 1.0, 5.0])]
    bound = float(params.get("bound", 1e-8))
    worst = 0.0
    all_passed = True
    for e0, s, theta in cases:
        report = verify_unbroken_example(float(e0), float(s), float(theta), times, tol)
        all_passed = all_passed and report.passed
        worst = max(worst, *report.residuals.values())
        model = gunther_samsonov_model(float(e0), float(s), float(theta))
        embedding = embed_unbroken(model.H, model.canonical(tol), times, tol)
        worst = max(worst, *(embedding.evolution_residual(t) for t in times))
    return _result("unbroken_embedding", name, worst, bound, f"{len(cases)} parameter sets", all_passed and worst < bound)


def _check_collapse_rule(name: str, params: dict[str, Any], rng: np.random.Generator, tol: ToleranceConfig) -> CheckResult:
    trials = int(params.get("trials", 1000))
    dims = [int(n) for n in params.get("dims", [2, 3, 4])]
    bound = float(params.get("bound", 1e-12))
    worst = 0.0
    exact = True
    attempted = 0
    while attempted < trials:
        n = dims[int(rng.integers(len(dims)))]
        _, canon = random_canonical(rng, n, tol=tol)
        i = int(rng.integers(1, n + 1))
        try:
            outcome = collapse(canon, random_coefficients(rng, n), i, tol)
        except NullDenominator:
            continue
        attempted += 1
        worst = max(worst, outcome.imag_residual)
        if outcome.pair[0] == outcome.pair[1]:
            exact = exact and outcome.detected_value == canon.eigenvalues[i - 1].real

    model = bender_model(SQRT2, QUARTER_PI, 0.1, tol)
    try:
        collapse(model.canon, [1.0, 1j], 1, tol)
        rejects_null = False
    except NullDenominator:
        rejects_null = True

    detail = f"{trials} draws, fixed points exact={exact}, (1, i) rejected={rejects_null}"
    return _result("collapse_rule", name, worst, bound, detail, worst < bound and exact and rejects_null)


def _check_small_time_limit(name: str, params: dict[str, Any], rng: np.random.Generator, tol: ToleranceConfig) -> CheckResult:
    r = float(params.get("r", SQRT2))
    theta = float(params.get("theta", QUARTER_PI))
    s = float(params.get("s", 0.1))
    times = [float(t) for t in params.get("times", [0.2, 0.1, 0.05, 0.025])]
    zero_bound = float(params.get("zero_bound", 1e-12))

    points = z_convergence(r, theta, s, times + [0.0], tol)
    sweep, origin = points[:-1], points[-1]
    z11 = [p.z11 for p in sweep]
    z12 = [p.z12 for p in sweep]
    at_zero = max(origin.z11, origin.z12, origin.z22, origin.z21)
    passed = strictly_decreasing(z11) and strictly_decreasing(z12) and at_zero <= zero_bound
    detail = "Z11 " + ", ".join(f"{v:.3e}" for v in z11) + "; Z12 " + ", ".join(f"{v:.3e}" for v in z12)
    return _result("small_time_limit", name, at_zero, zero_bound, detail, passed)


register_check("zgrid_maxima", _check_zgrid_maxima)
register_check("dilation_identities", _check_dilation_identities)
register_check("bender_weak_value", _check_bender_weak_value)
register_check("expectation_identity", _check_expectation_identity)
register_check("pointer_convergence", _check_pointer_convergence)
register_check("unbroken_embedding", _check_unbroken_embedding)
register_check("collapse_rule", _check_collapse_rule)
register_check("small_time_limit", _check_small_time_limit)


# ==================== Runner ====================


def load_scenario(path: str | Path):
    """Load and validate a scenario YAML file.

    Raises:
        ScenarioFormatError: If the file is unreadable or fails validation.
    """
    from PTSim.schemas import SelftestScenario

    path = Path(path)
    try:
        with open(path, encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except (OSError, yaml.YAMLError) as e:
        raise ScenarioFormatError(f"{path}: cannot load scenario: {e}") from e

    try:
        return SelftestScenario.model_validate(data)
    except ValidationError as e:
        raise ScenarioFormatError(f"{path}: invalid scenario: {e}") from e


def run_selftest(
    scenario_path: str | Path | None = None,
    seed: int | None = None,
    tol: ToleranceConfig | None = None,
) -> SelftestReport:
    """Run every check of a scenario; ``seed`` overrides the scenario's seed.

    A check that raises a domain error is reported as failed, not re-raised.
    """
    tol = resolve_tolerance(tol)
    scenario = load_scenario(scenario_path or DEFAULT_SCENARIO)
    effective_seed = scenario.seed if seed is None else seed
    rng = np.random.default_rng(effective_seed)

    results = []
    for spec in scenario.checks:
        name = spec.name or spec.kind
        try:
            result = CHECK_REGISTRY[spec.kind](name, spec.params, rng, tol)
        except DomainError as e:
            logger.error(f"selftest check '{name}' raised {type(e).__name__}: {e}")
            result = CheckResult(
                kind=spec.kind,
                name=name,
                passed=False,
                value=math.inf,
                threshold=0.0,
                detail=f"{type(e).__name__}: {e}",
            )
        level = "INFO" if result.passed else "WARNING"
        logger.log(level, f"selftest {name}: {'ok' if result.passed else 'FAILED'} ({result.detail})")
        results.append(result)

    return SelftestReport(scenario=scenario.name, seed=effective_seed, results=results)
