"""Comparative statics: sweep one parameter and check the direction of optimal seeding."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .allocation import demand_capacity, optimal_allocation
from .errors import ValidationError
from .graph import Network
from .params import ModelParams

MONO_TOL = 1e-12

INCREASING = "increasing"
DECREASING = "decreasing"
CONSTANT = "constant"
NON_MONOTONE = "non-monotone"

PARAM_FIELDS = {"qa": "q_a", "qb": "q_b", "alpha": "alpha", "delta": "delta", "cs": "c_s", "cq": "c_q"}


@dataclass
class SweepResult:
    parameter: str
    grid: list[float]
    seed_amount: list[float] = field(default_factory=list)
    seeding_budget: list[float] = field(default_factory=list)
    dq: list[float] = field(default_factory=list)

    @property
    def monotonicity_verdict(self) -> str:
        return monotonicity(self.measure())

    def measure(self) -> list[float]:
        """Quantity whose direction the corresponding claim is about.

        Seeded amount under a seeding-cost sweep, seeding spend otherwise.
        """
        return self.seed_amount if self.parameter == "cs" else self.seeding_budget

    def running_verdicts(self) -> list[str]:
        m = self.measure()
        return [monotonicity(m[: i + 1]) for i in range(len(m))]


def monotonicity(values, tol: float = MONO_TOL) -> str:
    """Weak direction of a sequence; a flat sequence is ``constant``."""
    diffs = np.diff(np.asarray(values, dtype=float))
    up = bool(np.all(diffs >= -tol))
    down = bool(np.all(diffs <= tol))
    if up and down:
        return CONSTANT
    if up:
        return INCREASING
    if down:
        return DECREASING
    return NON_MONOTONE


def nondecreasing(values, tol: float = MONO_TOL) -> bool:
    return monotonicity(values, tol) in (INCREASING, CONSTANT)


def nonincreasing(values, tol: float = MONO_TOL) -> bool:
    return monotonicity(values, tol) in (DECREASING, CONSTANT)


def generous_budget(params: ModelParams, y0, firm: str = "a") -> float:
    """A budget that can seed every agent to capacity, so only the threshold binds."""
    return params.c_s * float(demand_capacity(y0, firm).sum()) + 1.0


def sweep(net: Network, base: ModelParams, y0, parameter: str, grid, *, firm: str = "a",
          budget: float | None = None, jobs: int = 1) -> SweepResult:
    """Optimal allocation of ``firm`` at each grid value of ``parameter``.

    Without an explicit ``budget`` each point gets :func:`generous_budget`.
    """
    if parameter not in PARAM_FIELDS:
        raise ValidationError(f"unknown sweep parameter {parameter!r}; choose from {sorted(PARAM_FIELDS)}")
    grid = [float(g) for g in grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValidationError("sweep grid must be strictly increasing")
    y0 = np.zeros(net.n) if y0 is None else np.asarray(y0, dtype=float)
    budget_field = "K_a" if firm == "a" else "K_b"

    def point(value):
        p = base.with_(**{PARAM_FIELDS[parameter]: value})
        K = generous_budget(p, y0, firm) if budget is None else budget
        return optimal_allocation(net, p.with_(**{budget_field: K}), y0, firm)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            allocs = list(pool.map(point, grid))
    else:
        allocs = [point(g) for g in grid]
    return SweepResult(
        parameter=parameter,
        grid=grid,
        seed_amount=[a.seed_amount for a in allocs],
        seeding_budget=[a.spend_seeding for a in allocs],
        dq=[a.dq for a in allocs],
    )


def sweep_quality_own(net, base_params, y0, grid, **kw) -> SweepResult:
    return sweep(net, base_params, y0, "qa", grid, **kw)


def sweep_quality_rival(net, base_params, y0, grid, **kw) -> SweepResult:
    return sweep(net, base_params, y0, "qb", grid, **kw)


def sweep_alpha_delta(net, base_params, y0, grid, parameter: str = "alpha", **kw) -> SweepResult:
    if parameter not in ("alpha", "delta"):
        raise ValidationError(f"parameter must be 'alpha' or 'delta', got {parameter!r}")
    return sweep(net, base_params, y0, parameter, grid, **kw)


def sweep_costs(net, base_params, y0, grid, parameter: str = "cs", **kw) -> SweepResult:
    if parameter not in ("cs", "cq"):
        raise ValidationError(f"parameter must be 'cs' or 'cq', got {parameter!r}")
    return sweep(net, base_params, y0, parameter, grid, **kw)


def v_shape_ok(result: SweepResult, pivot: float, tol: float = MONO_TOL) -> bool:
    """Seeding spend falls on the grid below ``pivot`` and rises above it."""
    g = np.asarray(result.grid)
    ok = True
    for m in (np.asarray(result.seed_amount), np.asarray(result.seeding_budget)):
        ok &= nonincreasing(m[g <= pivot], tol) and nondecreasing(m[g >= pivot], tol)
    return bool(ok)


def expected_direction(parameter: str) -> str | None:
    """Claimed direction of optimal seeding in ``parameter`` (None for the V-shaped rival quality)."""
    return {"qa": INCREASING, "alpha": INCREASING, "cq": INCREASING,
            "delta": DECREASING, "cs": DECREASING}.get(parameter)


def sweep_agrees(result: SweepResult, pivot: float | None = None) -> bool:
    if result.parameter == "qb":
        if pivot is None:
            raise ValidationError("rival-quality sweep needs the own quality as pivot")
        return v_shape_ok(result, pivot)
    ok = nondecreasing if expected_direction(result.parameter) == INCREASING else nonincreasing
    if result.parameter == "cs":
        return ok(result.seed_amount)
    return ok(result.seed_amount) and ok(result.seeding_budget)


def check_equal_budget(net: Network, params: ModelParams, y0) -> bool:
    """Does the lower-quality firm seed no more than its rival, under equal budgets?"""
    if params.K_a != params.K_b:
        raise ValidationError(f"budgets differ: K_a={params.K_a}, K_b={params.K_b}")
    a = optimal_allocation(net, params, y0, "a")
    b = optimal_allocation(net, params, y0, "b")
    ok = True
    if params.q_a <= params.q_b:
        ok &= a.seed_amount <= b.seed_amount + MONO_TOL
    if params.q_b <= params.q_a:
        ok &= b.seed_amount <= a.seed_amount + MONO_TOL
    return bool(ok)
