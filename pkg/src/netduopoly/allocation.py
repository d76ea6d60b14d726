"""Firm payoffs, the seeding-vs-quality threshold rule and the water-filling allocation."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .centrality import CentralityProfile, centrality, star_centralities
from .dynamics import build_operator, trajectory
from .errors import CapacityError, ModelError, RegimeError, ValidationError
from .graph import Network
from .params import ModelParams, _firm

NONE_SEEDABLE = "none_seedable"
ALL_SEEDABLE = "all_seedable"
GRAPH_DEPENDENT = "graph_dependent"


@dataclass(frozen=True, eq=False)
class Allocation:
    firm: str
    seeds: np.ndarray
    dq: float
    budget: float
    c_s: float
    c_q: float

    @property
    def seed_amount(self) -> float:
        return float(self.seeds.sum())

    @property
    def spend_seeding(self) -> float:
        return self.c_s * self.seed_amount

    @property
    def spend_quality(self) -> float:
        return self.c_q * self.dq

    def seeded_agents(self) -> list[int]:
        return [int(i) for i in np.flatnonzero(self.seeds > 0)]


@dataclass(frozen=True)
class SeedingCapacityReport:
    firm: str
    capacity: float
    seeded_agents: tuple[int, ...]
    threshold: float


def quality_leverage(params: ModelParams, n: int) -> float:
    """Discounted market-share gain per unit of normalized quality gap (qa-qb)/(qa+qb)."""
    a, d = params.alpha, params.delta
    return d * (1 - a) * n / (2 * (1 - d) * (2 * a - d * (1 - a)))


def firm_utilities(net: Network, params: ModelParams, y0, v: CentralityProfile | None = None) -> tuple[float, float]:
    y0 = _initial_state(y0, net.n)
    if v is None:
        v = centrality(net, params)
    qa, qb = params.q_a, params.q_b
    base = net.n / (2 * (1 - params.delta))
    u_a = base + float(v.v @ y0) + quality_leverage(params, net.n) * (qa - qb) / (qa + qb)
    return u_a, net.n / (1 - params.delta) - u_a


def simulated_utilities(net: Network, params: ModelParams, y0, T: int) -> tuple[float, float]:
    """Discounted consumption sums truncated after ``T`` steps of the dynamics."""
    states = trajectory(build_operator(net, params), _initial_state(y0, net.n), T)
    disc = params.delta ** np.arange(T + 1)
    sums = np.array([s.y.sum() for s in states])
    half = 0.5 * net.n * disc.sum()
    return float(half + disc @ sums), float(half - disc @ sums)


def truncation_bound(n: int, params: ModelParams, T: int, y_max: float) -> float:
    d = params.delta
    return n * d ** (T + 1) / (1 - d) * (0.5 + y_max)


def marginal_utility(params: ModelParams, n: int, S_a, S_b, dq_a: float, dq_b: float, v) -> tuple[float, float]:
    v = v.v if isinstance(v, CentralityProfile) else np.asarray(v, dtype=float)
    S_a, S_b = np.asarray(S_a, dtype=float), np.asarray(S_b, dtype=float)
    for name, arr in (("S_a", S_a), ("S_b", S_b), ("v", v)):
        if arr.shape != (n,):
            raise ValidationError(f"{name} has shape {arr.shape}, expected ({n},)")
    qa, qb = params.q_a, params.q_b
    scale = 2 * quality_leverage(params, n) / (qa + qb) ** 2
    du_a = float(v @ S_a - v @ S_b) + scale * (qb * dq_a - qa * dq_b)
    return du_a, -du_a


def thresholds(params: ModelParams, n: int) -> tuple[float, float]:
    """Centralities above which seeding beats quality, for firms a and b."""
    qa, qb = params.q_a, params.q_b
    base = 2 * quality_leverage(params, n) * (params.c_s / params.c_q) / (qa + qb) ** 2
    return base * qb, base * qa


def threshold(params: ModelParams, n: int, firm: str) -> float:
    v_a, v_b = thresholds(params, n)
    return v_a if _firm(firm) == "a" else v_b


def quality_rate(params: ModelParams, n: int, firm: str) -> float:
    """Objective gain per unit of quality improvement for ``firm``."""
    rival = params.q_b if _firm(firm) == "a" else params.q_a
    return 2 * quality_leverage(params, n) * rival / (params.q_a + params.q_b) ** 2


def demand_capacity(y0, firm: str) -> np.ndarray:
    """Per-agent seeding headroom: 1/2 - y0 for firm a, 1/2 + y0 for firm b."""
    y0 = np.asarray(y0, dtype=float)
    return 0.5 - y0 if _firm(firm) == "a" else 0.5 + y0


def objective(alloc: Allocation, params: ModelParams, v) -> float:
    v = v.v if isinstance(v, CentralityProfile) else np.asarray(v, dtype=float)
    return float(v @ alloc.seeds) + quality_rate(params, v.size, alloc.firm) * alloc.dq


def _initial_state(y0, n: int) -> np.ndarray:
    y0 = np.zeros(n) if y0 is None else np.asarray(y0, dtype=float)
    if y0.shape != (n,):
        raise ValidationError(f"y0 has shape {y0.shape}, expected ({n},)")
    if not np.all(np.isfinite(y0)) or np.any(np.abs(y0) > 0.5):
        i = int(np.argmax(np.where(np.isfinite(y0), np.abs(y0), np.inf)))
        raise CapacityError(f"y0[{i + 1}] = {y0[i]!r} outside [-1/2, 1/2]")
    return y0


def optimal_allocation(net: Network, params: ModelParams, y0, firm: str,
                       v: CentralityProfile | None = None) -> Allocation:
    """Water-filling: seed by descending centrality while strictly above threshold.

    Each agent is filled to its demand capacity or until the budget runs out;
    whatever is left funds quality. An agent exactly at the threshold is not
    seeded.
    """
    firm = _firm(firm)
    y0 = _initial_state(y0, net.n)
    if v is None:
        v = centrality(net, params)
    cap = demand_capacity(y0, firm)
    v_c = threshold(params, net.n, firm)
    remaining = params.budget(firm)
    seeds = np.zeros(net.n)
    for i in v.order():
        if remaining <= 0:
            break
        if not v.v[i] > v_c:
            continue
        amount = min(cap[i], remaining / params.c_s)
        seeds[i] = amount
        remaining = max(remaining - params.c_s * amount, 0.0)
    seeds.setflags(write=False)
    return Allocation(firm, seeds, remaining / params.c_q, params.budget(firm), params.c_s, params.c_q)


def nash_equilibrium(net: Network, params: ModelParams, y0,
                     v: CentralityProfile | None = None) -> tuple[Allocation, Allocation]:
    """Pair of best responses; each firm's program ignores the rival's choice."""
    y0 = _initial_state(y0, net.n)
    if v is None:
        v = centrality(net, params)
    alloc_a = optimal_allocation(net, params, y0, "a", v)
    alloc_b = optimal_allocation(net, params, y0, "b", v)
    _check_decoupled(params, net.n, v, alloc_a, alloc_b)
    return alloc_a, alloc_b


def _check_decoupled(params, n, v, alloc_a, alloc_b, tol=1e-9):
    zero = np.zeros(n)
    for S_b, dq_b in ((zero, 0.0), (alloc_b.seeds, alloc_b.dq)):
        gain = (marginal_utility(params, n, alloc_a.seeds, S_b, alloc_a.dq, dq_b, v)[0]
                - marginal_utility(params, n, zero, S_b, 0.0, dq_b, v)[0])
        own = objective(alloc_a, params, v)
        if not math.isclose(gain, own, rel_tol=1e-12, abs_tol=tol):
            raise ModelError(f"firm a payoff gain {gain} depends on firm b's action (expected {own})")


def post_seeding_state(y0, alloc_a: Allocation, alloc_b: Allocation) -> np.ndarray:
    """Initial state after both firms seed, ``y0 + S_a - S_b``, clamped to [-1/2, 1/2].

    Per-firm capacities already keep the sum inside the bounds; the clamp only
    absorbs rounding. A warning is issued when both firms saturate one agent.
    """
    y0 = np.asarray(y0, dtype=float)
    both = (alloc_a.seeds >= demand_capacity(y0, "a") - 1e-12) & (alloc_b.seeds >= demand_capacity(y0, "b") - 1e-12)
    both &= (alloc_a.seeds > 0) & (alloc_b.seeds > 0)
    if np.any(both):
        agents = ", ".join(str(i + 1) for i in np.flatnonzero(both))
        warnings.warn(f"both firms saturate agent(s) {agents}; joint seeding is decoupled per firm", stacklevel=2)
    return np.clip(y0 + alloc_a.seeds - alloc_b.seeds, -0.5, 0.5)


def seeding_capacity(net: Network, params: ModelParams, y0, firm: str,
                     v: CentralityProfile | None = None) -> SeedingCapacityReport:
    """Amount seeded by the optimal allocation when the budget never binds."""
    firm = _firm(firm)
    y0 = _initial_state(y0, net.n)
    if v is None:
        v = centrality(net, params)
    v_c = threshold(params, net.n, firm)
    cap = demand_capacity(y0, firm)
    above = v.v > v_c
    return SeedingCapacityReport(
        firm=firm,
        capacity=float(cap[above].sum()),
        seeded_agents=tuple(int(i) for i in v.order() if above[i]),
        threshold=v_c,
    )


def classify_regime(params: ModelParams, n: int, firm: str = "a") -> str:
    v_c = threshold(params, n, firm)
    v_h, _ = star_centralities(n, params)
    if v_c > v_h:
        return NONE_SEEDABLE
    if v_c < 1:
        return ALL_SEEDABLE
    return GRAPH_DEPENDENT


def max_seed_count(params: ModelParams, n: int, firm: str = "a") -> int:
    """Largest number of agents any n-agent network can push above the threshold.

    Raises RegimeError when the threshold is at most 1: then every agent of
    every network qualifies and the count is simply ``n``.
    """
    v_c = threshold(params, n, firm)
    if v_c <= 1:
        raise RegimeError(f"threshold {v_c} <= 1: all {n} agents seedable in every network")
    if classify_regime(params, n, firm) == NONE_SEEDABLE:
        return 0
    a, d = params.alpha, params.delta
    bound = n * d * (1 - a) / ((v_c - 1) * (2 * a - d * (1 - a)))
    # guard against floor(2.9999999999) on exact integer bounds
    return min(math.floor(bound + 1e-9), n)
