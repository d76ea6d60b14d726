"""Myopic best-response consumption dynamics.

The centered consumption ``y`` relates to product-a consumption by
``x = 1/2 + y``. Every agent updates synchronously to
``y(t+1) = W y(t) + u`` with ``W = spread * G`` and ``u`` a constant vector
favouring the higher-quality product.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BoundsError, ValidationError
from .graph import Network
from .params import ModelParams

BOUND_SLACK = 1e-9


@dataclass(frozen=True, eq=False)
class DynamicsOperator:
    W: np.ndarray
    u_a: np.ndarray

    @property
    def n(self) -> int:
        return self.W.shape[0]


@dataclass(frozen=True, eq=False)
class ConsumptionState:
    y: np.ndarray
    t: int = 0

    @property
    def x_a(self) -> np.ndarray:
        return 0.5 + self.y

    @property
    def x_b(self) -> np.ndarray:
        return 0.5 - self.y


def quality_drift(params: ModelParams) -> float:
    """Scalar entry of the constant input vector u_a."""
    a, qa, qb = params.alpha, params.q_a, params.q_b
    return (1 - a) * (qa - qb) / (4 * a * (qa + qb))


def build_operator(net: Network, params: ModelParams) -> DynamicsOperator:
    W = params.spread * net.weights
    u = np.full(net.n, quality_drift(params))
    W.setflags(write=False)
    u.setflags(write=False)
    return DynamicsOperator(W, u)


def check_bounds(y: np.ndarray, what: str = "y") -> np.ndarray:
    y = np.asarray(y, dtype=float)
    if not np.all(np.isfinite(y)):
        raise BoundsError(f"{what} contains non-finite values")
    worst = float(np.max(np.abs(y))) if y.size else 0.0
    if worst > 0.5 + BOUND_SLACK:
        i = int(np.argmax(np.abs(y)))
        raise BoundsError(f"{what}[{i + 1}] = {y[i]!r} lies outside [-1/2, 1/2]")
    return y


def _as_state(op: DynamicsOperator, state) -> ConsumptionState:
    if not isinstance(state, ConsumptionState):
        state = ConsumptionState(np.asarray(state, dtype=float), 0)
    if state.y.shape != (op.n,):
        raise ValidationError(f"state has shape {state.y.shape}, expected ({op.n},)")
    check_bounds(state.y)
    return state


def step(op: DynamicsOperator, state) -> ConsumptionState:
    state = _as_state(op, state)
    y = op.W @ state.y + op.u_a
    check_bounds(y, f"y({state.t + 1})")
    return ConsumptionState(y, state.t + 1)


def trajectory(op: DynamicsOperator, y0, T: int) -> list[ConsumptionState]:
    if T < 0:
        raise ValidationError(f"horizon must be nonnegative, got {T}")
    states = [_as_state(op, y0)]
    for _ in range(T):
        states.append(step(op, states[-1]))
    return states


def expanded_form(op: DynamicsOperator, y0, t: int) -> np.ndarray:
    """``W^t y0 + sum_{k<t} W^k u`` via repeated multiplication (no eigendecomposition)."""
    y0 = np.asarray(y0, dtype=float)
    Wk = np.eye(op.n)
    acc = np.zeros(op.n)
    for _ in range(t):
        acc += Wk @ op.u_a
        Wk = Wk @ op.W
    return Wk @ y0 + acc


def steady_state(op: DynamicsOperator) -> np.ndarray:
    return np.linalg.solve(np.eye(op.n) - op.W, op.u_a)
