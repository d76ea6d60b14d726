"""Discounted walk centrality ``v = (I - delta W^T)^{-1} 1`` and its closed forms."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SizeError, SolveError
from .graph import Network
from .params import ModelParams

RESIDUAL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class CentralityProfile:
    v: np.ndarray

    @property
    def v_bar(self) -> float:
        return float(self.v.mean())

    @property
    def v_max(self) -> float:
        return float(self.v.max())

    @property
    def total(self) -> float:
        return float(self.v.sum())

    def order(self) -> np.ndarray:
        """Agents by descending centrality, ties broken by ascending index.

        Values equal to 12 decimals count as tied, so rounding noise in the
        solve cannot reorder symmetric agents.
        """
        return np.lexsort((np.arange(self.v.size), -np.round(self.v, 12)))


def _discount_rate(params: ModelParams) -> float:
    return params.delta * params.spread


def centrality(net: Network, params: ModelParams) -> CentralityProfile:
    A = np.eye(net.n) - _discount_rate(params) * net.weights.T
    ones = np.ones(net.n)
    try:
        v = np.linalg.solve(A, ones)
    except np.linalg.LinAlgError as exc:
        raise SolveError(f"centrality solve failed: {exc}") from exc
    resid = float(np.max(np.abs(A @ v - ones)))
    if not np.isfinite(resid) or resid > RESIDUAL_TOL:
        raise SolveError(f"centrality residual {resid:.3e} exceeds {RESIDUAL_TOL}")
    v.setflags(write=False)
    return CentralityProfile(v)


def centrality_series_oracle(net: Network, params: ModelParams, tol: float = 1e-12) -> np.ndarray:
    """Truncated power series ``sum_k (delta W^T)^k 1``.

    Stops once the tail bound ``r^K n / (1 - r)`` drops below ``tol``, where
    ``r`` is the per-step discount ``delta (1 - alpha) / (2 alpha)``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    r = _discount_rate(params)
    M = params.delta * (params.spread * net.weights).T
    term = np.ones(net.n)
    v = term.copy()
    if r == 0:
        return v
    rk = 1.0
    while True:
        term = M @ term
        v += term
        rk *= r
        if rk * r * net.n / (1 - r) < tol:
            return v


def sum_identity(n: int, params: ModelParams) -> float:
    a, d = params.alpha, params.delta
    return 2 * a * n / (2 * a - d * (1 - a))


def balanced_centrality(params: ModelParams) -> float:
    a, d = params.alpha, params.delta
    return 2 * a / (2 * a - d * (1 - a))


def star_centralities(n: int, params: ModelParams) -> tuple[float, float]:
    """Center and leaf centralities ``(v_h, v_l)`` of ``star(n)``.

    ``v_h`` also bounds every agent's centrality in any n-agent network.
    """
    if n < 2:
        raise SizeError(f"star needs n >= 2, got {n}")
    r = _discount_rate(params)
    denom = 1 - r * r
    return (1 + r * (n - 1)) / denom, (1 + r / (n - 1)) / denom


def k_star_center_centrality(n: int, k: int, params: ModelParams) -> float:
    """Common center centrality of an extremal k-star (k >= 2): leaves sit at 1."""
    return (sum_identity(n, params) - (n - k)) / k
