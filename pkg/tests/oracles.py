"""Brute-force references kept independent of the library's algorithms."""
from functools import lru_cache
from itertools import combinations

import numpy as np

GRID_STEPS = 20


@lru_cache(maxsize=None)
def compositions(total: int, parts: int) -> np.ndarray:
    """All nonnegative integer vectors of length ``parts`` summing to ``total`` (stars and bars)."""
    slots = total + parts - 1
    bars = np.array(list(combinations(range(slots), parts - 1)), dtype=np.int64).reshape(-1, parts - 1)
    edges = np.hstack([np.full((len(bars), 1), -1), bars, np.full((len(bars), 1), slots)])
    return np.diff(edges, axis=1) - 1


def grid_best(v, cap, budget, c_s, c_q, quality_rate, steps=GRID_STEPS):
    """Best objective over budget splits in ``steps`` equal money units.

    Each unit goes to one agent's seeding or to quality; points exceeding an
    agent's capacity are discarded. Returns (best objective, money unit).
    """
    v, cap = np.asarray(v, float), np.asarray(cap, float)
    n = v.size
    unit = budget / steps
    comp = compositions(steps, n + 1)
    seeds = comp[:, :n] * (unit / c_s)
    feasible = np.all(seeds <= cap + 1e-12, axis=1)
    vals = seeds @ v + comp[:, n] * (unit / c_q) * quality_rate
    return float(vals[feasible].max()), unit


def brute_centrality(G, alpha, delta, terms=4000):
    """Centrality by plain repeated multiplication, no linear algebra."""
    M = delta * (1 - alpha) / (2 * alpha) * np.asarray(G).T
    v = term = np.ones(len(G))
    for _ in range(terms):
        term = M @ term
        v = v + term
    return v
