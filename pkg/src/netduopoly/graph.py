"""Influence networks: validation, canonical constructors and the text file format.

Agents are 0-based here; file formats and CLI output use 1-based labels.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DiagonalError, NegativeWeightError, ParseError, RowSumError, SizeError, ValidationError

ROW_SUM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Network:
    """Row-stochastic influence matrix; ``weights[i, j]`` is j's influence on i."""

    weights: np.ndarray

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    def out_degree(self) -> np.ndarray:
        return np.count_nonzero(self.weights, axis=1)

    def __eq__(self, other):
        return isinstance(other, Network) and np.array_equal(self.weights, other.weights)

    __hash__ = None


def validate(weights) -> Network:
    w = np.array(weights, dtype=float)
    if w.ndim != 2 or w.shape[0] != w.shape[1] or w.shape[0] < 1:
        raise SizeError(f"weights must be a non-empty square matrix, got shape {w.shape}")
    if not np.all(np.isfinite(w)):
        raise ValidationError("weights contain non-finite entries")
    if np.any(w < 0):
        i, j = np.argwhere(w < 0)[0]
        raise NegativeWeightError(f"negative weight at ({i + 1}, {j + 1}): {w[i, j]}")
    diag = np.diagonal(w)
    if np.any(diag != 0):
        i = int(np.flatnonzero(diag)[0])
        raise DiagonalError(f"self-influence g[{i + 1},{i + 1}] = {diag[i]} must be 0")
    dev = np.abs(w.sum(axis=1) - 1.0)
    if np.any(dev > ROW_SUM_TOL):
        i = int(np.argmax(dev))
        raise RowSumError(f"row {i + 1} sums to {w[i].sum()!r}, expected 1")
    w.setflags(write=False)
    return Network(w)


def star(n: int) -> Network:
    """Star with agent 0 as center."""
    if n < 2:
        raise SizeError(f"star needs n >= 2, got {n}")
    w = np.zeros((n, n))
    w[0, 1:] = 1.0 / (n - 1)
    w[1:, 0] = 1.0
    return validate(w)


def balanced_ring(n: int, d: int) -> Network:
    """Circulant graph: each agent listens to its next ``d`` ring neighbours equally."""
    if n < 2 or not 1 <= d <= n - 1:
        raise SizeError(f"balanced_ring needs n >= 2 and 1 <= d <= n-1, got n={n}, d={d}")
    w = np.zeros((n, n))
    rows = np.arange(n)
    for step in range(1, d + 1):
        w[rows, (rows + step) % n] = 1.0 / d
    return validate(w)


def k_star(n: int, k: int) -> Network:
    """Graph with ``k`` equal-centrality centers (agents 0..k-1) and ``n - k`` leaves.

    Leaves split their weight equally over the centers. For ``k >= 2`` each
    center listens only to the other centers, so no influence flows back to the
    leaves and they keep the minimum centrality of 1; all network centrality
    mass lands on the centers. ``k == 1`` is the ordinary star.
    """
    if k < 1 or k + 1 > n:
        raise SizeError(f"k_star needs 1 <= k <= n-1, got n={n}, k={k}")
    if k == 1:
        return star(n)
    w = np.zeros((n, n))
    w[k:, :k] = 1.0 / k
    w[:k, :k] = 1.0 / (k - 1)
    np.fill_diagonal(w[:k, :k], 0.0)
    return validate(w)


def read_graph(path, normalize: bool = False) -> Network:
    """Parse the text format: ``n`` on the first data line, then ``n`` rows of weights.

    Lines starting with ``#`` are comments. With ``normalize`` each row is
    rescaled to sum to one before validation.
    """
    lines = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        s = raw.strip()
        if s and not s.startswith("#"):
            lines.append((lineno, s))
    if not lines:
        raise ParseError(f"{path}: empty graph file")
    lineno, first = lines[0]
    try:
        n = int(first)
    except ValueError:
        raise ParseError(f"{path}:{lineno}: expected agent count, got {first!r}") from None
    if n < 1:
        raise ParseError(f"{path}:{lineno}: agent count must be positive")
    rows = lines[1:]
    if len(rows) != n:
        raise ParseError(f"{path}: expected {n} weight rows, found {len(rows)}")
    w = np.empty((n, n))
    for i, (lineno, s) in enumerate(rows):
        parts = s.split()
        if len(parts) != n:
            raise ParseError(f"{path}:{lineno}: expected {n} weights, found {len(parts)}")
        try:
            w[i] = [float(p) for p in parts]
        except ValueError as exc:
            raise ParseError(f"{path}:{lineno}: {exc}") from None
    if normalize:
        sums = w.sum(axis=1, keepdims=True)
        if np.any(sums <= 0):
            raise RowSumError(f"{path}: cannot normalize a row with nonpositive sum")
        w = w / sums
    return validate(w)


def write_graph(net: Network, path) -> None:
    lines = [str(net.n)]
    lines += [" ".join(repr(float(x)) for x in row) for row in net.weights]
    Path(path).write_text("\n".join(lines) + "\n")
