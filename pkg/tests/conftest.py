import numpy as np
import pytest
from hypothesis import strategies as st

from netduopoly import ModelParams, validate


def random_network(rng, n, density=0.5):
    """Random row-stochastic matrix with zero diagonal; every row has a nonzero entry."""
    w = rng.random((n, n)) * (rng.random((n, n)) < density)
    np.fill_diagonal(w, 0.0)
    for i in range(n):
        if w[i].sum() == 0:
            w[i, rng.choice([j for j in range(n) if j != i])] = 1.0
    w /= w.sum(axis=1, keepdims=True)
    # push rounding residue onto the largest entry so rows sum to 1 within 1e-12
    for i in range(n):
        j = int(np.argmax(w[i]))
        w[i, j] += 1.0 - w[i].sum()
    return validate(w)


def random_params(rng, **fixed):
    kw = dict(
        alpha=rng.uniform(0.5, 1.0),
        delta=rng.uniform(0.0, 0.95),
        q_a=rng.uniform(0.2, 5.0),
        q_b=rng.uniform(0.2, 5.0),
        c_s=rng.uniform(0.2, 5.0),
        c_q=rng.uniform(0.2, 5.0),
    )
    kw.update(fixed)
    return ModelParams(**kw)


@st.composite
def networks(draw, min_n=2, max_n=12):
    seed = draw(st.integers(0, 2**32 - 1))
    n = draw(st.integers(min_n, max_n))
    density = draw(st.floats(0.1, 1.0))
    return random_network(np.random.default_rng(seed), n, density)


params_st = st.builds(
    ModelParams,
    alpha=st.floats(0.5, 1.0),
    delta=st.floats(0.0, 0.95),
    q_a=st.floats(0.1, 10.0),
    q_b=st.floats(0.1, 10.0),
    c_s=st.floats(0.1, 10.0),
    c_q=st.floats(0.1, 10.0),
)


@pytest.fixture
def rng():
    return np.random.default_rng(20141215)
