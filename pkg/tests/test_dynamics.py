from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import networks, params_st, random_network
from netduopoly import EXAMPLE1, ModelParams, balanced_ring, build_operator, star, steady_state, step, trajectory
from netduopoly.dynamics import ConsumptionState, expanded_form
from netduopoly.errors import BoundsError, ValidationError


def loop_matvec(W, y):
    return [sum(W[i][j] * y[j] for j in range(len(y))) for i in range(len(W))]


def test_half_alpha_halves_G():
    net = random_network(np.random.default_rng(1), 6)
    op = build_operator(net, EXAMPLE1)
    np.testing.assert_array_equal(op.W, net.weights / 2)


def test_equal_qualities_zero_drift():
    op = build_operator(star(4), ModelParams(alpha=0.7, q_a=2.0, q_b=2.0))
    assert not op.u_a.any()


def test_drift_value():
    # (1-a)(qa-qb)/(4a(qa+qb)) with a=1/2, qa=1, qb=3
    a, qa, qb = Fraction(1, 2), 1, 3
    want = (1 - a) * (qa - qb) / (4 * a * (qa + qb))
    assert want == Fraction(-1, 8)
    op = build_operator(star(5), EXAMPLE1.with_(q_a=1.0, q_b=3.0))
    np.testing.assert_allclose(op.u_a, float(want), rtol=0, atol=1e-15)


@given(net=networks(), p=params_st)
def test_row_sums_of_W(net, p):
    op = build_operator(net, p)
    np.testing.assert_allclose(op.W.sum(axis=1), (1 - p.alpha) / (2 * p.alpha), atol=1e-12)
    if p.alpha < 1:
        assert np.sign(op.u_a[0]) == np.sign(p.q_a - p.q_b)


def test_step_zero_fixed_point():
    op = build_operator(balanced_ring(5, 2), EXAMPLE1)
    assert not step(op, np.zeros(5)).y.any()


def test_step_star3():
    y0 = [0.5, -0.5, 0.0]
    op = build_operator(star(3), EXAMPLE1)
    want = loop_matvec([[0, .25, .25], [.5, 0, 0], [.5, 0, 0]], y0)
    assert want == [-0.125, 0.25, 0.25]
    s = step(op, ConsumptionState(np.array(y0), 4))
    np.testing.assert_allclose(s.y, want, atol=1e-15)
    assert s.t == 5


def test_balanced_mean_contracts():
    rng = np.random.default_rng(3)
    p = ModelParams(alpha=0.6)
    op = build_operator(balanced_ring(9, 4), p)
    y = rng.uniform(-0.5, 0.5, 9)
    assert step(op, y).y.mean() == pytest.approx(p.spread * y.mean(), abs=1e-15)


def test_step_rejects_out_of_bounds_input():
    op = build_operator(star(3), EXAMPLE1)
    with pytest.raises(BoundsError):
        step(op, [0.6, 0, 0])
    with pytest.raises(ValidationError):
        step(op, [0, 0])


def test_step_flags_violated_assumption():
    # alpha < 1/2 cannot be built through ModelParams; forge an operator instead
    from netduopoly.dynamics import DynamicsOperator
    op = DynamicsOperator(W=1.5 * star(3).weights, u_a=np.full(3, 0.2))
    with pytest.raises(BoundsError):
        step(op, [0.5, 0.5, 0.5])


def test_alpha_below_half_rejected():
    with pytest.raises(ValidationError):
        ModelParams(alpha=0.49)


def test_trajectory_zero_horizon():
    op = build_operator(star(4), EXAMPLE1)
    states = trajectory(op, np.full(4, 0.1), 0)
    assert len(states) == 1
    np.testing.assert_array_equal(states[0].y, 0.1)
    with pytest.raises(ValidationError):
        trajectory(op, np.zeros(4), -1)


def test_trajectory_monotone_from_zero_when_a_better():
    net = random_network(np.random.default_rng(5), 10)
    op = build_operator(net, ModelParams(alpha=0.55, q_a=3.0, q_b=1.0))
    ys = np.array([s.y for s in trajectory(op, np.zeros(10), 40)])
    assert np.all(np.diff(ys, axis=0) >= -1e-15)


def test_balanced_symmetric_stays_zero():
    op = build_operator(balanced_ring(15, 2), EXAMPLE1)
    assert all(not s.y.any() for s in trajectory(op, np.zeros(15), 30))


@settings(max_examples=50)
@given(net=networks(max_n=20), p=params_st, T=st.integers(0, 50), seed=st.integers(0, 10**6))
def test_trajectory_matches_expanded_form(net, p, T, seed):
    y0 = np.random.default_rng(seed).uniform(-0.5, 0.5, net.n)
    op = build_operator(net, p)
    for s in trajectory(op, y0, T):
        np.testing.assert_allclose(s.y, expanded_form(op, y0, s.t), atol=1e-10, rtol=0)
        assert np.all(np.abs(s.y) <= 0.5)


@settings(max_examples=50)
@given(net=networks(), p=params_st, seed=st.integers(0, 10**6))
def test_contraction_toward_steady_state(net, p, seed):
    op = build_operator(net, p)
    ys = steady_state(op)
    y = np.random.default_rng(seed).uniform(-0.5, 0.5, net.n)
    for s in trajectory(op, y, 10)[1:]:
        assert np.max(np.abs(s.y - ys)) <= p.spread * np.max(np.abs(y - ys)) + 1e-14
        y = s.y


@settings(max_examples=50)
@given(net=networks(), p=params_st, seed=st.integers(0, 10**6))
def test_quality_swap_negates(net, p, seed):
    y0 = np.random.default_rng(seed).uniform(-0.5, 0.5, net.n)
    fwd = trajectory(build_operator(net, p), y0, 15)
    rev = trajectory(build_operator(net, p.with_(q_a=p.q_b, q_b=p.q_a)), -y0, 15)
    for s, r in zip(fwd, rev):
        np.testing.assert_allclose(s.y, -r.y, atol=1e-15)


@given(net=networks(), p=params_st)
def test_steady_state_residual(net, p):
    op = build_operator(net, p)
    ys = steady_state(op)
    assert np.max(np.abs(op.W @ ys + op.u_a - ys)) <= 1e-10


def test_steady_state_balanced_half_alpha():
    qa, qb = 3.0, 1.0
    op = build_operator(balanced_ring(6, 2), EXAMPLE1.with_(q_a=qa, q_b=qb))
    want = (qa - qb) / (2 * (qa + qb))
    np.testing.assert_allclose(steady_state(op), want, atol=1e-14)
    # long trajectory as independent check
    np.testing.assert_allclose(trajectory(op, np.zeros(6), 80)[-1].y, want, atol=1e-14)


def test_steady_state_equal_qualities_zero():
    op = build_operator(star(6), ModelParams(alpha=0.6, q_a=2, q_b=2))
    np.testing.assert_allclose(steady_state(op), 0, atol=1e-15)


def test_steady_state_graph_independent():
    p = ModelParams(alpha=0.6, q_a=1.0, q_b=2.5)
    a = steady_state(build_operator(star(15), p))
    b = steady_state(build_operator(balanced_ring(15, 2), p))
    np.testing.assert_allclose(a, b, atol=1e-14)
