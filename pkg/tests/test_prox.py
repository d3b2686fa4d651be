"""Tests for the forward-backward operator, the FBE and step size selection."""
import numpy as np
import pytest

from panoctools.lib.problem import BoxSet, EvalCounters, NotFiniteError
from panoctools.lib.prox import (SmoothOracle, StepSizeState, compute_sigma, eval_fbe,
                                 estimate_initial_lipschitz, fixed_point_residual,
                                 initial_step_size_state, prox_grad_step, qub_holds,
                                 update_step_size)

from helpers import quadratic_oracle, rosenbrock_oracle


def half_square(box=None, curvature=1.):
    return quadratic_oracle([[curvature]], box=box)


class TestProxGradStep:
    def test_clipped_step(self):
        oracle = half_square(BoxSet([-1.], [1.]))
        x_hat, p = prox_grad_step(oracle, np.array([2.]), 0.5)
        np.testing.assert_array_equal(x_hat, [1.])
        np.testing.assert_array_equal(p, [-1.])

    def test_fixed_point(self):
        oracle = half_square(BoxSet([-1.], [1.]))
        x_hat, p = prox_grad_step(oracle, np.array([0.]), 0.7)
        np.testing.assert_array_equal(x_hat, [0.])
        np.testing.assert_array_equal(p, [0.])

    def test_exact_gradient_step(self):
        x_hat, p = prox_grad_step(half_square(), np.array([1.]), 1.)
        np.testing.assert_array_equal(x_hat, [0.])
        np.testing.assert_array_equal(p, [-1.])

    def test_result_lies_in_box(self):
        rng = np.random.default_rng(3)
        box = BoxSet.uniform(4, -0.5, 0.5)
        oracle = quadratic_oracle(np.diag([1., 2., 3., 4.]), rng.standard_normal(4), box)
        for _ in range(10):
            x_hat, _ = prox_grad_step(oracle, 4 * rng.standard_normal(4), rng.uniform(0.01, 2))
            assert box.contains(x_hat)

    def test_nonpositive_step_size(self):
        with pytest.raises(ValueError):
            prox_grad_step(half_square(), np.array([1.]), 0.)

    def test_nonfinite_gradient(self):
        with pytest.raises(NotFiniteError):
            prox_grad_step(half_square(), np.array([1.]), 1., np.array([np.nan]))


@pytest.mark.parametrize("p, gamma, expected", [
    ([-1.], 0.5, [2.]),
    ([0., 0.], 0.3, [0., 0.]),
    ([-0.2, 0.4], 0.1, [2., -4.]),
])
def test_fixed_point_residual(p, gamma, expected):
    np.testing.assert_allclose(fixed_point_residual(np.array(p), gamma), expected)


class TestFbe:
    def test_hand_evaluation(self):
        oracle = half_square(BoxSet([-1.], [1.]))
        x = np.array([2.])
        assert eval_fbe(oracle, x, 2., x, 0.1) == pytest.approx(5.)

    def test_equals_psi_at_interior_minimizer(self):
        oracle = half_square(BoxSet([-1.], [1.]))
        x = np.zeros(1)
        assert eval_fbe(oracle, x, 0., np.zeros(1), 0.4) == 0.

    def test_does_not_evaluate(self):
        oracle = half_square(BoxSet([-1.], [1.]))
        oracle.counters = EvalCounters()
        eval_fbe(oracle, np.array([2.]), 2., np.array([2.]), 0.1)
        assert oracle.counters == EvalCounters()

    def test_monotone_in_step_size(self):
        rng = np.random.default_rng(4)
        box = BoxSet.uniform(3, -1, 1)
        Q = np.diag([1., 5., 10.])
        oracle = quadratic_oracle(Q, rng.standard_normal(3), box)
        for _ in range(30):
            x = 2 * rng.standard_normal(3)
            gamma = rng.uniform(0.01, 1)
            gamma_small = gamma * rng.uniform(0.05, 1)
            psi_x, grad_x = oracle.psi(x), oracle.grad_psi(x)
            assert eval_fbe(oracle, x, psi_x, grad_x, gamma_small) >= \
                eval_fbe(oracle, x, psi_x, grad_x, gamma) - 1e-12

    def test_bounded_by_psi(self):
        rng = np.random.default_rng(5)
        box = BoxSet.uniform(3, -1, 1)
        oracle = quadratic_oracle(np.diag([2., 3., 4.]), box=box)
        for _ in range(20):
            x = rng.uniform(-1, 1, 3)
            psi_x, grad_x = oracle.psi(x), oracle.grad_psi(x)
            assert eval_fbe(oracle, x, psi_x, grad_x, 0.2) <= psi_x + 1e-12


def sample_oracles():
    rng = np.random.default_rng(6)
    M = rng.standard_normal((4, 4))
    wavy = SmoothOracle(lambda x: np.sum(np.sin(3 * x)) + 0.5 * x.dot(x),
                        lambda x: 3 * np.cos(3 * x) + x, BoxSet.uniform(3, -1, 2))
    return [quadratic_oracle(M.T.dot(M), rng.standard_normal(4), BoxSet.uniform(4, -1, 1)),
            rosenbrock_oracle(BoxSet([-2., -1.], [0.8, 2.])),
            wavy]


def test_envelope_ordering_on_random_samples():
    rng = np.random.default_rng(7)
    oracles = sample_oracles()
    for sample in range(1000):
        oracle = oracles[sample % len(oracles)]
        box = oracle.box_c
        width = box.upper - box.lower
        x = rng.uniform(box.lower - 0.25 * width, box.upper + 0.25 * width)
        gamma = rng.uniform(1e-3, 1.)
        gamma_small = gamma * rng.uniform(1e-2, 1.)
        psi_x, grad_x = oracle.psi(x), oracle.grad_psi(x)
        phi = eval_fbe(oracle, x, psi_x, grad_x, gamma)
        # Rounding scales with the terms of the envelope, not with its value.
        slack = 1e-12 * max(1., abs(psi_x), gamma * grad_x.dot(grad_x))
        assert eval_fbe(oracle, x, psi_x, grad_x, gamma_small) >= phi - slack
        # Below psi on C.
        x_in = np.clip(x, box.lower, box.upper)
        psi_in, grad_in = oracle.psi(x_in), oracle.grad_psi(x_in)
        slack = 1e-12 * max(1., abs(psi_in), gamma * grad_in.dot(grad_in))
        assert eval_fbe(oracle, x_in, psi_in, grad_in, gamma) <= psi_in + slack


class TestQub:
    def test_holds_with_exact_constant(self):
        oracle = half_square(curvature=8.)
        x = np.array([0.7])
        x_hat, p = prox_grad_step(oracle, x, 1 / 8)
        assert qub_holds(oracle, x, x_hat, p, oracle.psi(x), oracle.grad_psi(x), 8.)

    def test_fails_with_small_constant(self):
        oracle = half_square(curvature=8.)
        x = np.array([1.])
        x_hat, p = prox_grad_step(oracle, x, 1.)
        np.testing.assert_array_equal(p, [-8.])
        assert oracle.psi(x_hat) == 196.
        assert not qub_holds(oracle, x, x_hat, p, 4., oracle.grad_psi(x), 1.)

    def test_zero_step(self):
        oracle = half_square(curvature=8.)
        x = np.array([0.])
        assert qub_holds(oracle, x, x, np.zeros(1), 0., np.zeros(1), 1.)


class TestUpdateStepSize:
    def test_halves_until_bound_holds(self):
        oracle = half_square(curvature=8.)
        state, x_hat, p, psi_x, _ = update_step_size(oracle, np.array([1.]),
                                                     StepSizeState(1., 1.))
        assert state.gamma == 1 / 8
        assert state.lipschitz == 8.
        assert psi_x == 4.
        np.testing.assert_allclose(x_hat, [0.])
        assert state.sigma == compute_sigma(1 / 8, 8.)

    def test_unchanged_when_constant_is_large_enough(self):
        oracle = half_square(curvature=8.)
        start = StepSizeState(0.05, 20.)
        state, _, _, _, _ = update_step_size(oracle, np.array([1.]), start)
        assert state.gamma == start.gamma
        assert state.lipschitz == start.lipschitz

    def test_linear_function_never_shrinks(self):
        oracle = SmoothOracle(lambda x: 3 * x[0] - x[1], lambda x: np.array([3., -1.]),
                              BoxSet.unbounded(2))
        state, _, _, _, _ = update_step_size(oracle, np.ones(2), StepSizeState(2., 0.5))
        assert state.gamma == 2.

    def test_nonfinite_step_counts_as_violation(self):
        oracle = SmoothOracle(lambda x: 0.5 * x[0]**2 if abs(x[0]) < 2 else np.inf,
                              lambda x: np.array(x, dtype=float), BoxSet.unbounded(1))
        state, x_hat, _, _, _ = update_step_size(oracle, np.array([1.]), StepSizeState(10., 0.1))
        assert state.gamma == 0.625
        np.testing.assert_allclose(x_hat, [0.375])

    def test_input_state_is_not_modified(self):
        oracle = half_square(curvature=8.)
        start = StepSizeState(1., 1.)
        update_step_size(oracle, np.array([1.]), start)
        assert start.gamma == 1.

    def test_underflow_raises(self):
        oracle = SmoothOracle(lambda x: -abs(x[0])**0.5 if x[0] else 1., lambda x: np.ones(1),
                              BoxSet.unbounded(1))
        with pytest.raises(NotFiniteError, match="underflow"):
            update_step_size(oracle, np.array([1.]), StepSizeState(1., 1., gamma_min=1e-3))


class TestInitialLipschitz:
    def test_exact_on_quadratic(self):
        oracle = half_square(curvature=7.)
        assert estimate_initial_lipschitz(oracle, np.array([0.3])) == pytest.approx(7.)

    def test_linear_falls_back_to_one(self):
        oracle = SmoothOracle(lambda x: x[0], lambda x: np.ones(1), BoxSet.unbounded(1))
        assert estimate_initial_lipschitz(oracle, np.array([2.])) == 1.

    def test_quartic(self):
        oracle = SmoothOracle(lambda x: 0.25 * x[0]**4, lambda x: x**3, BoxSet.unbounded(1))
        assert estimate_initial_lipschitz(oracle, np.array([1.])) == pytest.approx(3., rel=1e-3)

    def test_rejects_nonfinite_start(self):
        with pytest.raises(ValueError):
            estimate_initial_lipschitz(half_square(), np.array([np.inf]))

    def test_initial_state(self):
        state = initial_step_size_state(half_square(curvature=4.), np.array([1.]))
        assert state.lipschitz == pytest.approx(4.)
        assert state.gamma * state.lipschitz == pytest.approx(0.95)
        assert state.sigma > 0


class TestSmoothOracle:
    def test_counts_and_checks(self):
        counters = EvalCounters()
        oracle = SmoothOracle(lambda x: np.inf, lambda x: np.full(1, np.nan),
                              BoxSet.unbounded(1), counters)
        with pytest.raises(NotFiniteError):
            oracle.psi(np.zeros(1))
        with pytest.raises(NotFiniteError):
            oracle.grad_psi(np.zeros(1))
        assert counters.psi_evals == 1
        assert counters.grad_psi_evals == 1
