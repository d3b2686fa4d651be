"""Tests for the problem library: gradients, known solutions and solver runs."""
import numpy as np
import pytest

from panoctools.lib.alm import AlmParams, alm_solve, eval_grad_psi, eval_psi
from panoctools.lib.cli import VARIANTS
from panoctools.lib.problems import (analytic_problems, analytic_suite, find_problem,
                                     random_box_qp, suite_problems)

from helpers import central_difference


SUITE = suite_problems()
SUITE_NAMES = [entry.name for entry in SUITE]
KNOWN_SOLUTIONS = [entry for entry in SUITE if entry.x_star is not None]


def sample_points(entry, rng, count):
    """Random points around the starting point, inside C."""
    problem = entry.problem()
    scale = np.maximum(1., np.abs(entry.x0))
    for _ in range(count):
        x = entry.x0 + 0.3 * scale * rng.standard_normal(problem.n)
        yield np.clip(x, problem.box_c.lower + 1e-3, problem.box_c.upper - 1e-3)


def fd_tolerance(values):
    return 1e-6 * max(1., np.max(np.abs(values)))


class TestSuite:
    def test_names_are_unique(self):
        assert len(SUITE_NAMES) == len(set(SUITE_NAMES)) == 21

    def test_fixed_order(self):
        assert [entry.name for entry in suite_problems()] == SUITE_NAMES
        assert SUITE_NAMES[:4] == ["penalty-1d", "rosenbrock-box", "equality-1d", "random-qp-10"]

    def test_fresh_counters_per_instance(self):
        entry = find_problem("hs071")
        first = entry.problem()
        first.eval_f(entry.x0)
        assert entry.problem().counters.f_evals == 0
        assert first.name == "hs071"

    def test_unknown_problem(self):
        with pytest.raises(ValueError, match="hs071"):
            find_problem("no-such-problem")

    def test_seed_changes_random_problems(self):
        x = np.full(8, 0.5)
        a = random_box_qp(0)().eval_f(x)
        b = random_box_qp(1)().eval_f(x)
        assert a != b
        assert random_box_qp(0)().eval_f(x) == a

    @pytest.mark.parametrize("name", [name for name in SUITE_NAMES if name != "chain-small"])
    def test_gradients_match_finite_differences(self, name):
        rng = np.random.default_rng(17)
        entry = find_problem(name)
        problem = entry.problem()
        for x in sample_points(entry, rng, 20):
            fd = central_difference(problem.eval_f, x)
            np.testing.assert_allclose(problem.eval_grad_f(x), fd, rtol=1e-5,
                                       atol=fd_tolerance(fd))
            if not problem.m:
                continue
            v = rng.standard_normal(problem.m)
            fd = central_difference(lambda z: v.dot(problem.eval_g(z)), x)
            np.testing.assert_allclose(problem.eval_grad_g_prod(x, v), fd, rtol=1e-5,
                                       atol=fd_tolerance(fd))

    @pytest.mark.parametrize("name", [name for name in SUITE_NAMES if name != "chain-small"])
    def test_psi_gradient_matches_finite_differences(self, name):
        rng = np.random.default_rng(18)
        entry = find_problem(name)
        problem = entry.problem()
        for x in sample_points(entry, rng, 20):
            y = rng.uniform(-1, 1, problem.m)
            sigma = rng.uniform(0.5, 5, problem.m)
            fd = central_difference(lambda z: eval_psi(problem, z, y, sigma)[0], x)
            np.testing.assert_allclose(eval_grad_psi(problem, x, y, sigma), fd, rtol=1e-5,
                                       atol=1e-5 * max(1., np.max(np.abs(fd))))

    @pytest.mark.parametrize("name", [name for name in SUITE_NAMES
                                      if find_problem(name).problem().m])
    def test_adjoint_product_is_linear(self, name):
        rng = np.random.default_rng(19)
        entry = find_problem(name)
        problem = entry.problem()
        for x in sample_points(entry, rng, 5):
            v, w = rng.standard_normal((2, problem.m))
            a, b = rng.uniform(-2, 2, 2)
            combined = problem.eval_grad_g_prod(x, a * v + b * w)
            expected = a * problem.eval_grad_g_prod(x, v) + b * problem.eval_grad_g_prod(x, w)
            np.testing.assert_allclose(combined, expected, rtol=1e-10,
                                       atol=1e-10 * max(1., np.max(np.abs(expected))))

    @pytest.mark.parametrize("entry", KNOWN_SOLUTIONS, ids=lambda entry: entry.name)
    def test_known_solutions_satisfy_kkt(self, entry):
        problem = entry.problem()
        x = entry.x_star
        assert problem.box_c.contains(x)
        grad = problem.eval_grad_f(x)
        if problem.m:
            g = problem.eval_g(x)
            np.testing.assert_allclose(np.clip(g, problem.box_d.lower, problem.box_d.upper), g,
                                       atol=1e-12)
            if entry.y_star is not None:
                grad = grad + problem.eval_grad_g_prod(x, entry.y_star)
        # Stationarity over the free coordinates of C.
        free = (problem.box_c.lower < x) & (x < problem.box_c.upper)
        np.testing.assert_allclose(grad[free], 0., atol=1e-10)


class TestAnalyticSuite:
    def test_entries(self):
        suite = analytic_suite()
        assert len(suite) == len(analytic_problems()) == 4
        for problem, x_star, y_star in suite:
            assert x_star.shape == (problem.n,)
            assert y_star.shape == (problem.m,)

    def test_penalty_solution(self):
        entry = find_problem("penalty-1d")
        np.testing.assert_array_equal(entry.x_star, [1.])
        np.testing.assert_array_equal(entry.y_star, [2.])

    def test_rosenbrock_solution_on_the_disk(self):
        entry = find_problem("rosenbrock-box")
        np.testing.assert_array_equal(entry.x_star, [1., 1.])
        assert entry.problem().eval_g(entry.x_star)[0] == 2.

    def test_equality_solution(self):
        np.testing.assert_array_equal(find_problem("equality-1d").x_star, [0.5])

    @pytest.mark.parametrize("problem, x_star, y_star", analytic_suite(),
                             ids=[entry.name for entry in analytic_problems()])
    def test_solved_to_known_solution(self, problem, x_star, y_star):
        params = AlmParams(eps_final=1e-6, delta_final=1e-6)
        x, y, report = alm_solve(problem, None, None, params)
        assert report.converged
        np.testing.assert_allclose(x, x_star, atol=1e-3)
        np.testing.assert_allclose(y, y_star, atol=1e-2)


@pytest.mark.parametrize("variant", sorted(VARIANTS))
@pytest.mark.parametrize("entry", analytic_problems(), ids=lambda entry: entry.name)
def test_every_variant_solves_the_analytic_problems(entry, variant):
    config = VARIANTS[variant].solver_config(AlmParams(eps_final=1e-3, delta_final=1e-3))
    x, y, report = config.solve(entry.problem(), entry.x0)
    assert report.converged
    np.testing.assert_allclose(x, entry.x_star, atol=1e-2)
    np.testing.assert_allclose(y, entry.y_star, atol=1e-1)


@pytest.mark.parametrize("variant", ["panoc-ils", "struct-panoc-ils", "approx-struct-panoc-ils"])
def test_improved_line_search_solves_hs007(variant):
    entry = find_problem("hs007")
    x, _, report = VARIANTS[variant].solver_config().solve(entry.problem(), entry.x0)
    assert report.converged
    np.testing.assert_allclose(x, entry.x_star, atol=1e-2)


@pytest.mark.parametrize("variant", ["panoc", "struct-panoc-ils"])
def test_solutions_lie_in_the_box(variant):
    config = VARIANTS[variant].solver_config()
    for entry in SUITE:
        problem = entry.problem()
        x, _, _ = config.solve(problem, entry.x0)
        assert problem.box_c.contains(x), entry.name


@pytest.mark.slow
def test_improved_variants_are_at_least_as_robust():
    from panoctools.tools.suite import run_suite, solved_counts
    configs = [VARIANTS[name].solver_config()
               for name in ("panoc", "panoc-ils", "struct-panoc-ils")]
    counts = solved_counts(run_suite(SUITE, configs))
    assert counts["panoc-ils"] >= counts["panoc"]
    assert counts["struct-panoc-ils"] >= counts["panoc"]
    assert counts["struct-panoc-ils"] >= counts["panoc-ils"] - 1
