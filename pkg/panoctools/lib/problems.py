#!/usr/bin/env python3

#
# Copyright (C) 2026 The panoctools developers
#
# This file is part of panoctools, an augmented Lagrangian solver for
# nonconvex constrained optimization built around PANOC.
#
# panoctools is free software: you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by the
# Free Software Foundation, either version 3 of the License, or (at
# your option) any later version.
#
# panoctools is distributed in the hope that it will be useful, but
# WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the GNU
# General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with panoctools.  If not, see <http://www.gnu.org/licenses/>.
#

"""
Library of test problems with analytic gradients.

Every entry builds a fresh ProblemSpec on request, so that concurrent
solves never share evaluation counters.  Where the solution is known,
x_star and y_star hold it; the multipliers follow the sign convention
grad f(x) + grad g(x)^T y = 0 (for the free coordinates of x).
"""
import numpy as np

from .chain import ChainParams, chain_ocp, perturbed_initial_state
from .problem import BoxSet, ProblemSpec

# Default seed of the randomized problems.
DEF_SEED = 0

INF = np.inf


class SuiteProblem:
    """A named problem of the suite with its starting point and known solution."""

    def __init__(self, name, build, x0, x_star=None, y_star=None, description=""):
        self.name = name
        self._build = build
        self.x0 = np.array(x0, dtype=float)
        self.x_star = None if x_star is None else np.array(x_star, dtype=float)
        self.y_star = None if y_star is None else np.array(y_star, dtype=float)
        self.description = description
    #__init__

    def problem(self):
        """Return a new ProblemSpec instance with zeroed counters."""
        problem = self._build()
        problem.name = self.name
        return problem
    #problem

    def __repr__(self):
        return "SuiteProblem(%r)" % self.name
    #__repr__
#SuiteProblem


def _linear_constraints(n, f, grad_f, A, lower, upper, box_c=None):
    """Return a ProblemSpec with constraints lower <= A x <= upper."""
    A = np.atleast_2d(np.array(A, dtype=float))
    return ProblemSpec(
        n, A.shape[0], BoxSet.unbounded(n) if box_c is None else box_c,
        BoxSet(lower, upper), f, grad_f, lambda x: A.dot(x), lambda x, v: A.T.dot(v))
#_linear_constraints


def _random_spd(rng, n, shift=1.):
    M = rng.standard_normal((n, n))
    return M.T.dot(M) / n + shift * np.eye(n)
#_random_spd


def penalty_1d():
    """min (x-2)^2  s.t.  x <= 1."""
    return _linear_constraints(
        1, lambda x: (x[0] - 2)**2, lambda x: np.array([2 * (x[0] - 2)]), [[1.]], [-INF], [1.])
#penalty_1d


def rosenbrock_box():
    """Rosenbrock on [-2, 2]^2 with x1^2 + x2^2 <= 2."""

    def f(x):
        return (1 - x[0])**2 + 100 * (x[1] - x[0]**2)**2

    def grad_f(x):
        return np.array([-2 * (1 - x[0]) - 400 * x[0] * (x[1] - x[0]**2),
                         200 * (x[1] - x[0]**2)])

    return ProblemSpec(2, 1, BoxSet.uniform(2, -2, 2), BoxSet([-INF], [2.]), f, grad_f,
                       lambda x: np.array([np.dot(x, x)]), lambda x, v: 2 * v[0] * x)
#rosenbrock_box


def equality_1d():
    """min (x-2)^2  s.t.  x = 0.5, as a degenerate box D."""
    return _linear_constraints(
        1, lambda x: (x[0] - 2)**2, lambda x: np.array([2 * (x[0] - 2)]), [[1.]], [.5], [.5])
#equality_1d


def random_equality_qp(seed=DEF_SEED, n=10, m=3):
    """
    Return (build, x_star, y_star) for min 1/2 x^T Q x + c^T x s.t. A x = b
    with random SPD Q.  The solution comes from the dense KKT system.
    """
    rng = np.random.default_rng(seed)
    Q = _random_spd(rng, n)
    c = rng.standard_normal(n)
    A = rng.standard_normal((m, n))
    b = rng.standard_normal(m)
    kkt = np.block([[Q, A.T], [A, np.zeros((m, m))]])
    solution = np.linalg.solve(kkt, np.concatenate((-c, b)))

    def build():
        return _linear_constraints(n, lambda x: 0.5 * x.dot(Q).dot(x) + c.dot(x),
                                   lambda x: Q.dot(x) + c, A, b, b)

    return build, solution[:n], solution[n:]
#random_equality_qp


def hs006():
    return ProblemSpec(
        2, 1, BoxSet.unbounded(2), BoxSet([0.], [0.]),
        lambda x: (1 - x[0])**2, lambda x: np.array([-2 * (1 - x[0]), 0.]),
        lambda x: np.array([10 * (x[1] - x[0]**2)]),
        lambda x, v: v[0] * np.array([-20 * x[0], 10.]))
#hs006


def hs007():
    return ProblemSpec(
        2, 1, BoxSet.unbounded(2), BoxSet([0.], [0.]),
        lambda x: np.log1p(x[0]**2) - x[1],
        lambda x: np.array([2 * x[0] / (1 + x[0]**2), -1.]),
        lambda x: np.array([(1 + x[0]**2)**2 + x[1]**2 - 4]),
        lambda x, v: v[0] * np.array([4 * x[0] * (1 + x[0]**2), 2 * x[1]]))
#hs007


def hs021():
    return _linear_constraints(
        2, lambda x: 0.01 * x[0]**2 + x[1]**2 - 100, lambda x: np.array([0.02 * x[0], 2 * x[1]]),
        [[10., -1.]], [10.], [INF], BoxSet([2., -50.], [50., 50.]))
#hs021


def hs035():
    H = np.array([[4., 2., 2.], [2., 4., 0.], [2., 0., 2.]])
    c = np.array([-8., -6., -4.])
    return _linear_constraints(
        3, lambda x: 9 + c.dot(x) + 0.5 * x.dot(H).dot(x), lambda x: c + H.dot(x),
        [[1., 1., 2.]], [-INF], [3.], BoxSet(np.zeros(3), np.full(3, INF)))
#hs035


def hs039():
    def g(x):
        return np.array([x[1] - x[0]**3 - x[2]**2, x[0]**2 - x[1] - x[3]**2])

    def grad_g_prod(x, v):
        return np.array([-3 * x[0]**2 * v[0] + 2 * x[0] * v[1], v[0] - v[1],
                         -2 * x[2] * v[0], -2 * x[3] * v[1]])

    return ProblemSpec(4, 2, BoxSet.unbounded(4), BoxSet(np.zeros(2), np.zeros(2)),
                       lambda x: -x[0], lambda x: np.array([-1., 0., 0., 0.]), g, grad_g_prod)
#hs039


def hs043():
    """Rosen-Suzuki."""
    c = np.array([-5., -5., -21., 7.])
    w = np.array([1., 1., 2., 1.])
    # Each constraint is x^T diag(q) x + l^T x <= bound.
    q = np.array([[1., 1., 1., 1.], [1., 2., 1., 2.], [2., 1., 1., 0.]])
    l = np.array([[1., -1., 1., -1.], [-1., 0., 0., -1.], [2., -1., 0., -1.]])
    return ProblemSpec(
        4, 3, BoxSet.unbounded(4), BoxSet(np.full(3, -INF), [8., 10., 5.]),
        lambda x: np.dot(w * x, x) + c.dot(x), lambda x: 2 * w * x + c,
        lambda x: q.dot(x * x) + l.dot(x), lambda x, v: 2 * x * q.T.dot(v) + l.T.dot(v))
#hs043


def hs065():
    def f(x):
        return (x[0] - x[1])**2 + (x[0] + x[1] - 10)**2 / 9 + (x[2] - 5)**2

    def grad_f(x):
        s = 2 * (x[0] + x[1] - 10) / 9
        return np.array([2 * (x[0] - x[1]) + s, -2 * (x[0] - x[1]) + s, 2 * (x[2] - 5)])

    return ProblemSpec(3, 1, BoxSet([-4.5, -4.5, -5.], [4.5, 4.5, 5.]), BoxSet([-INF], [48.]),
                       f, grad_f, lambda x: np.array([np.dot(x, x)]), lambda x, v: 2 * v[0] * x)
#hs065


def hs071():
    def f(x):
        return x[0] * x[3] * (x[0] + x[1] + x[2]) + x[2]

    def grad_f(x):
        s = x[0] + x[1] + x[2]
        return np.array([x[3] * (s + x[0]), x[0] * x[3], x[0] * x[3] + 1, x[0] * s])

    def g(x):
        return np.array([np.prod(x), np.dot(x, x)])

    def grad_g_prod(x, v):
        prod_others = np.array([x[1]*x[2]*x[3], x[0]*x[2]*x[3], x[0]*x[1]*x[3], x[0]*x[1]*x[2]])
        return v[0] * prod_others + 2 * v[1] * x

    return ProblemSpec(4, 2, BoxSet.uniform(4, 1, 5), BoxSet([25., 40.], [INF, 40.]),
                       f, grad_f, g, grad_g_prod)
#hs071


def hs076():
    H = np.array([[2., 0., -1., 0.], [0., 1., 0., 0.], [-1., 0., 2., 1.], [0., 0., 1., 1.]])
    c = np.array([-1., -3., 1., -1.])
    return _linear_constraints(
        4, lambda x: 0.5 * x.dot(H).dot(x) + c.dot(x), lambda x: H.dot(x) + c,
        [[1., 2., 1., 1.], [3., 1., 2., -1.], [0., 1., 4., 0.]],
        [-INF, -INF, 1.5], [5., 4., INF], BoxSet(np.zeros(4), np.full(4, INF)))
#hs076


def rosenbrock_extended(n=10):
    def f(x):
        return np.sum(100 * (x[1:] - x[:-1]**2)**2 + (1 - x[:-1])**2)

    def grad_f(x):
        t = x[1:] - x[:-1]**2
        grad = np.zeros_like(x)
        grad[:-1] = -400 * x[:-1] * t - 2 * (1 - x[:-1])
        grad[1:] += 200 * t
        return grad

    return ProblemSpec(n, 0, BoxSet.uniform(n, -5, 5), BoxSet(np.zeros(0), np.zeros(0)),
                       f, grad_f, None, None)
#rosenbrock_extended


def beale():
    coeffs = np.array([1.5, 2.25, 2.625])
    powers = np.arange(1, 4)

    def residuals(x):
        return coeffs - x[0] + x[0] * x[1]**powers

    def f(x):
        r = residuals(x)
        return np.dot(r, r)

    def grad_f(x):
        r = residuals(x)
        return 2 * np.array([np.dot(r, x[1]**powers - 1),
                             np.dot(r, x[0] * powers * x[1]**(powers - 1))])

    return ProblemSpec(2, 0, BoxSet.uniform(2, -4.5, 4.5), BoxSet(np.zeros(0), np.zeros(0)),
                       f, grad_f, None, None)
#beale


def circle_projection(center=(2., 1., -2.)):
    """Project center onto the unit ball: 1/2 |x|^2 <= 1/2."""
    center = np.array(center)
    return ProblemSpec(
        center.shape[0], 1, BoxSet.unbounded(center.shape[0]), BoxSet([-INF], [.5]),
        lambda x: 0.5 * np.dot(x - center, x - center), lambda x: x - center,
        lambda x: np.array([0.5 * np.dot(x, x)]), lambda x, v: v[0] * x)
#circle_projection


def quartic_box(n=5):
    """Nonconvex separable double well on [-2, 2]^n with sum(x) <= 2."""
    return _linear_constraints(
        n, lambda x: np.sum(0.25 * x**4 - 0.5 * x**2 + 0.1 * x), lambda x: x**3 - x + 0.1,
        np.ones((1, n)), [-INF], [2.], BoxSet.uniform(n, -2, 2))
#quartic_box


def random_box_qp(seed, n=8, m=4):
    """
    Return a builder of min 1/2 x^T Q x + c^T x s.t. A x <= b, x in
    [-1, 1]^n, with x = 0 strictly feasible.
    """
    rng = np.random.default_rng(seed)
    Q = _random_spd(rng, n, 0.1)
    c = 3 * rng.standard_normal(n)
    A = rng.standard_normal((m, n))
    b = np.abs(rng.standard_normal(m)) + 0.1

    def build():
        return _linear_constraints(n, lambda x: 0.5 * x.dot(Q).dot(x) + c.dot(x),
                                   lambda x: Q.dot(x) + c, A, np.full(m, -INF), b,
                                   BoxSet.uniform(n, -1, 1))
    return build
#random_box_qp


def small_chain_params(**changes):
    """Return the ChainParams of the small chain problem (3 balls, horizon 10)."""
    return ChainParams(**dict({"n_balls": 3, "horizon": 10}, **changes))
#small_chain_params


def chain_problem(params):
    """Return the chain optimal control problem from the perturbed initial state."""
    return chain_ocp(params, perturbed_initial_state(params))
#chain_problem


def analytic_problems(seed=DEF_SEED):
    """Return the SuiteProblems with known primal and dual solutions."""
    qp_build, qp_x, qp_y = random_equality_qp(seed)
    return [
        SuiteProblem("penalty-1d", penalty_1d, [0.], [1.], [2.],
                     "min (x-2)^2 s.t. x <= 1"),
        SuiteProblem("rosenbrock-box", rosenbrock_box, [-1.2, 1.], [1., 1.], [0.],
                     "Rosenbrock in a box and a disk"),
        SuiteProblem("equality-1d", equality_1d, [0.], [.5], [3.],
                     "min (x-2)^2 s.t. x = 0.5"),
        SuiteProblem("random-qp-10", qp_build, np.zeros(10), qp_x, qp_y,
                     "random equality-constrained convex QP")]
#analytic_problems


def analytic_suite(seed=DEF_SEED):
    """Return (problem, x_star, y_star) for each problem with a known solution."""
    return [(entry.problem(), entry.x_star, entry.y_star) for entry in analytic_problems(seed)]
#analytic_suite


def suite_problems(seed=DEF_SEED):
    """Return the full internal suite, in a fixed order."""
    sqrt3 = np.sqrt(3.)
    return analytic_problems(seed) + [
        SuiteProblem("hs006", hs006, [-1.2, 1.], [1., 1.], [0.]),
        SuiteProblem("hs007", hs007, [2., 2.], [0., sqrt3], [1 / (2 * sqrt3)]),
        SuiteProblem("hs021", hs021, [2., -1.], [2., 0.], [0.]),
        SuiteProblem("hs035", hs035, [.5, .5, .5], [4/3, 7/9, 4/9], [2/9]),
        SuiteProblem("hs039", hs039, [2., 2., 2., 2.], [1., 1., 0., 0.], [-1., -1.]),
        SuiteProblem("hs043", hs043, np.zeros(4), [0., 1., 2., -1.], [1., 0., 2.]),
        SuiteProblem("hs065", hs065, [-4.5, 4.5, 0.]),
        SuiteProblem("hs071", hs071, [1., 5., 5., 1.]),
        SuiteProblem("hs076", hs076, [.5, .5, .5, .5]),
        SuiteProblem("rosenbrock-ext-10", rosenbrock_extended, np.tile([-1.2, 1.], 5)),
        SuiteProblem("beale", beale, [1., 1.], [3., .5]),
        SuiteProblem("circle-projection", circle_projection, np.zeros(3),
                     [2/3, 1/3, -2/3], [2.]),
        SuiteProblem("quartic-box", quartic_box, [.3, -.2, .1, .5, -.4]),
        SuiteProblem("random-qp-box-0", random_box_qp(seed), np.zeros(8)),
        SuiteProblem("random-qp-box-1", random_box_qp(seed + 1), np.zeros(8)),
        SuiteProblem("random-qp-box-2", random_box_qp(seed + 2), np.zeros(8)),
        SuiteProblem("chain-small", lambda: chain_problem(small_chain_params()), np.zeros(30))]
#suite_problems


def find_problem(name, seed=DEF_SEED):
    """Return the SuiteProblem called name; raise ValueError if there is none."""
    for entry in suite_problems(seed):
        if entry.name == name:
            return entry
    raise ValueError("unknown problem '%s'; available problems: %s" %
                     (name, ", ".join(entry.name for entry in suite_problems(seed))))
#find_problem
