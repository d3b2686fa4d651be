"""Shared problem builders and numerical checks for the tests."""
import numpy as np

from panoctools.lib.problem import BoxSet, ProblemSpec
from panoctools.lib.prox import SmoothOracle


def quadratic_oracle(Q, c=None, box=None):
    """Oracle of psi(x) = 1/2 x^T Q x + c^T x over box (default: unbounded)."""
    Q = np.atleast_2d(np.array(Q, dtype=float))
    n = Q.shape[0]
    c = np.zeros(n) if c is None else np.asarray(c, dtype=float)
    box = BoxSet.unbounded(n) if box is None else box
    return SmoothOracle(lambda x: 0.5 * x.dot(Q).dot(x) + c.dot(x), lambda x: Q.dot(x) + c,
                        box)


def rosenbrock_oracle(box):
    def psi(x):
        return (1 - x[0])**2 + 100 * (x[1] - x[0]**2)**2

    def grad_psi(x):
        return np.array([-2 * (1 - x[0]) - 400 * x[0] * (x[1] - x[0]**2),
                         200 * (x[1] - x[0]**2)])

    return SmoothOracle(psi, grad_psi, box)


def identity_constraint_problem(lower, upper, f=None, grad_f=None):
    """1-D problem with g(x) = x in [lower, upper]; f defaults to zero."""
    return ProblemSpec(
        1, 1, BoxSet.unbounded(1), BoxSet([lower], [upper]),
        f if f is not None else (lambda x: 0.),
        grad_f if grad_f is not None else (lambda x: np.zeros(1)),
        lambda x: np.array(x, dtype=float), lambda x, v: np.array(v, dtype=float))


def central_difference(fun, x, step=1e-6):
    """Central finite-difference gradient of a scalar function."""
    grad = np.zeros_like(x)
    for i in range(x.shape[0]):
        h = step * (1 + abs(x[i]))
        e = np.zeros_like(x)
        e[i] = h
        grad[i] = (fun(x + e) - fun(x - e)) / (2 * h)
    return grad
