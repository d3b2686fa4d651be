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
Forward-backward machinery for  minimize psi(x) + indicator_C(x).

The forward-backward operator is a projected gradient step
x_hat = Pi_C(x - gamma * grad psi(x)).  Its step p = x_hat - x, the
fixed-point residual -p/gamma, the forward-backward envelope (FBE) and
the step size selection by quadratic upper bound all live here.
"""
import numpy as np

from .problem import EPS_MACH, NotFiniteError, project

# Default values for parameters are specified below.

# Fraction of the admissible interval (0, (1-gamma*L)/(2*gamma)) used
# for the decrease coefficient sigma.
DEF_SIGMA_COEFF = 0.1

# Relative perturbation for the initial Lipschitz estimate.
DEF_LIPSCHITZ_DELTA = 1e-4

# Bounds on the initial Lipschitz estimate.
LIPSCHITZ_MIN = 1e-10
LIPSCHITZ_MAX = 1e+10

# The initial step size is this factor divided by the initial Lipschitz
# estimate.
INITIAL_GAMMA_FACTOR = 0.95

# The step size may shrink to this fraction of its initial value before
# the solve is aborted.
GAMMA_MIN_FACTOR = 1e-12

# Slack of the quadratic upper bound test, relative to max(1, |psi(x)|),
# in units of machine epsilon.
QUB_SLACK = 10


class SmoothOracle:
    """
    The smooth part psi of a PANOC problem plus the box C.  Every call
    to psi or grad_psi is counted in counters (an EvalCounters) if one
    is given.
    """

    def __init__(self, psi, grad_psi, box_c, counters=None):
        self._psi = psi
        self._grad_psi = grad_psi
        self.box_c = box_c
        self.counters = counters
    #__init__

    @property
    def n(self):
        return self.box_c.n
    #n

    def psi(self, x):
        if self.counters is not None:
            self.counters.psi_evals += 1
        value = float(self._psi(x))
        if not np.isfinite(value):
            raise NotFiniteError("psi(x) is not finite")
        return value
    #psi

    def grad_psi(self, x):
        if self.counters is not None:
            self.counters.grad_psi_evals += 1
        grad = np.asarray(self._grad_psi(x), dtype=float)
        if not np.isfinite(grad).all():
            raise NotFiniteError("gradient of psi is not finite")
        return grad
    #grad_psi
#SmoothOracle


class StepSizeState:
    """Step size gamma, Lipschitz estimate L and decrease coefficient sigma."""

    def __init__(self, gamma, lipschitz, sigma_coeff=DEF_SIGMA_COEFF, gamma_min=None):
        if gamma <= 0 or lipschitz <= 0:
            raise ValueError("step size and Lipschitz estimate must be positive")
        self.gamma = float(gamma)
        self.lipschitz = float(lipschitz)
        self.sigma_coeff = float(sigma_coeff)
        self.gamma_min = GAMMA_MIN_FACTOR * self.gamma if gamma_min is None else gamma_min
        self.sigma = compute_sigma(self.gamma, self.lipschitz, self.sigma_coeff)
    #__init__

    def copy(self):
        return StepSizeState(self.gamma, self.lipschitz, self.sigma_coeff, self.gamma_min)
    #copy

    def __repr__(self):
        return "StepSizeState(gamma=%g, lipschitz=%g, sigma=%g)" % (
            self.gamma, self.lipschitz, self.sigma)
    #__repr__
#StepSizeState


def compute_sigma(gamma, lipschitz, sigma_coeff=DEF_SIGMA_COEFF):
    """Return sigma = coeff * (1 - gamma*L) / (2*gamma), at least zero."""
    return max(0., sigma_coeff * (1 - gamma * lipschitz) / (2 * gamma))
#compute_sigma


def prox_grad_step(oracle, x, gamma, grad_psi_x=None):
    """
    Return (x_hat, p) with x_hat = Pi_C(x - gamma * grad psi(x)) and
    p = x_hat - x.  The gradient is evaluated if not given.
    """
    if gamma <= 0:
        raise ValueError("step size must be positive, got %r" % gamma)
    if grad_psi_x is None:
        grad_psi_x = oracle.grad_psi(x)
    elif not np.isfinite(grad_psi_x).all():
        raise NotFiniteError("gradient of psi is not finite")
    x_hat = project(oracle.box_c, x - gamma * grad_psi_x)
    return x_hat, x_hat - x
#prox_grad_step


def fixed_point_residual(p, gamma):
    """Return R_gamma(x) = (x - T_gamma(x)) / gamma = -p / gamma."""
    return -np.asarray(p) / gamma
#fixed_point_residual


def eval_fbe(oracle, x, psi_x, grad_psi_x, gamma):
    """
    Return the forward-backward envelope

        psi(x) - gamma/2 |grad psi(x)|^2 + 1/(2 gamma) dist^2(x - gamma grad psi(x), C)

    from the given value and gradient of psi at x; no evaluations.
    """
    step = x - gamma * grad_psi_x
    dist = step - project(oracle.box_c, step)
    return (psi_x - 0.5 * gamma * np.dot(grad_psi_x, grad_psi_x)
            + np.dot(dist, dist) / (2 * gamma))
#eval_fbe


def qub_holds(oracle, x, x_hat, p, psi_x, grad_psi_x, lipschitz, psi_x_hat=None):
    """
    Return True if the quadratic upper bound

        psi(x_hat) <= psi(x) + grad psi(x)^T p + L/2 |p|^2

    holds, up to a slack of a few ulps of max(1, |psi(x)|).
    """
    if psi_x_hat is None:
        psi_x_hat = oracle.psi(x_hat)
    bound = psi_x + np.dot(grad_psi_x, p) + 0.5 * lipschitz * np.dot(p, p)
    return psi_x_hat <= bound + QUB_SLACK * EPS_MACH * max(1., abs(psi_x))
#qub_holds


def update_step_size(oracle, x, state, psi_x=None, grad_psi_x=None):
    """
    Halve gamma and double L until the quadratic upper bound holds at x.

    Returns (state, x_hat, p, psi_x, grad_psi_x) where x_hat and p are
    the projected gradient step at x under the final step size.  The
    given state is not modified; a new state is returned.  Raises
    NotFiniteError when gamma drops below state.gamma_min.
    """
    if psi_x is None:
        psi_x = oracle.psi(x)
    if grad_psi_x is None:
        grad_psi_x = oracle.grad_psi(x)
    state = state.copy()
    x_hat, p = prox_grad_step(oracle, x, state.gamma, grad_psi_x)
    changed = False
    while True:
        try:
            if qub_holds(oracle, x, x_hat, p, psi_x, grad_psi_x, state.lipschitz):
                break
        except NotFiniteError:
            pass  # A non-finite psi(x_hat) violates the bound.
        state.gamma /= 2
        state.lipschitz *= 2
        changed = True
        if state.gamma < state.gamma_min:
            raise NotFiniteError("step size underflow (gamma = %g)" % state.gamma)
        x_hat, p = prox_grad_step(oracle, x, state.gamma, grad_psi_x)
    if changed:
        state.sigma = compute_sigma(state.gamma, state.lipschitz, state.sigma_coeff)
    return state, x_hat, p, psi_x, grad_psi_x
#update_step_size


def estimate_initial_lipschitz(oracle, x0, grad_psi_x0=None, delta=DEF_LIPSCHITZ_DELTA):
    """
    Estimate the Lipschitz constant of grad psi at x0 by a forward
    difference along d_i = delta * max(1, |x0_i|).  Falls back to 1 if
    the gradient does not change.
    """
    x0 = np.asarray(x0, dtype=float)
    if not np.isfinite(x0).all():
        raise ValueError("initial guess must be finite")
    if grad_psi_x0 is None:
        grad_psi_x0 = oracle.grad_psi(x0)
    d = delta * np.maximum(1., np.abs(x0))
    grad_diff = oracle.grad_psi(x0 + d) - grad_psi_x0
    norm_diff = np.linalg.norm(grad_diff)
    if not norm_diff:
        return 1.
    return float(np.clip(norm_diff / np.linalg.norm(d), LIPSCHITZ_MIN, LIPSCHITZ_MAX))
#estimate_initial_lipschitz


def initial_step_size_state(oracle, x0, grad_psi_x0=None, lipschitz0=None,
                            sigma_coeff=DEF_SIGMA_COEFF):
    """Return the StepSizeState that starts a PANOC solve at x0."""
    if lipschitz0 is None:
        lipschitz0 = estimate_initial_lipschitz(oracle, x0, grad_psi_x0)
    return StepSizeState(INITIAL_GAMMA_FACTOR / lipschitz0, lipschitz0, sigma_coeff)
#initial_step_size_state
