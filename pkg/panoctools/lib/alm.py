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
Augmented Lagrangian outer loop.

The constraints g(x) in D are relaxed with a slack z in D and a
diagonal penalty Sigma.  Minimizing over z in closed form leaves

    psi(x; y) = f(x) + 1/2 dist_Sigma^2(g(x) + Sigma^-1 y, D)

with gradient  grad f(x) + grad g(x)^T y_hat(x),  where

    y_hat(x) = Sigma (g(x) + Sigma^-1 y - Pi_D(g(x) + Sigma^-1 y)).

psi is minimized over x in C by PANOC; then the multipliers and the
penalties are updated, and the inner tolerance is tightened.
"""
import time

import numpy as np

from .io import try_write_pipe
from .panoc import PanocParams, make_lbfgs_direction, panoc_solve, residual_inf
from .problem import NotFiniteError, SolveStatus, as_vector, dist_sq_weighted, project
from .prox import SmoothOracle

# Default values for parameters are specified below.

# Default initial penalty factor, the same for every constraint.
DEF_SIGMA0 = 1.

# Default factor Delta by which penalties of violated constraints grow.
DEF_DELTA_GROWTH = 10.

# A constraint's penalty only grows if its violation did not shrink by
# at least this factor theta.
DEF_THETA = 0.25

# Default upper bound on the penalty factors.
DEF_SIGMA_MAX = 1e9

# Default bound M on the multipliers, Y = [-M, M]^m.
DEF_Y_MAX = 1e9

# Default initial inner tolerance.
DEF_EPS0 = 1.

# Default final tolerances epsilon (stationarity) and delta (feasibility).
DEF_EPS_FINAL = 1e-3
DEF_DELTA_FINAL = 1e-3

# Default factor by which the inner tolerance shrinks per outer iteration.
DEF_RHO_EPS = 0.1

# Default maximum number of outer iterations.
DEF_MAX_OUTER = 100


class AlmParams:
    """Parameters of the augmented Lagrangian outer loop."""

    def __init__(self, sigma0=DEF_SIGMA0, delta_growth=DEF_DELTA_GROWTH, theta=DEF_THETA,
                 sigma_max=DEF_SIGMA_MAX, y_max=DEF_Y_MAX, eps0=DEF_EPS0,
                 eps_final=DEF_EPS_FINAL, delta_final=DEF_DELTA_FINAL, rho_eps=DEF_RHO_EPS,
                 max_outer=DEF_MAX_OUTER, scale_sigma0=False, max_time=None):
        self.sigma0 = float(sigma0)
        self.delta_growth = float(delta_growth)
        self.theta = float(theta)
        self.sigma_max = float(sigma_max)
        self.y_max = float(y_max)
        self.eps0 = float(eps0)
        self.eps_final = float(eps_final)
        self.delta_final = float(delta_final)
        self.rho_eps = float(rho_eps)
        self.max_outer = int(max_outer)
        self.scale_sigma0 = bool(scale_sigma0)
        self.max_time = max_time
        if not 0 < self.theta < 1:
            raise ValueError("theta must lie in (0, 1), got %r" % theta)
        if self.delta_growth <= 1:
            raise ValueError("penalty growth factor must exceed 1, got %r" % delta_growth)
        if self.eps_final <= 0 or self.delta_final <= 0:
            raise ValueError("final tolerances must be positive")
        if not 0 < self.rho_eps < 1:
            raise ValueError("tolerance shrink factor must lie in (0, 1), got %r" % rho_eps)
        if self.sigma0 <= 0 or self.sigma_max < self.sigma0:
            raise ValueError("need 0 < sigma0 <= sigma_max")
        if self.y_max <= 0:
            raise ValueError("multiplier bound must be positive")
        if self.max_outer < 1:
            raise ValueError("at least one outer iteration is required")
    #__init__

    def replace(self, **changes):
        params = dict(self.__dict__)
        params.update(changes)
        return AlmParams(**params)
    #replace
#AlmParams


class AlmState:
    """Iterate of the outer loop."""

    def __init__(self, x, y, sigma, eps_inner, prev_error=None, outer_iter=0):
        self.x = x
        self.y = y
        self.sigma = sigma
        self.eps_inner = eps_inner
        self.prev_error = (np.full(y.shape[0], np.inf) if prev_error is None
                           else prev_error)
        self.outer_iter = outer_iter
    #__init__
#AlmState


class SolveReport:
    """Outcome of an augmented Lagrangian solve."""

    def __init__(self, status, x, y, sigma, y_inner, outer_iterations, inner_iterations,
                 counters, stationarity_inf, constraint_violation_inf, eps_inner,
                 ls_backtracks=0, ls_forced=0, gamma_reductions=0, wall_time=None):
        self.status = status
        self.x = x
        self.y = y
        self.sigma = sigma
        self.y_inner = y_inner
        self.outer_iterations = outer_iterations
        self.inner_iterations = inner_iterations
        self.counters = counters
        self.stationarity_inf = stationarity_inf
        self.constraint_violation_inf = constraint_violation_inf
        self.eps_inner = eps_inner
        self.ls_backtracks = ls_backtracks
        self.ls_forced = ls_forced
        self.gamma_reductions = gamma_reductions
        self.wall_time = wall_time
    #__init__

    @property
    def converged(self):
        return self.status is SolveStatus.CONVERGED
    #converged

    def as_dict(self):
        """Return a JSON-serializable summary (without the vectors)."""
        return {
            "status": str(self.status),
            "outer_iters": self.outer_iterations,
            "inner_iters": self.inner_iterations,
            "counters": self.counters.as_dict(),
            "stationarity_inf": self.stationarity_inf,
            "constraint_violation_inf": self.constraint_violation_inf,
            "eps_inner": self.eps_inner,
            "ls_backtracks": self.ls_backtracks,
            "ls_forced": self.ls_forced,
            "gamma_reductions": self.gamma_reductions,
            "wall_time_s": self.wall_time}
    #as_dict

    def __repr__(self):
        return "SolveReport(status=%s, outer=%i, inner=%i)" % (
            self.status, self.outer_iterations, self.inner_iterations)
    #__repr__
#SolveReport


def eval_zhat(g_x, y, sigma, box_d):
    """Return z_hat = Pi_D(g(x) + Sigma^-1 y)."""
    return project(box_d, g_x + y / sigma)
#eval_zhat


def eval_yhat(g_x, y, sigma, box_d):
    """Return y_hat = Sigma (g(x) + Sigma^-1 y - Pi_D(g(x) + Sigma^-1 y))."""
    shifted = g_x + y / sigma
    return sigma * (shifted - project(box_d, shifted))
#eval_yhat


def _check_finite(value, what):
    if not np.isfinite(value).all():
        raise NotFiniteError("%s is not finite" % what)
    return value
#_check_finite


def eval_psi(problem, x, y, sigma, g_x=None):
    """
    Return (psi, z_hat) at x.  Evaluates f and g once each; g(x) may be
    passed in if it is already known.
    """
    f_x = _check_finite(problem.eval_f(x), "f(x)")
    if g_x is None:
        g_x = _check_finite(problem.eval_g(x), "g(x)")
    if not problem.m:
        return f_x, g_x
    shifted = g_x + y / sigma
    return f_x + 0.5 * dist_sq_weighted(shifted, problem.box_d, sigma), \
           project(problem.box_d, shifted)
#eval_psi


def eval_grad_psi(problem, x, y, sigma, g_x=None):
    """
    Return grad f(x) + grad g(x)^T y_hat(x).  Evaluates grad f and the
    adjoint product once each, and g unless g_x is passed in.
    """
    grad = _check_finite(problem.eval_grad_f(x), "gradient of f")
    if not problem.m:
        return grad
    if g_x is None:
        g_x = _check_finite(problem.eval_g(x), "g(x)")
    y_hat = eval_yhat(g_x, y, sigma, problem.box_d)
    return grad + _check_finite(problem.eval_grad_g_prod(x, y_hat), "adjoint product of g")
#eval_grad_psi


class AugmentedLagrangianOracle(SmoothOracle):
    """
    psi(.; y) for fixed multipliers y and penalties sigma, as a PANOC
    oracle.  g(x) of the last point at which psi was evaluated is
    reused by the gradient at that same point.
    """

    def __init__(self, problem, y, sigma):
        self.problem = problem
        self.y = y
        self.sigma = sigma
        self._last_x = None
        self._last_g = None
        super().__init__(self._psi_value, self._psi_gradient, problem.box_c, problem.counters)
    #__init__

    def _cached_g(self, x):
        if self._last_x is not None and np.array_equal(x, self._last_x):
            return self._last_g
        return None
    #_cached_g

    def _psi_value(self, x):
        g_x = _check_finite(self.problem.eval_g(x), "g(x)")
        self._last_x = np.array(x)
        self._last_g = g_x
        return eval_psi(self.problem, x, self.y, self.sigma, g_x)[0]
    #_psi_value

    def _psi_gradient(self, x):
        return eval_grad_psi(self.problem, x, self.y, self.sigma, self._cached_g(x))
    #_psi_gradient
#AugmentedLagrangianOracle


def update_multipliers(y, sigma, g_x, zhat, y_max):
    """
    Return Pi_Y(y + Sigma (g(x) - z_hat)) with Y = [-y_max, y_max]^m.
    Evaluated in the same order as eval_yhat, so the result equals the
    clamped y_hat exactly.
    """
    return np.clip(sigma * ((g_x + y / sigma) - zhat), -y_max, y_max)
#update_multipliers


def update_sigma(sigma, e_now, e_prev, theta, delta_growth, sigma_max):
    """
    Increase the penalties of the constraints whose violation did not
    decrease by a factor theta:

        sigma_i <- min(sigma_max, sigma_i max(1, Delta |e_i| / |e|_inf))
    """
    sigma = np.array(sigma, dtype=float)
    abs_e = np.abs(e_now)
    norm_e = np.max(abs_e) if abs_e.shape[0] else 0.
    if not norm_e:
        return sigma
    grow = abs_e > theta * np.abs(e_prev)
    factor = np.maximum(1., delta_growth * abs_e / norm_e)
    sigma[grow] = np.minimum(sigma_max, sigma[grow] * factor[grow])
    return sigma
#update_sigma


def active_constraints(g_x, y, sigma, box_d):
    """Return the indices i with g_i(x) + y_i/sigma_i outside D_i."""
    shifted = g_x + y / sigma
    return np.flatnonzero((shifted < box_d.lower) | (box_d.upper < shifted))
#active_constraints


def verify_kkt(problem, x, y, sigma):
    """
    Recompute, from fresh evaluations at x, the stationarity
    |x - Pi_C(x - grad f(x) - grad g(x)^T y_hat)|_inf and the
    constraint violation |g(x) - z_hat|_inf for the multipliers y and
    penalties sigma used by the last inner solve.  Returns
    (stationarity, violation, y_hat).
    """
    grad = problem.eval_grad_f(x)
    if problem.m:
        g_x = problem.eval_g(x)
        zhat = eval_zhat(g_x, y, sigma, problem.box_d)
        y_hat = eval_yhat(g_x, y, sigma, problem.box_d)
        grad = grad + problem.eval_grad_g_prod(x, y_hat)
        violation = float(np.max(np.abs(g_x - zhat)))
    else:
        y_hat = np.zeros(0)
        violation = 0.
    return residual_inf(x, grad, problem.box_c), violation, y_hat
#verify_kkt


def initial_sigma(problem, x0, params):
    """Return the initial penalty vector."""
    sigma0 = params.sigma0
    if params.scale_sigma0 and problem.m:
        g_x = problem.eval_g(x0)
        violation = g_x - project(problem.box_d, g_x)
        sigma0 = max(1., abs(problem.eval_f(x0))) / max(1., 0.5 * np.dot(violation, violation))
        sigma0 = min(sigma0 * params.sigma0, params.sigma_max)
    return np.full(problem.m, sigma0)
#initial_sigma


def alm_solve(problem, x0=None, y0=None, params=None, panoc_params=None, make_direction=None,
              reportfile=None):
    """
    Solve problem by the augmented Lagrangian method with PANOC as the
    inner solver.  make_direction(oracle) returns a fresh direction
    provider for each inner solve (default: L-BFGS on the residual).
    Returns (x, y, report) where report is a SolveReport.  Without
    constraints a single inner solve at the final tolerance is done.
    """
    if params is None:
        params = AlmParams()
    if panoc_params is None:
        panoc_params = PanocParams()
    if make_direction is None:
        make_direction = make_lbfgs_direction
    start_time = time.monotonic()
    counters_start = problem.counters.snapshot()

    x = np.zeros(problem.n) if x0 is None else as_vector(x0, problem.n, "initial guess")
    y = np.zeros(problem.m) if y0 is None else as_vector(y0, problem.m, "initial multipliers")
    if not (np.isfinite(x).all() and np.isfinite(y).all()):
        raise ValueError("initial guess and multipliers must be finite")
    x = project(problem.box_c, x)
    y = np.clip(y, -params.y_max, params.y_max)
    state = AlmState(x, y, initial_sigma(problem, x, params),
                     params.eps0 if problem.m else params.eps_final)
    totals = {"inner_iterations": 0, "ls_backtracks": 0, "ls_forced": 0,
              "gamma_reductions": 0}
    y_inner, sigma_inner = state.y, state.sigma

    if reportfile:
        try_write_pipe(reportfile, "%5s %7s %12s %11s %11s %11s %11s\n" % (
            "outer", "inner", "status", "eps", "|e|_inf", "max sigma", "|y|_inf"))

    def report(status):
        counters = problem.counters - counters_start
        stationarity, violation, _ = verify_kkt(problem, state.x, y_inner, sigma_inner)
        return state.x, state.y, SolveReport(
            status, state.x, state.y, state.sigma, y_inner, state.outer_iter,
            totals["inner_iterations"], counters, stationarity,
            violation, state.eps_inner, totals["ls_backtracks"], totals["ls_forced"],
            totals["gamma_reductions"], time.monotonic() - start_time)
    #report

    try:
        while state.outer_iter < params.max_outer:
            inner_params = panoc_params.replace(epsilon=state.eps_inner)
            if params.max_time is not None:
                remaining = params.max_time - (time.monotonic() - start_time)
                if remaining <= 0:
                    return report(SolveStatus.INTERRUPTED)
                if inner_params.max_time is None or inner_params.max_time > remaining:
                    inner_params = inner_params.replace(max_time=remaining)
            y_inner, sigma_inner = state.y, state.sigma
            oracle = AugmentedLagrangianOracle(problem, state.y, state.sigma)
            inner = panoc_solve(oracle, state.x, inner_params, make_direction(oracle))
            state.outer_iter += 1
            state.x = inner.x
            for key in totals:
                totals[key] += getattr(inner, key if key != "inner_iterations" else "iterations")
            if inner.status in (SolveStatus.NOT_FINITE, SolveStatus.INTERRUPTED):
                return report(inner.status)

            if not problem.m:
                return report(inner.status)

            g_x = problem.eval_g(state.x)
            zhat = eval_zhat(g_x, state.y, state.sigma, problem.box_d)
            error = g_x - zhat
            violation = float(np.max(np.abs(error)))
            new_y = update_multipliers(state.y, state.sigma, g_x, zhat, params.y_max)
            if reportfile:
                try_write_pipe(reportfile, "%5i %7i %12s %11.4g %11.4g %11.4g %11.4g\n" % (
                    state.outer_iter, inner.iterations, inner.status, state.eps_inner,
                    violation, np.max(state.sigma), np.max(np.abs(new_y))))
            if (inner.status is SolveStatus.CONVERGED and inner.residual_inf <= params.eps_final
                    and violation <= params.delta_final):
                state.y = new_y
                return report(SolveStatus.CONVERGED)

            state.sigma = update_sigma(state.sigma, error, state.prev_error, params.theta,
                                       params.delta_growth, params.sigma_max)
            state.prev_error = error
            state.y = new_y
            state.eps_inner = max(params.rho_eps * state.eps_inner, params.eps_final)
    except KeyboardInterrupt:
        return report(SolveStatus.INTERRUPTED)
    return report(SolveStatus.MAX_OUTER_ITER)
#alm_solve


class SolverConfig:
    """
    A complete solver setup: outer parameters, inner parameters and the
    factory of inner direction providers.
    """

    def __init__(self, alm_params=None, panoc_params=None, make_direction=None, name=None):
        self.alm_params = AlmParams() if alm_params is None else alm_params
        self.panoc_params = PanocParams() if panoc_params is None else panoc_params
        self.make_direction = make_lbfgs_direction if make_direction is None else make_direction
        self.name = name
    #__init__

    def solve(self, problem, x0=None, y0=None, reportfile=None):
        return alm_solve(problem, x0, y0, self.alm_params, self.panoc_params,
                         self.make_direction, reportfile)
    #solve
#SolverConfig
