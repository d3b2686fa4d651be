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
PANOC: proximal gradient steps accelerated by quasi-Newton directions,
globalized by a backtracking line search on the forward-backward
envelope.

Two line searches are available.  The original one accepts the
candidate x+ = x + (1-tau) p + tau q when

    phi_gamma(x+) <= phi_gamma(x) - sigma |p|^2

and adapts the step size afterwards.  The improved one first adapts the
step size at the candidate and tests phi_gamma+(x+) on the left-hand
side, so that candidates which would force the step size down are
rejected.
"""
import enum
import time

import numpy as np

from .io import try_write_pipe
from .lbfgs import LbfgsBuffer, DEF_MEMORY
from .problem import EvalCounters, NotFiniteError, SolveStatus, project
from .prox import DEF_SIGMA_COEFF, eval_fbe, initial_step_size_state, update_step_size

# Default values for parameters are specified below.

# Default maximum number of PANOC iterations.
DEF_MAX_ITER = 1000

# Default tolerance on |x - Pi_C(x - grad psi(x))|_inf.
DEF_EPSILON = 1e-8

# Below this tau, the improved line search takes the plain proximal
# gradient step.
DEF_TAU_MIN = 1. / 256

# Default maximum number of line search trials per iteration; the last
# trial always takes tau = 0.
DEF_MAX_LS_ITER = 20


class LineSearch(enum.Enum):
    ORIGINAL = "original"
    IMPROVED = "improved"
#LineSearch


class PanocParams:
    """Parameters of a PANOC solve."""

    def __init__(self, max_iter=DEF_MAX_ITER, epsilon=DEF_EPSILON, tau_min=DEF_TAU_MIN,
                 line_search=LineSearch.ORIGINAL, max_ls_iter=DEF_MAX_LS_ITER,
                 sigma_coeff=DEF_SIGMA_COEFF, lipschitz0=None, max_time=None):
        self.max_iter = int(max_iter)
        self.epsilon = float(epsilon)
        self.tau_min = float(tau_min)
        self.line_search = LineSearch(line_search)
        self.max_ls_iter = int(max_ls_iter)
        self.sigma_coeff = float(sigma_coeff)
        self.lipschitz0 = lipschitz0
        self.max_time = max_time
        if not 0 < self.tau_min < 1:
            raise ValueError("tau_min must lie in (0, 1), got %r" % tau_min)
        if self.epsilon <= 0:
            raise ValueError("tolerance epsilon must be positive, got %r" % epsilon)
        if self.max_ls_iter < 1:
            raise ValueError("at least one line search trial is required")
        if not 0 < self.sigma_coeff < 1:
            raise ValueError("sigma_coeff must lie in (0, 1), got %r" % sigma_coeff)
        if lipschitz0 is not None and lipschitz0 <= 0:
            raise ValueError("initial Lipschitz estimate must be positive")
    #__init__

    def replace(self, **changes):
        """Return a copy with the given parameters changed."""
        params = dict(self.__dict__)
        params.update(changes)
        return PanocParams(**params)
    #replace
#PanocParams


class PanocResult:
    def __init__(self, x, status, iterations, residual_inf, counters, psi=None, gamma=None,
                 ls_backtracks=0, ls_forced=0, gamma_reductions=0):
        self.x = x
        self.status = status
        self.iterations = iterations
        self.residual_inf = residual_inf
        self.counters = counters
        self.psi = psi
        self.gamma = gamma
        self.ls_backtracks = ls_backtracks
        self.ls_forced = ls_forced
        self.gamma_reductions = gamma_reductions
    #__init__

    def __repr__(self):
        return "PanocResult(status=%s, iterations=%i, residual_inf=%g)" % (
            self.status, self.iterations, self.residual_inf)
    #__repr__
#PanocResult


class DirectionProvider:
    """
    Source of the quasi-Newton direction q for PANOC.  compute() must
    not modify its arguments.
    """

    def initialize(self, x0, p0, grad0, gamma):
        pass
    #initialize

    def update(self, x_old, x_new, p_old, p_new, grad_old, grad_new, gamma, step_size_changed):
        pass
    #update

    def compute(self, x, p, gamma, grad_psi_x):
        raise NotImplementedError
    #compute
#DirectionProvider


class LbfgsDirection(DirectionProvider):
    """
    L-BFGS on the fixed-point residual.  The pairs are s = x+ - x and
    y = gamma (R(x+) - R(x)) = p - p+, so the estimate approximates the
    inverse Jacobian of gamma R and q = H p.  With an empty buffer this
    is the proximal gradient step itself.  The buffer is cleared when
    the step size changes.
    """

    def __init__(self, buffer):
        self.buffer = buffer
    #__init__

    def initialize(self, x0, p0, grad0, gamma):
        self.buffer.reset()
    #initialize

    def update(self, x_old, x_new, p_old, p_new, grad_old, grad_new, gamma, step_size_changed):
        if step_size_changed:
            self.buffer.reset()
            return
        self.buffer.push(x_new - x_old, p_old - p_new)
    #update

    def compute(self, x, p, gamma, grad_psi_x):
        return self.buffer.apply(p)
    #compute
#LbfgsDirection


def lbfgs_direction_provider(buffer):
    return LbfgsDirection(buffer)
#lbfgs_direction_provider


def make_lbfgs_direction(oracle, memory=DEF_MEMORY):
    """Return a fresh LbfgsDirection for the given oracle."""
    return LbfgsDirection(LbfgsBuffer(oracle.n, memory))
#make_lbfgs_direction


def residual_inf(x, grad_psi_x, box_c):
    """Return |x - Pi_C(x - grad psi(x))|_inf (unit step criterion)."""
    if not x.shape[0]:
        return 0.
    return float(np.max(np.abs(x - project(box_c, x - grad_psi_x))))
#residual_inf


def panoc_solve(oracle, x0, params=None, direction=None, callback=None, reportfile=None):
    """
    Minimize oracle.psi over oracle.box_c starting from x0.

    direction is a DirectionProvider (default: L-BFGS on the residual).
    If given, callback(info) is called after each accepted step with a
    dict describing the iteration.  If reportfile is a writable handle,
    one line per iteration is written to it.
    """
    if params is None:
        params = PanocParams()
    if direction is None:
        direction = make_lbfgs_direction(oracle)
    counters_start = (oracle.counters.snapshot()
                      if oracle.counters is not None else EvalCounters())
    improved = params.line_search is LineSearch.IMPROVED
    start_time = time.monotonic()

    x = np.asarray(x0, dtype=float)
    if not np.isfinite(x).all():
        raise ValueError("initial guess must be finite")
    x = project(oracle.box_c, x)

    k = 0
    stats = {"ls_backtracks": 0, "ls_forced": 0, "gamma_reductions": 0}
    residual = np.inf
    psi_x = None
    state = None
    x_hat = None

    def result(status):
        # The iterates may leave C; the projected gradient step never does.
        counters = (oracle.counters - counters_start
                    if oracle.counters is not None else EvalCounters())
        return PanocResult(x if x_hat is None else x_hat, status, k, residual, counters,
                           psi_x, None if state is None else state.gamma, **stats)
    #result

    try:
        psi_x = oracle.psi(x)
        grad_x = oracle.grad_psi(x)
        state = initial_step_size_state(oracle, x, grad_x, params.lipschitz0, params.sigma_coeff)
        gamma0 = state.gamma
        state, x_hat, p, psi_x, grad_x = update_step_size(oracle, x, state, psi_x, grad_x)
        if state.gamma != gamma0:
            stats["gamma_reductions"] += 1
        direction.initialize(x, p, grad_x, state.gamma)
        if reportfile:
            try_write_pipe(reportfile, "%5s %15s %15s %11s %11s %9s\n" %
                ("iter", "psi", "fbe", "gamma", "|p|", "tau"))

        while True:
            residual = residual_inf(x, grad_x, oracle.box_c)
            if residual <= params.epsilon:
                return result(SolveStatus.CONVERGED)
            if k >= params.max_iter:
                return result(SolveStatus.MAX_ITER)
            if params.max_time is not None and time.monotonic() - start_time > params.max_time:
                return result(SolveStatus.INTERRUPTED)

            phi_x = eval_fbe(oracle, x, psi_x, grad_x, state.gamma)
            norm_sq_p = np.dot(p, p)
            decrease = state.sigma * norm_sq_p
            try:
                q = direction.compute(x, p, state.gamma, grad_x)
            except NotFiniteError:
                q = p
            if not np.isfinite(q).all():
                q = p

            tau = 1.
            for ls_iter in range(params.max_ls_iter):
                if ls_iter == params.max_ls_iter - 1 or (improved and tau < params.tau_min):
                    tau = 0.
                if tau:
                    x_new = x + (1 - tau) * p + tau * q
                else:
                    x_new = x_hat
                try:
                    psi_new = oracle.psi(x_new)
                    grad_new = oracle.grad_psi(x_new)
                    if improved:
                        # Step size and prox step at the candidate come first.
                        state_new, x_hat_new, p_new, _, _ = update_step_size(
                            oracle, x_new, state, psi_new, grad_new)
                        phi_new = eval_fbe(oracle, x_new, psi_new, grad_new, state_new.gamma)
                    else:
                        phi_new = eval_fbe(oracle, x_new, psi_new, grad_new, state.gamma)
                except NotFiniteError:
                    # Only the proximal gradient step may end the solve.
                    if not tau:
                        raise
                    stats["ls_backtracks"] += 1
                    tau /= 2
                    continue
                if phi_new <= phi_x - decrease or not tau:
                    break
                stats["ls_backtracks"] += 1
                tau /= 2
            forced = not tau and not phi_new <= phi_x - decrease
            if forced:
                stats["ls_forced"] += 1

            if not improved:
                state_new, x_hat_new, p_new, _, _ = update_step_size(
                    oracle, x_new, state, psi_new, grad_new)
            gamma_changed = state_new.gamma != state.gamma
            if gamma_changed:
                stats["gamma_reductions"] += 1

            if callback is not None:
                callback({
                    "k": k, "x": x, "x_new": x_new, "p": p, "q": q, "tau": tau,
                    "grad_psi_x": grad_x, "grad_psi_new": grad_new,
                    "gamma": state.gamma, "gamma_new": state_new.gamma,
                    "sigma": state.sigma, "fbe": phi_x,
                    "fbe_new_old_gamma": eval_fbe(oracle, x_new, psi_new, grad_new, state.gamma),
                    "fbe_new_new_gamma": eval_fbe(
                        oracle, x_new, psi_new, grad_new, state_new.gamma),
                    "forced": forced, "line_search": params.line_search})
            if reportfile:
                try_write_pipe(reportfile, "%5i %15.8g %15.8g %11.4g %11.4g %9.4g\n" %
                    (k, psi_x, phi_x, state.gamma, np.sqrt(norm_sq_p), tau))

            direction.update(x, x_new, p, p_new, grad_x, grad_new, state_new.gamma,
                             gamma_changed)
            x, psi_x, grad_x = x_new, psi_new, grad_new
            x_hat, p, state = x_hat_new, p_new, state_new
            k += 1
    except NotFiniteError as err:
        if reportfile:
            try_write_pipe(reportfile, "PANOC stopped at iteration %i: %s\n" % (k, err))
        return result(SolveStatus.NOT_FINITE)
#panoc_solve
