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
Structured PANOC directions for box constraints.

After a gradient step, the coordinates that land on or beyond a bound
form the active set K; the rest form J.  The Newton step on the
fixed-point residual then splits into

    q_K = p_K
    H_JJ q_J = -grad_J psi(x) - H_JK q_K

where H is the Hessian of psi.  The J-block is solved approximately by
L-BFGS restricted to J, with the pairs s = x+ - x and
y = grad psi(x+) - grad psi(x) stored in full.  The H_JK q_K term is
either estimated by a finite difference of grad psi or left out.
"""
import numpy as np

from .lbfgs import LbfgsBuffer, DEF_MEMORY
from .panoc import DirectionProvider
from .problem import EPS_MACH, NotFiniteError

# Default values for parameters are specified below.

# Default relative step of the finite-difference Hessian-vector product.
DEF_FD_STEP = np.sqrt(EPS_MACH)


class IndexSplit:
    """Sorted active (K) and inactive (J) coordinate indices."""

    def __init__(self, active, inactive):
        self.active = np.asarray(active, dtype=int)
        self.inactive = np.asarray(inactive, dtype=int)
    #__init__

    def __repr__(self):
        return "IndexSplit(active=%s, inactive=%s)" % (
            self.active.tolist(), self.inactive.tolist())
    #__repr__
#IndexSplit


class StructuredDirParams:
    def __init__(self, include_hessian_vec=False, fd_step=DEF_FD_STEP):
        if fd_step <= 0:
            raise ValueError("finite difference step must be positive, got %r" % fd_step)
        self.include_hessian_vec = bool(include_hessian_vec)
        self.fd_step = float(fd_step)
    #__init__
#StructuredDirParams


def split_indices(x, grad_psi_x, gamma, box_c):
    """Return the IndexSplit of the gradient step x - gamma grad psi(x)."""
    if gamma <= 0:
        raise ValueError("step size must be positive, got %r" % gamma)
    step = x - gamma * grad_psi_x
    is_active = (step <= box_c.lower) | (box_c.upper <= step)
    return IndexSplit(np.flatnonzero(is_active), np.flatnonzero(~is_active))
#split_indices


def fd_hessian_vec_term(oracle, x, q_k_padded, split, fd_step=DEF_FD_STEP, grad_psi_x=None):
    """
    Return the J-rows of (grad psi(x + h q) - grad psi(x)) / h, which
    approximates H_JK q_K for q = q_k_padded (zero outside K).  Costs
    one gradient evaluation besides grad psi(x), also when q is zero.
    """
    norm_q = np.max(np.abs(q_k_padded)) if q_k_padded.shape[0] else 0.
    h = fd_step * (1 + np.max(np.abs(x), initial=0.)) / max(norm_q, EPS_MACH)
    if grad_psi_x is None:
        grad_psi_x = oracle.grad_psi(x)
    grad_shifted = oracle.grad_psi(x + h * q_k_padded)
    return (grad_shifted[split.inactive] - grad_psi_x[split.inactive]) / h
#fd_hessian_vec_term


def structured_direction(oracle, x, p, gamma, grad_psi_x, buffer, params=None, split=None):
    """
    Return the structured quasi-Newton direction q at x, with q_K = p_K
    and q_J from the masked L-BFGS estimate.  Falls back to q = p if
    the finite-difference gradient is not finite.
    """
    if params is None:
        params = StructuredDirParams()
    if split is None:
        split = split_indices(x, grad_psi_x, gamma, oracle.box_c)
    q = np.array(p, dtype=float)
    hv = None
    if params.include_hessian_vec:
        q_k_padded = np.zeros_like(q)
        q_k_padded[split.active] = p[split.active]
        try:
            hv = fd_hessian_vec_term(oracle, x, q_k_padded, split, params.fd_step, grad_psi_x)
        except NotFiniteError:
            return q
        if not np.isfinite(hv).all():
            return q
    if not split.inactive.shape[0]:
        return q
    rhs = -grad_psi_x[split.inactive]
    if hv is not None:
        rhs -= hv
    q[split.inactive] = buffer.apply_masked(rhs, split.inactive)
    return q
#structured_direction


class StructuredLbfgsDirection(DirectionProvider):
    """
    Direction provider for structured PANOC.  Its masked L-BFGS buffer
    approximates the Hessian of psi, which does not depend on the step
    size, so the buffer is kept when gamma changes.
    """

    def __init__(self, oracle, buffer, params=None):
        self.oracle = oracle
        self.buffer = buffer
        self.params = StructuredDirParams() if params is None else params
        self.last_split = None
    #__init__

    def initialize(self, x0, p0, grad0, gamma):
        self.buffer.reset()
        self.last_split = None
    #initialize

    def update(self, x_old, x_new, p_old, p_new, grad_old, grad_new, gamma, step_size_changed):
        self.buffer.push(x_new - x_old, grad_new - grad_old)
    #update

    def compute(self, x, p, gamma, grad_psi_x):
        self.last_split = split_indices(x, grad_psi_x, gamma, self.oracle.box_c)
        return structured_direction(self.oracle, x, p, gamma, grad_psi_x, self.buffer,
                                    self.params, self.last_split)
    #compute
#StructuredLbfgsDirection


def make_structured_direction(oracle, include_hessian_vec=False, memory=DEF_MEMORY,
                              fd_step=DEF_FD_STEP):
    """Return a fresh StructuredLbfgsDirection for the given oracle."""
    return StructuredLbfgsDirection(oracle, LbfgsBuffer(oracle.n, memory, masked=True),
                                    StructuredDirParams(include_hessian_vec, fd_step))
#make_structured_direction
