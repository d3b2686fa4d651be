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
Problem representation shared by all solvers.

A problem is  minimize f(x)  subject to  x in C  and  g(x) in D,  where
C and D are boxes with (possibly infinite) per-coordinate bounds.  The
problem supplies f, its gradient, g, and the adjoint product
grad_g(x)^T v; it never has to form a Jacobian.
"""
import enum

import numpy as np

# Machine epsilon of the floating point type used throughout.
EPS_MACH = np.finfo(float).eps


class NotFiniteError(ArithmeticError):
    """An evaluation or step size became NaN, infinite or degenerate."""
    pass
#NotFiniteError


class SolveStatus(enum.Enum):
    CONVERGED = "Converged"
    MAX_ITER = "MaxIter"
    MAX_OUTER_ITER = "MaxOuterIter"
    NOT_FINITE = "NotFinite"
    INTERRUPTED = "Interrupted"

    def __str__(self):
        return self.value
    #__str__
#SolveStatus


def as_vector(value, n=None, name="vector"):
    """Return value as a 1-D float array, optionally of length n."""
    vector = np.array(value, dtype=float, ndmin=1)
    if vector.ndim != 1:
        raise ValueError("%s must be one-dimensional, got shape %s" % (name, vector.shape))
    if n is not None and vector.shape[0] != n:
        raise ValueError("%s has length %i, expected %i" % (name, vector.shape[0], n))
    return vector
#as_vector


class BoxSet:
    """
    Rectangular set [lower, upper] with extended-real bounds.  Missing
    bounds are encoded as -inf and +inf.
    """

    def __init__(self, lower, upper):
        self.lower = as_vector(lower, name="lower bound")
        self.upper = as_vector(upper, self.lower.shape[0], "upper bound")
        if np.isnan(self.lower).any() or np.isnan(self.upper).any():
            raise ValueError("box bounds cannot be NaN")
        if (self.lower > self.upper).any():
            i = int(np.argmax(self.lower > self.upper))
            raise ValueError("empty box: lower bound %r exceeds upper bound %r at index %i" %
                (self.lower[i], self.upper[i], i))
        self.lower.setflags(write=False)
        self.upper.setflags(write=False)
    #__init__

    @classmethod
    def unbounded(cls, n):
        return cls(np.full(n, -np.inf), np.full(n, np.inf))
    #unbounded

    @classmethod
    def uniform(cls, n, lower, upper):
        return cls(np.full(n, float(lower)), np.full(n, float(upper)))
    #uniform

    @property
    def n(self):
        return self.lower.shape[0]
    #n

    def contains(self, v):
        return bool(((self.lower <= v) & (v <= self.upper)).all())
    #contains

    def __repr__(self):
        return "BoxSet(n=%i)" % self.n
    #__repr__
#BoxSet


def project(box, v):
    """Return the Euclidean projection of v onto box."""
    v = np.asarray(v, dtype=float)
    if v.shape != box.lower.shape:
        raise ValueError("cannot project vector of shape %s onto box of dimension %i" %
            (v.shape, box.n))
    return np.minimum(np.maximum(v, box.lower), box.upper)
#project


def dist_sq_weighted(v, box, sigma_diag):
    """Return the squared distance from v to box in the sigma-weighted norm."""
    sigma_diag = np.asarray(sigma_diag, dtype=float)
    if (sigma_diag <= 0).any():
        raise ValueError("weights of the distance must be positive")
    d = v - project(box, v)
    return float(np.dot(sigma_diag * d, d))
#dist_sq_weighted


class EvalCounters:
    """Number of evaluations of each problem function."""

    FIELDS = ("f_evals", "grad_f_evals", "g_evals", "grad_g_prod_evals",
              "psi_evals", "grad_psi_evals")

    def __init__(self, **counts):
        for field in self.FIELDS:
            setattr(self, field, int(counts.pop(field, 0)))
        if counts:
            raise ValueError("unknown counters: %s" % ", ".join(sorted(counts)))
    #__init__

    def reset(self):
        for field in self.FIELDS:
            setattr(self, field, 0)
    #reset

    def snapshot(self):
        return EvalCounters(**self.as_dict())
    #snapshot

    def as_dict(self):
        return {field: getattr(self, field) for field in self.FIELDS}
    #as_dict

    def __add__(self, other):
        return EvalCounters(**{field: getattr(self, field) + getattr(other, field)
                               for field in self.FIELDS})
    #__add__

    def __sub__(self, other):
        return EvalCounters(**{field: getattr(self, field) - getattr(other, field)
                               for field in self.FIELDS})
    #__sub__

    def __eq__(self, other):
        return isinstance(other, EvalCounters) and self.as_dict() == other.as_dict()
    #__eq__

    def __repr__(self):
        return "EvalCounters(%s)" % ", ".join(
            "%s=%i" % (field, getattr(self, field)) for field in self.FIELDS)
    #__repr__
#EvalCounters


class ProblemSpec:
    """
    A constrained problem with counted evaluation callbacks.

    The callbacks f, grad_f, g and grad_g_prod are stored as given and
    must be deterministic.  Use the eval_* methods to call them: these
    validate dimensions and count every call in self.counters.  A
    ProblemSpec is meant to be used by a single solver at a time.
    """

    def __init__(self, n, m, box_c, box_d, f, grad_f, g, grad_g_prod, name=None):
        self.n = int(n)
        self.m = int(m)
        if box_c.n != self.n:
            raise ValueError("box C has dimension %i, expected %i" % (box_c.n, self.n))
        if box_d.n != self.m:
            raise ValueError("box D has dimension %i, expected %i" % (box_d.n, self.m))
        self.box_c = box_c
        self.box_d = box_d
        self.f = f
        self.grad_f = grad_f
        self.g = g
        self.grad_g_prod = grad_g_prod
        self.name = name
        self.counters = EvalCounters()
    #__init__

    def eval_f(self, x):
        self.counters.f_evals += 1
        return float(self.f(x))
    #eval_f

    def eval_grad_f(self, x):
        self.counters.grad_f_evals += 1
        return as_vector(self.grad_f(x), self.n, "gradient of f")
    #eval_grad_f

    def eval_g(self, x):
        self.counters.g_evals += 1
        if not self.m:
            return np.zeros(0)
        return as_vector(self.g(x), self.m, "g(x)")
    #eval_g

    def eval_grad_g_prod(self, x, v):
        self.counters.grad_g_prod_evals += 1
        if not self.m:
            return np.zeros(self.n)
        return as_vector(self.grad_g_prod(x, as_vector(v, self.m, "multiplier")),
                         self.n, "adjoint product of g")
    #eval_grad_g_prod

    def __repr__(self):
        return "ProblemSpec(%sn=%i, m=%i)" % (
            "" if self.name is None else "%r, " % self.name, self.n, self.m)
    #__repr__
#ProblemSpec
