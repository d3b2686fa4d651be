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

import numpy as np

# Default values for parameters are specified below.

# Default number of (s, y) pairs kept in memory.
DEF_MEMORY = 10

# A pair is only used if y^T s > CURVATURE_EPS * |s|^2.
CURVATURE_EPS = 1e-12


class LbfgsBuffer:
    """
    Ring buffer of (s, y) pairs that applies the limited-memory BFGS
    estimate of an inverse Hessian by the two-loop recursion.

    In standard mode, push() rejects pairs that violate the curvature
    condition.  In masked mode every finite pair is stored in full, and
    the curvature condition is checked on the restricted pair each time
    the estimate is applied to a subset of the coordinates.

    The initial matrix is (s^T y / y^T y) I for the most recent usable
    pair, or the identity if no pair is usable.
    """

    def __init__(self, n, memory=DEF_MEMORY, masked=False, curvature_eps=CURVATURE_EPS):
        if memory < 1:
            raise ValueError("L-BFGS memory must be positive, got %r" % memory)
        self.n = int(n)
        self.memory = int(memory)
        self.masked = bool(masked)
        self.curvature_eps = curvature_eps
        self.s = np.zeros((self.memory, self.n))
        self.y = np.zeros((self.memory, self.n))
        self.count = 0
        self.head = 0  # Slot that receives the next pair.
    #__init__

    def push(self, s, y):
        """Store the pair (s, y); return True if it was stored."""
        s = np.asarray(s, dtype=float)
        y = np.asarray(y, dtype=float)
        if s.shape != (self.n,) or y.shape != (self.n,):
            raise ValueError("L-BFGS pair has shape %s/%s, expected (%i,)" %
                (s.shape, y.shape, self.n))
        if not (np.isfinite(s).all() and np.isfinite(y).all()):
            return False
        if not self.masked and not self._curvature_ok(s, y):
            return False
        self.s[self.head] = s
        self.y[self.head] = y
        self.head = (self.head + 1) % self.memory
        self.count = min(self.count + 1, self.memory)
        return True
    #push

    def reset(self):
        self.count = 0
        self.head = 0
    #reset

    def _curvature_ok(self, s, y):
        return np.dot(y, s) > self.curvature_eps * np.dot(s, s)
    #_curvature_ok

    def slots(self):
        """Return the occupied slots, newest first."""
        return [(self.head - 1 - i) % self.memory for i in range(self.count)]
    #slots

    def apply(self, v):
        """Return H v over all coordinates."""
        return self.apply_masked(v, None)
    #apply

    def apply_masked(self, v_sub, mask):
        """
        Return H v_sub, where H is the estimate built from the pairs
        restricted to the coordinates in mask (an index array; None
        means all coordinates).  Pairs whose restricted curvature is too
        small are skipped for this application only.
        """
        q = np.array(v_sub, dtype=float)
        if mask is None:
            s_all, y_all = self.s, self.y
        else:
            mask = np.asarray(mask, dtype=int)
            s_all, y_all = self.s[:, mask], self.y[:, mask]
        if q.shape != s_all.shape[1:]:
            raise ValueError("vector has shape %s, expected (%i,)" % (q.shape, s_all.shape[1]))

        # Newest first.
        used = []
        for slot in self.slots():
            s, y = s_all[slot], y_all[slot]
            if self._curvature_ok(s, y):
                used.append((s, y, 1 / np.dot(y, s)))
        if not used:
            return q

        alphas = []
        for s, y, rho in used:
            alpha = rho * np.dot(s, q)
            q -= alpha * y
            alphas.append(alpha)
        s, y, rho = used[0]
        q *= 1 / (rho * np.dot(y, y))
        for (s, y, rho), alpha in zip(reversed(used), reversed(alphas)):
            beta = rho * np.dot(y, q)
            q += (alpha - beta) * s
        return q
    #apply_masked
#LbfgsBuffer
