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
Hanging chain benchmark: a chain of balls connected by springs between
a fixed anchor at the origin and an actuator whose velocity is the
control input.

The state vector holds the ball positions (3 per ball), the ball
velocities (3 per ball) and the actuator position (3), in that order.
The optimal control problem is formulated by single shooting over an
RK4 discretization; its gradients are computed by a reverse sweep
through the rollout.
"""

import numpy as np

from .io import try_write_pipe
from .problem import BoxSet, ProblemSpec, SolveStatus, as_vector

# Default values for parameters are specified below.

# Number of free balls.
DEF_BALLS = 6

# Spring constant (N/m), spring rest length (m) and ball mass (kg).
DEF_SPRING_CONST = 1.6
DEF_REST_LENGTH = 0.0055
DEF_BALL_MASS = 0.03

# Sampling time of the RK4 discretization (s).
DEF_DT = 0.05

# Bound on each component of the actuator velocity (m/s).
DEF_V_MAX = 1.

# The state constraint is  p_z >= c (p_x - a)^3 + d (p_x - a) + b.
DEF_WALL = {"a": 0.6, "b": -1.4, "c": 5., "d": 2.2}

# Prediction horizon (number of control intervals).
DEF_HORIZON = 40

# Stage cost weights of the actuator position error, the ball
# velocities and the input.
DEF_ALPHA = 25.
DEF_BETA = 1.
DEF_GAMMA_W = 0.01

# Target position of the actuator.
DEF_X_END = (1., 0., 0.)

# Gravitational acceleration (m/s^2).
DEF_GRAVITY = (0., 0., -9.81)

# Input applied for a few steps to push the chain out of its initial
# straight configuration.
PERTURBATION_INPUT = (-0.5, 0.5, 0.5)
PERTURBATION_STEPS = 3


class ChainParams:
    """Physical and control constants of the hanging chain."""

    def __init__(self, n_balls=DEF_BALLS, spring_const=DEF_SPRING_CONST,
                 rest_length=DEF_REST_LENGTH, ball_mass=DEF_BALL_MASS, dt=DEF_DT,
                 v_max=DEF_V_MAX, a=DEF_WALL["a"], b=DEF_WALL["b"], c=DEF_WALL["c"],
                 d=DEF_WALL["d"], horizon=DEF_HORIZON, alpha=DEF_ALPHA, beta=DEF_BETA,
                 gamma_w=DEF_GAMMA_W, x_end=DEF_X_END, gravity=DEF_GRAVITY):
        self.n_balls = int(n_balls)
        self.spring_const = float(spring_const)
        self.rest_length = float(rest_length)
        self.ball_mass = float(ball_mass)
        self.dt = float(dt)
        self.v_max = float(v_max)
        self.a, self.b, self.c, self.d = float(a), float(b), float(c), float(d)
        self.horizon = int(horizon)
        self.alpha = float(alpha)
        self.beta = float(beta)
        self.gamma_w = float(gamma_w)
        self.x_end = as_vector(x_end, 3, "actuator target")
        self.gravity = as_vector(gravity, 3, "gravity")
        if self.n_balls < 1:
            raise ValueError("the chain needs at least one ball")
        if self.horizon < 1:
            raise ValueError("the horizon must be at least 1, got %r" % horizon)
        if min(self.spring_const, self.ball_mass, self.dt, self.v_max) <= 0:
            raise ValueError("spring constant, mass, time step and velocity bound must be "
                             "positive")
        if self.rest_length < 0:
            raise ValueError("rest length cannot be negative")
        if min(self.alpha, self.beta, self.gamma_w) < 0:
            raise ValueError("cost weights cannot be negative")
    #__init__

    @property
    def nx(self):
        return 6 * self.n_balls + 3
    #nx

    @property
    def nu(self):
        return 3
    #nu

    def replace(self, **changes):
        params = dict(self.__dict__)
        params.update(changes)
        return ChainParams(**params)
    #replace
#ChainParams


def split_state(state, n_balls):
    """Return (positions, velocities, actuator) views of a state vector."""
    return (state[:3*n_balls].reshape(n_balls, 3), state[3*n_balls:6*n_balls].reshape(n_balls, 3),
            state[6*n_balls:])
#split_state


def _spring_vectors(positions, actuator):
    """Return d_i = p_i - p_{i-1} for the n+1 springs, and their lengths."""
    points = np.vstack((np.zeros(3), positions, actuator))
    d = np.diff(points, axis=0)
    r = np.sqrt(np.sum(d * d, axis=1))
    if not r.all():
        raise ValueError("adjacent points of the chain coincide (spring %i)" %
                         int(np.argmin(r)))
    return d, r
#_spring_vectors


def chain_ode(state, u, params):
    """Return the time derivative of state under actuator velocity u."""
    positions, velocities, actuator = split_state(state, params.n_balls)
    d, r = _spring_vectors(positions, actuator)
    forces = params.spring_const * (1 - params.rest_length / r)[:, None] * d
    accel = (forces[1:] - forces[:-1]) / params.ball_mass + params.gravity
    return np.concatenate((velocities.ravel(), accel.ravel(), u))
#chain_ode


def chain_ode_vjp(state, u, params, cotangent):
    """
    Return (cotangent^T d(ode)/d(state), cotangent^T d(ode)/du).

    The spring force F = D (1 - L/r) d has the symmetric Jacobian
    D ((1 - L/r) I + L d d^T / r^3).
    """
    n = params.n_balls
    positions, _, actuator = split_state(state, n)
    lam_pos, lam_vel, lam_act = split_state(cotangent, n)
    d, r = _spring_vectors(positions, actuator)

    # Cotangent of each spring force.
    zero = np.zeros((1, 3))
    mu = (np.vstack((zero, lam_vel)) - np.vstack((lam_vel, zero))) / params.ball_mass
    nu = params.spring_const * (
        (1 - params.rest_length / r)[:, None] * mu
        + (params.rest_length * np.sum(d * mu, axis=1) / r**3)[:, None] * d)

    grad_state = np.concatenate(((nu[:-1] - nu[1:]).ravel(), lam_pos.ravel(), nu[-1]))
    return grad_state, np.array(lam_act)
#chain_ode_vjp


def rk4_stages(state, u, params, ode=chain_ode):
    """
    Return (next_state, stage_points) of one classical RK4 step; the
    stage points are the four states at which ode was evaluated.
    """
    h = params.dt
    k1 = ode(state, u, params)
    x2 = state + 0.5 * h * k1
    k2 = ode(x2, u, params)
    x3 = state + 0.5 * h * k2
    k3 = ode(x3, u, params)
    x4 = state + h * k3
    k4 = ode(x4, u, params)
    return state + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4), (state, x2, x3, x4)
#rk4_stages


def chain_step_rk4(state, u, params):
    """Return the state after one sampling period under constant input u."""
    return rk4_stages(state, u, params)[0]
#chain_step_rk4


def rk4_step_vjp(stage_points, u, params, cotangent, ode_vjp=chain_ode_vjp):
    """
    Return (grad_state, grad_u): the cotangent of the RK4 step output
    pulled back to its state and input.  stage_points come from
    rk4_stages at the same (state, u).
    """
    h = params.dt
    x1, x2, x3, x4 = stage_points
    grad_state = np.array(cotangent, dtype=float)
    grad_u = np.zeros(params.nu)

    gx, gu = ode_vjp(x4, u, params, h / 6 * cotangent)
    grad_state += gx
    grad_u += gu
    gx, gu = ode_vjp(x3, u, params, h / 3 * cotangent + h * gx)
    grad_state += gx
    grad_u += gu
    gx, gu = ode_vjp(x2, u, params, h / 3 * cotangent + h / 2 * gx)
    grad_state += gx
    grad_u += gu
    gx, gu = ode_vjp(x1, u, params, h / 6 * cotangent + h / 2 * gx)
    grad_state += gx
    grad_u += gu
    return grad_state, grad_u
#rk4_step_vjp


def initial_chain_state(params):
    """Return the rest state with the points spread evenly over [0, 1] on the x-axis."""
    n = params.n_balls
    state = np.zeros(params.nx)
    xs = np.linspace(0., 1., n + 2)
    state[0:3*n:3] = xs[1:-1]
    state[6*n] = xs[-1]
    return state
#initial_chain_state


class ChainRollout:
    """
    Single-shooting rollout of the chain over the horizon, cached for
    the most recent input sequence.
    """

    def __init__(self, params, x_init):
        self.params = params
        self.x_init = as_vector(x_init, params.nx, "initial chain state")
        self._key = None
        self.states = None
        self.stages = None
    #__init__

    def run(self, u_flat):
        key = np.asarray(u_flat, dtype=float).tobytes()
        if key == self._key:
            return self.states
        inputs = np.reshape(u_flat, (self.params.horizon, 3))
        states = np.empty((self.params.horizon + 1, self.params.nx))
        states[0] = self.x_init
        stages = []
        for k, u in enumerate(inputs):
            states[k+1], points = rk4_stages(states[k], u, self.params)
            stages.append(points)
        self._key, self.states, self.stages = key, states, stages
        return states
    #run

    def backward(self, u_flat, state_cotangents):
        """
        Return the gradient with respect to the inputs of
        sum_k state_cotangents[k-1]^T x_k (k = 1..N).
        """
        self.run(u_flat)
        inputs = np.reshape(u_flat, (self.params.horizon, 3))
        grad_u = np.empty_like(inputs)
        lam = np.zeros(self.params.nx)
        for k in range(self.params.horizon - 1, -1, -1):
            lam = lam + state_cotangents[k]
            lam, grad_u[k] = rk4_step_vjp(self.stages[k], inputs[k], self.params, lam)
        return grad_u.ravel()
    #backward
#ChainRollout


def _wall_points(states, n_balls):
    """Return the (N, n+1, 3) ball and actuator positions of states 1..N."""
    positions = states[1:, :3*n_balls].reshape(-1, n_balls, 3)
    return np.concatenate((positions, states[1:, None, 6*n_balls:]), axis=1)
#_wall_points


def chain_ocp(params, x_init):
    """
    Return the single-shooting optimal control problem from x_init as a
    ProblemSpec.  The decision vector stacks the N actuator velocities;
    g holds the wall constraint of every ball and the actuator at every
    step 1..N and must be nonnegative.
    """
    n, horizon = params.n_balls, params.horizon
    rollout = ChainRollout(params, x_init)

    def f(u_flat):
        states = rollout.run(u_flat)
        err = states[1:, 6*n:] - params.x_end
        return (params.alpha * np.sum(err * err)
                + params.beta * np.sum(states[1:, 3*n:6*n] ** 2)
                + params.gamma_w * np.dot(u_flat, u_flat))
    #f

    def grad_f(u_flat):
        states = rollout.run(u_flat)
        cotangents = np.zeros((horizon, params.nx))
        cotangents[:, 3*n:6*n] = 2 * params.beta * states[1:, 3*n:6*n]
        cotangents[:, 6*n:] = 2 * params.alpha * (states[1:, 6*n:] - params.x_end)
        return rollout.backward(u_flat, cotangents) + 2 * params.gamma_w * u_flat
    #grad_f

    def g(u_flat):
        points = _wall_points(rollout.run(u_flat), n)
        px = points[..., 0] - params.a
        return (points[..., 2] - params.c * px**3 - params.d * px - params.b).ravel()
    #g

    def grad_g_prod(u_flat, v):
        points = _wall_points(rollout.run(u_flat), n)
        px = points[..., 0] - params.a
        v = np.reshape(v, (horizon, n + 1))
        dx = -v * (3 * params.c * px**2 + params.d)
        cotangents = np.zeros((horizon, params.nx))
        cotangents[:, 0:3*n:3] = dx[:, :n]
        cotangents[:, 2:3*n:3] = v[:, :n]
        cotangents[:, 6*n] = dx[:, n]
        cotangents[:, 6*n+2] = v[:, n]
        return rollout.backward(u_flat, cotangents)
    #grad_g_prod

    m = horizon * (n + 1)
    return ProblemSpec(
        3 * horizon, m, BoxSet.uniform(3 * horizon, -params.v_max, params.v_max),
        BoxSet(np.zeros(m), np.full(m, np.inf)), f, grad_f, g, grad_g_prod,
        name="chain-%i-%i" % (n, horizon))
#chain_ocp


def shift_solution(u_flat, y, params):
    """
    Shift a solution and its multipliers by one time step: the last
    input block is repeated and the last multiplier block is zero.
    """
    u = np.reshape(u_flat, (params.horizon, 3))
    u_shifted = np.vstack((u[1:], u[-1:])).ravel()
    y = np.reshape(y, (params.horizon, params.n_balls + 1))
    y_shifted = np.vstack((y[1:], np.zeros((1, params.n_balls + 1)))).ravel()
    return u_shifted, y_shifted
#shift_solution


class MpcRun(list):
    """
    The SolveReports of a closed-loop simulation, one per step, with the
    simulated plant trajectory attached: states[0] is the state after
    the perturbation, states[k+1] the state after applying inputs[k].
    """

    def __init__(self, reports=(), prelude_inputs=None, states=None, inputs=None):
        super().__init__(reports)
        self.prelude_inputs = [] if prelude_inputs is None else prelude_inputs
        self.states = [] if states is None else states
        self.inputs = [] if inputs is None else inputs
    #__init__
#MpcRun


def step_failed(report):
    """
    Return True if the solve of an MPC step broke down (NotFinite or
    Interrupted).  Its input is not applied.  A solve that hits an
    iteration limit still yields a usable input.
    """
    return report.status in (SolveStatus.NOT_FINITE, SolveStatus.INTERRUPTED)
#step_failed


def perturbed_initial_state(params, prelude_inputs=None):
    """
    Return the straight chain state after the perturbation input has
    been applied for the configured number of steps.  Applied inputs
    are appended to prelude_inputs if it is a list.
    """
    state = initial_chain_state(params)
    u = np.array(PERTURBATION_INPUT)
    for _ in range(PERTURBATION_STEPS):
        state = chain_step_rk4(state, u, params)
        if prelude_inputs is not None:
            prelude_inputs.append(u.copy())
    return state
#perturbed_initial_state


def mpc_simulate(params, solver_config, n_steps, warm_start=False, reportfile=None):
    """
    Simulate the receding-horizon controller for n_steps steps.

    Every step solves the optimal control problem from the current plant
    state with solver_config (an alm.SolverConfig), applies the first
    input to the plant and moves on.  A cold start begins each solve at
    u = 0, y = 0; a warm start shifts the previous solution and
    multipliers.  If a solve breaks down (see step_failed), the plant
    receives u = 0 and the next step is cold-started.
    Returns an MpcRun.
    """
    if n_steps < 1:
        raise ValueError("at least one simulation step is required")
    run = MpcRun()
    state = perturbed_initial_state(params, run.prelude_inputs)
    run.states.append(state)
    u0 = y0 = None
    for step in range(n_steps):
        problem = chain_ocp(params, state)
        u_opt, y_opt, report = solver_config.solve(problem, u0, y0)
        run.append(report)
        failed = step_failed(report)
        u_applied = np.zeros(3) if failed else np.array(u_opt[:3])
        if reportfile:
            try_write_pipe(reportfile, "MPC step %i: %s after %i outer and %i inner iterations, "
                "u = (%s)\n" % (step, report.status, report.outer_iterations,
                report.inner_iterations, ", ".join("%.4g" % ui for ui in u_applied)))
        state = chain_step_rk4(state, u_applied, params)
        run.inputs.append(u_applied)
        run.states.append(state)
        if warm_start and not failed:
            u0, y0 = shift_solution(u_opt, y_opt, params)
        else:
            u0 = y0 = None
    return run
#mpc_simulate
