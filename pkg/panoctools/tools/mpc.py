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
Simulate model predictive control of the hanging chain with several
solver variants and tabulate the solver effort of every time step.

The chain starts straight along the x-axis, is perturbed by a fixed
actuator velocity for three time steps, and is then driven back to its
target by the controller.  Each time step solves the optimal control
problem of the full horizon; the first input is applied to the plant.

With --cold, every solve starts from zero inputs and multipliers; with
--warm, each solve starts from the previous solution and multipliers
shifted by one time step.  Without either option both are simulated.

The output is a comma-separated table with one row per variant, start
mode and time step.  A summary per variant is written to the report
stream.  The exit code is 1 if any solve broke down (NotFinite or
Interrupted); such a step applies zero input.  Solves that stop at an
iteration limit still apply their input and do not count as failures.
"""
from ..lib.chain import mpc_simulate, step_failed
from ..lib.cli import VARIANTS, add_run_args, get_run_config, open_output
from ..lib.io import try_write_pipe, write_table_header, write_table_row

__version__ = "1.0.0"


# Columns of the output table.
COLUMNS = ("step", "variant", "warm", "inner_iters", "outer_iters", "f_evals", "grad_f_evals",
           "g_evals", "grad_g_prod_evals", "grad_psi_evals", "wall_time_s", "status")


def mpc_rows(variant_name, warm, run):
    """Yield one output row per simulated step."""
    for step, report in enumerate(run):
        row = {"step": step, "variant": variant_name, "warm": warm,
               "inner_iters": report.inner_iterations, "outer_iters": report.outer_iterations,
               "wall_time_s": report.wall_time, "status": str(report.status)}
        row.update(report.counters.as_dict())
        yield row
#mpc_rows


def run_mpc_experiment(config, outfile, reportfile):
    """Simulate every configured variant and start mode; return the number of failures."""
    modes = (False, True) if config.warm_start is None else (config.warm_start,)
    write_table_header(outfile, COLUMNS)
    failures = 0
    for solver_config in config.solver_configs():
        for warm in modes:
            run = mpc_simulate(config.chain_params, solver_config, config.n_steps, warm,
                               reportfile)
            inner = grad_psi = 0
            for row in mpc_rows(solver_config.name, warm, run):
                write_table_row(outfile, COLUMNS, row)
                inner += row["inner_iters"]
                grad_psi += row["grad_psi_evals"]
            try_write_pipe(reportfile,
                "%-24s %-4s: %5i inner iterations, %6i gradient evaluations (%.2f per "
                "iteration)\n" % (solver_config.name, "warm" if warm else "cold", inner,
                                  grad_psi, grad_psi / inner if inner else 0.))
            failures += sum(step_failed(report) for report in run)
    return failures
#run_mpc_experiment


def add_arguments(parser):
    add_run_args(parser, mpc=True)
#add_arguments


def run(args):
    config = get_run_config(args, default_variants=tuple(VARIANTS))
    outfile = open_output(config.out)
    try:
        failures = run_mpc_experiment(config, outfile, args.report)
    finally:
        if config.out not in (None, "-"):
            outfile.close()
    if failures:
        try_write_pipe(args.report, "%i solves broke down\n" % failures)
    return 1 if failures else 0
#run
