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
Solve a single problem from the built-in library with one solver variant.

The problem is solved by the augmented Lagrangian method with the PANOC
variant selected with -s/--variant as the inner solver.  The result is
written as a JSON object with the final status, the numbers of outer and
inner iterations, the evaluation counters, the achieved tolerances and
the wall time, followed by the solution and its multipliers.  Before the
report is written, stationarity and constraint violation are checked
again from fresh evaluations at the returned point.

Progress of the outer iterations is written to the report stream
(-R/--report).  The exit code is 0 if the solver converged and 1
otherwise.
"""
from ..lib.alm import verify_kkt
from ..lib.cli import add_run_args, get_problem, get_run_config, open_output
from ..lib.io import try_write_pipe, write_json
from ..lib.problems import suite_problems

__version__ = "1.0.0"


def solve_problem(config, reportfile=None):
    """Solve config.problem with config.variant; return the report dict and the exit code."""
    problem, x0, x_star, y_star = get_problem(config)
    variant = config.variant
    x, y, report = variant.solver_config(
        config.alm_params, config.panoc_params, config.memory).solve(problem, x0,
                                                                    reportfile=reportfile)
    stationarity, violation, _ = verify_kkt(problem, x, report.y_inner, report.sigma)

    data = {"problem": problem.name, "variant": variant.name, "n": problem.n, "m": problem.m}
    data.update(report.as_dict())
    data["kkt_check"] = {"stationarity_inf": stationarity, "constraint_violation_inf": violation}
    if x_star is not None:
        data["x_error_inf"] = float(abs(x - x_star).max()) if problem.n else 0.
    if y_star is not None:
        data["y_error_inf"] = float(abs(y - y_star).max()) if problem.m else 0.
    data["x"] = x
    data["y"] = y
    return data, 0 if report.converged else 1
#solve_problem


def list_problems(outfile, seed):
    for entry in suite_problems(seed):
        problem = entry.problem()
        try_write_pipe(outfile, "%-20s n=%-3i m=%-3i %s\n" % (
            entry.name, problem.n, problem.m, entry.description))
    try_write_pipe(outfile, "%-20s the hanging chain, sized by --balls and --horizon\n" % "chain")
#list_problems


def add_arguments(parser):
    parser.add_argument("--list", action="store_true",
        help="list the names of the available problems and exit")
    add_run_args(parser, single_variant=True, problem=True)
#add_arguments


def run(args):
    config = get_run_config(args)
    outfile = open_output(config.out)
    try:
        if args.list:
            list_problems(outfile, config.seed)
            return 0
        data, exit_code = solve_problem(config, args.report)
        write_json(outfile, data)
        try_write_pipe(args.report, "%s with %s: %s after %i outer and %i inner iterations\n" % (
            data["problem"], data["variant"], data["status"], data["outer_iters"],
            data["inner_iters"]))
        return exit_code
    finally:
        if outfile is not None and config.out not in (None, "-"):
            outfile.close()
#run
