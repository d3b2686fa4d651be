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
Run solver variants over the complete built-in problem suite and count
how many problems each variant solves.

The suite contains small problems with known solutions, classic
nonlinear programming test problems, seeded random quadratic programs
and a small hanging chain control problem.  Every combination of
problem and variant is solved from the problem's standard starting
point.  Failures are recorded in the output, never fatal.

The output is a comma-separated table with one row per problem and
variant, in a fixed order.  The number of solved problems per variant
is written to the report stream.  With -j/--jobs, several problems are
solved concurrently in worker threads; each solve uses its own problem
instance.
"""
from queue import SimpleQueue
from threading import Thread

from ..lib.cli import VARIANTS, add_run_args, get_run_config, open_output
from ..lib.io import try_write_pipe, write_table_header, write_table_row
from ..lib.problems import suite_problems

__version__ = "1.0.0"


# Columns of the output table.
COLUMNS = ("problem", "variant", "status", "inner_iters", "wall_time_s")


def solve_entry(entry, solver_config):
    """Solve one suite problem; return its output row."""
    problem = entry.problem()
    _, _, report = solver_config.solve(problem, entry.x0)
    return {"problem": entry.name, "variant": solver_config.name, "status": str(report.status),
            "inner_iters": report.inner_iterations, "wall_time_s": report.wall_time,
            "converged": report.converged}
#solve_entry


def worker(task_queue, done_queue):
    """
    Read (index, entry, solver_config) tasks from task_queue, write
    (index, row) to done_queue.
    """
    for index, entry, solver_config in iter(task_queue.get, None):
        try:
            row = solve_entry(entry, solver_config)
        except Exception as error:
            row = {"problem": entry.name, "variant": solver_config.name,
                   "status": "Error: %s" % error, "converged": False}
        done_queue.put((index, row))
    done_queue.put(None)
#worker


def run_suite(entries, solver_configs, jobs=1, reportfile=None):
    """Solve every entry with every solver configuration; return the rows in task order."""
    tasks = [(entry, solver_config) for solver_config in solver_configs for entry in entries]
    rows = [None] * len(tasks)
    if jobs == 1:
        for index, (entry, solver_config) in enumerate(tasks):
            rows[index] = solve_entry(entry, solver_config)
            if reportfile:
                try_write_pipe(reportfile, "%-20s %-24s %s\n" % (
                    entry.name, solver_config.name, rows[index]["status"]))
        return rows

    task_queue = SimpleQueue()
    done_queue = SimpleQueue()
    for index, (entry, solver_config) in enumerate(tasks):
        task_queue.put((index, entry, solver_config))
    threads = []
    for i in range(jobs):
        task_queue.put(None)
        thread = Thread(target=worker, args=(task_queue, done_queue))
        thread.daemon = True
        thread.start()
        threads.append(thread)
    finished = 0
    while finished < jobs:
        result = done_queue.get()
        if result is None:
            finished += 1
            continue
        index, row = result
        rows[index] = row
        if reportfile:
            try_write_pipe(reportfile, "%-20s %-24s %s\n" % (
                row["problem"], row["variant"], row["status"]))
    for thread in threads:
        thread.join()
    return rows
#run_suite


def solved_counts(rows):
    """Return {variant: number of converged problems}, in order of first appearance."""
    counts = {}
    for row in rows:
        counts[row["variant"]] = counts.get(row["variant"], 0) + bool(row["converged"])
    return counts
#solved_counts


def add_arguments(parser):
    add_run_args(parser, jobs=True)
#add_arguments


def run(args):
    config = get_run_config(args, default_variants=tuple(VARIANTS))
    entries = suite_problems(config.seed)
    rows = run_suite(entries, config.solver_configs(), config.jobs, args.report)
    outfile = open_output(config.out)
    try:
        write_table_header(outfile, COLUMNS)
        for row in rows:
            write_table_row(outfile, COLUMNS, row)
    finally:
        if config.out not in (None, "-"):
            outfile.close()
    for variant, count in solved_counts(rows).items():
        try_write_pipe(args.report, "%-24s solved %i of %i problems\n" % (
            variant, count, len(entries)))
    return 0
#run
