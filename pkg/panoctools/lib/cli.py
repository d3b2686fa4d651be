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

import argparse
import configparser
import functools
import sys

from .alm import AlmParams, SolverConfig
from .chain import ChainParams
from .lbfgs import DEF_MEMORY
from .panoc import LineSearch, PanocParams, make_lbfgs_direction
from .problems import DEF_SEED, chain_problem, find_problem
from .structured import make_structured_direction

# Default number of MPC simulation steps.
# This is the default of the --steps command line option.
DEF_STEPS = 10

# Default solver variant of the solve tool.
# This is the default of the --variant command line option.
DEF_VARIANT = "panoc"


class SolverVariant:
    """One of the named solver configurations."""

    def __init__(self, name, structured, include_hessian_vec, line_search):
        self.name = name
        self.structured = structured
        self.include_hessian_vec = include_hessian_vec
        self.line_search = line_search
    #__init__

    def direction_factory(self, memory=DEF_MEMORY):
        """Return a function that makes a fresh direction provider for an oracle."""
        if self.structured:
            return functools.partial(make_structured_direction,
                                     include_hessian_vec=self.include_hessian_vec, memory=memory)
        return functools.partial(make_lbfgs_direction, memory=memory)
    #direction_factory

    def solver_config(self, alm_params=None, panoc_params=None, memory=DEF_MEMORY):
        """Return a SolverConfig running this variant."""
        panoc_params = PanocParams() if panoc_params is None else panoc_params
        return SolverConfig(alm_params, panoc_params.replace(line_search=self.line_search),
                            self.direction_factory(memory), self.name)
    #solver_config

    def __repr__(self):
        return "SolverVariant(%r)" % self.name
    #__repr__
#SolverVariant


VARIANTS = {variant.name: variant for variant in (
    SolverVariant("panoc", False, False, LineSearch.ORIGINAL),
    SolverVariant("panoc-ils", False, False, LineSearch.IMPROVED),
    SolverVariant("struct-panoc", True, True, LineSearch.ORIGINAL),
    SolverVariant("struct-panoc-ils", True, True, LineSearch.IMPROVED),
    SolverVariant("approx-struct-panoc", True, False, LineSearch.ORIGINAL),
    SolverVariant("approx-struct-panoc-ils", True, False, LineSearch.IMPROVED))}


def get_variant(name):
    try:
        return VARIANTS[name]
    except KeyError:
        raise ValueError("unknown solver variant '%s'; choose from %s" %
                         (name, ", ".join(VARIANTS)))
#get_variant


def pos_int_arg(value):
    """Convert str to int, raise ArgumentTypeError if not positive."""
    if not value.isdigit() or not int(value):
        raise argparse.ArgumentTypeError("invalid positive int value: '%s'" % value)
    return int(value)
#pos_int_arg


def pos_float_arg(value):
    """Convert str to float, raise ArgumentTypeError if not positive."""
    try:
        result = float(value)
    except ValueError:
        result = 0
    if not result > 0:
        raise argparse.ArgumentTypeError("invalid positive float value: '%s'" % value)
    return result
#pos_float_arg


def comma_separated_arg(list_type, element_type):
    """
    Return a function that converts a comma-separated string to a
    list_type containing elements of element_type.
    """
    def parse_comma_separated_arg(value):
        try:
            return list_type(map(element_type, value.split(",")))
        except Exception as err:
            raise argparse.ArgumentTypeError(err)
    return parse_comma_separated_arg
#comma_separated_arg


def variant_list_arg(value):
    """Convert a comma-separated list of variant names, or 'all'."""
    if value == "all":
        return list(VARIANTS)
    names = comma_separated_arg(list, str)(value)
    for name in names:
        if name not in VARIANTS:
            raise argparse.ArgumentTypeError("unknown solver variant '%s'" % name)
    return names
#variant_list_arg


def parse_bool(value):
    value = value.lower()
    if value in ("true", "yes", "on", "1"):
        return True
    if value in ("false", "no", "off", "0"):
        return False
    raise ValueError("invalid boolean value: '%s'" % value)
#parse_bool


def _parse_string(value):
    if len(value) >= 2 and value[0] == value[-1] and value[0] in "\"'":
        return value[1:-1]
    return value
#_parse_string


def _parse_string_list(value):
    """Parse a TOML-style list of strings, or a bare comma-separated list."""
    value = value.strip()
    if value.startswith("[") and value.endswith("]"):
        value = value[1:-1]
    return [_parse_string(item.strip()) for item in value.split(",") if item.strip()]
#_parse_string_list


# Config file keys and their types, per section.  Keys outside any
# section belong to [run].
CONFIG_SCHEMA = {
    "run": {
        "problem": _parse_string, "variant": _parse_string, "variants": _parse_string_list,
        "seed": int, "out": _parse_string, "warm": parse_bool, "steps": int, "jobs": int,
        "memory": int, "balls": int, "horizon": int, "gravity": parse_bool},
    "alm": {
        "sigma0": float, "delta_growth": float, "theta": float, "sigma_max": float,
        "y_max": float, "eps0": float, "eps_final": float, "delta_final": float,
        "rho_eps": float, "max_outer": int, "scale_sigma0": parse_bool, "max_time": float},
    "panoc": {
        "max_iter": int, "tau_min": float, "max_ls_iter": int,
        "sigma_coeff": float, "lipschitz0": float, "max_time": float}}


def read_config(configfile):
    """
    Read a run configuration from an open file.  Returns a dict mapping
    each section name to a dict of typed values.  Unknown sections and
    keys raise ValueError.
    """
    ini = configparser.RawConfigParser(strict=False, inline_comment_prefixes=("#",),
                                       comment_prefixes=("#", ";"))
    ini.optionxform = str  # Keys are case sensitive.
    try:
        ini.read_string("[run]\n" + configfile.read(), getattr(configfile, "name", "<config>"))
    except configparser.Error as err:
        raise ValueError("invalid configuration file: %s" % err)
    config = {}
    for section in ini.sections():
        if section not in CONFIG_SCHEMA:
            raise ValueError("unknown section [%s] in configuration file" % section)
        schema = CONFIG_SCHEMA[section]
        values = config.setdefault(section, {})
        for key, value in ini.items(section):
            if key not in schema:
                raise ValueError("unknown key '%s' in section [%s] of configuration file" %
                                 (key, section))
            try:
                values[key] = schema[key](value.strip())
            except ValueError as err:
                raise ValueError("invalid value for '%s' in section [%s]: %s" %
                                 (key, section, err))
    return config
#read_config


class RunConfig:
    """Everything a tool needs to run: problem, solvers and output options."""

    def __init__(self, problem=None, variants=(DEF_VARIANT,), alm_params=None,
                 panoc_params=None, seed=DEF_SEED, out=None, warm_start=None,
                 n_steps=DEF_STEPS, memory=DEF_MEMORY, chain_params=None, jobs=1):
        self.problem = problem
        self.variants = [get_variant(name) for name in variants]
        self.alm_params = AlmParams() if alm_params is None else alm_params
        self.panoc_params = PanocParams() if panoc_params is None else panoc_params
        self.seed = seed
        self.out = out
        self.warm_start = warm_start
        self.n_steps = n_steps
        self.memory = memory
        self.chain_params = ChainParams() if chain_params is None else chain_params
        self.jobs = jobs
        if self.n_steps < 1 or self.memory < 1 or self.jobs < 1:
            raise ValueError("steps, memory and jobs must be positive")
    #__init__

    @property
    def variant(self):
        return self.variants[0]
    #variant

    def solver_configs(self):
        return [variant.solver_config(self.alm_params, self.panoc_params, self.memory)
                for variant in self.variants]
    #solver_configs
#RunConfig


def add_run_args(parser, *, single_variant=False, problem=False, mpc=False, jobs=False):
    """Add the arguments that configure a run to the given parser."""
    group = parser.add_argument_group("run options")
    group.add_argument("-c", "--config", metavar="FILE",
        type=argparse.FileType("tr", encoding="UTF-8"),
        help="configuration file with [run], [alm] and [panoc] sections; command line "
             "options override its values")
    if problem:
        group.add_argument("-p", "--problem", metavar="NAME",
            help="name of the problem to solve; use --list to see all problems, or 'chain' "
                 "for the hanging chain of size --balls and --horizon")
    if single_variant:
        group.add_argument("-s", "--variant", metavar="VARIANT", choices=tuple(VARIANTS),
            help="solver variant to use: one of %(choices)s (default: " + DEF_VARIANT + ")")
    else:
        group.add_argument("-s", "--variants", metavar="VARIANTS", type=variant_list_arg,
            help="comma-separated list of solver variants to run, or 'all' (default: all); "
                 "available: " + ", ".join(VARIANTS))
    group.add_argument("--seed", metavar="N", type=int,
        help="seed of the randomized problems (default: %i)" % DEF_SEED)
    if jobs:
        group.add_argument("-j", "--jobs", metavar="N", type=pos_int_arg,
            help="number of worker threads (default: 1)")

    group = parser.add_argument_group("solver options")
    group.add_argument("--eps", metavar="EPS", type=pos_float_arg,
        help="final stationarity tolerance epsilon (default: %g)" % AlmParams().eps_final)
    group.add_argument("--delta", metavar="DELTA", type=pos_float_arg,
        help="final constraint violation tolerance delta (default: %g)" %
             AlmParams().delta_final)
    group.add_argument("--max-outer", metavar="N", type=pos_int_arg,
        help="maximum number of augmented Lagrangian iterations (default: %i)" %
             AlmParams().max_outer)
    group.add_argument("--max-iter", metavar="N", type=pos_int_arg,
        help="maximum number of PANOC iterations per inner solve (default: %i)" %
             PanocParams().max_iter)
    group.add_argument("--memory", metavar="N", type=pos_int_arg,
        help="number of L-BFGS pairs kept (default: %i)" % DEF_MEMORY)

    if mpc:
        group = parser.add_argument_group("model predictive control options")
        mutex = group.add_mutually_exclusive_group()
        mutex.add_argument("--warm", dest="warm", action="store_const", const=True,
            help="warm-start every step from the shifted previous solution")
        mutex.add_argument("--cold", dest="warm", action="store_const", const=False,
            help="start every step from zero; without --warm or --cold, both are run")
        group.add_argument("--steps", metavar="N", type=pos_int_arg,
            help="number of simulated time steps (default: %i)" % DEF_STEPS)
    if mpc or problem:
        group = parser.add_argument_group("hanging chain options")
        group.add_argument("--balls", metavar="N", type=pos_int_arg,
            help="number of balls of the chain (default: %i)" % ChainParams().n_balls)
        group.add_argument("--horizon", metavar="N", type=pos_int_arg,
            help="prediction horizon (default: %i)" % ChainParams().horizon)
        group.add_argument("--no-gravity", dest="gravity", action="store_const", const=False,
            help="disable gravity in the chain model")

    group = parser.add_argument_group("output file options")
    group.add_argument("-o", "--out", metavar="FILE",
        help="file to write the output to (default: write to stdout)")
    group.add_argument("-R", "--report", metavar="FILE",
        type=argparse.FileType("tw", encoding="UTF-8"),
        default=sys.stderr, help="file to write a report to (default: write to stderr)")
#add_run_args


def _option(args, config, section, key, dest=None, default=None):
    """Return the command line value, else the config file value, else default."""
    value = getattr(args, key if dest is None else dest, None)
    if value is not None:
        return value
    return config.get(section, {}).get(key, default)
#_option


def get_run_config(args, *, default_variants=(DEF_VARIANT,)):
    """Combine defaults, the configuration file and the command line into a RunConfig."""
    config = {}
    if getattr(args, "config", None) is not None:
        config = read_config(args.config)
        args.config.close()

    alm_changes = dict(config.get("alm", {}))
    for key, dest in (("eps_final", "eps"), ("delta_final", "delta"), ("max_outer", "max_outer")):
        value = getattr(args, dest, None)
        if value is not None:
            alm_changes[key] = value
    panoc_changes = dict(config.get("panoc", {}))
    if getattr(args, "max_iter", None) is not None:
        panoc_changes["max_iter"] = args.max_iter

    chain_changes = {}
    for key, dest in (("balls", "n_balls"), ("horizon", "horizon")):
        value = _option(args, config, "run", key)
        if value is not None:
            chain_changes[dest] = value
    if not _option(args, config, "run", "gravity", default=True):
        chain_changes["gravity"] = (0., 0., 0.)

    variants = getattr(args, "variants", None)
    if variants is None and getattr(args, "variant", None) is not None:
        variants = [args.variant]
    if variants is None:
        variants = config.get("run", {}).get("variants")
    if variants is None and "variant" in config.get("run", {}):
        variants = [config["run"]["variant"]]
    if variants is None:
        variants = default_variants

    return RunConfig(
        problem=_option(args, config, "run", "problem"),
        variants=variants,
        alm_params=AlmParams(**alm_changes),
        panoc_params=PanocParams(**panoc_changes),
        seed=_option(args, config, "run", "seed", default=DEF_SEED),
        out=_option(args, config, "run", "out"),
        warm_start=_option(args, config, "run", "warm"),
        n_steps=_option(args, config, "run", "steps", default=DEF_STEPS),
        memory=_option(args, config, "run", "memory", default=DEF_MEMORY),
        chain_params=ChainParams(**chain_changes),
        jobs=_option(args, config, "run", "jobs", default=1))
#get_run_config


def open_output(path):
    """Open path for writing with LF line endings; None or '-' means stdout."""
    if path is None or path == "-":
        return sys.stdout
    return open(path, "wt", encoding="UTF-8", newline="\n")
#open_output


def get_problem(config):
    """
    Return (problem, x0, x_star, y_star) for config.problem.  The name
    'chain' selects the hanging chain of config.chain_params.
    """
    if config.problem is None:
        raise ValueError("please specify a problem with -p/--problem (see --list)")
    if config.problem == "chain":
        problem = chain_problem(config.chain_params)
        return problem, None, None, None
    entry = find_problem(config.problem, config.seed)
    return entry.problem(), entry.x0, entry.x_star, entry.y_star
#get_problem
