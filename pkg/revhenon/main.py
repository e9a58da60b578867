from __future__ import annotations
import argparse
import sys
from typing import Callable

import numpy as np
from loguru import logger

from .bifurcations.closed_forms import curves_table
from .bifurcations.continuation import continue_branch
from .bifurcations.events import detect_events
from .config import CONFIG, SolverConfig
from .errors import ConfigError, DomainError, NumericalError
from .jobs import FORMATS, PARAMS, JobConfig, load_job
from .logger import setup_logger
from .maps.catalog import catalog_instances
from .maps.point import Point2
from .maps.solver import iterate
from .orbits.search import brute_force_seeds, find_orbit
from .reporting import (
    branch_rows,
    curve_rows,
    event_to_dict,
    gates_to_dicts,
    open_output,
    orbit_to_dict,
    trajectory_rows,
    write_csv,
    write_json,
    write_json_lines,
)
from .utils import load_points, load_yaml
from .verification import render_gates, run_verification

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_GATE = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _seed_points(job: JobConfig) -> list[Point2]:
    try:
        doc = load_yaml(job.seed_file)
    except OSError as e:
        raise ConfigError("seed_file", f"cannot read {job.seed_file}: {e}") from e
    if not isinstance(doc, dict):
        raise ConfigError("seed_file", "expected a mapping with `points` or `y`")
    if "orbits" in doc:
        if not doc["orbits"]:
            raise ConfigError("seed_file", "orbit list is empty")
        doc = doc["orbits"][0]
    return load_points(doc, field="seed_file")


def cmd_iterate(job: JobConfig, cfg: SolverConfig) -> int:
    m = job.build_map()
    if job.point is not None:
        start = job.point
    elif job.seed_file is not None:
        start = _seed_points(job)[0]
    else:
        raise ConfigError("point", "iterate needs --point or --seed-file")
    points = iterate(m, start, job.steps or 0, cfg, backward=job.backward)
    with open_output(job.out) as out:
        if job.format == "json":
            write_json_lines(trajectory_rows(points, as_text=False), out)
        else:
            write_csv(trajectory_rows(points), out, ["step", "x", "y"])
    return EXIT_OK


def cmd_orbit(job: JobConfig, cfg: SolverConfig) -> int:
    m = job.build_map()
    if job.seed_file is not None:
        seed = _seed_points(job)
        orbit = find_orbit(m, job.period or len(seed), seed, cfg)
        logger.info("period-{} orbit residual {:.3e} trace {:.12g} ({})", orbit.period, orbit.residual, orbit.trace, orbit.stability.value)
        report = orbit_to_dict(orbit, m)
    else:
        if job.period is None:
            raise ConfigError("period", "orbit search needs --period when no seed is given")
        found = brute_force_seeds(m, job.period, job.search_box(), cfg, job.workers)
        report = {**m.describe(), "period": job.period, "orbits": [orbit_to_dict(o) for o in found]}
    with open_output(job.out) as out:
        write_json(report, out)
    return EXIT_OK


def cmd_verify(job: JobConfig, cfg: SolverConfig) -> int:
    if job.family is not None:
        maps = {job.family.value: job.build_map()}
    else:
        maps = {f.value: m for f, m in catalog_instances().items()}
    records = run_verification(maps, job.samples, job.gates, cfg)
    render_gates(records)
    with open_output(job.out) as out:
        if job.format == "json":
            write_json(gates_to_dicts(records), out)
        else:
            write_csv(gates_to_dicts(records), out)
    failed = [r for r in records if not r.passed]
    if failed:
        logger.error("{} of {} gates failed", len(failed), len(records))
        return EXIT_GATE
    return EXIT_OK


def cmd_branch(job: JobConfig, cfg: SolverConfig) -> int:
    if job.range is None:
        raise ConfigError("range", "branch needs --range lo:hi")
    if job.seed_file is not None:
        seed = _seed_points(job)
    elif job.point is not None:
        seed = [job.point]
    else:
        raise ConfigError("seed_file", "branch needs a starting orbit (--seed-file or --point)")
    start, stop = job.range
    template = job.build_map()
    try:
        first = template.with_param(job.param, start)
    except DomainError as e:
        raise ConfigError("param", str(e)) from e
    orbit = find_orbit(first, job.period or len(seed), seed, cfg)
    branch = continue_branch(template, job.param, start, stop, orbit, step=job.step, cfg=cfg, stop_on_stall=job.stop_on_stall)
    if len(branch) >= 3:
        events = detect_events(branch, cfg, scan=job.scan)
    else:
        logger.warning("only {} samples; skipping event detection", len(branch))
        events = []
    for e in events:
        logger.info("event {} at {}={:.12g}", e.label, job.param, e.parameter)
    with open_output(job.out) as out:
        if job.format == "json":
            write_json({"param": job.param, "samples": branch_rows(branch), "stalled_at": branch.stalled_at}, out)
        else:
            write_csv(branch_rows(branch), out)
    events_out = job.events_out
    if events_out is None and job.out is not None:
        events_out = job.out.with_suffix(".events.json")
    if events_out is not None:
        with open_output(events_out) as out:
            write_json([event_to_dict(e, job.param) for e in events], out)
    return EXIT_OK


def cmd_curves(job: JobConfig, cfg: SolverConfig) -> int:
    lo, hi = job.range or (-2.0, 2.0)
    bs = np.linspace(lo, hi, job.steps or 81)
    rows = curves_table(bs, job.mu)
    with open_output(job.out) as out:
        if job.format == "json":
            write_json(rows, out)
        else:
            write_csv(curve_rows(rows), out, ["b", "mu", "F", "F_label", "PF", "PF_label"])
    return EXIT_OK


COMMANDS: dict[str, Callable[[JobConfig, SolverConfig], int]] = {
    "iterate": cmd_iterate,
    "orbit": cmd_orbit,
    "verify": cmd_verify,
    "branch": cmd_branch,
    "curves": cmd_curves,
}

_HELP = {
    "iterate": "forward or backward trajectory from a point",
    "orbit": "polish a seeded periodic orbit, or brute-force search a box",
    "verify": "reversibility, Jacobian and invariant-density checks",
    "branch": "continue an orbit in M, b or mu and detect bifurcations",
    "curves": "fold and pitchfork curves of T2mu over a b-grid",
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat YAML job file; flags override its keys")
    common.add_argument("--family")
    common.add_argument("--M")
    common.add_argument("--b")
    common.add_argument("--mu")
    common.add_argument("--nonlinearity", help="minus, plus or poly")
    common.add_argument("--F", help="ascending coefficients of a poly nonlinearity")
    common.add_argument("--eps-form", choices=["bivariate", "separable"])
    common.add_argument("--eps", help="'a00,a01;a10,a11' or 'p0,p1|q0,q1'")
    common.add_argument("--eps2")
    common.add_argument("--period")
    common.add_argument("--seed-file")
    common.add_argument("--range", help="lo:hi (use --range=-1:2 for a negative lo)")
    common.add_argument("--param", choices=PARAMS)
    common.add_argument("--step")
    common.add_argument("--steps")
    common.add_argument("--grid")
    common.add_argument("--box", help="r or xmin,xmax,ymin,ymax")
    common.add_argument("--point", help="x,y")
    common.add_argument("--samples")
    common.add_argument("--workers")
    common.add_argument("--backward", action="store_const", const=True)
    common.add_argument("--stop-on-stall", action="store_const", const=True)
    common.add_argument("--no-scan", dest="scan", action="store_const", const=False)
    common.add_argument("--out")
    common.add_argument("--events-out")
    common.add_argument("--format", choices=FORMATS)
    common.add_argument("--log-level", default=None)

    parser = _Parser(prog="revhenon", description="Reversible Henon-like maps: orbits, bifurcations, checks")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=_HELP[name])
    return parser


def _overrides(args: argparse.Namespace) -> dict:
    skip = {"command", "config", "log_level"}
    return {k: v for k, v in vars(args).items() if k not in skip and v is not None}


def cli(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        setup_logger((args.log_level or CONFIG.log_level).upper(), trace_newton=CONFIG.trace_newton)
    except ValueError as e:
        print(f"revhenon: error: bad --log-level: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        job = load_job(args.config, _overrides(args))
        return COMMANDS[args.command](job, SolverConfig())
    except ConfigError as e:
        logger.error("bad configuration: {}", e)
        return EXIT_USAGE
    except NumericalError as e:
        where = f" at step {e.step_index}" if hasattr(e, "step_index") else ""
        logger.error("numerical failure{}: {}", where, e)
        return EXIT_NUMERICAL
    except DomainError as e:
        logger.error("invalid input: {}", e)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(cli())
