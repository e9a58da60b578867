from __future__ import annotations
import math
from dataclasses import dataclass, field

import numpy as np
from loguru import logger
from tenacity import Retrying, retry_if_exception_type, retry_if_not_exception_type, stop_after_attempt

from ..config import SolverConfig
from ..errors import DomainError, NumericalError, StallAtSingularity
from ..maps.families import MapInstance
from ..maps.point import array_to_points
from ..orbits.orbit import Orbit
from ..orbits.search import find_orbit

MIN_STEP = 1e-9


class JumpedBranch(NumericalError):
    """Newton landed on a different orbit than the one being continued."""


@dataclass(frozen=True)
class BranchSample:
    parameter: float
    orbit: Orbit


@dataclass
class Branch:
    template: MapInstance
    param: str
    samples: list[BranchSample] = field(default_factory=list)
    # Parameter of the last sample when continuation stopped at a singularity.
    stalled_at: float | None = None

    @property
    def period(self) -> int:
        return self.samples[0].orbit.period

    @property
    def parameters(self) -> np.ndarray:
        return np.array([s.parameter for s in self.samples])

    def map_at(self, value: float) -> MapInstance:
        return self.template.with_param(self.param, value)

    def __len__(self):
        return len(self.samples)


def _max_distance(a: Orbit, b: np.ndarray) -> float:
    return float(np.max(np.abs(a.as_array() - b)))


def continue_branch(
    template: MapInstance,
    param: str,
    start: float,
    stop: float,
    orbit: Orbit,
    step: float = 0.01,
    cfg: SolverConfig | None = None,
    min_step: float = MIN_STEP,
    max_jump: float = 0.5,
    stop_on_stall: bool = False,
) -> Branch:
    """Natural-parameter continuation of `orbit` from start to stop.

    Failed Newton solves are retried with the step halved until it drops
    below min_step; the step then grows back by doubling. A secant predictor
    seeds each solve once two samples exist.
    """
    if not step > 0:
        raise DomainError(f"continuation step must be > 0, got {step}")
    if start == stop:
        raise DomainError("empty continuation range")
    template.with_param(param, start)
    direction = 1.0 if stop > start else -1.0
    branch = Branch(template, param)
    first = find_orbit(branch.map_at(start), orbit.period, orbit.points, cfg)
    branch.samples.append(BranchSample(start, first))
    attempts = max(1, int(math.ceil(math.log2(step / min_step))) + 1)
    logger.info("continuing period-{} orbit of {} in {} over [{}, {}] step {}", first.period, template.family.value, param, start, stop, step)

    ds = step
    current, prev = branch.samples[-1], None
    while direction * (stop - current.parameter) > 1e-15 * max(1.0, abs(stop)):
        z0 = current.orbit.as_array()
        retrying = Retrying(
            retry=retry_if_exception_type(NumericalError) & retry_if_not_exception_type(StallAtSingularity),
            stop=stop_after_attempt(attempts),
            reraise=True,
        )
        h = ds
        try:
            for attempt in retrying:
                with attempt:
                    h = ds / 2 ** (attempt.retry_state.attempt_number - 1)
                    if h < min_step:
                        raise StallAtSingularity(
                            f"step fell below {min_step:g} at {param}={current.parameter}",
                            parameter=current.parameter,
                            step=h,
                        )
                    h_eff = min(h, direction * (stop - current.parameter))
                    value = current.parameter + direction * h_eff
                    if direction * (stop - value) < 1e-12 * max(1.0, abs(stop)):
                        value = stop
                    if prev is not None:
                        slope = (z0 - prev.orbit.as_array()) / (current.parameter - prev.parameter)
                        pred = z0 + slope * (value - current.parameter)
                    else:
                        pred = z0
                    o = find_orbit(branch.map_at(value), first.period, array_to_points(pred), cfg)
                    if _max_distance(o, z0) > max_jump:
                        raise JumpedBranch(f"orbit moved more than {max_jump} between {current.parameter} and {value}")
        except NumericalError as e:
            if stop_on_stall:
                branch.stalled_at = current.parameter
                logger.warning("branch stalled at {}={}: {}", param, current.parameter, e)
                return branch
            if isinstance(e, StallAtSingularity):
                raise
            raise StallAtSingularity(f"continuation stalled at {param}={current.parameter}: {e}", current.parameter, h) from e
        if h < ds:
            logger.debug("accepted halved step {:.3e} at {}={}", h, param, value)
        prev, current = current, BranchSample(value, o)
        branch.samples.append(current)
        ds = min(step, 2.0 * h)
    logger.info("branch done: {} samples, {} in [{}, {}]", len(branch), param, branch.samples[0].parameter, branch.samples[-1].parameter)
    return branch
