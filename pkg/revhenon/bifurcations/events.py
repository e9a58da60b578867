from __future__ import annotations
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np
from loguru import logger
from scipy.optimize import brentq

from ..config import SolverConfig
from ..errors import AmbiguousEvent, DomainError, NumericalError, SingularNewtonMatrix
from ..maps.point import Point2, array_to_points
from ..orbits.orbit import Orbit
from ..orbits.search import SearchBox, cyclic_distance, brute_force_seeds, find_orbit
from ..reversibility.symmetry import SymmetryKind
from .continuation import Branch, BranchSample

RESONANCE_MAX_Q = 6
BIRTH_TOL = 1e-2
# Continued orbits closer than this are the same orbit.
MATCH_TOL = 1e-6


class EventKind(str, Enum):
    FOLD = "fold"
    PITCHFORK = "pitchfork"
    PERIOD_DOUBLING = "period_doubling"
    PARABOLIC_BIRTH = "parabolic_birth"
    RESONANCE_CROSSING = "resonance"


@dataclass(frozen=True)
class BifurcationEvent:
    kind: EventKind
    parameter: float
    orbit_at_event: Orbit
    emitted_branches: tuple[Branch, ...] = ()
    # (p, q) for a crossing of exp(+-2 pi i p / q)
    resonance: tuple[int, int] | None = None
    # Both +1 and -1 indicators vanish at a parabolic birth.
    fold_flip: bool = False
    # A symmetric pair and an asymmetric couple are born together.
    coalesced: bool = False

    @property
    def label(self) -> str:
        if self.kind is EventKind.RESONANCE_CROSSING and self.resonance:
            return f"{self.kind.value}({self.resonance[0]}:{self.resonance[1]})"
        return self.kind.value


def plus_indicator(o: Orbit) -> float:
    """Characteristic polynomial at +1 up to sign: zero when an eigenvalue is 1."""
    return o.trace - (1.0 + o.monodromy_det)


def minus_indicator(o: Orbit) -> float:
    return o.trace + 1.0 + o.monodromy_det


def _resonances() -> list[tuple[int, int]]:
    out = []
    for q in range(3, RESONANCE_MAX_Q + 1):
        for p in range(1, (q + 1) // 2):
            if math.gcd(p, q) == 1:
                out.append((p, q))
    return out


def _stub(branch: Branch, value: float, orbit: Orbit) -> Branch:
    return Branch(branch.template, branch.param, [BranchSample(value, orbit)])


class _Locator:
    """Solves the branch orbit at interior parameters, seeded by interpolation."""

    def __init__(self, branch: Branch, k: int, cfg: SolverConfig | None):
        self.branch, self.k, self.cfg = branch, k, cfg
        self.a, self.b = branch.samples[k], branch.samples[k + 1]

    def orbit(self, value: float) -> Orbit:
        if value == self.a.parameter:
            return self.a.orbit
        if value == self.b.parameter:
            return self.b.orbit
        t = (value - self.a.parameter) / (self.b.parameter - self.a.parameter)
        seed = (1 - t) * self.a.orbit.as_array() + t * self.b.orbit.as_array()
        return find_orbit(self.branch.map_at(value), self.branch.period, array_to_points(seed), self.cfg)

    def root(self, f: Callable[[Orbit], float], xtol: float, singular_is_root: bool = False) -> tuple[float, Orbit]:
        def g(value):
            try:
                return f(self.orbit(value))
            except SingularNewtonMatrix:
                if singular_is_root:
                    return 0.0
                raise

        value = brentq(g, self.a.parameter, self.b.parameter, xtol=xtol)
        try:
            return value, self.orbit(value)
        except SingularNewtonMatrix:
            near = self.a if abs(value - self.a.parameter) <= abs(value - self.b.parameter) else self.b
            return value, near.orbit


def _nearby_orbits(branch: Branch, value: float, period: int, center: Point2, radius: float, grid: int, cfg) -> list[Orbit]:
    box = SearchBox.around(center, radius, grid)
    found = brute_force_seeds(branch.map_at(value), period, box, cfg, workers=0)
    inside = [
        o for o in found
        if any(abs(p.x - center.x) <= radius and abs(p.y - center.y) <= radius for p in o.points)
    ]
    return inside


def _scan_window(offset: float, radius: float, spacing: float | None = None) -> tuple[float, float]:
    """Offset and radius for a nearby-orbit scan.

    The offset stays inside the sample bracket; orbits born at a +1 crossing
    sit O(sqrt(offset)) from the event orbit, so the radius follows it down.
    """
    if spacing is not None:
        offset = min(offset, 0.25 * spacing)
    return offset, min(radius, 4.0 * math.sqrt(offset))


def _born(branch: Branch, richer: list[Orbit], richer_value: float, poorer: list[Orbit], cfg) -> list[Orbit]:
    """Orbits of `richer` that the orbits of `poorer` do not continue to."""
    carried = []
    for o in poorer:
        try:
            carried.append(find_orbit(branch.map_at(richer_value), o.period, o.points, cfg).as_array())
        except NumericalError:
            continue
    return [o for o in richer if all(cyclic_distance(o.as_array(), c) > MATCH_TOL for c in carried)]


def _classify_plus(branch, value, orbit, offset, radius, grid, cfg) -> tuple[EventKind, tuple[Branch, ...]]:
    n = branch.period
    center = orbit.points[0]
    lo = _nearby_orbits(branch, value - offset, n, center, radius, grid, cfg)
    hi = _nearby_orbits(branch, value + offset, n, center, radius, grid, cfg)
    counts = (len(lo), len(hi))
    logger.debug("scan at {} (offset {:.2e}, radius {:.2e}): {} orbits below, {} above", value, offset, radius, *counts)
    if len(hi) >= len(lo):
        richer, richer_value, poorer = hi, value + offset, lo
    else:
        richer, richer_value, poorer = lo, value - offset, hi
    new = _born(branch, richer, richer_value, poorer, cfg)
    couple = [o for o in new if o.symmetry.kind is SymmetryKind.COUPLE_MEMBER]
    if len(new) == 2 and len(couple) == 2 and poorer:
        return EventKind.PITCHFORK, tuple(_stub(branch, richer_value, o) for o in couple)
    if len(new) in (1, 2) and len(couple) < 2:
        return EventKind.FOLD, tuple(_stub(branch, richer_value, o) for o in new)
    raise AmbiguousEvent(f"cannot tell fold from pitchfork at {branch.param}={value}: nearby orbit counts {counts}", value, counts)


def detect_events(
    branch: Branch,
    cfg: SolverConfig | None = None,
    scan: bool = True,
    scan_offset: float = 1e-3,
    scan_radius: float = 0.1,
    scan_grid: int = 9,
    xtol: float = 1e-12,
) -> list[BifurcationEvent]:
    """Eigenvalue crossings of +1, -1 and low-order roots of unity along a branch.

    Crossings are bracketed by sign changes between samples and refined with
    Brent's method. With `scan`, +1 crossings are told apart by searching for
    period-n orbits in a small box on both sides: a pitchfork adds an
    asymmetric couple next to an orbit that persists, a fold adds orbits on
    one side only. The scan offset is capped at a quarter of the local sample
    spacing, so closely spaced folds and pitchforks are still separated.
    """
    if len(branch) < 3:
        raise DomainError(f"event detection needs at least 3 samples, got {len(branch)}")
    samples = branch.samples
    plus = np.array([plus_indicator(s.orbit) for s in samples])
    minus = np.array([minus_indicator(s.orbit) for s in samples])
    events: list[BifurcationEvent] = []

    for k in range(len(samples) - 1):
        loc = _Locator(branch, k, cfg)
        offset, radius = _scan_window(scan_offset, scan_radius, abs(samples[k + 1].parameter - samples[k].parameter))
        if plus[k] == 0.0 or plus[k] * plus[k + 1] < 0:
            if plus[k] == 0.0:
                value, orbit = samples[k].parameter, samples[k].orbit
            else:
                value, orbit = loc.root(plus_indicator, xtol, singular_is_root=True)
            kind, emitted = EventKind.FOLD, ()
            if scan:
                kind, emitted = _classify_plus(branch, value, orbit, offset, radius, scan_grid, cfg)
            logger.info("{} at {}={:.12g}", kind.value, branch.param, value)
            events.append(BifurcationEvent(kind, value, orbit, emitted))
        if minus[k] * minus[k + 1] < 0:
            value, orbit = loc.root(minus_indicator, xtol)
            emitted = ()
            if scan:
                emitted = tuple(
                    _stub(branch, value + side * offset, o)
                    for side in (-1.0, 1.0)
                    for o in _nearby_orbits(branch, value + side * offset, 2 * branch.period, orbit.points[0], radius, scan_grid, cfg)
                )
            logger.info("period doubling at {}={:.12g}", branch.param, value)
            events.append(BifurcationEvent(EventKind.PERIOD_DOUBLING, value, orbit, emitted))
        a, b = samples[k].orbit, samples[k + 1].orbit
        if abs(a.monodromy_det - 1.0) <= 1e-6 and abs(b.monodromy_det - 1.0) <= 1e-6:
            for p, q in _resonances():
                level = 2.0 * math.cos(2.0 * math.pi * p / q)
                if (a.trace - level) * (b.trace - level) < 0:
                    value, orbit = loc.root(lambda o, level=level: o.trace - level, xtol)
                    logger.info("resonance {}:{} crossing at {}={:.12g}", p, q, branch.param, value)
                    events.append(BifurcationEvent(EventKind.RESONANCE_CROSSING, value, orbit, resonance=(p, q)))

    if branch.stalled_at is not None:
        last = samples[-1]
        flip = abs(minus_indicator(last.orbit)) <= BIRTH_TOL
        emitted, coalesced = (), False
        if scan:
            side = -1.0 if branch.samples[-1].parameter > branch.samples[-2].parameter else 1.0
            value = last.parameter + side * scan_offset
            center = last.orbit.points[0]
            found = _nearby_orbits(branch, value, branch.period, center, scan_radius, scan_grid, cfg)
            if flip:
                found += _nearby_orbits(branch, value, 2 * branch.period, center, scan_radius, scan_grid, cfg)
            emitted = tuple(_stub(branch, value, o) for o in found)
            # Fold and pitchfork at one parameter: the couple is born with the symmetric pair.
            kinds = [o.symmetry.kind for o in found if o.period == branch.period]
            coalesced = kinds.count(SymmetryKind.COUPLE_MEMBER) >= 2 and kinds.count(SymmetryKind.SYMMETRIC) >= 1
        logger.info(
            "parabolic birth at {}={:.12g}{}{}",
            branch.param,
            last.parameter,
            " (fold-flip)" if flip else "",
            " (fold and pitchfork coalesce)" if coalesced else "",
        )
        events.append(BifurcationEvent(EventKind.PARABOLIC_BIRTH, last.parameter, last.orbit, emitted, fold_flip=flip, coalesced=coalesced))

    events.sort(key=lambda e: e.parameter)
    return events
