from __future__ import annotations
import math

import numpy as np
import pytest

from revhenon.bifurcations import EventKind, continue_branch, detect_events, symmetric_period6_closed_form, trace_polynomial
from revhenon.errors import NumericalError
from revhenon.maps import conservative_h
from revhenon.orbits import SearchBox, brute_force_seeds, cyclic_distance, find_orbit
from revhenon.reversibility import SymmetryKind

pytestmark = pytest.mark.smoke



@pytest.mark.parametrize("name", ["o6_1_mu0", "o6_1_mu001"])
def test_published_six_cycles(seeds, name):
    seed = seeds[name]
    o = find_orbit(seed.map(), seed.period, seed.points)
    assert np.max(np.abs(np.array(o.ys) - np.array(seed.ys))) <= 1e-8
    if seed.mu:
        assert o.cycle_det == pytest.approx(0.9999999555, abs=1e-8)
    else:
        assert o.cycle_det == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("M", [1.6, 2.0, 2.5])
def test_symmetric_six_cycle_trace(M):
    o = symmetric_period6_closed_form(M, 1)
    assert o.monodromy_det == pytest.approx(1.0, abs=1e-9)
    assert o.trace == pytest.approx(trace_polynomial(math.sqrt(M + 1.0)), abs=1e-6)
    assert o.symmetry.kind is SymmetryKind.SYMMETRIC


@pytest.mark.slow
def test_period_six_census(seeds):
    # Of the nine period-6 solutions at M = 4, seven are real: five symmetric
    # (two from the 1:6 resonance, one from the 3-cycle doubling, two from the
    # 1:3 resonance of the 2-cycle at M = 3.75) and one asymmetric couple.
    m = conservative_h(4.0)
    found = brute_force_seeds(m, 6, SearchBox.square(3.5, grid=200))
    kinds = [o.symmetry.kind for o in found]
    assert len(found) == 7
    assert kinds.count(SymmetryKind.COUPLE_MEMBER) == 2
    assert kinds.count(SymmetryKind.SYMMETRIC) == 5
    assert all(cyclic_distance(a.as_array(), b.as_array()) > 1e-3 for i, a in enumerate(found) for b in found[i + 1:])
    # The published asymmetric orbit is one of the couple.
    ref = np.array([[p.x, p.y] for p in find_orbit(m, 6, seeds["o6_1_mu0"].points).points])
    couple = [o for o in found if o.symmetry.kind is SymmetryKind.COUPLE_MEMBER]
    assert min(cyclic_distance(o.as_array(), ref) for o in couple) <= 1e-8


@pytest.mark.slow
def test_parabolic_five_cycle_is_bracketed(seeds):
    seed = seeds["p5_parabolic"]
    target = seed.M
    ref = np.array([[p.x, p.y] for p in seed.points])
    m = seed.map()
    found = None
    for side in (1.0, -1.0):
        start = target + side * 5e-3
        try:
            o = find_orbit(m.with_param("M", start), seed.period, seed.points)
        except NumericalError:
            continue
        if cyclic_distance(o.as_array(), ref) > 0.2:
            continue
        branch = continue_branch(m, "M", start, target - side * 5e-3, o, step=1e-3, stop_on_stall=True)
        if branch.stalled_at is None:
            continue
        if len(branch) >= 3:
            birth = [e for e in detect_events(branch, scan=False) if e.kind is EventKind.PARABOLIC_BIRTH][0]
            found = birth.parameter, birth.orbit_at_event
        else:
            found = branch.stalled_at, branch.samples[-1].orbit
        break
    assert found is not None, "no fold of the 5-cycle inside M = 5.5517 +/- 5e-3"
    value, orbit = found
    assert abs(value - target) <= 5e-3
    # Coordinates were published at a four-digit parameter; near a fold they
    # move like the square root of the parameter offset.
    assert cyclic_distance(orbit.as_array(), ref) <= 5e-2
