from __future__ import annotations
import math

import numpy as np
import pytest

from revhenon.bifurcations import (
    curve_F,
    curve_PF,
    curve_label,
    curves_table,
    henon_fixed_points,
    hm1mu_fixed_points,
    hm1mu_period2_orbit,
    symmetric_period3_closed_form,
    symmetric_period6_closed_form,
    symmetric_period6_y,
    t2mu_fixed_points,
    t2mu_symmetric_fixed_points,
    trace_of_M,
    trace_polynomial,
    trace_polynomial_factored,
)
from revhenon.errors import DenominatorVanishes, DomainError
from revhenon.maps import conservative_h, hm1mu, jacobian_analytic, step, t2mu
from revhenon.reversibility import SymmetryKind


def test_curves_reference_values():
    assert curve_F(1.0, 0.0) == 0.0
    assert curve_PF(-1.0, 0.0) == pytest.approx(3.0)
    for b in (-2.0, -0.5, 0.3, 1.7):
        assert curve_F(b, 0.0) == pytest.approx(-((b - 1.0) ** 2) / 4.0)
    with pytest.raises(DenominatorVanishes):
        curve_F(2.0, -0.5)
    with pytest.raises(DomainError):
        curve_PF(0.0, 0.01)


def test_curve_labels_and_table():
    assert curve_label("F", -1.0) == "F1"
    assert curve_label("pf", 0.5) == "PF2"
    rows = curves_table(np.linspace(-1.0, 1.0, 5), 0.02)
    # b = 0 is skipped
    assert [r["b"] for r in rows] == [-1.0, -0.5, 0.5, 1.0]
    assert rows[0]["F_label"] == "F1" and rows[-1]["PF_label"] == "PF2"


@pytest.mark.parametrize("b, mu", [(-1.0, 0.0), (-0.5, 0.03), (0.4, 0.02), (1.8, 0.04)])
def test_d_vanishes_on_pitchfork_curve(b, mu):
    assert t2mu_fixed_points(b, curve_PF(b, mu), mu).D == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("b, mu", [(-1.0, 0.0), (0.4, 0.02), (1.8, 0.04)])
def test_symmetric_fixed_points_are_fixed(b, mu):
    M = curve_PF(b, mu) + 0.3
    m = t2mu(M, b, mu)
    pts = t2mu_symmetric_fixed_points(b, M, mu)
    assert len(pts) == 2
    for p in pts:
        assert step(m, p).distance(p) <= 1e-10


def test_asymmetric_pair_reference_case():
    fp = t2mu_fixed_points(-1.0, 3.5, 0.0)
    assert fp.D == pytest.approx(0.5)
    m1, m2 = fp.asymmetric
    assert m1.x == pytest.approx(1.0 + math.sqrt(0.5))
    assert m1.y == pytest.approx(1.0 - math.sqrt(0.5))
    m = t2mu(3.5, -1.0, 0.0)
    assert step(m, m1).distance(m1) <= 1e-10
    assert step(m, m2).distance(m2) <= 1e-10


@pytest.mark.parametrize("b, mu", [(0.4, 0.02), (1.8, 0.04), (-0.5, -0.03)])
def test_asymmetric_jacobians(b, mu):
    M = curve_PF(b, mu) + 0.5
    fp = t2mu_fixed_points(b, M, mu)
    m = t2mu(M, b, mu)
    m1, m2 = fp.asymmetric
    assert step(m, m1).distance(m1) <= 1e-10
    assert jacobian_analytic(m, m1, m1) == pytest.approx(fp.J1, abs=1e-10)
    assert jacobian_analytic(m, m2, m2) == pytest.approx(fp.J2, abs=1e-10)
    assert fp.J1 * fp.J2 == pytest.approx(1.0, abs=1e-12)
    assert fp.J1 < 1.0 < fp.J2


def test_no_asymmetric_pair_below_pitchfork():
    fp = t2mu_fixed_points(-1.0, 2.5, 0.0)
    assert fp.D < 0 and fp.asymmetric is None and fp.J1 is None


def test_hm1mu_fixed_points():
    fp = hm1mu_fixed_points(1.0, 0.0)
    assert (fp.S1.x, fp.S1.y) == (-1.0, 1.0)
    assert fp.J1 == pytest.approx(-1.0) and fp.J2 == pytest.approx(-1.0)
    fp = hm1mu_fixed_points(1.0, 0.01)
    assert fp.J1 == pytest.approx(-1.0 - 0.02 / (math.sqrt(1.02) - 0.01), abs=1e-12)
    assert fp.J1 < -1.0 < fp.J2 < 0.0
    assert fp.J1 * fp.J2 == pytest.approx(1.0, abs=1e-12)
    m = hm1mu(1.0, 0.01)
    assert step(m, fp.S1).distance(fp.S1) <= 1e-10
    assert jacobian_analytic(m, fp.S1, fp.S1) == pytest.approx(fp.J1, abs=1e-12)
    with pytest.raises(DomainError):
        hm1mu_fixed_points(-0.1, 0.01)


def test_hm1mu_two_cycle():
    q1, q2 = hm1mu_period2_orbit(0.25, 0.05)
    m = hm1mu(0.25, 0.05)
    assert step(m, q1).distance(q2) <= 1e-10
    assert step(m, q2).distance(q1) <= 1e-10


def test_henon_fixed_points():
    m = conservative_h(0.7)
    for p in henon_fixed_points(0.7):
        assert step(m, p).distance(p) <= 1e-14
    with pytest.raises(DomainError):
        henon_fixed_points(-1.5)


def test_symmetric_three_cycles():
    for branch in (1, 2):
        o = symmetric_period3_closed_form(2.0, branch)
        assert o.period == 3
        assert o.residual <= 1e-10
        assert o.symmetry.kind is SymmetryKind.SYMMETRIC
    with pytest.raises(DomainError):
        symmetric_period3_closed_form(0.5)


def test_symmetric_six_cycle_at_pitchfork_parameter():
    y = symmetric_period6_y(3.0, 1)
    assert y[1] == pytest.approx(2.0)
    assert y[0] == pytest.approx((-1.0 - math.sqrt(5.0)) / 2.0)
    assert y[2] == pytest.approx((-1.0 + math.sqrt(5.0)) / 2.0)
    assert y == pytest.approx(y[::-1])
    o = symmetric_period6_closed_form(3.0, 1)
    assert o.period == 6
    assert o.residual <= 1e-10
    assert o.symmetry.kind is SymmetryKind.SYMMETRIC


def test_six_cycles_degenerate_at_birth():
    born = symmetric_period6_closed_form(1.25, 1)
    assert born.period == 3
    o3 = symmetric_period3_closed_form(1.25, 1)
    assert sorted(born.ys) == pytest.approx(sorted(o3.ys))
    fp = symmetric_period6_closed_form(-0.75, 2)
    assert fp.period == 1
    assert (fp.points[0].x, fp.points[0].y) == pytest.approx((-0.5, -0.5))
    with pytest.raises(DomainError):
        symmetric_period6_y(1.2, 1)
    with pytest.raises(DomainError):
        symmetric_period6_y(-0.8, 2)


def test_trace_polynomial():
    assert trace_polynomial(1.5) == pytest.approx(2.0)
    assert trace_polynomial(2.0) == pytest.approx(2.0)
    assert trace_polynomial(0.0) == 2.0
    x = np.linspace(-1.0, 3.0, 41)
    np.testing.assert_allclose(trace_polynomial(x), trace_polynomial_factored(x), rtol=1e-9, atol=1e-12)
    M = np.linspace(1.25, 3.5, 10)
    np.testing.assert_allclose(trace_of_M(M), trace_polynomial(np.sqrt(M + 1.0)), rtol=1e-9, atol=1e-9)


def test_trace_polynomial_matches_chained_trace():
    o = symmetric_period6_closed_form(2.0, 1)
    assert o.trace == pytest.approx(trace_polynomial(math.sqrt(3.0)), abs=1e-6)
