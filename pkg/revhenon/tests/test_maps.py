from __future__ import annotations
import numpy as np
import pytest

from revhenon.errors import DomainError, NumericalError
from revhenon.maps import (
    Family,
    MapInstance,
    Nonlinearity,
    PerturbationSpec,
    Point2,
    conservative_h,
    cross_form_factor,
    differential,
    hm1mu,
    hp1mu,
    image_residual,
    iterate,
    jacobian_analytic,
    jacobian_fd,
    make_map,
    step,
    step_inverse,
    step_many,
    t2mu,
)
from revhenon.maps.catalog import catalog_instances, unperturbed_instances

CATALOG = catalog_instances()


def test_nonlinearity_kinds():
    assert Nonlinearity.minus(2.0)(1.5) == pytest.approx(-0.25)
    assert Nonlinearity.plus(2.0)(1.5) == pytest.approx(0.25)
    cubic = Nonlinearity.polynomial([1.0, 0.0, 0.0, -1.0])
    assert cubic.derivative(2.0) == pytest.approx(-12.0)
    assert Nonlinearity.plus(1.0).is_even()
    assert not cubic.is_even()
    with pytest.raises(DomainError):
        cubic.with_M(1.0)


def test_perturbation_partials():
    e = PerturbationSpec.monomials({(1, 1): 0.5, (2, 0): 0.25})
    assert e(2.0, 3.0) == pytest.approx(4.0)
    assert e.eps_x(2.0, 3.0) == pytest.approx(2.5)
    assert e.eps_y(2.0, 3.0) == pytest.approx(1.0)
    assert not e.is_symmetric()
    assert PerturbationSpec.monomials({(1, 1): 0.1, (2, 0): 0.2, (0, 2): 0.2}).is_symmetric()
    with pytest.raises(DomainError):
        e.v


def test_separable_perturbation():
    s = PerturbationSpec.separable([0.0, 0.0, 0.05], [0.0, 0.0, 0.0, 0.02])
    assert s(1.0, 2.0) == pytest.approx(0.05 + 0.16)
    assert s.v(2.0) == pytest.approx(0.2)
    assert s.eps_y(1.0, 2.0) == pytest.approx(0.24)
    assert s.linear_in_first() is None


def test_linear_in_first_split():
    alpha, beta = PerturbationSpec.monomials({(1, 1): 0.03, (0, 2): 0.02}).linear_in_first()
    assert alpha(2.0) == pytest.approx(0.08)
    assert beta(2.0) == pytest.approx(0.06)
    assert PerturbationSpec.monomials({(2, 1): 0.01}).linear_in_first() is None


def test_family_parse_and_guards():
    assert Family.parse("t2mu") is Family.T2MU
    assert Family.parse("QRexample1") is Family.QR_EXAMPLE1
    with pytest.raises(DomainError):
        Family.parse("bogus")
    with pytest.raises(DomainError):
        t2mu(0.5, 0.0, 0.0)
    with pytest.raises(DomainError):
        MapInstance(Family.HM1MU, Nonlinearity.minus(1.0))
    with pytest.raises(DomainError):
        make_map(Family.NONORIENTABLE_HAT_HM1, nonlinearity=Nonlinearity.polynomial([0.0, 1.0, 1.0]))


@pytest.mark.parametrize("family", list(Family), ids=lambda f: f.value)
def test_every_family_builds_from_its_member(family):
    m = make_map(family, 0.5, b=1.5)
    assert m.family is family
    assert make_map(family.value, 0.5, b=1.5) == m
    assert MapInstance(family, m.nonlinearity, b=1.5).family is family
    p = Point2(0.1, 0.2)
    assert image_residual(m, p, step(m, p)) <= 1e-12


def test_named_constructors_keep_their_family():
    assert conservative_h(1.0).family is Family.CONSERVATIVE_H
    assert hp1mu(1.0, 0.01).family is Family.HP1MU
    assert hm1mu(1.0, 0.01).family is Family.HM1MU
    assert t2mu(1.0, 1.5, 0.01).family is Family.T2MU


@pytest.mark.parametrize("family", list(CATALOG), ids=lambda f: f.value)
def test_catalog_is_solvable_on_the_sample_box(family):
    m = CATALOG[family]
    g = np.linspace(-2.0, 2.0, 41)
    X, Y = np.meshgrid(g, g)
    xs, ys = X.ravel(), Y.ravel()
    for inverse in (False, True):
        u, v = step_many(m, xs, ys, inverse=inverse)
        assert np.all(np.isfinite(u)) and np.all(np.isfinite(v))


def test_cross_form_catalog_solves_where_a_quadratic_first_argument_fails():
    # eps quadratic in its first argument leaves the implicit equation without
    # a real root near this point.
    p = Point2(1.4868, -1.8606)
    quadratic = make_map(Family.CROSS_FORM_TILDE_H, 0.5, eps=PerturbationSpec.monomials({(1, 1): 0.03, (2, 0): 0.02, (0, 1): 0.02}))
    with pytest.raises(NumericalError):
        step(quadratic, p)
    m = CATALOG[Family.CROSS_FORM_TILDE_H]
    q = step(m, p)
    assert image_residual(m, p, q) <= 1e-12
    assert step_inverse(m, q).distance(p) <= 1e-11


def test_with_param():
    m = t2mu(0.5, 1.5, 0.03)
    assert m.with_param("M", 2.0).M == 2.0
    assert m.with_param("b", -1.0).b == -1.0
    assert m.with_param("mu", 0.01).mu == 0.01
    with pytest.raises(DomainError):
        conservative_h(1.0).with_param("b", 2.0)
    with pytest.raises(DomainError):
        m.with_param("q", 1.0)


def test_henon_step_is_explicit():
    m = conservative_h(1.3)
    p = Point2(0.4, -0.7)
    assert step(m, p).distance(Point2(-0.7, 1.3 - 0.4 - 0.49)) <= 1e-15
    assert hp1mu(1.3, 0.0).is_unperturbed
    q = step(hp1mu(1.3, 0.0), p)
    assert q.distance(step(m, p)) <= 1e-15


@pytest.mark.parametrize("family", list(CATALOG), ids=lambda f: f.value)
def test_inverse_undoes_step(family, rng):
    m = CATALOG[family]
    for x, y in rng.uniform(-1.5, 1.5, size=(20, 2)):
        p = Point2(x, y)
        q = step(m, p)
        assert image_residual(m, p, q) <= 1e-12
        assert step_inverse(m, q).distance(p) <= 1e-11


def test_step_many_matches_step(rng):
    m = CATALOG[Family.QR_HAT_H]
    pts = rng.uniform(-1.0, 1.0, size=(25, 2))
    u, v = step_many(m, pts[:, 0], pts[:, 1])
    for (x, y), a, b in zip(pts, u, v):
        q = step(m, Point2(x, y))
        assert abs(q.x - a) <= 1e-13 and abs(q.y - b) <= 1e-13


def test_tilde_hm2_explicit_branch():
    m = make_map(Family.TILDE_HM2, 0.5, eps=PerturbationSpec.monomials({(1, 1): 0.03, (0, 2): 0.02}))
    x, y = 0.6, -0.3
    F = m.nonlinearity
    yb = (-y + F(x) + 0.02 * x**2) / (1.0 - 0.03 * x)
    xb = -x + F(yb) + 0.02 * yb**2 + x * 0.03 * yb
    q = step(m, Point2(x, y))
    assert q.x == pytest.approx(xb, abs=1e-13)
    assert q.y == pytest.approx(yb, abs=1e-13)


@pytest.mark.parametrize("family", list(CATALOG), ids=lambda f: f.value)
def test_analytic_jacobian_matches_finite_differences(family, rng):
    m = CATALOG[family]
    for x, y in rng.uniform(-1.0, 1.0, size=(10, 2)):
        p = Point2(x, y)
        J = jacobian_analytic(m, p)
        assert np.linalg.det(jacobian_fd(m, p)) == pytest.approx(J, rel=1e-6)
        assert np.linalg.det(differential(m, p)) == pytest.approx(J, rel=1e-10)


@pytest.mark.parametrize("family", list(CATALOG), ids=lambda f: f.value)
def test_unperturbed_jacobian_is_orientation(family):
    m = unperturbed_instances()[family]
    J = jacobian_analytic(m, Point2(0.3, -0.2))
    assert J == pytest.approx(float(m.orientation), abs=1e-14)


def test_named_family_jacobians():
    p = Point2(0.3, -0.2)
    m = t2mu(0.5, 1.5, 0.03)
    q = step(m, p)
    assert jacobian_analytic(m, p) == pytest.approx((1 + 1.5 * 0.03 * q.y) / (1 + 1.5 * 0.03 * p.x), rel=1e-14)
    m = hm1mu(0.5, 0.03)
    q = step(m, p)
    assert jacobian_analytic(m, p) == pytest.approx(-(1 + 0.03 * p.y) / (1 + 0.03 * q.x), rel=1e-14)
    m = hp1mu(0.5, 0.03)
    q = step(m, p)
    expected = (1 + 0.03 * (p.y + 2 * p.x)) / (1 + 0.03 * (q.x + 2 * q.y))
    assert jacobian_analytic(m, p) == pytest.approx(expected, rel=1e-14)


def test_cross_form_factor_ratio():
    m = CATALOG[Family.CROSS_FORM_TILDE_H]
    p = Point2(0.25, 0.4)
    q = step(m, p)
    ratio = cross_form_factor(m, p.x, q.y, p, q) / cross_form_factor(m, q.y, p.x, p, q)
    assert ratio == pytest.approx(jacobian_analytic(m, p, q), rel=1e-14)
    with pytest.raises(DomainError):
        cross_form_factor(conservative_h(1.0), 0.0, 0.0, p)


def test_symmetric_cross_form_keeps_x_bar_equal_y():
    m = make_map(Family.CROSS_FORM_TILDE_H, 0.7, eps=PerturbationSpec.monomials({(1, 1): 0.04, (2, 0): 0.02, (0, 2): 0.02}))
    p = Point2(-0.35, 0.8)
    assert step(m, p).x == pytest.approx(p.y, abs=1e-13)


def test_iterate():
    m = hp1mu(1.0, 0.02)
    p = Point2(0.1, 0.2)
    assert iterate(m, p, 0) == [p]
    forward = iterate(m, p, 5)
    assert len(forward) == 6
    back = iterate(m, forward[-1], 5, backward=True)
    assert back[-1].distance(p) <= 1e-11
    with pytest.raises(DomainError):
        iterate(m, p, -1)
