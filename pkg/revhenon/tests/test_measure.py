from __future__ import annotations
import numpy as np
import pytest
from numpy.polynomial import Polynomial

from revhenon.errors import DomainError
from revhenon.maps import Family, PerturbationSpec, Point2, jacobian_analytic, make_map, step, t2mu
from revhenon.measure import DensitySpec, density, density_forward, transfer_residual, transfer_residuals
from revhenon.orbits import SearchBox, brute_force_seeds
from revhenon.reversibility import H

SEPARABLE = [
    ([0.0, 0.0, 0.0, 0.05], [0.0, 0.0, 0.0, 0.02], 1.0),
    ([0.0, 0.03, 0.0, 0.01], [0.0, 0.1], 0.5),
    ([0.0, 0.0, -0.04], [0.0, 0.0, 0.05], 1.5),
]


def _qr1(p, q, M):
    return make_map(Family.QR_EXAMPLE1, M, eps=PerturbationSpec.separable(p, q))


@pytest.mark.parametrize("p, q, M", SEPARABLE)
def test_density_is_invariant(p, q, M, rng):
    m = _qr1(p, q, M)
    spec = DensitySpec.from_map(m)
    assert spec.is_positive()
    pts = rng.uniform(-2.0, 2.0, size=(300, 2))
    assert float(np.max(transfer_residuals(m, spec, pts[:, 0], pts[:, 1]))) <= 1e-10
    x, y = pts[0]
    assert transfer_residual(m, spec, Point2(x, y)) <= 1e-10


def test_wrong_density_is_not_invariant(rng):
    m = make_map(Family.QR_EXAMPLE1, 1.0, eps=PerturbationSpec.monomials({(2, 1): 0.05}))
    spec = DensitySpec(Polynomial([0.0, 0.1]))
    pts = rng.uniform(-1.5, 1.5, size=(200, 2))
    assert float(np.median(transfer_residuals(m, spec, pts[:, 0], pts[:, 1]))) > 1e-4


def test_unperturbed_density_is_uniform():
    m = make_map(Family.QR_EXAMPLE1, 1.0)
    spec = DensitySpec.from_map(m)
    assert density(m, spec, Point2(0.7, -1.3)) == 1.0
    assert DensitySpec.zero().weight(5.0) == 1.0


def test_density_forward_is_density_at_image():
    m = _qr1(*SEPARABLE[0])
    spec = DensitySpec.from_map(m)
    p = Point2(0.4, -0.9)
    assert density_forward(m, spec, p) == pytest.approx(density(m, spec, step(m, p)), abs=1e-12)


def test_density_is_involution_invariant():
    m = _qr1(*SEPARABLE[1])
    spec = DensitySpec.from_map(m)
    p = Point2(0.25, 1.1)
    assert density(m, spec, H(p)) == pytest.approx(density(m, spec, p), abs=1e-15)


def test_transfer_residual_under_the_involution(rng):
    m = _qr1(*SEPARABLE[0])
    spec = DensitySpec.from_map(m)
    wrong = DensitySpec(Polynomial([0.0, 0.1]))
    for x, y in rng.uniform(-1.5, 1.5, size=(10, 2)):
        p = Point2(x, y)
        assert transfer_residual(m, spec, H(p)) <= 1e-10
        assert transfer_residual(m, spec, p) <= 1e-10
        # For any h-invariant rho, the residual at h(p) is the forward one at p.
        forward = abs(density(m, wrong, p) - density_forward(m, wrong, p) * abs(jacobian_analytic(m, p)))
        assert transfer_residual(m, wrong, H(p)) == pytest.approx(forward, abs=1e-10)


def test_density_requires_a_separable_qr_map():
    with pytest.raises(DomainError):
        DensitySpec.from_map(t2mu(0.5, 1.5, 0.03))
    with pytest.raises(DomainError):
        DensitySpec.from_map(make_map(Family.QR_EXAMPLE1, 1.0, eps=PerturbationSpec.monomials({(1, 1): 0.05})))
    with pytest.raises(DomainError):
        density(t2mu(0.5, 1.5, 0.03), DensitySpec.zero(), Point2(0.0, 0.0))
    assert not DensitySpec(Polynomial([0.0, 1.0])).is_positive()


def test_cycle_jacobians_telescope():
    m = _qr1(*SEPARABLE[0])
    found = [o for n in (1, 2) for o in brute_force_seeds(m, n, SearchBox.square(2.0, grid=12), workers=0)]
    assert found
    for o in found:
        assert o.cycle_det == pytest.approx(1.0, abs=1e-10)
