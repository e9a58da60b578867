from __future__ import annotations
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property

import numpy as np

from ..errors import DomainError
from .nonlinearity import Nonlinearity, NonlinearityKind
from .perturbation import PerturbationSpec

# Maps are written as an implicit pair R(x, y, xb, yb) = 0. Every model exposes
# the residual, its partials A = dR/d(xb, yb) and B = dR/d(x, y), the
# unperturbed images used as Newton seeds, and the closed-form Jacobian as a
# (numerator, denominator) pair. All methods accept numpy arrays elementwise.

B_MIN = 1e-6


class Family(str, Enum):
    CONSERVATIVE_H = "ConservativeH"
    CROSS_FORM_TILDE_H = "CrossFormTildeH"
    TILDE_HM2 = "TildeHm2"
    TILDE_H12INV = "TildeH12inv"
    QR_HAT_H = "QRhatH"
    QR_EXAMPLE1 = "QRexample1"
    QR_EXAMPLE2 = "QRexample2"
    NONORIENTABLE_HAT_HM1 = "NonorientableHatHm1"
    T2MU = "T2mu"
    HM1MU = "Hm1mu"
    HP1MU = "Hp1mu"

    @classmethod
    def parse(cls, name: str | Family) -> "Family":
        if isinstance(name, cls):
            return name
        for f in cls:
            if f.value.lower() == str(name).lower() or f.name.lower() == str(name).lower():
                return f
        raise DomainError(f"unknown map family {name!r}")


NEEDS_B = {Family.TILDE_H12INV, Family.T2MU}
NAMED = {Family.T2MU, Family.HM1MU, Family.HP1MU}
NONORIENTABLE = {Family.NONORIENTABLE_HAT_HM1, Family.HM1MU}
NAMED_NONLINEARITY = {
    Family.T2MU: NonlinearityKind.QUADRATIC_MINUS,
    Family.HP1MU: NonlinearityKind.QUADRATIC_MINUS,
    Family.HM1MU: NonlinearityKind.QUADRATIC_PLUS,
}


class FamilyModel:
    orientation = 1

    def residual(self, m, x, y, xb, yb):
        raise NotImplementedError

    def image_partials(self, m, x, y, xb, yb):
        raise NotImplementedError

    def source_partials(self, m, x, y, xb, yb):
        raise NotImplementedError

    def forward_seed(self, m, x, y):
        F = m.nonlinearity
        return y, -x + F(y)

    def backward_seed(self, m, xb, yb):
        F = m.nonlinearity
        return -yb + F(xb), xb

    def jacobian_parts(self, m, x, y, xb, yb):
        raise NotImplementedError

    def slope(self, m, x, y, xb, yb):
        return None

    def explicit_forward(self, m, x, y):
        return None


class ConservativeModel(FamilyModel):
    """xb = y, yb = -x + F(y)."""

    def residual(self, m, x, y, xb, yb):
        return xb - y, yb + x - m.nonlinearity(y)

    def image_partials(self, m, x, y, xb, yb):
        one = np.ones_like(np.asarray(x, dtype=float))
        return one, 0.0 * one, 0.0 * one, one

    def source_partials(self, m, x, y, xb, yb):
        one = np.ones_like(np.asarray(x, dtype=float))
        return 0.0 * one, -one, one, -m.nonlinearity.derivative(y) + 0.0 * one

    def jacobian_parts(self, m, x, y, xb, yb):
        one = np.ones_like(np.asarray(x, dtype=float))
        return one, one

    def explicit_forward(self, m, x, y):
        return self.forward_seed(m, x, y)


class CrossFormModel(FamilyModel):
    """xb = y + e(x, yb) - e(yb, x), yb = -x + F(y - e(yb, x))."""

    def _s(self, m, x, y, yb):
        return y - m.eps(yb, x)

    def residual(self, m, x, y, xb, yb):
        e = m.eps
        return xb - y - e(x, yb) + e(yb, x), yb + x - m.nonlinearity(self._s(m, x, y, yb))

    def image_partials(self, m, x, y, xb, yb):
        e = m.eps
        dF = m.nonlinearity.derivative(self._s(m, x, y, yb))
        one = np.ones_like(dF)
        return one, -e.eps_y(x, yb) + e.eps_x(yb, x), 0.0 * one, 1.0 + dF * e.eps_x(yb, x)

    def source_partials(self, m, x, y, xb, yb):
        e = m.eps
        dF = m.nonlinearity.derivative(self._s(m, x, y, yb))
        one = np.ones_like(dF)
        return -e.eps_x(x, yb) + e.eps_y(yb, x), -one, 1.0 + dF * e.eps_y(yb, x), -dF

    def slope(self, m, x, y, xb, yb):
        return m.nonlinearity.derivative(self._s(m, x, y, yb))

    def factor(self, m, u, v, slope):
        return 1.0 + slope * m.eps.eps_x(u, v)

    def jacobian_parts(self, m, x, y, xb, yb):
        slope = self.slope(m, x, y, xb, yb)
        return self.factor(m, x, yb, slope), self.factor(m, yb, x, slope)


class TildeHm2Model(FamilyModel):
    """xb = -x + F(yb) + e(x, yb), yb = -y + F(x) + e(yb, x)."""

    def residual(self, m, x, y, xb, yb):
        F, e = m.nonlinearity, m.eps
        return xb + x - F(yb) - e(x, yb), yb + y - F(x) - e(yb, x)

    def image_partials(self, m, x, y, xb, yb):
        F, e = m.nonlinearity, m.eps
        a12 = -F.derivative(yb) - e.eps_y(x, yb)
        one = np.ones_like(a12)
        return one, a12, 0.0 * one, 1.0 - e.eps_x(yb, x)

    def source_partials(self, m, x, y, xb, yb):
        F, e = m.nonlinearity, m.eps
        b21 = -F.derivative(x) - e.eps_y(yb, x)
        one = np.ones_like(b21)
        return 1.0 - e.eps_x(x, yb), 0.0 * one, b21, one

    def forward_seed(self, m, x, y):
        F = m.nonlinearity
        yb = -y + F(x)
        return -x + F(yb), yb

    def backward_seed(self, m, xb, yb):
        F = m.nonlinearity
        x = -xb + F(yb)
        return x, -yb + F(x)

    def factor(self, m, u, v, slope=None):
        return 1.0 - m.eps.eps_x(u, v)

    def jacobian_parts(self, m, x, y, xb, yb):
        return self.factor(m, x, yb), self.factor(m, yb, x)

    def explicit_forward(self, m, x, y):
        split = m.linear_split
        if split is None:
            return None
        alpha, beta = split
        F = m.nonlinearity
        with np.errstate(divide="ignore", invalid="ignore"):
            yb = (-y + F(x) + alpha(x)) / (1.0 - beta(x))
        return -x + F(yb) + alpha(yb) + x * beta(yb), yb


class H12Model(FamilyModel):
    """xb = (x - F(yb))/b + e(x, yb), y = (yb - F(x))/b + e(yb, x)."""

    def residual(self, m, x, y, xb, yb):
        F, e, b = m.nonlinearity, m.eps, m.b
        return xb - (x - F(yb)) / b - e(x, yb), y - (yb - F(x)) / b - e(yb, x)

    def image_partials(self, m, x, y, xb, yb):
        F, e, b = m.nonlinearity, m.eps, m.b
        a12 = F.derivative(yb) / b - e.eps_y(x, yb)
        one = np.ones_like(a12)
        return one, a12, 0.0 * one, -1.0 / b - e.eps_x(yb, x)

    def source_partials(self, m, x, y, xb, yb):
        F, e, b = m.nonlinearity, m.eps, m.b
        b21 = F.derivative(x) / b - e.eps_y(yb, x)
        one = np.ones_like(b21)
        return -1.0 / b - e.eps_x(x, yb), 0.0 * one, b21, one

    def forward_seed(self, m, x, y):
        F, b = m.nonlinearity, m.b
        yb = b * y + F(x)
        return (x - F(yb)) / b, yb

    def backward_seed(self, m, xb, yb):
        F, b = m.nonlinearity, m.b
        x = b * xb + F(yb)
        return x, (yb - F(x)) / b

    def factor(self, m, u, v, slope=None):
        return 1.0 + m.b * m.eps.eps_x(u, v)

    def jacobian_parts(self, m, x, y, xb, yb):
        return self.factor(m, x, yb), self.factor(m, yb, x)


class QuispelRobertsModel(FamilyModel):
    """xb = y + e2(x, y) - e2(yb, xb), yb = -x + F(y + e2(x, y)) - e1(x, y) - e1(yb, xb)."""

    def residual(self, m, x, y, xb, yb):
        F, e1, e2 = m.nonlinearity, m.eps, m.eps2
        s = y + e2(x, y)
        return xb - s + e2(yb, xb), yb + x - F(s) + e1(x, y) + e1(yb, xb)

    def image_partials(self, m, x, y, xb, yb):
        e1, e2 = m.eps, m.eps2
        return 1.0 + e2.eps_y(yb, xb), e2.eps_x(yb, xb), e1.eps_y(yb, xb), 1.0 + e1.eps_x(yb, xb)

    def source_partials(self, m, x, y, xb, yb):
        F, e1, e2 = m.nonlinearity, m.eps, m.eps2
        dF = F.derivative(y + e2(x, y))
        e2x, e2y = e2.eps_x(x, y), e2.eps_y(x, y)
        return -e2x, -1.0 - e2y, 1.0 - dF * e2x + e1.eps_x(x, y), -dF * (1.0 + e2y) + e1.eps_y(x, y)

    def factor(self, m, u, v, slope=None):
        e1, e2 = m.eps, m.eps2
        return (1.0 + e2.eps_y(u, v)) * (1.0 + e1.eps_x(u, v)) - e2.eps_x(u, v) * e1.eps_y(u, v)

    def jacobian_parts(self, m, x, y, xb, yb):
        return self.factor(m, x, y), self.factor(m, yb, xb)

    def explicit_forward(self, m, x, y):
        if m.is_unperturbed:
            return self.forward_seed(m, x, y)
        return None


class NonorientableModel(FamilyModel):
    """xb = -y, yb = -x + F(y) - e(x, y) - e(yb, xb); F must be even."""

    orientation = -1

    def residual(self, m, x, y, xb, yb):
        F, e = m.nonlinearity, m.eps
        return xb + y, yb + x - F(y) + e(x, y) + e(yb, xb)

    def image_partials(self, m, x, y, xb, yb):
        e = m.eps
        a21 = e.eps_y(yb, xb)
        one = np.ones_like(a21)
        return one, 0.0 * one, a21, 1.0 + e.eps_x(yb, xb)

    def source_partials(self, m, x, y, xb, yb):
        F, e = m.nonlinearity, m.eps
        b22 = -F.derivative(y) + e.eps_y(x, y)
        one = np.ones_like(b22)
        return 0.0 * one, one, 1.0 + e.eps_x(x, y), b22

    def forward_seed(self, m, x, y):
        return -y, -x + m.nonlinearity(y)

    def backward_seed(self, m, xb, yb):
        return -yb + m.nonlinearity(-xb), -xb

    def factor(self, m, u, v, slope=None):
        return 1.0 + m.eps.eps_x(u, v)

    def jacobian_parts(self, m, x, y, xb, yb):
        return self.factor(m, x, y), self.factor(m, yb, xb)

    def explicit_forward(self, m, x, y):
        if m.is_unperturbed:
            return self.forward_seed(m, x, y)
        return None


_QR = QuispelRobertsModel()
_NONOR = NonorientableModel()
_H12 = H12Model()

MODELS: dict[Family, FamilyModel] = {
    Family.CONSERVATIVE_H: ConservativeModel(),
    Family.CROSS_FORM_TILDE_H: CrossFormModel(),
    Family.TILDE_HM2: TildeHm2Model(),
    Family.TILDE_H12INV: _H12,
    Family.T2MU: _H12,
    Family.QR_HAT_H: _QR,
    Family.QR_EXAMPLE1: _QR,
    Family.QR_EXAMPLE2: _QR,
    Family.HP1MU: _QR,
    Family.NONORIENTABLE_HAT_HM1: _NONOR,
    Family.HM1MU: _NONOR,
}

CROSS_FORM = {Family.CROSS_FORM_TILDE_H, Family.TILDE_HM2, Family.TILDE_H12INV, Family.T2MU}


@dataclass(frozen=True)
class MapInstance:
    """One member of the map catalog.

    `perturbation` is eps for the single-eps families, eps1 for QRhatH and
    QRexample1, and eps2 for QRexample2; `perturbation2` is eps2 of QRhatH.
    Named families (T2mu, Hm1mu, Hp1mu) derive their perturbation from mu.
    """

    family: Family
    nonlinearity: Nonlinearity
    b: float = 1.0
    mu: float = 0.0
    perturbation: PerturbationSpec = field(default_factory=PerturbationSpec.zero)
    perturbation2: PerturbationSpec = field(default_factory=PerturbationSpec.zero)
    strict: bool = field(default=True, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "family", Family.parse(self.family))
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "mu", float(self.mu))
        if not (np.isfinite(self.b) and np.isfinite(self.mu)):
            raise DomainError("map parameters must be finite")
        if self.family in NEEDS_B and abs(self.b) < B_MIN:
            raise DomainError(f"{self.family.value} is not defined for |b| < {B_MIN:g} (b={self.b})")
        expected = NAMED_NONLINEARITY.get(self.family)
        if expected is not None and self.nonlinearity.kind is not expected:
            raise DomainError(f"{self.family.value} requires a {expected.value} quadratic nonlinearity")
        if self.strict and self.family in NONORIENTABLE and not self.nonlinearity.is_even():
            raise DomainError(f"{self.family.value} needs an even nonlinearity F(-y) = F(y)")

    @property
    def M(self) -> float:
        return self.nonlinearity.M

    @property
    def model(self) -> FamilyModel:
        return MODELS[self.family]

    @property
    def orientation(self) -> int:
        return self.model.orientation

    @cached_property
    def eps(self) -> PerturbationSpec:
        if self.family in (Family.T2MU, Family.HM1MU):
            return PerturbationSpec.monomials({(1, 1): self.mu})
        if self.family is Family.HP1MU:
            return PerturbationSpec.monomials({(1, 1): self.mu, (2, 0): self.mu})
        if self.family in (Family.QR_EXAMPLE2, Family.CONSERVATIVE_H):
            return PerturbationSpec.zero()
        return self.perturbation

    @cached_property
    def eps2(self) -> PerturbationSpec:
        if self.family is Family.QR_HAT_H:
            return self.perturbation2
        if self.family is Family.QR_EXAMPLE2:
            return self.perturbation
        return PerturbationSpec.zero()

    @cached_property
    def is_unperturbed(self) -> bool:
        return self.eps.is_zero and self.eps2.is_zero

    @cached_property
    def linear_split(self):
        return self.eps.linear_in_first()

    def with_param(self, name: str, value: float) -> "MapInstance":
        if name == "M":
            return replace(self, nonlinearity=self.nonlinearity.with_M(value))
        if name == "b":
            if self.family not in NEEDS_B:
                raise DomainError(f"{self.family.value} has no parameter b")
            return replace(self, b=float(value))
        if name == "mu":
            if self.family not in NAMED:
                raise DomainError(f"{self.family.value} has no parameter mu")
            return replace(self, mu=float(value))
        raise DomainError(f"unknown free parameter {name!r}")

    def param(self, name: str) -> float:
        return {"M": self.M, "b": self.b, "mu": self.mu}[name]

    def describe(self) -> dict:
        d = {"family": self.family.value, "M": self.M, "nonlinearity": self.nonlinearity.kind.value}
        if self.family in NEEDS_B:
            d["b"] = self.b
        if self.family in NAMED:
            d["mu"] = self.mu
        return d


def conservative_h(M: float, nonlinearity: Nonlinearity | None = None) -> MapInstance:
    """xb = y, yb = M - x - y**2 unless another F is given."""
    return MapInstance(Family.CONSERVATIVE_H, nonlinearity or Nonlinearity.minus(M))


def hp1mu(M: float, mu: float) -> MapInstance:
    return MapInstance(Family.HP1MU, Nonlinearity.minus(M), mu=mu)


def hm1mu(M: float, mu: float) -> MapInstance:
    return MapInstance(Family.HM1MU, Nonlinearity.plus(M), mu=mu)


def t2mu(M: float, b: float, mu: float) -> MapInstance:
    return MapInstance(Family.T2MU, Nonlinearity.minus(M), b=b, mu=mu)


def make_map(
    family: Family | str,
    M: float = 0.0,
    b: float = 1.0,
    mu: float = 0.0,
    eps: PerturbationSpec | None = None,
    eps2: PerturbationSpec | None = None,
    nonlinearity: Nonlinearity | None = None,
    strict: bool = True,
) -> MapInstance:
    fam = Family.parse(family)
    if nonlinearity is None:
        kind = NAMED_NONLINEARITY.get(fam, NonlinearityKind.QUADRATIC_PLUS if fam in NONORIENTABLE else NonlinearityKind.QUADRATIC_MINUS)
        nonlinearity = Nonlinearity(kind, float(M))
    return MapInstance(
        fam,
        nonlinearity,
        b=b,
        mu=mu,
        perturbation=eps or PerturbationSpec.zero(),
        perturbation2=eps2 or PerturbationSpec.zero(),
        strict=strict,
    )
