from __future__ import annotations
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property

import numpy as np
from numpy.polynomial import Polynomial

from ..errors import DomainError


class NonlinearityKind(str, Enum):
    QUADRATIC_MINUS = "minus"  # F(y) = M - y^2
    QUADRATIC_PLUS = "plus"  # F(y) = -M + y^2
    GENERIC_POLYNOMIAL = "poly"


@dataclass(frozen=True)
class Nonlinearity:
    """The function F of a Henon-like map, with its exact derivative.

    GenericPolynomial stores ascending coefficients; the quadratic kinds are
    parameterized by M only.
    """

    kind: NonlinearityKind = NonlinearityKind.QUADRATIC_MINUS
    M: float = 0.0
    coefficients: tuple[float, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "kind", NonlinearityKind(self.kind))
        object.__setattr__(self, "coefficients", tuple(float(c) for c in self.coefficients))
        if self.kind is NonlinearityKind.GENERIC_POLYNOMIAL and not self.coefficients:
            raise DomainError("generic polynomial nonlinearity needs at least one coefficient")

    @classmethod
    def minus(cls, M: float) -> "Nonlinearity":
        return cls(NonlinearityKind.QUADRATIC_MINUS, float(M))

    @classmethod
    def plus(cls, M: float) -> "Nonlinearity":
        return cls(NonlinearityKind.QUADRATIC_PLUS, float(M))

    @classmethod
    def polynomial(cls, coefficients) -> "Nonlinearity":
        return cls(NonlinearityKind.GENERIC_POLYNOMIAL, 0.0, tuple(coefficients))

    @cached_property
    def poly(self) -> Polynomial:
        if self.kind is NonlinearityKind.QUADRATIC_MINUS:
            return Polynomial([self.M, 0.0, -1.0])
        if self.kind is NonlinearityKind.QUADRATIC_PLUS:
            return Polynomial([-self.M, 0.0, 1.0])
        return Polynomial(list(self.coefficients))

    @cached_property
    def dpoly(self) -> Polynomial:
        return self.poly.deriv()

    def __call__(self, y):
        return self.poly(y)

    def derivative(self, y):
        return self.dpoly(y)

    def with_M(self, M: float) -> "Nonlinearity":
        if self.kind is NonlinearityKind.GENERIC_POLYNOMIAL:
            raise DomainError("M is not a parameter of a generic polynomial nonlinearity")
        return replace(self, M=float(M))

    def is_even(self, samples: int = 32, radius: float = 4.0, rtol: float = 1e-12) -> bool:
        ys = np.linspace(-radius, radius, samples)
        a, b = self(ys), self(-ys)
        return bool(np.all(np.abs(a - b) <= rtol * np.maximum(1.0, np.abs(a))))
