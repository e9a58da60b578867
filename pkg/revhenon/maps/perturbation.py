from __future__ import annotations
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial import polynomial as P

from ..errors import DomainError


class PerturbationForm(str, Enum):
    BIVARIATE_POLYNOMIAL = "bivariate"
    SEPARABLE_SUM = "separable"
    ZERO = "zero"


def _as_matrix(coefficients) -> tuple[tuple[float, ...], ...]:
    rows = [list(map(float, r)) for r in coefficients]
    width = max((len(r) for r in rows), default=0)
    return tuple(tuple(r + [0.0] * (width - len(r))) for r in rows)


@dataclass(frozen=True)
class PerturbationSpec:
    """A perturbation function eps(u, v) with exact partials.

    eps_x differentiates the first argument and eps_y the second, whatever
    names the map gives to the arguments at the call site.
    Bivariate coefficients are indexed c[i][j] for u**i * v**j.
    """

    form: PerturbationForm = PerturbationForm.ZERO
    coefficients: tuple[tuple[float, ...], ...] = field(default=())
    p: tuple[float, ...] = field(default=())
    q: tuple[float, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "form", PerturbationForm(self.form))
        object.__setattr__(self, "coefficients", _as_matrix(self.coefficients))
        object.__setattr__(self, "p", tuple(float(c) for c in self.p))
        object.__setattr__(self, "q", tuple(float(c) for c in self.q))
        if self.form is PerturbationForm.BIVARIATE_POLYNOMIAL and not self.coefficients:
            raise DomainError("bivariate perturbation needs a coefficient matrix")

    @classmethod
    def zero(cls) -> "PerturbationSpec":
        return cls()

    @classmethod
    def bivariate(cls, coefficients) -> "PerturbationSpec":
        return cls(PerturbationForm.BIVARIATE_POLYNOMIAL, coefficients)

    @classmethod
    def separable(cls, p, q=()) -> "PerturbationSpec":
        return cls(PerturbationForm.SEPARABLE_SUM, (), tuple(p), tuple(q) or (0.0,))

    @classmethod
    def monomials(cls, terms: dict[tuple[int, int], float]) -> "PerturbationSpec":
        """Build sum(a * u**i * v**j) from {(i, j): a}."""
        if not terms:
            return cls.zero()
        ni = max(i for i, _ in terms) + 1
        nj = max(j for _, j in terms) + 1
        c = np.zeros((ni, nj))
        for (i, j), a in terms.items():
            c[i, j] += a
        return cls.bivariate(c.tolist())

    @property
    def is_zero(self) -> bool:
        if self.form is PerturbationForm.ZERO:
            return True
        if self.form is PerturbationForm.SEPARABLE_SUM:
            return not any(self.p) and not any(self.q)
        return not any(any(r) for r in self.coefficients)

    @cached_property
    def _c(self) -> np.ndarray:
        return np.array(self.coefficients, dtype=float)

    @cached_property
    def _cu(self) -> np.ndarray:
        return P.polyder(self._c, axis=0) if self._c.shape[0] > 1 else np.zeros((1, self._c.shape[1]))

    @cached_property
    def _cv(self) -> np.ndarray:
        return P.polyder(self._c, axis=1) if self._c.shape[1] > 1 else np.zeros((self._c.shape[0], 1))

    @cached_property
    def p_poly(self) -> Polynomial:
        return Polynomial(list(self.p) or [0.0])

    @cached_property
    def q_poly(self) -> Polynomial:
        return Polynomial(list(self.q) or [0.0])

    @cached_property
    def _dp(self) -> Polynomial:
        return self.p_poly.deriv()

    @cached_property
    def _dq(self) -> Polynomial:
        return self.q_poly.deriv()

    @cached_property
    def v(self) -> Polynomial:
        """p' of the separable form, the density generator of the invariant measure."""
        if self.form is not PerturbationForm.SEPARABLE_SUM:
            raise DomainError("v is defined only for separable perturbations")
        return self._dp

    def __call__(self, u, v):
        if self.form is PerturbationForm.ZERO:
            return np.zeros_like(np.asarray(u, dtype=float) + np.asarray(v, dtype=float))
        if self.form is PerturbationForm.SEPARABLE_SUM:
            return self.p_poly(u) + self.q_poly(v)
        u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
        return P.polyval2d(u, v, self._c)

    def eps_x(self, u, v):
        if self.form is PerturbationForm.ZERO:
            return np.zeros_like(np.asarray(u, dtype=float) + np.asarray(v, dtype=float))
        if self.form is PerturbationForm.SEPARABLE_SUM:
            return self._dp(u) + 0.0 * np.asarray(v, dtype=float)
        u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
        return P.polyval2d(u, v, self._cu)

    def eps_y(self, u, v):
        if self.form is PerturbationForm.ZERO:
            return np.zeros_like(np.asarray(u, dtype=float) + np.asarray(v, dtype=float))
        if self.form is PerturbationForm.SEPARABLE_SUM:
            return self._dq(v) + 0.0 * np.asarray(u, dtype=float)
        u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
        return P.polyval2d(u, v, self._cv)

    def is_symmetric(self, samples: int = 16, radius: float = 2.0, atol: float = 1e-14) -> bool:
        g = np.linspace(-radius, radius, samples)
        u, v = np.meshgrid(g, g + 0.137)
        return bool(np.all(np.abs(self(u, v) - self(v, u)) <= atol * np.maximum(1.0, np.abs(self(u, v)))))

    def linear_in_first(self) -> tuple[Polynomial, Polynomial] | None:
        """(alpha, beta) with eps(u, v) = alpha(v) + u * beta(v), or None."""
        if self.form is PerturbationForm.ZERO:
            return Polynomial([0.0]), Polynomial([0.0])
        if self.form is PerturbationForm.SEPARABLE_SUM:
            if len(self.p_poly.trim().coef) > 2:
                return None
            pc = list(self.p_poly.coef) + [0.0, 0.0]
            return self.q_poly + pc[0], Polynomial([pc[1]])
        c = self._c
        if c.shape[0] > 2 and np.any(c[2:] != 0.0):
            return None
        beta = Polynomial(c[1]) if c.shape[0] > 1 else Polynomial([0.0])
        return Polynomial(c[0]), beta
