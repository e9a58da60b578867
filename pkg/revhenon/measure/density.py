from __future__ import annotations
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial

from ..config import SolverConfig
from ..errors import DenominatorVanishes, DomainError
from ..maps.families import Family, MapInstance
from ..maps.perturbation import PerturbationForm
from ..maps.point import Point2
from ..maps.solver import DENOMINATOR_FLOOR, jacobian_analytic, step, step_inverse, step_many


@dataclass(frozen=True)
class DensitySpec:
    """Density generator v for rho(x, y) = (1 + v(x)) (1 + v(y))."""

    v: Polynomial

    @classmethod
    def from_map(cls, m: MapInstance) -> "DensitySpec":
        _require_family(m)
        if m.eps.form is PerturbationForm.ZERO:
            return cls(Polynomial([0.0]))
        if m.eps.form is not PerturbationForm.SEPARABLE_SUM:
            raise DomainError("an invariant density is known only for separable eps1 = p(x) + q(y)")
        return cls(m.eps.v)

    @classmethod
    def zero(cls) -> "DensitySpec":
        return cls(Polynomial([0.0]))

    def weight(self, u):
        return 1.0 + self.v(np.asarray(u, dtype=float))

    def is_positive(self, radius: float = 2.0, samples: int = 401) -> bool:
        u = np.linspace(-radius, radius, samples)
        return bool(np.all(self.weight(u) > 0.0))


def _require_family(m: MapInstance):
    if m.family is not Family.QR_EXAMPLE1:
        raise DomainError(f"invariant densities are defined for QRexample1 maps, not {m.family.value}")


def density(m: MapInstance, spec: DensitySpec, p: Point2) -> float:
    """Invariant density at p: (1 + v(x)) (1 + v(y))."""
    _require_family(m)
    return float(spec.weight(p.x) * spec.weight(p.y))


def density_forward(m: MapInstance, spec: DensitySpec, p: Point2, cfg: SolverConfig | None = None) -> float:
    """(1 + v(y)) (1 + v(yb)), i.e. the density at the image of p."""
    _require_family(m)
    image = step(m, p, cfg)
    return float(spec.weight(p.y) * spec.weight(image.y))


def transfer_residual(m: MapInstance, spec: DensitySpec, p: Point2, cfg: SolverConfig | None = None) -> float:
    """|rho(p) - rho(q) / |J(q)||, q the preimage of p; zero when rho is invariant."""
    _require_family(m)
    q = step_inverse(m, p, cfg)
    J = jacobian_analytic(m, q, image=p)
    return abs(density(m, spec, p) - density(m, spec, q) / abs(J))


def transfer_residuals(m: MapInstance, spec: DensitySpec, xs, ys, cfg: SolverConfig | None = None) -> np.ndarray:
    _require_family(m)
    xs, ys = np.asarray(xs, dtype=float), np.asarray(ys, dtype=float)
    qx, qy = step_many(m, xs, ys, cfg, inverse=True)
    num, den = m.model.jacobian_parts(m, qx, qy, xs, ys)
    den = np.broadcast_to(den, qx.shape)
    if np.any(np.abs(den) < DENOMINATOR_FLOOR):
        k = int(np.argmin(np.abs(den)))
        raise DenominatorVanishes(f"Jacobian denominator {den[k]:.3e} at ({qx[k]}, {qy[k]})", value=float(den[k]))
    J = m.orientation * num / den
    rho_p = spec.weight(xs) * spec.weight(ys)
    rho_q = spec.weight(qx) * spec.weight(qy)
    return np.abs(rho_p - rho_q / np.abs(J))
