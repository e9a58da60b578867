from __future__ import annotations
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Sequence

import numpy as np

from ..config import SolverConfig
from ..errors import DomainError, NonPrimitive
from ..maps.families import MapInstance
from ..maps.point import Point2, points_to_array
from ..maps.solver import differential_arrays, jacobian_analytic, step_many
from ..reversibility.symmetry import ASYMMETRIC, SymmetryClass, classify_symmetry

PARABOLIC_TOL = 1e-8
DET_TOL = 1e-10
PRIMITIVE_TOL = 1e-6


class Stability(str, Enum):
    ELLIPTIC = "elliptic"
    SADDLE = "saddle"
    SINK = "sink"
    SOURCE = "source"
    PARABOLIC = "parabolic"
    NONORIENTABLE_SADDLE = "nonorientable_saddle"


@dataclass(frozen=True)
class Orbit:
    """A periodic orbit with its linear data.

    `trace` and `monodromy_det` describe the differential of the n-th iterate
    at points[0]; `cycle_det` is the product of the closed-form per-step
    Jacobians along the cycle.
    """

    period: int
    points: tuple[Point2, ...]
    residual: float
    trace: float
    monodromy_det: float
    cycle_det: float
    eigvals: tuple[complex, complex]
    stability: Stability
    symmetry: SymmetryClass = field(default=ASYMMETRIC)

    def as_array(self) -> np.ndarray:
        return points_to_array(self.points)

    @property
    def xs(self) -> list[float]:
        return [p.x for p in self.points]

    @property
    def ys(self) -> list[float]:
        return [p.y for p in self.points]

    def with_symmetry(self, symmetry: SymmetryClass) -> "Orbit":
        return replace(self, symmetry=symmetry)

    def rotated(self, k: int) -> "Orbit":
        k %= self.period
        return replace(self, points=self.points[k:] + self.points[:k])


def monodromy(m: MapInstance, points: Sequence[Point2]) -> np.ndarray:
    """Chain-rule product D(z_{n-1}) ... D(z_0) of the per-step differentials."""
    z = points_to_array(points)
    nxt = np.roll(z, -1, axis=0)
    d11, d12, d21, d22 = (np.broadcast_to(d, (len(z),)) for d in differential_arrays(m, z[:, 0], z[:, 1], nxt[:, 0], nxt[:, 1]))
    out = np.eye(2)
    for i in range(len(z)):
        out = np.array([[d11[i], d12[i]], [d21[i], d22[i]]]) @ out
    return out


def multipliers(m: MapInstance, orbit: Orbit | Sequence[Point2]) -> tuple[float, float, tuple[complex, complex]]:
    points = orbit.points if isinstance(orbit, Orbit) else orbit
    mono = monodromy(m, points)
    tr = float(np.trace(mono))
    det = float(np.linalg.det(mono))
    ev = np.linalg.eigvals(mono)
    return tr, det, (complex(ev[0]), complex(ev[1]))


def cycle_jacobian(m: MapInstance, orbit: Orbit | Sequence[Point2]) -> float:
    points = list(orbit.points if isinstance(orbit, Orbit) else orbit)
    n = len(points)
    out = 1.0
    for i in range(n):
        out *= jacobian_analytic(m, points[i], points[(i + 1) % n])
    return out


def classify_stability(trace: float, det: float, tol_parabolic: float = PARABOLIC_TOL, det_tol: float = DET_TOL) -> Stability:
    disc = trace * trace - 4.0 * det
    # Repeated multiplier, whatever the determinant.
    if abs(disc) <= tol_parabolic:
        return Stability.PARABOLIC
    ev = np.roots([1.0, -trace, det]).astype(complex)
    near_unit_root = any(min(abs(lam - 1.0), abs(lam + 1.0)) <= tol_parabolic for lam in ev)
    # The characteristic polynomial at +1 and -1.
    at_plus, at_minus = 1.0 - trace + det, 1.0 + trace + det
    if near_unit_root or abs(at_plus) <= tol_parabolic or abs(at_minus) <= tol_parabolic:
        return Stability.PARABOLIC
    if abs(det - 1.0) <= det_tol:
        return Stability.ELLIPTIC if abs(trace) < 2.0 else Stability.SADDLE
    if abs(det + 1.0) <= det_tol:
        return Stability.NONORIENTABLE_SADDLE
    moduli = sorted(abs(lam) for lam in ev)
    if moduli[1] < 1.0:
        return Stability.SINK
    if moduli[0] > 1.0:
        return Stability.SOURCE
    return Stability.SADDLE


def primitive_period(points, tol: float = PRIMITIVE_TOL) -> int:
    z = np.asarray(points_to_array(points) if not isinstance(points, np.ndarray) else points, dtype=float).reshape(-1, 2)
    n = len(z)
    for d in range(1, n):
        if n % d == 0 and np.max(np.abs(z - np.roll(z, -d, axis=0))) <= tol:
            return d
    return n


def orbit_residual(m: MapInstance, points: Sequence[Point2], cfg: SolverConfig | None = None) -> float:
    """max_i |step(z_i) - z_{i+1}| in the max-norm."""
    z = points_to_array(points)
    u, v = step_many(m, z[:, 0], z[:, 1], cfg)
    nxt = np.roll(z, -1, axis=0)
    return float(np.max(np.maximum(np.abs(u - nxt[:, 0]), np.abs(v - nxt[:, 1]))))


def orbit_from_points(
    m: MapInstance,
    points: Sequence[Point2],
    cfg: SolverConfig | None = None,
    known: Sequence[Orbit] = (),
    tol_parabolic: float = PARABOLIC_TOL,
    check_primitive: bool = True,
) -> Orbit:
    points = tuple(p if isinstance(p, Point2) else Point2(*p) for p in points)
    n = len(points)
    if n < 1:
        raise DomainError("an orbit needs at least one point")
    if check_primitive:
        d = primitive_period(points)
        if d < n:
            raise NonPrimitive(f"points repeat with period {d} < {n}", period=n, primitive_period=d)
    tr, det, ev = multipliers(m, points)
    orbit = Orbit(
        period=n,
        points=points,
        residual=orbit_residual(m, points, cfg),
        trace=tr,
        monodromy_det=det,
        cycle_det=cycle_jacobian(m, points),
        eigvals=ev,
        stability=classify_stability(tr, det, tol_parabolic),
    )
    return orbit.with_symmetry(classify_symmetry(orbit, known))


def canonical(orbit: Orbit) -> Orbit:
    """Rotate so the lexicographically smallest point comes first."""
    k = min(range(orbit.period), key=lambda i: (orbit.points[i].x, orbit.points[i].y))
    return orbit.rotated(k)


def mirror(m: MapInstance, orbit: Orbit, cfg: SolverConfig | None = None) -> Orbit:
    """h(orbit), traversed in reverse so that it is again an orbit of m."""
    points = [Point2(p.y, p.x) for p in reversed(orbit.points)]
    return orbit_from_points(m, points, cfg, known=[orbit])
