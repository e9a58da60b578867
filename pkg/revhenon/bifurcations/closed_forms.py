from __future__ import annotations
import math
from dataclasses import dataclass

import numpy as np

from ..config import SolverConfig
from ..errors import DenominatorVanishes, DomainError
from ..maps.families import B_MIN, MapInstance, conservative_h
from ..maps.point import Point2
from ..orbits.orbit import Orbit, orbit_from_points, primitive_period
from ..utils import points_from_y

DENOMINATOR_FLOOR = 1e-12


def _check_b(b: float):
    if abs(b) < B_MIN:
        raise DomainError(f"|b| must be >= {B_MIN:g}, got {b}")


def curve_F(b: float, mu: float) -> float:
    """Fold of symmetric fixed points of T2mu: 4(1 + b mu) M = -(b - 1)^2."""
    _check_b(b)
    den = 1.0 + b * mu
    if abs(den) < DENOMINATOR_FLOOR:
        raise DenominatorVanishes(f"1 + b*mu vanishes at b={b}, mu={mu}", value=den)
    return -((b - 1.0) ** 2) / (4.0 * den)


def curve_PF(b: float, mu: float) -> float:
    """Reversible pitchfork of the symmetric fixed point: 4M = (3 + b mu)(b - 1)^2."""
    _check_b(b)
    return (3.0 + b * mu) * (b - 1.0) ** 2 / 4.0


def curve_label(kind: str, b: float) -> str:
    kind = kind.upper()
    if kind not in ("F", "PF"):
        raise DomainError(f"unknown curve kind {kind!r}")
    return f"{kind}{1 if b < 0 else 2}"


def curves_table(bs, mu: float) -> list[dict]:
    rows = []
    for b in bs:
        b = float(b)
        if abs(b) < B_MIN:
            continue
        rows.append({
            "b": b,
            "mu": float(mu),
            "F": curve_F(b, mu),
            "F_label": curve_label("F", b),
            "PF": curve_PF(b, mu),
            "PF_label": curve_label("PF", b),
        })
    return rows


@dataclass(frozen=True)
class T2muFixedPoints:
    symmetric: tuple[Point2, ...]
    D: float
    # (M1, M2) when D > 0
    asymmetric: tuple[Point2, Point2] | None
    J1: float | None
    J2: float | None


def t2mu_symmetric_fixed_points(b: float, M: float, mu: float) -> tuple[Point2, ...]:
    """Diagonal fixed points, real roots of (1 + b mu) x^2 - (b - 1) x - M = 0.

    Ordered with the root that carries the pitchfork first.
    """
    _check_b(b)
    a = 1.0 + b * mu
    if abs(a) < DENOMINATOR_FLOOR:
        return (Point2(-M / (b - 1.0), -M / (b - 1.0)),) if b != 1.0 else ()
    disc = (b - 1.0) ** 2 + 4.0 * a * M
    if disc < 0:
        return ()
    r = math.sqrt(disc)
    first = 1.0 if b < 1.0 else -1.0
    roots = [((b - 1.0) + first * r) / (2 * a), ((b - 1.0) - first * r) / (2 * a)]
    if disc == 0:
        roots = roots[:1]
    return tuple(Point2(x, x) for x in roots)


def t2mu_fixed_points(b: float, M: float, mu: float) -> T2muFixedPoints:
    _check_b(b)
    den = 1.0 - b * mu
    if abs(den) < DENOMINATOR_FLOOR:
        raise DenominatorVanishes(f"1 - b*mu vanishes at b={b}, mu={mu}", value=den)
    s = 1.0 - b
    D = (4.0 * M - s * s * (3.0 + b * mu)) / (4.0 * den)
    symmetric = t2mu_symmetric_fixed_points(b, M, mu)
    if D <= 0:
        return T2muFixedPoints(symmetric, D, None, None, None)
    r = math.sqrt(D)
    M1, M2 = Point2(s / 2 + r, s / 2 - r), Point2(s / 2 - r, s / 2 + r)
    d1 = 2.0 + b * mu * (s + 2 * r)
    d2 = 2.0 + b * mu * (s - 2 * r)
    if abs(d1) < DENOMINATOR_FLOOR or abs(d2) < DENOMINATOR_FLOOR:
        raise DenominatorVanishes(f"fixed-point Jacobian denominator vanishes at b={b}, M={M}, mu={mu}")
    J1 = 1.0 - 4.0 * b * mu * r / d1
    J2 = 1.0 + 4.0 * b * mu * r / d2
    return T2muFixedPoints(symmetric, D, (M1, M2), J1, J2)


@dataclass(frozen=True)
class Hm1muFixedPoints:
    S1: Point2
    S2: Point2
    J1: float
    J2: float


def hm1mu_fixed_points(M: float, mu: float) -> Hm1muFixedPoints:
    """The symmetric couple S1 = (-a, a), S2 = (a, -a), a = sqrt(M / (1 + 2 mu))."""
    if not M > 0:
        raise DomainError(f"Hm1mu fixed points need M > 0, got {M}")
    if not 1.0 + 2.0 * mu > 0:
        raise DomainError(f"Hm1mu fixed points need 1 + 2mu > 0, got mu={mu}")
    a = math.sqrt(M / (1.0 + 2.0 * mu))
    den = math.sqrt(1.0 + 2.0 * mu) - mu * math.sqrt(M)
    if abs(den) < DENOMINATOR_FLOOR:
        raise DenominatorVanishes(f"Jacobian denominator vanishes at M={M}, mu={mu}", value=den)
    J1 = -1.0 - 2.0 * mu * math.sqrt(M) / den
    return Hm1muFixedPoints(Point2(-a, a), Point2(a, -a), J1, 1.0 / J1)


def hm1mu_period2_orbit(M: float, mu: float) -> tuple[Point2, Point2]:
    """Symmetric 2-orbit Q1 = (-c, -c) -> Q2 = (c, c), c = sqrt(M / (1 - 2 mu))."""
    if not M > 0 or not 1.0 - 2.0 * mu > 0:
        raise DomainError(f"Hm1mu 2-orbit needs M > 0 and 1 - 2mu > 0, got M={M}, mu={mu}")
    c = math.sqrt(M / (1.0 - 2.0 * mu))
    return Point2(-c, -c), Point2(c, c)


def henon_fixed_points(M: float) -> tuple[Point2, Point2]:
    """Fixed points of xb = y, yb = M - x - y^2: (y, y), y = -1 +/- sqrt(1 + M).

    The first one is elliptic for -1 < M < 3.
    """
    if M < -1.0:
        raise DomainError(f"no fixed points for M < -1, got {M}")
    r = math.sqrt(1.0 + M)
    return Point2(-1.0 + r, -1.0 + r), Point2(-1.0 - r, -1.0 - r)


def _orbit_from_y(ys, M: float, m: MapInstance | None, cfg: SolverConfig | None) -> Orbit:
    m = m or conservative_h(M)
    points = points_from_y(ys)
    d = primitive_period(points, 1e-12)
    return orbit_from_points(m, points[:d], cfg)


def symmetric_period3_closed_form(M: float, branch: int = 1, m: MapInstance | None = None, cfg: SolverConfig | None = None) -> Orbit:
    """Symmetric 3-orbits y1 = y3 = -/+ s, y2 = 1 +/- s, s = sqrt(M - 1); born at M = 1."""
    if branch not in (1, 2):
        raise DomainError(f"branch must be 1 or 2, got {branch}")
    if M < 1.0:
        raise DomainError(f"3-orbits exist only for M >= 1, got {M}")
    s = math.sqrt(M - 1.0)
    sign = 1.0 if branch == 1 else -1.0
    return _orbit_from_y([-sign * s, 1.0 + sign * s, -sign * s], M, m, cfg)


def symmetric_period6_y(M: float, branch: int = 1) -> list[float]:
    if branch not in (1, 2):
        raise DomainError(f"branch must be 1 or 2, got {branch}")
    if M < -1.0:
        raise DomainError(f"need M >= -1, got {M}")
    x = math.sqrt(M + 1.0)
    if branch == 1:
        disc, y2 = 1.0 - 4.0 * x + 4.0 * M, x
        birth = 1.25
    else:
        disc, y2 = 1.0 + 4.0 * x + 4.0 * M, -x
        birth = -0.75
    if disc < 0:
        raise DomainError(f"branch {branch} symmetric 6-orbit is born at M = {birth}, got M = {M}")
    r = math.sqrt(disc)
    y1, y3 = (-1.0 - r) / 2.0, (-1.0 + r) / 2.0
    return [y1, y2, y3, y3, y2, y1]


def symmetric_period6_closed_form(M: float, branch: int = 1, m: MapInstance | None = None, cfg: SolverConfig | None = None) -> Orbit:
    """Symmetric 6-orbit with y-pattern (y1, y2, y3, y3, y2, y1).

    At its birth parameter the orbit degenerates and the primitive orbit
    (period 3 for branch 1) is returned.
    """
    return _orbit_from_y(symmetric_period6_y(M, branch), M, m, cfg)


def trace_polynomial(x):
    """Trace of the 6th iterate along the branch-1 symmetric 6-orbit, x = sqrt(M + 1)."""
    return np.polynomial.polynomial.polyval(x, [2.0, 24.0, 116.0, 128.0, -96.0, -128.0, 64.0])


def trace_polynomial_factored(x):
    return 2.0 + 4.0 * x * (2.0 * x + 1.0) ** 3 * (2.0 * x - 3.0) * (x - 2.0)


def trace_of_M(M):
    x = np.sqrt(np.asarray(M, dtype=float) + 1.0)
    return 86.0 + 24.0 * x + 116.0 * M - 128.0 * x * M + 96.0 * M**2 - 128.0 * x * M**2 + 64.0 * M**3
