from __future__ import annotations
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Sequence

import numpy as np

from .involution import H

if TYPE_CHECKING:
    from ..orbits.orbit import Orbit

SET_TOL = 1e-8


class SymmetryKind(str, Enum):
    SYMMETRIC = "symmetric"
    COUPLE_MEMBER = "couple"
    ASYMMETRIC = "asymmetric"


@dataclass(frozen=True)
class SymmetryClass:
    kind: SymmetryKind
    # Index of the partner orbit in the list the orbit was classified against.
    partner: int | None = None

    def __str__(self):
        if self.kind is SymmetryKind.COUPLE_MEMBER:
            return f"couple({self.partner})"
        return self.kind.value


SYMMETRIC = SymmetryClass(SymmetryKind.SYMMETRIC)
ASYMMETRIC = SymmetryClass(SymmetryKind.ASYMMETRIC)


def same_point_set(a, b, tol: float = SET_TOL) -> bool:
    """Point sets equal within tol in max-norm, ignoring order."""
    a = np.asarray(a, dtype=float).reshape(-1, 2)
    b = np.asarray(b, dtype=float).reshape(-1, 2)
    if a.shape != b.shape:
        return False
    d = np.max(np.abs(a[:, None, :] - b[None, :, :]), axis=2)
    return bool(np.all(d.min(axis=1) <= tol) and np.all(d.min(axis=0) <= tol))


def _points(orbit) -> np.ndarray:
    return np.array([[p.x, p.y] for p in orbit.points], dtype=float)


def classify_symmetry(orbit: "Orbit", known: Sequence["Orbit"] = (), tol: float = SET_TOL) -> SymmetryClass:
    mirrored = H.apply_array(_points(orbit))
    if same_point_set(_points(orbit), mirrored, tol):
        return SYMMETRIC
    for j, other in enumerate(known):
        if other.period == orbit.period and same_point_set(_points(other), mirrored, tol):
            return SymmetryClass(SymmetryKind.COUPLE_MEMBER, j)
    return ASYMMETRIC


def fix_line_count(orbit: "Orbit", tol: float = SET_TOL) -> int:
    """Number of orbit points on the diagonal x = y."""
    return sum(1 for p in orbit.points if H.on_fix(p, tol))
