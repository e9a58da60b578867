from __future__ import annotations
import math
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError


@dataclass(frozen=True)
class Point2:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise DomainError(f"non-finite point ({self.x}, {self.y})")
        # Normalize numpy scalars so equality and serialization stay plain floats.
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y])

    def distance(self, other: "Point2") -> float:
        """Max-norm distance."""
        return max(abs(self.x - other.x), abs(self.y - other.y))

    def __iter__(self):
        yield self.x
        yield self.y


def points_to_array(points) -> np.ndarray:
    return np.array([[p.x, p.y] for p in points], dtype=float).reshape(-1, 2)


def array_to_points(a) -> list[Point2]:
    return [Point2(float(r[0]), float(r[1])) for r in np.asarray(a, dtype=float).reshape(-1, 2)]
