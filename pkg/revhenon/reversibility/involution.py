from __future__ import annotations
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..config import SolverConfig
from ..maps.families import MapInstance
from ..maps.point import Point2
from ..maps.solver import step, step_inverse, step_many


class InvolutionKind(str, Enum):
    SWAP_XY = "swap_xy"


@dataclass(frozen=True)
class Involution:
    """h(x, y) = (y, x); its fixed set is the diagonal x = y."""

    kind: InvolutionKind = InvolutionKind.SWAP_XY

    def __call__(self, p: Point2) -> Point2:
        return Point2(p.y, p.x)

    def apply_array(self, a) -> np.ndarray:
        return np.asarray(a, dtype=float).reshape(-1, 2)[:, ::-1].copy()

    def distance_to_fix(self, p: Point2) -> float:
        return abs(p.x - p.y) / 2.0

    def on_fix(self, p: Point2, tol: float = 1e-8) -> bool:
        return self.distance_to_fix(p) <= tol


H = Involution()


def apply_involution(p: Point2) -> Point2:
    return H(p)


def reversibility_residual(m: MapInstance, p: Point2, cfg: SolverConfig | None = None) -> float:
    """Max-norm distance between step(p) and h(step_inverse(h(p)))."""
    forward = step(m, p, cfg)
    mirrored = H(step_inverse(m, H(p), cfg))
    return forward.distance(mirrored)


def reversibility_residuals(m: MapInstance, xs, ys, cfg: SolverConfig | None = None) -> np.ndarray:
    """Batched reversibility_residual over coordinate arrays."""
    fx, fy = step_many(m, xs, ys, cfg)
    bx, by = step_many(m, ys, xs, cfg, inverse=True)
    return np.maximum(np.abs(fx - by), np.abs(fy - bx))
