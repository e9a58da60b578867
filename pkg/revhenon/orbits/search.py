from __future__ import annotations
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from loguru import logger

from ..config import CONFIG, SolverConfig
from ..errors import DomainError, NonPrimitive, NoConvergence, NumericalError, SingularNewtonMatrix
from ..maps.families import MapInstance, make_map
from ..maps.point import Point2, array_to_points, points_to_array
from ..maps.solver import STAGNATION, step_many
from ..reversibility.symmetry import SymmetryKind, classify_symmetry
from ..utils import load_points, load_yaml
from .orbit import Orbit, canonical, orbit_from_points, primitive_period

COND_MAX = 1e14
DEDUP_TOL = 1e-6
MAX_BACKTRACK = 8
SEEDS_FILE = Path(__file__).resolve().parent.parent / "data" / "seeds.yaml"

_DEFAULT = SolverConfig()


@dataclass(frozen=True)
class SearchBox:
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    grid: int = 50
    # Optional prefilter on |z_n - z_0| before Newton.
    close_tol: float | None = None
    escape_radius: float = 1e3

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise DomainError(f"empty search box [{self.x_min}, {self.x_max}] x [{self.y_min}, {self.y_max}]")
        if self.grid < 1:
            raise DomainError(f"grid must be >= 1, got {self.grid}")

    @classmethod
    def square(cls, radius: float, grid: int = 50, **kw) -> "SearchBox":
        return cls(-radius, radius, -radius, radius, grid, **kw)

    @classmethod
    def around(cls, center: Point2, radius: float, grid: int = 9, **kw) -> "SearchBox":
        return cls(center.x - radius, center.x + radius, center.y - radius, center.y + radius, grid, **kw)

    def grid_points(self) -> tuple[np.ndarray, np.ndarray]:
        if self.grid == 1:
            return np.array([(self.x_min + self.x_max) / 2]), np.array([(self.y_min + self.y_max) / 2])
        gx = np.linspace(self.x_min, self.x_max, self.grid)
        gy = np.linspace(self.y_min, self.y_max, self.grid)
        X, Y = np.meshgrid(gx, gy)
        return X.ravel(), Y.ravel()


def _system(m: MapInstance, z: np.ndarray):
    """Residuals G (K, 2n) and Jacobian (K, 2n, 2n) of R(z_i, z_{i+1}) = 0 for a batch z (K, n, 2)."""
    K, n, _ = z.shape
    model = m.model
    nxt = np.roll(z, -1, axis=1)
    x, y, xb, yb = z[..., 0], z[..., 1], nxt[..., 0], nxt[..., 1]
    with np.errstate(all="ignore"):
        r1, r2 = (np.broadcast_to(r, (K, n)) for r in model.residual(m, x, y, xb, yb))
        A = [np.broadcast_to(a, (K, n)) for a in model.image_partials(m, x, y, xb, yb)]
        B = [np.broadcast_to(b, (K, n)) for b in model.source_partials(m, x, y, xb, yb)]
    G = np.empty((K, 2 * n))
    G[:, 0::2], G[:, 1::2] = r1, r2
    J = np.zeros((K, 2 * n, 2 * n))
    i = np.arange(n)
    j = (i + 1) % n
    for k, (r, c) in enumerate(((0, 0), (0, 1), (1, 0), (1, 1))):
        J[:, 2 * i + r, 2 * i + c] += B[k]
        J[:, 2 * i + r, 2 * j + c] += A[k]
    return G, J


def find_orbit(
    m: MapInstance,
    period: int,
    seed: Sequence[Point2],
    cfg: SolverConfig | None = None,
    known: Sequence[Orbit] = (),
) -> Orbit:
    """Newton on the 2n-dimensional cyclic system started from `seed`."""
    cfg = cfg or _DEFAULT
    if len(seed) != period:
        raise DomainError(f"seed has {len(seed)} points, period is {period}")
    z = points_to_array(seed).reshape(1, period, 2)
    G, J = _system(m, z)
    res = float(np.max(np.abs(G)))
    for it in range(1, cfg.max_iter + 1):
        if res <= cfg.tol:
            break
        if not np.isfinite(res):
            raise NoConvergence("orbit residual became non-finite", iterations=it, residual=res)
        try:
            if np.linalg.cond(J[0]) > COND_MAX:
                raise SingularNewtonMatrix(f"orbit Newton matrix singular (cond > {COND_MAX:g}) at {m.describe()}")
            dz = np.linalg.solve(J[0], -G[0]).reshape(1, period, 2)
        except np.linalg.LinAlgError as e:
            raise SingularNewtonMatrix(f"orbit Newton matrix singular at {m.describe()}") from e
        lam = 1.0
        for _ in range(MAX_BACKTRACK):
            trial = z + lam * dz
            G_t, J_t = _system(m, trial)
            res_t = float(np.max(np.abs(G_t)))
            if res_t < res:
                break
            lam *= 0.5
        z, G, J = trial, G_t, J_t
        small = np.max(np.abs(dz)) <= STAGNATION * max(1.0, float(np.max(np.abs(z))))
        res = res_t
        logger.debug("orbit newton it={} res={:.3e}", it, res)
        if small and np.isfinite(res):
            break
    else:
        if res > cfg.tol:
            raise NoConvergence(f"period-{period} orbit did not converge (residual {res:.3e})", iterations=cfg.max_iter, residual=res)
    pts = array_to_points(z[0])
    d = primitive_period(pts)
    if d < period:
        raise NonPrimitive(f"seed converged to a period-{d} orbit, not period {period}", period=period, primitive_period=d)
    return orbit_from_points(m, pts, cfg, known=known, check_primitive=False)


def _scan_chunk(m: MapInstance, period: int, xs: np.ndarray, ys: np.ndarray, box: SearchBox, cfg: SolverConfig, max_iter: int):
    """Unpolished period-n candidates (K, n, 2) from one slice of the grid."""
    K = len(xs)
    z = np.empty((K, period, 2))
    z[:, 0, 0], z[:, 0, 1] = xs, ys
    for i in range(1, period + 1):
        u, v = step_many(m, z[:, i - 1, 0], z[:, i - 1, 1], cfg, strict=False)
        if i < period:
            z[:, i, 0], z[:, i, 1] = u, v
    alive = np.all(np.isfinite(z), axis=(1, 2)) & np.all(np.abs(z) <= box.escape_radius, axis=(1, 2))
    if box.close_tol is not None:
        with np.errstate(invalid="ignore"):
            back = np.maximum(np.abs(u - xs), np.abs(v - ys))
        alive &= back <= box.close_tol
    z = z[alive]
    for _ in range(max_iter):
        if len(z) == 0:
            break
        G, J = _system(m, z)
        res = np.max(np.abs(G), axis=1)
        open_ = np.isfinite(res) & (res > cfg.tol * 100)
        if not np.any(open_):
            break
        Jo, Go = J[open_], G[open_]
        sign, logdet = np.linalg.slogdet(Jo)
        singular = (sign == 0) | ~np.isfinite(logdet) | ~np.all(np.isfinite(Jo), axis=(1, 2))
        Jo[singular] = np.eye(2 * period)
        dz = np.linalg.solve(Jo, -Go[..., None])[..., 0]
        dz[singular] = np.nan
        # Clip wild steps from nearly singular matrices.
        size = np.max(np.abs(dz), axis=1, keepdims=True)
        with np.errstate(invalid="ignore", divide="ignore"):
            dz *= np.minimum(1.0, 0.5 / size)
        z[open_] = z[open_] + dz.reshape(-1, period, 2)
        keep = np.all(np.isfinite(z), axis=(1, 2)) & np.all(np.abs(z) <= box.escape_radius, axis=(1, 2))
        z = z[keep]
    if len(z) == 0:
        return z
    G, _ = _system(m, z)
    ok = np.max(np.abs(G), axis=1) <= 1e-9
    return z[ok]


def cyclic_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Max-norm distance between two n-point cycles, minimised over cyclic shifts."""
    if a.shape != b.shape:
        return float("inf")
    return min(float(np.max(np.abs(a - np.roll(b, s, axis=0)))) for s in range(len(a)))


def _dedup(cands, tol: float = DEDUP_TOL) -> list[np.ndarray]:
    """One representative per cycle; candidates within `tol` under some shift are merged."""
    out: list[np.ndarray] = []
    for c in cands:
        c = np.asarray(c, dtype=float)
        if all(cyclic_distance(c, o) > tol for o in out):
            out.append(c)
    return out


def brute_force_seeds(
    m: MapInstance,
    period: int,
    box: SearchBox,
    cfg: SolverConfig | None = None,
    workers: int | None = None,
    max_iter: int = 40,
) -> list[Orbit]:
    """Distinct primitive period-n orbits reached from a grid of starting points.

    Every grid cell seeds a trajectory of n points, which is handed to a
    batched multi-point Newton. Survivors are deduplicated up to cyclic
    rotation, polished with find_orbit and returned in canonical order with
    couple partners indexed into the returned list.
    """
    cfg = cfg or _DEFAULT
    if period < 1:
        raise DomainError(f"period must be >= 1, got {period}")
    xs, ys = box.grid_points()
    workers = CONFIG.workers if workers is None else workers
    if workers > 1 and len(xs) > workers:
        chunks = np.array_split(np.arange(len(xs)), workers)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_scan_chunk, *zip(*[(m, period, xs[c], ys[c], box, cfg, max_iter) for c in chunks])))
        cands = np.concatenate(parts) if parts else np.empty((0, period, 2))
    else:
        cands = _scan_chunk(m, period, xs, ys, box, cfg, max_iter)
    prim = [c for c in cands if primitive_period(c, DEDUP_TOL) == period]
    uniq = _dedup(prim)
    logger.info("brute force period={} grid={} converged={} primitive={} distinct={}", period, box.grid, len(cands), len(prim), len(uniq))

    polished: list[Orbit] = []
    for c in uniq:
        try:
            o = canonical(find_orbit(m, period, array_to_points(c), cfg))
        except NumericalError as e:
            logger.debug("dropping candidate at ({:.6f}, {:.6f}): {}", c[0, 0], c[0, 1], e)
            continue
        if all(cyclic_distance(o.as_array(), p.as_array()) > DEDUP_TOL for p in polished):
            polished.append(o)
    polished.sort(key=lambda o: (o.points[0].x, o.points[0].y))
    return [o.with_symmetry(classify_symmetry(o, polished)) for o in polished]


@dataclass
class CensusEntry:
    period: int
    orbits: list[Orbit] = field(default_factory=list)

    @property
    def symmetric(self) -> int:
        return sum(1 for o in self.orbits if o.symmetry.kind is SymmetryKind.SYMMETRIC)

    @property
    def couple_members(self) -> int:
        return sum(1 for o in self.orbits if o.symmetry.kind is SymmetryKind.COUPLE_MEMBER)

    @property
    def asymmetric(self) -> int:
        return sum(1 for o in self.orbits if o.symmetry.kind is SymmetryKind.ASYMMETRIC)

    @property
    def points(self) -> int:
        return self.period * len(self.orbits)


def orbit_census(
    m: MapInstance,
    periods: Sequence[int],
    box: SearchBox,
    cfg: SolverConfig | None = None,
    workers: int | None = None,
) -> dict[int, CensusEntry]:
    out = {}
    for n in periods:
        entry = CensusEntry(n, brute_force_seeds(m, n, box, cfg, workers))
        logger.info(
            "census period={} orbits={} symmetric={} couple_members={} asymmetric={}",
            n, len(entry.orbits), entry.symmetric, entry.couple_members, entry.asymmetric,
        )
        out[n] = entry
    return out


@dataclass(frozen=True)
class FixtureSeed:
    name: str
    family: str
    period: int
    points: tuple[Point2, ...]
    M: float = 0.0
    b: float = 1.0
    mu: float = 0.0
    provenance: str = ""

    def map(self) -> MapInstance:
        return make_map(self.family, self.M, b=self.b, mu=self.mu)

    @property
    def ys(self) -> list[float]:
        return [p.y for p in self.points]


def fixture_seeds(path: str | Path = SEEDS_FILE) -> dict[str, FixtureSeed]:
    doc = load_yaml(path)
    out = {}
    for name, d in (doc.get("seeds") or {}).items():
        points = tuple(load_points(d, field=f"seeds.{name}"))
        out[name] = FixtureSeed(
            name=name,
            family=d["family"],
            period=int(d.get("period", len(points))),
            points=points,
            M=float(d.get("M", 0.0)),
            b=float(d.get("b", 1.0)),
            mu=float(d.get("mu", 0.0)),
            provenance=str(d.get("provenance", "")).strip(),
        )
    return out
