from __future__ import annotations
import numpy as np
from loguru import logger

from ..config import SolverConfig
from ..errors import DenominatorVanishes, DomainError, IllConditioned, NoConvergence, NumericalError
from .families import CROSS_FORM, MapInstance
from .point import Point2

DET_FLOOR = 1e-12
DENOMINATOR_FLOOR = 1e-12
MAX_BACKTRACK = 8
# Newton steps this small relative to the iterate are at the rounding floor.
STAGNATION = 4.0 * np.finfo(float).eps

_DEFAULT = SolverConfig()


def _cfg(cfg: SolverConfig | None) -> SolverConfig:
    return cfg if cfg is not None else _DEFAULT


def _flat(x, y):
    shape = np.broadcast(np.asarray(x), np.asarray(y)).shape
    fx = np.array(np.broadcast_to(np.asarray(x, dtype=float), shape), dtype=float).ravel()
    fy = np.array(np.broadcast_to(np.asarray(y, dtype=float), shape), dtype=float).ravel()
    return fx, fy, shape


def _full(a, n):
    return np.array(np.broadcast_to(np.asarray(a, dtype=float), (n,)), dtype=float)


def _newton(m: MapInstance, x, y, inverse: bool, cfg: SolverConfig, strict: bool = True):
    """Damped 2-D Newton on the implicit pair, batched over points.

    Forward solves R(x, y, u, v) = 0 for the image (u, v); inverse solves
    R(u, v, x, y) = 0 for the preimage. With strict=False points that fail
    come back as NaN instead of raising.
    """
    model = m.model
    x, y, shape = _flat(x, y)
    n = x.size

    if inverse:
        def res(u, v):
            return model.residual(m, u, v, x, y)

        def jac(u, v):
            return model.source_partials(m, u, v, x, y)

        u, v = model.backward_seed(m, x, y)
    else:
        def res(u, v):
            return model.residual(m, x, y, u, v)

        def jac(u, v):
            return model.image_partials(m, x, y, u, v)

        with np.errstate(all="ignore"):
            u, v = model.forward_seed(m, x, y)
            exp = model.explicit_forward(m, x, y)
        if exp is not None:
            eu, ev = _full(exp[0], n), _full(exp[1], n)
            ok = np.isfinite(eu) & np.isfinite(ev)
            u, v = np.where(ok, eu, u), np.where(ok, ev, v)

    u, v = _full(u, n), _full(v, n)
    with np.errstate(all="ignore"):
        r1, r2 = (_full(r, n) for r in res(u, v))
    norm = np.maximum(np.abs(r1), np.abs(r2))
    done = norm <= cfg.tol
    failed = ~np.isfinite(norm)
    if strict and np.any(failed):
        raise NoConvergence("non-finite residual at the Newton seed", iterations=0, residual=float("inf"))

    it = 0
    while it < cfg.max_iter and not np.all(done | failed):
        it += 1
        a11, a12, a21, a22 = (_full(a, n) for a in jac(u, v))
        det = a11 * a22 - a12 * a21
        live = ~done & ~failed
        bad = live & ~(np.abs(det) >= DET_FLOOR)
        if np.any(bad):
            if strict:
                value = float(np.nanmin(np.abs(det[bad]))) if np.any(np.isfinite(det[bad])) else float("nan")
                raise IllConditioned(f"implicit-equation derivative {value:.3e} below {DET_FLOOR:g}", value=value)
            failed |= bad
            live &= ~bad
        with np.errstate(all="ignore"):
            du = np.where(live, -(a22 * r1 - a12 * r2) / det, 0.0)
            dv = np.where(live, -(a11 * r2 - a21 * r1) / det, 0.0)

        lam = np.ones(n)
        for _ in range(MAX_BACKTRACK):
            nu, nv = u + lam * du, v + lam * dv
            with np.errstate(all="ignore"):
                n1, n2 = (_full(r, n) for r in res(nu, nv))
            new = np.maximum(np.abs(n1), np.abs(n2))
            worse = live & ~(new < norm)
            if not np.any(worse):
                break
            lam = np.where(worse, 0.5 * lam, lam)

        scale = np.maximum(1.0, np.maximum(np.abs(u), np.abs(v)))
        stalled = live & (np.maximum(np.abs(du), np.abs(dv)) <= STAGNATION * scale)
        u, v = np.where(live, nu, u), np.where(live, nv, v)
        r1, r2 = np.where(live, n1, r1), np.where(live, n2, r2)
        norm = np.where(live, new, norm)
        failed |= live & ~np.isfinite(norm)
        done |= live & np.isfinite(norm) & ((norm <= cfg.tol) | stalled)
        logger.debug("newton it={} open={} max_res={:.3e}", it, int(np.sum(~done & ~failed)), float(np.max(np.where(live & np.isfinite(norm), norm, 0.0), initial=0.0)))

    open_ = ~done
    if np.any(open_):
        if strict:
            worst = float(np.nanmax(norm[open_])) if np.any(np.isfinite(norm[open_])) else float("inf")
            raise NoConvergence(
                f"{'inverse' if inverse else 'forward'} step of {m.family.value} did not converge in {cfg.max_iter} iterations (residual {worst:.3e})",
                iterations=cfg.max_iter,
                residual=worst,
            )
        u = np.where(open_, np.nan, u)
        v = np.where(open_, np.nan, v)
    return u.reshape(shape), v.reshape(shape)


def step(m: MapInstance, p: Point2, cfg: SolverConfig | None = None) -> Point2:
    u, v = _newton(m, p.x, p.y, inverse=False, cfg=_cfg(cfg))
    return Point2(float(u), float(v))


def step_inverse(m: MapInstance, p: Point2, cfg: SolverConfig | None = None) -> Point2:
    u, v = _newton(m, p.x, p.y, inverse=True, cfg=_cfg(cfg))
    return Point2(float(u), float(v))


def step_many(m: MapInstance, x, y, cfg: SolverConfig | None = None, inverse: bool = False, strict: bool = True):
    """Vectorized step over arrays of x and y; returns (xb, yb) arrays."""
    return _newton(m, x, y, inverse=inverse, cfg=_cfg(cfg), strict=strict)


def image_residual(m: MapInstance, p: Point2, image: Point2) -> float:
    r1, r2 = m.model.residual(m, p.x, p.y, image.x, image.y)
    return float(max(abs(r1), abs(r2)))


def differential_arrays(m: MapInstance, x, y, xb, yb):
    """Entries (d11, d12, d21, d22) of -A^-1 B, elementwise over arrays."""
    model = m.model
    x, y, xb, yb = (np.asarray(a, dtype=float) for a in (x, y, xb, yb))
    a11, a12, a21, a22 = model.image_partials(m, x, y, xb, yb)
    b11, b12, b21, b22 = model.source_partials(m, x, y, xb, yb)
    det = np.asarray(a11 * a22 - a12 * a21, dtype=float)
    if np.any(~(np.abs(det) >= DET_FLOOR)):
        value = float(np.nanmin(np.abs(det))) if np.any(np.isfinite(det)) else float("nan")
        raise IllConditioned(f"implicit-equation derivative {value:.3e} below {DET_FLOOR:g}", value=value)
    d11 = -(a22 * b11 - a12 * b21) / det
    d12 = -(a22 * b12 - a12 * b22) / det
    d21 = -(a11 * b21 - a21 * b11) / det
    d22 = -(a11 * b22 - a21 * b12) / det
    return d11, d12, d21, d22


def differential(m: MapInstance, p: Point2, image: Point2 | None = None, cfg: SolverConfig | None = None) -> np.ndarray:
    image = image if image is not None else step(m, p, cfg)
    d11, d12, d21, d22 = differential_arrays(m, p.x, p.y, image.x, image.y)
    return np.array([[float(d11), float(d12)], [float(d21), float(d22)]])


def jacobian_analytic(m: MapInstance, p: Point2, image: Point2 | None = None, cfg: SolverConfig | None = None) -> float:
    """Closed-form determinant of the differential, numerator over denominator."""
    image = image if image is not None else step(m, p, cfg)
    num, den = m.model.jacobian_parts(m, p.x, p.y, image.x, image.y)
    num, den = float(num), float(den)
    if abs(den) < DENOMINATOR_FLOOR:
        raise DenominatorVanishes(f"Jacobian denominator {den:.3e} at ({p.x}, {p.y})", value=den)
    return m.orientation * num / den


def jacobian_fd(m: MapInstance, p: Point2, cfg: SolverConfig | None = None) -> np.ndarray:
    """Central-difference differential of `step`; columns are d/dx and d/dy."""
    cfg = _cfg(cfg)
    h = cfg.fd_step
    xs = np.array([p.x + h, p.x - h, p.x, p.x])
    ys = np.array([p.y, p.y, p.y + h, p.y - h])
    u, v = _newton(m, xs, ys, inverse=False, cfg=cfg)
    return np.array([
        [(u[0] - u[1]) / (2 * h), (u[2] - u[3]) / (2 * h)],
        [(v[0] - v[1]) / (2 * h), (v[2] - v[3]) / (2 * h)],
    ])


def iterate(m: MapInstance, p: Point2, n: int, cfg: SolverConfig | None = None, backward: bool = False) -> list[Point2]:
    """Trajectory of n steps including the initial point.

    Solver errors are re-raised with `step_index` set to the failing step.
    """
    if n < 0:
        raise DomainError(f"number of steps must be >= 0, got {n}")
    move = step_inverse if backward else step
    out = [p]
    for i in range(1, n + 1):
        try:
            out.append(move(m, out[-1], cfg))
        except NumericalError as e:
            e.step_index = i
            logger.warning("iteration stopped at step {}: {}", i, e)
            raise
    return out


def cross_form_factor(m: MapInstance, u: float, v: float, p: Point2, image: Point2 | None = None) -> float:
    """The scalar whose ratio at (x, yb) and (yb, x) is the cross-form Jacobian."""
    if m.family not in CROSS_FORM:
        raise DomainError(f"{m.family.value} is not a cross-form map")
    image = image if image is not None else step(m, p)
    slope = m.model.slope(m, p.x, p.y, image.x, image.y)
    return float(m.model.factor(m, u, v, slope))
