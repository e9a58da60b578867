from __future__ import annotations
from typing import Mapping

import numpy as np
from loguru import logger
from rich.console import Console
from rich.table import Table

from .config import CONFIG, SolverConfig
from .errors import DenominatorVanishes, DomainError
from .maps.families import Family, MapInstance
from .maps.perturbation import PerturbationForm
from .maps.solver import DENOMINATOR_FLOOR, step_many
from .measure.density import DensitySpec, transfer_residuals
from .reporting import GateRecord
from .reversibility.involution import reversibility_residuals

SUITES = ("reversibility", "jacobian", "transfer")
DEFAULT_GATES = {"reversibility": 1e-11, "jacobian": 1e-6, "transfer": 1e-10}
# Finite differences lose digits with the size of the image, so the Jacobian
# suite samples a smaller box.
SUITE_RADIUS = {"reversibility": 2.0, "jacobian": 1.0, "transfer": 2.0}


def sample_points(n: int, radius: float, seed: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(CONFIG.sample_seed if seed is None else seed)
    pts = rng.uniform(-radius, radius, size=(n, 2))
    return pts[:, 0], pts[:, 1]


def analytic_jacobians(m: MapInstance, xs, ys, cfg: SolverConfig | None = None) -> np.ndarray:
    u, v = step_many(m, xs, ys, cfg)
    num, den = m.model.jacobian_parts(m, xs, ys, u, v)
    den = np.broadcast_to(den, u.shape)
    if np.any(np.abs(den) < DENOMINATOR_FLOOR):
        raise DenominatorVanishes(f"Jacobian denominator below {DENOMINATOR_FLOOR:g} in sample", value=float(np.min(np.abs(den))))
    return m.orientation * num / den


def fd_jacobians(m: MapInstance, xs, ys, cfg: SolverConfig | None = None) -> np.ndarray:
    """Determinants of the central-difference differential, batched."""
    h = (cfg or SolverConfig()).fd_step
    xp, yp = step_many(m, xs + h, ys, cfg)
    xm, ym = step_many(m, xs - h, ys, cfg)
    d11, d21 = (xp - xm) / (2 * h), (yp - ym) / (2 * h)
    xp, yp = step_many(m, xs, ys + h, cfg)
    xm, ym = step_many(m, xs, ys - h, cfg)
    d12, d22 = (xp - xm) / (2 * h), (yp - ym) / (2 * h)
    return d11 * d22 - d12 * d21


def reversibility_suite(m: MapInstance, xs, ys, cfg: SolverConfig | None = None) -> np.ndarray:
    return reversibility_residuals(m, xs, ys, cfg)


def jacobian_suite(m: MapInstance, xs, ys, cfg: SolverConfig | None = None) -> np.ndarray:
    """Relative error of the closed-form Jacobian against finite differences."""
    exact = analytic_jacobians(m, xs, ys, cfg)
    return np.abs(fd_jacobians(m, xs, ys, cfg) - exact) / np.abs(exact)


def transfer_applicable(m: MapInstance) -> bool:
    return m.family is Family.QR_EXAMPLE1 and m.eps.form in (PerturbationForm.SEPARABLE_SUM, PerturbationForm.ZERO)


def transfer_suite(m: MapInstance, xs, ys, cfg: SolverConfig | None = None) -> np.ndarray:
    spec = DensitySpec.from_map(m)
    if not spec.is_positive(radius=float(np.max(np.abs(np.concatenate([xs, ys]))))):
        raise DomainError("density 1 + v is not positive on the sample box")
    return transfer_residuals(m, spec, xs, ys, cfg)


_RUNNERS = {"reversibility": reversibility_suite, "jacobian": jacobian_suite, "transfer": transfer_suite}


def run_verification(
    maps: Mapping[str, MapInstance],
    samples: int = 1000,
    gates: Mapping[str, float] | None = None,
    cfg: SolverConfig | None = None,
    seed: int | None = None,
    suites=SUITES,
) -> list[GateRecord]:
    if samples < 1:
        raise DomainError(f"samples must be >= 1, got {samples}")
    thresholds = {**DEFAULT_GATES, **(gates or {})}
    records = []
    for suite in suites:
        if suite not in _RUNNERS:
            raise DomainError(f"unknown verification suite {suite!r}")
        xs, ys = sample_points(samples, SUITE_RADIUS[suite], seed)
        for name, m in maps.items():
            if suite == "transfer" and not transfer_applicable(m):
                continue
            values = _RUNNERS[suite](m, xs, ys, cfg)
            worst = float(np.max(values)) if np.all(np.isfinite(values)) else float("inf")
            rec = GateRecord(suite, name, samples, worst, thresholds[suite], worst <= thresholds[suite])
            (logger.info if rec.passed else logger.error)("{} {}: worst {:.3e} (gate {:.0e})", suite, name, worst, rec.threshold)
            records.append(rec)
    return records


def render_gates(records: list[GateRecord], console: Console | None = None):
    console = console or Console(stderr=True)
    table = Table(title="verification gates")
    for col in ("suite", "map", "samples", "worst", "gate", "status"):
        table.add_column(col, justify="right" if col in ("samples", "worst", "gate") else "left")
    for r in records:
        status = "[green]pass[/green]" if r.passed else "[red]FAIL[/red]"
        table.add_row(r.suite, r.family, str(r.samples), f"{r.worst:.3e}", f"{r.threshold:.0e}", status)
    console.print(table)
