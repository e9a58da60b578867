from __future__ import annotations
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Mapping

import yaml
from loguru import logger

from .errors import ConfigError, DomainError
from .maps.families import B_MIN, NAMED_NONLINEARITY, NEEDS_B, NONORIENTABLE, Family, MapInstance, make_map
from .maps.nonlinearity import Nonlinearity, NonlinearityKind
from .maps.point import Point2
from .orbits.search import SearchBox
from .utils import load_yaml, parse_box, parse_perturbation, parse_point, parse_range

FORMATS = ("csv", "json")
PARAMS = ("M", "b", "mu")


def _float(d: Mapping, key: str, default: float | None = None) -> float | None:
    v = d.get(key, default)
    if v is None:
        return None
    try:
        return float(v)
    except (TypeError, ValueError) as e:
        raise ConfigError(key, f"expected a number, got {v!r}") from e


def _int(d: Mapping, key: str, default: int | None = None, minimum: int | None = None) -> int | None:
    v = d.get(key, default)
    if v is None:
        return None
    try:
        out = int(v)
    except (TypeError, ValueError) as e:
        raise ConfigError(key, f"expected an integer, got {v!r}") from e
    if out != float(v):
        raise ConfigError(key, f"expected an integer, got {v!r}")
    if minimum is not None and out < minimum:
        raise ConfigError(key, f"must be >= {minimum}, got {out}")
    return out


def _bool(d: Mapping, key: str, default: bool) -> bool:
    v = d.get(key, default)
    if isinstance(v, bool):
        return v
    if str(v).lower() in {"1", "true", "yes", "on"}:
        return True
    if str(v).lower() in {"0", "false", "no", "off"}:
        return False
    raise ConfigError(key, f"expected a boolean, got {v!r}")


def _coefficients(v, key: str) -> tuple[float, ...]:
    if isinstance(v, (list, tuple)):
        items = v
    else:
        items = [t for t in str(v).replace(" ", "").split(",") if t]
    try:
        return tuple(float(c) for c in items)
    except (TypeError, ValueError) as e:
        raise ConfigError(key, f"expected a coefficient list, got {v!r}") from e


@dataclass(frozen=True)
class JobConfig:
    """One command's worth of settings, from a job file and/or flags."""

    family: Family | None = None
    M: float = 0.0
    b: float = 1.0
    mu: float = 0.0
    nonlinearity: NonlinearityKind | None = None
    F: tuple[float, ...] = ()
    eps: Any = None
    eps_form: str | None = None
    eps2: Any = None
    period: int | None = None
    seed_file: Path | None = None
    range: tuple[float, float] | None = None
    param: str = "M"
    step: float = 0.01
    steps: int | None = None
    grid: int = 50
    box: tuple[float, float, float, float] = (-3.0, 3.0, -3.0, 3.0)
    point: Point2 | None = None
    out: Path | None = None
    format: str = "csv"
    events_out: Path | None = None
    samples: int = 1000
    backward: bool = False
    scan: bool = True
    stop_on_stall: bool = False
    workers: int | None = None
    gates: dict[str, float] = field(default_factory=dict)

    @classmethod
    def keys(cls) -> set[str]:
        return {f.name for f in fields(cls)}

    @classmethod
    def from_mapping(cls, raw: Mapping[str, Any]) -> "JobConfig":
        d = {str(k).replace("-", "_"): v for k, v in raw.items() if v is not None}
        unknown = sorted(set(d) - cls.keys())
        if unknown:
            raise ConfigError(unknown[0], "unknown key")
        family = None
        if "family" in d:
            try:
                family = Family.parse(d["family"])
            except DomainError as e:
                raise ConfigError("family", str(e)) from e

        kw: dict[str, Any] = {"family": family}
        for key in ("M", "b", "mu", "step"):
            if key in d:
                kw[key] = _float(d, key)
        if "step" in kw and not kw["step"] > 0:
            raise ConfigError("step", f"must be > 0, got {kw['step']}")
        if "nonlinearity" in d:
            try:
                kw["nonlinearity"] = NonlinearityKind(str(d["nonlinearity"]).lower())
            except ValueError as e:
                raise ConfigError("nonlinearity", f"expected one of minus, plus, poly, got {d['nonlinearity']!r}") from e
        if "F" in d:
            kw["F"] = _coefficients(d["F"], "F")
        for key in ("eps", "eps2"):
            if key in d:
                kw[key] = d[key]
        if "eps_form" in d:
            if d["eps_form"] not in ("bivariate", "separable"):
                raise ConfigError("eps_form", f"expected bivariate or separable, got {d['eps_form']!r}")
            kw["eps_form"] = d["eps_form"]
        kw["period"] = _int(d, "period", None, minimum=1)
        kw["steps"] = _int(d, "steps", None, minimum=0)
        kw["grid"] = _int(d, "grid", 50, minimum=1)
        kw["samples"] = _int(d, "samples", 1000, minimum=1)
        kw["workers"] = _int(d, "workers", None, minimum=0)
        for key in ("seed_file", "out", "events_out"):
            if key in d:
                kw[key] = Path(str(d[key]))
        if "range" in d:
            r = d["range"]
            if isinstance(r, (list, tuple)):
                if len(r) != 2:
                    raise ConfigError("range", f"expected [lo, hi], got {r!r}")
                r = f"{r[0]}:{r[1]}"
            kw["range"] = parse_range(r, "range")
        if "param" in d:
            if d["param"] not in PARAMS:
                raise ConfigError("param", f"expected one of {', '.join(PARAMS)}, got {d['param']!r}")
            kw["param"] = d["param"]
        if "box" in d:
            b = d["box"]
            kw["box"] = parse_box(",".join(map(str, b)) if isinstance(b, (list, tuple)) else b, "box")
        if "point" in d:
            p = d["point"]
            kw["point"] = parse_point(",".join(map(str, p)) if isinstance(p, (list, tuple)) else p, "point")
        if "format" in d:
            if d["format"] not in FORMATS:
                raise ConfigError("format", f"expected csv or json, got {d['format']!r}")
            kw["format"] = d["format"]
        for key, default in (("backward", False), ("scan", True), ("stop_on_stall", False)):
            kw[key] = _bool(d, key, default)
        if "gates" in d:
            if not isinstance(d["gates"], Mapping):
                raise ConfigError("gates", "expected a mapping of suite -> threshold")
            kw["gates"] = {str(k): _float(d["gates"], k) for k in d["gates"]}

        job = cls(**kw)
        if family is not None:
            job.build_map()
        return job

    def _nonlinearity(self) -> Nonlinearity | None:
        kind = self.nonlinearity
        if kind is None:
            if self.F:
                kind = NonlinearityKind.GENERIC_POLYNOMIAL
            else:
                return None
        if kind is NonlinearityKind.GENERIC_POLYNOMIAL:
            if not self.F:
                raise ConfigError("F", "poly nonlinearity needs coefficients")
            return Nonlinearity.polynomial(self.F)
        return Nonlinearity(kind, self.M)

    def build_map(self) -> MapInstance:
        if self.family is None:
            raise ConfigError("family", "required")
        if self.family in NEEDS_B and abs(self.b) < B_MIN:
            raise ConfigError("b", f"|b| must be >= {B_MIN:g} for {self.family.value}")
        nonlinearity = self._nonlinearity()
        expected = NAMED_NONLINEARITY.get(self.family)
        if nonlinearity is not None and expected is not None and nonlinearity.kind is not expected:
            raise ConfigError("nonlinearity", f"{self.family.value} requires {expected.value}")
        if nonlinearity is not None and self.family in NONORIENTABLE and not nonlinearity.is_even():
            raise ConfigError("F", f"{self.family.value} needs an even nonlinearity")
        eps = parse_perturbation(self.eps, self.eps_form, "eps")
        eps2 = parse_perturbation(self.eps2, None, "eps2")
        try:
            return make_map(self.family, self.M, b=self.b, mu=self.mu, eps=eps, eps2=eps2, nonlinearity=nonlinearity)
        except DomainError as e:
            raise ConfigError("family", str(e)) from e

    def search_box(self) -> SearchBox:
        x0, x1, y0, y1 = self.box
        try:
            return SearchBox(x0, x1, y0, y1, self.grid)
        except DomainError as e:
            raise ConfigError("box", str(e)) from e


def load_job(path: str | Path | None, overrides: Mapping[str, Any] | None = None) -> JobConfig:
    """Job file keys, then flag overrides on top."""
    raw: dict[str, Any] = {}
    if path is not None:
        try:
            raw = dict(load_yaml(path))
        except FileNotFoundError as e:
            raise ConfigError("config", f"no such file {path}") from e
        except (OSError, TypeError, ValueError, yaml.YAMLError) as e:
            raise ConfigError("config", f"cannot read {path}: {e}") from e
        logger.debug("job file {} keys: {}", path, sorted(raw))
    raw.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return JobConfig.from_mapping(raw)
