from __future__ import annotations
import json
from pathlib import Path
from typing import Any

import yaml

from .errors import ConfigError
from .maps.perturbation import PerturbationSpec
from .maps.point import Point2


def load_yaml(path: str | Path) -> dict[str, Any]:
    with open(path, "r", encoding="utf-8") as f:
        if str(path).endswith(".json"):
            return json.load(f)
        return yaml.safe_load(f) or {}


def _floats(text: str, field: str) -> list[float]:
    try:
        return [float(t) for t in str(text).replace(" ", "").split(",") if t != ""]
    except ValueError as e:
        raise ConfigError(field, f"expected comma-separated numbers, got {text!r}") from e


def parse_range(text: str, field: str = "range") -> tuple[float, float]:
    """'lo:hi' -> (lo, hi)."""
    parts = str(text).split(":")
    if len(parts) != 2:
        raise ConfigError(field, f"expected lo:hi, got {text!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError as e:
        raise ConfigError(field, f"expected lo:hi, got {text!r}") from e
    if lo == hi:
        raise ConfigError(field, "empty range")
    return lo, hi


def parse_point(text: str, field: str = "point") -> Point2:
    vals = _floats(text, field)
    if len(vals) != 2:
        raise ConfigError(field, f"expected x,y, got {text!r}")
    return Point2(vals[0], vals[1])


def parse_box(text: str, field: str = "box") -> tuple[float, float, float, float]:
    """'r' for the square |x|,|y| <= r, or 'xmin,xmax,ymin,ymax'."""
    vals = _floats(text, field)
    if len(vals) == 1:
        r = abs(vals[0])
        return -r, r, -r, r
    if len(vals) == 4:
        return vals[0], vals[1], vals[2], vals[3]
    raise ConfigError(field, f"expected r or xmin,xmax,ymin,ymax, got {text!r}")


def parse_perturbation(value, form: str | None = None, field: str = "eps") -> PerturbationSpec:
    """Perturbation coefficients from a flag or a job file.

    Strings: bivariate rows 'a00,a01;a10,a11' (row i multiplies u**i) or
    separable 'p0,p1,..|q0,q1,..'. Mappings: {bivariate: [[...]]} or
    {p: [...], q: [...]}. Lists of lists are bivariate.
    """
    if value is None or value == "" or value == "0":
        return PerturbationSpec.zero()
    try:
        if isinstance(value, dict):
            if "p" in value or "q" in value:
                return PerturbationSpec.separable(value.get("p", [0.0]), value.get("q", [0.0]))
            if "bivariate" in value:
                return PerturbationSpec.bivariate(value["bivariate"])
            raise ConfigError(field, f"unknown perturbation keys {sorted(value)}")
        if isinstance(value, (list, tuple)):
            return PerturbationSpec.bivariate([list(r) if isinstance(r, (list, tuple)) else [r] for r in value])
        text = str(value).strip()
        if form == "separable" or "|" in text:
            p, _, q = text.partition("|")
            return PerturbationSpec.separable(_floats(p, field) or [0.0], _floats(q, field) or [0.0])
        if form not in (None, "bivariate"):
            raise ConfigError(field, f"unknown perturbation form {form!r}")
        return PerturbationSpec.bivariate([_floats(row, field) for row in text.split(";")])
    except ConfigError:
        raise
    except (TypeError, ValueError) as e:
        raise ConfigError(field, str(e)) from e


def points_from_y(ys) -> list[Point2]:
    """Orbit points (y_{i-1}, y_i) of a map with xb = y, from its y-sequence."""
    ys = [float(v) for v in ys]
    return [Point2(ys[i - 1], ys[i]) for i in range(len(ys))]


def load_points(doc: dict, field: str = "seed") -> list[Point2]:
    """Orbit points from a seed document holding `points` or `y`."""
    if "points" in doc:
        try:
            return [Point2(float(p[0]), float(p[1])) for p in doc["points"]]
        except (TypeError, ValueError, IndexError) as e:
            raise ConfigError(field, f"bad points: {e}") from e
    if "y" in doc:
        return points_from_y(doc["y"])
    raise ConfigError(field, "seed needs `points` or `y`")
