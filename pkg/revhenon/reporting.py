from __future__ import annotations
import csv
import json
import sys
from contextlib import contextmanager
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, Iterator, TextIO

from loguru import logger

from .bifurcations.continuation import Branch
from .bifurcations.events import BifurcationEvent
from .maps.families import MapInstance
from .maps.point import Point2
from .orbits.orbit import Orbit


def fmt17(x: float) -> str:
    return format(float(x), ".17g")


def _complex(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def orbit_to_dict(o: Orbit, m: MapInstance | None = None) -> dict:
    """JSON-ready orbit report; with a map it also loads back as a seed file."""
    d = {
        "period": o.period,
        "points": [[p.x, p.y] for p in o.points],
        "residual": o.residual,
        "trace": o.trace,
        "det": o.monodromy_det,
        "cycle_jacobian": o.cycle_det,
        "eigenvalues": [_complex(z) for z in o.eigvals],
        "stability": o.stability.value,
        "symmetry": o.symmetry.kind.value,
        "partner": o.symmetry.partner,
    }
    if m is not None:
        d.update(m.describe())
    return d


def event_to_dict(e: BifurcationEvent, param: str) -> dict:
    return {
        "kind": e.kind.value,
        "label": e.label,
        "param": param,
        "parameter": e.parameter,
        "resonance": list(e.resonance) if e.resonance else None,
        "fold_flip": e.fold_flip,
        "coalesced": e.coalesced,
        "orbit": orbit_to_dict(e.orbit_at_event),
        "emitted": [
            {"parameter": s.parameter, "orbit": orbit_to_dict(s.orbit)}
            for b in e.emitted_branches
            for s in b.samples
        ],
    }


def branch_rows(branch: Branch) -> list[dict]:
    n = branch.period
    rows = []
    for s in branch.samples:
        row = {
            "parameter": fmt17(s.parameter),
            "trace": fmt17(s.orbit.trace),
            "det": fmt17(s.orbit.monodromy_det),
            "stability": s.orbit.stability.value,
            "symmetry": s.orbit.symmetry.kind.value,
        }
        for i, p in enumerate(s.orbit.points):
            row[f"x{i}"], row[f"y{i}"] = fmt17(p.x), fmt17(p.y)
        rows.append(row)
    logger.debug("branch table: {} rows, period {}", len(rows), n)
    return rows


def trajectory_rows(points: Iterable[Point2], as_text: bool = True) -> list[dict]:
    f = fmt17 if as_text else float
    return [{"step": i, "x": f(p.x), "y": f(p.y)} for i, p in enumerate(points)]


def curve_rows(rows: Iterable[dict]) -> list[dict]:
    return [{k: fmt17(v) if isinstance(v, float) else v for k, v in r.items()} for r in rows]


@dataclass
class GateRecord:
    suite: str
    family: str
    samples: int
    worst: float
    threshold: float
    passed: bool


def gates_to_dicts(records: Iterable[GateRecord]) -> list[dict]:
    return [asdict(r) for r in records]


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False)


@contextmanager
def open_output(path: str | Path | None) -> Iterator[TextIO]:
    """A UTF-8, LF-terminated text stream: the file at `path`, or stdout."""
    if path in (None, "", "-"):
        yield sys.stdout
        sys.stdout.flush()
        return
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as f:
        yield f
    logger.info("wrote {}", path)


def write_csv(rows: list[dict], out: TextIO, fieldnames: list[str] | None = None):
    if fieldnames is None:
        fieldnames = list(rows[0]) if rows else []
    w = csv.DictWriter(out, fieldnames=fieldnames, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)


def write_json(obj, out: TextIO):
    out.write(dumps(obj) + "\n")


def write_json_lines(rows: Iterable[dict], out: TextIO):
    for r in rows:
        out.write(dumps(r) + "\n")
