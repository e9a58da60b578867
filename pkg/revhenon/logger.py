from __future__ import annotations
import sys
from loguru import logger

# Modules whose DEBUG output is per-iteration and drowns everything else.
NOISY_MODULES = {"revhenon.maps.solver": "INFO", "revhenon.orbits.search": "INFO"}


class ModuleLevelFilter:
    def __init__(self, levels: dict[str, str] | None = None):
        self.levels = {k: logger.level(v).no for k, v in (levels or {}).items()}

    def __call__(self, record):
        floor = self.levels.get(record["name"])
        if floor is None:
            return True
        return record["level"].no >= floor


def setup_logger(level: str = "INFO", quiet_modules: dict[str, str] | None = None, trace_newton: bool = False):
    logger.remove()
    levels = dict(NOISY_MODULES if quiet_modules is None else quiet_modules)
    if trace_newton:
        levels.pop("revhenon.maps.solver", None)
        levels.pop("revhenon.orbits.search", None)
    logger.add(
        sink=lambda msg: print(msg, end="", file=sys.stderr),
        level=level,
        filter=ModuleLevelFilter(levels),
        format="<green>{time:YYYY-MM-DD HH:mm:ss.SSS}</green> | "
               "<level>{level: <8}</level> | "
               "<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - "
               "<level>{message}</level>",
        backtrace=False,
        diagnose=False,
    )
    return logger

