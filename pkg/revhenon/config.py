from __future__ import annotations
import os
from dataclasses import dataclass

from dotenv import load_dotenv

from .errors import DomainError

load_dotenv()


def env_bool(name: str, default: bool = False) -> bool:
    v = os.getenv(name)
    if v is None:
        return default
    return v.lower() in {"1", "true", "yes", "on"}


@dataclass(frozen=True)
class SolverConfig:
    """Newton and finite-difference settings shared by every map evaluation."""

    tol: float = float(os.getenv("REVHENON_TOL", "1e-13"))  # residual max-norm
    max_iter: int = int(os.getenv("REVHENON_MAX_ITER", "50"))
    fd_step: float = float(os.getenv("REVHENON_FD_STEP", "1e-6"))  # central differences

    def __post_init__(self):
        if not self.tol > 0:
            raise DomainError(f"SolverConfig.tol must be > 0, got {self.tol}")
        if self.max_iter < 1:
            raise DomainError(f"SolverConfig.max_iter must be >= 1, got {self.max_iter}")
        if not self.fd_step > 0:
            raise DomainError(f"SolverConfig.fd_step must be > 0, got {self.fd_step}")


@dataclass(frozen=True)
class Config:
    log_level: str = os.getenv("REVHENON_LOG_LEVEL", "INFO")
    # Process count for brute-force grids. 0 or 1 keeps everything in-process.
    workers: int = int(os.getenv("REVHENON_WORKERS", "0"))
    sample_seed: int = int(os.getenv("REVHENON_SEED", "20210"))
    run_slow: bool = env_bool("REVHENON_RUN_SLOW", False)
    trace_newton: bool = env_bool("REVHENON_TRACE_NEWTON", False)


CONFIG = Config()
