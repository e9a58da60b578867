from __future__ import annotations
import pytest

from revhenon.config import CONFIG, SolverConfig
from revhenon.logger import setup_logger


def pytest_configure(config):
    # Newton traces stay quiet unless REVHENON_TRACE_NEWTON is set
    setup_logger(CONFIG.log_level, trace_newton=CONFIG.trace_newton)


def pytest_addoption(parser):
    parser.addoption("--run-slow", action="store_true", default=CONFIG.run_slow, help="Run census and parameter-grid checks")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-slow"):
        return
    skip = pytest.mark.skip(reason="slow: pass --run-slow or set REVHENON_RUN_SLOW=1")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.hookimpl(optionalhook=True)
def pytest_html_results_summary(prefix, summary, postfix):
    cfg = SolverConfig()
    prefix.extend([f"Solver defaults: tol={cfg.tol:g} max_iter={cfg.max_iter} fd_step={cfg.fd_step:g} seed={CONFIG.sample_seed}\n"])
