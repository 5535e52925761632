import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from hexsum.hexgeom import HexPoint

SEED = 42

settings.register_profile(
    "hexsum",
    derandomize=True,
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("hexsum")


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


def off_singular(t: HexPoint, gap: float = 1e-3) -> bool:
    return min(abs(d) for d in t.diffs()) >= gap


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: runs the complete verification suite")


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.criterion_lines():
        terminalreporter.write_line(line)
