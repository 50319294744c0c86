import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from wildseries import kernels
from wildseries.dynamics import observe_reports, sen_violations

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

kernels.warmup()


@pytest.fixture(autouse=True)
def sen_guard():
    """Every ramification report built by any test must satisfy Sen's properties."""
    seen = []

    def check(report):
        seen.extend(f"p={report.p} q={report.q} i={report.i}: {m}" for m in sen_violations(report))

    with observe_reports(check):
        yield
    assert not seen, seen


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = pytest.StashKey[list]()


@pytest.fixture
def acceptance_log(request):
    return request.config.stash.setdefault(ACCEPTANCE_LINES, [])


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: s[7:]):
            terminalreporter.write_line(line)
