import pytest
from hypothesis import HealthCheck, settings

from tronquee.mpkernel import PrecisionContext

# mpmath at 50+ digits is slow; keep example counts modest and drop deadlines
settings.register_profile(
    "tronquee",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("tronquee")


@pytest.fixture(scope="session")
def ctx40():
    return PrecisionContext(40)


@pytest.fixture(scope="session")
def ctx50():
    return PrecisionContext(50)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        ok, line = RESULTS[number]
        terminalreporter.write_line(f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {line}")
