import pytest
from hypothesis import HealthCheck, settings

from kummerlat.kummer import build_mukai_model

settings.register_profile(
    "repo", derandomize=True, deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

ACCEPTANCE_LINES = {}


@pytest.fixture(scope="session")
def model():
    return build_mukai_model()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES, key=lambda k: (int(str(k).rstrip('b')), str(k))):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
