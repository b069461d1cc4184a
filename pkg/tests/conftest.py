import os

from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=500, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

import time

import pytest

_ACCEPTANCE = pytest.StashKey[dict]()
_STARTED = pytest.StashKey[float]()
SUITE_BUDGET_S = 600.0


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = {}
    config.stash[_STARTED] = time.perf_counter()


@pytest.fixture
def acceptance(request):
    """``acceptance(n, ok, detail)`` records and echoes one line per criterion."""
    lines = request.config.stash[_ACCEPTANCE]
    capman = request.config.pluginmanager.getplugin("capturemanager")

    def record(n: int, ok: bool, detail: str) -> None:
        line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
        lines[n] = line
        with capman.global_and_fixture_disabled():
            print(f"\n{line}")

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, {})
    if not lines:
        return
    elapsed = time.perf_counter() - config.stash[_STARTED]
    terminalreporter.section("acceptance criteria")
    for n in sorted(lines):
        terminalreporter.write_line(lines[n])
    terminalreporter.write_line(
        f"{'PASS' if elapsed < SUITE_BUDGET_S else 'FAIL'} suite runtime: {elapsed:.1f} s (budget {SUITE_BUDGET_S:.0f} s)"
    )
