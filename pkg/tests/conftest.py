"""Shared fixtures plus the acceptance-summary hook.

Tests marked with @pytest.mark.criterion(num, title) get one summary
line each at the end of the run, so the top-level checks are readable
without scrolling through the full log.
"""

import numpy as np
import pytest

_ACCEPTANCE: list[tuple[int, str, bool, float]] = []


def pytest_configure(config):
    config.addinivalue_line(
        "markers",
        "criterion(num, title): numbered top-level acceptance check",
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        _ACCEPTANCE.append(
            (marker.args[0], marker.args[1], rep.passed, rep.duration)
        )


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE:
        return
    terminalreporter.write_sep("-", "acceptance summary")
    for num, title, passed, duration in sorted(_ACCEPTANCE):
        verdict = "PASSED" if passed else "FAILED"
        terminalreporter.write_line(
            f"ACCEPTANCE {num} {title}: {verdict} ({duration:.2f}s)"
        )


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
