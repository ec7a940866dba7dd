"""Shared test configuration and the acceptance report hook.

test_acceptance.py wraps each of its checks in the criterion() context
manager below; the collected one-line verdicts are printed as a section of
the pytest terminal summary, so a plain `pytest` run ends with one PASS or
FAIL line per acceptance criterion including its wall-clock time.
"""

import time
from contextlib import contextmanager

from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite",
    max_examples=50,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

ACCEPTANCE_LINES = []


@contextmanager
def criterion(number, limit_seconds, text):
    """Record one acceptance verdict; enforce the stated wall-clock limit."""
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        ACCEPTANCE_LINES.append(f"criterion {number:2d} FAIL {text}")
        raise
    elapsed = time.perf_counter() - start
    if limit_seconds is None:
        timing = f" [{elapsed:.2f}s]"
    else:
        timing = f" [{elapsed:.2f}s, limit {limit_seconds:g}s]"
    if limit_seconds is not None and elapsed > limit_seconds:
        ACCEPTANCE_LINES.append(f"criterion {number:2d} FAIL {text}{timing}")
        raise AssertionError(
            f"criterion {number} exceeded its time limit: "
            f"{elapsed:.2f}s > {limit_seconds}s")
    ACCEPTANCE_LINES.append(f"criterion {number:2d} PASS {text}{timing}")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
