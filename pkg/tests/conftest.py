import time

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "repo", deadline=None, derandomize=True, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def weight_file(tmp_path):
    t = np.linspace(0.0, 1.0, 101)
    path = tmp_path / "weight.txt"
    np.savetxt(path, np.column_stack([t, 2.0 + np.cos(4.0 * t)]))
    return path


SUITE_LIMIT = 300.0
_START = time.perf_counter()


def suite_elapsed():
    return time.perf_counter() - _START


def pytest_terminal_summary(terminalreporter):
    total = suite_elapsed()
    verdict = "PASS" if total < SUITE_LIMIT else "FAIL"
    terminalreporter.write_line(f"total suite time {total:.1f} s (limit {SUITE_LIMIT:.0f} s): {verdict}")
