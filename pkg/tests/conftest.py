import numpy as np
import pytest

from conetwist import _kernels

_CRITERIA: list[tuple[int, bool, str]] = []


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    """Compile the numba kernels once so timed tests measure steady-state cost."""
    _kernels.warmup()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def report_criterion():
    """Record one acceptance line; all lines are printed in the terminal summary."""

    def record(number: int, passed: bool, detail: str) -> None:
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'} - {detail}"
        _CRITERIA.append((number, passed, line))
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for _, _, line in sorted(_CRITERIA):
        terminalreporter.write_line(line)
