import numpy as np
import pytest

from spinweave import SpinSystem

_ACCEPTANCE_LINES = []


def record_acceptance(number: int, passed: bool, detail: str) -> None:
    status = "PASS" if passed else "FAIL"
    _ACCEPTANCE_LINES.append((number, f"[{status}] criterion {number}: {detail}"))


@pytest.fixture
def acceptance():
    return record_acceptance


@pytest.fixture(scope="session")
def sys2():
    return SpinSystem(2)


@pytest.fixture(scope="session")
def sys3():
    return SpinSystem(3)


@pytest.fixture(scope="session")
def sys4():
    return SpinSystem(4)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
