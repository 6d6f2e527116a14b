import numpy as np
import pytest

from pathmodel import synth

from helpers import shape_library


@pytest.fixture(scope="session")
def basic_library():
    return shape_library(synth.BASIC_SHAPES)


@pytest.fixture(scope="session")
def full_library():
    return shape_library(synth.SHAPES)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_ACCEPTANCE = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if item.get_closest_marker("acceptance") is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
        _ACCEPTANCE.append((report.outcome.upper(), doc))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for outcome, doc in _ACCEPTANCE:
        terminalreporter.write_line(f"[{'PASS' if outcome == 'PASSED' else 'FAIL'}] {doc}")
