import time
from collections import OrderedDict

import numpy as np
import pytest

from ehbvm import get_problem, reference_solution

FINEST_H = 0.1 / 16
T_END = 100.0

_criteria = OrderedDict()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion a test belongs to")


@pytest.fixture(scope="session")
def quartic_reference():
    """Oracle states of the quartic oscillator on the grid ``i * h_min`` over
    [0, 100], plus the time it took to build."""
    problem = get_problem("quartic")
    grid = np.arange(int(round(T_END / FINEST_H)) + 1) * FINEST_H
    start = time.perf_counter()
    states = reference_solution(problem, problem.initial_state, T_END, grid)
    return states, time.perf_counter() - start


@pytest.fixture(scope="session")
def quartic_lookup(quartic_reference):
    """Callable ``times -> states`` on any grid coarser than the finest one."""
    states, _ = quartic_reference

    def lookup(t):
        idx = np.rint(np.asarray(t) / FINEST_H).astype(int)
        if np.any(np.abs(idx * FINEST_H - t) > 1e-9):
            raise ValueError("time not on the reference grid")
        return states[idx]

    return lookup


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or (report.when != "call" and not report.failed):
        return
    number, title = marker.args
    entry = _criteria.setdefault(number, {"title": title, "passed": 0, "failed": 0, "notes": []})
    if report.failed:
        entry["failed"] += 1
        entry["notes"].append(f"FAILED {item.name}")
    else:
        entry["passed"] += 1
    if report.when == "call":
        entry["notes"].extend(value for name, value in item.user_properties if name == "detail")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        e = _criteria[number]
        status = "PASS" if e["failed"] == 0 and e["passed"] else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {number}: {e['title']} "
                                    f"({e['passed']} passed, {e['failed']} failed)")
        for note in e["notes"]:
            terminalreporter.write_line(f"         {note}")
