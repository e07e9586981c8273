import time

import pytest

from tensordec.fields import GF, QQ

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


@pytest.fixture(scope="session")
def K():
    return GF(32003)


@pytest.fixture(scope="session")
def F7():
    return GF(7)


@pytest.fixture(scope="session")
def Q():
    return QQ


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_call(item):
    t0 = time.perf_counter()
    yield
    item._elapsed = time.perf_counter() - t0


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "setup" and rep.skipped:
        status = "SKIP"
    elif rep.when == "call":
        status = "PASS" if rep.passed else "SKIP" if rep.skipped else "FAIL"
    else:
        return
    number, title = marker.args
    elapsed = getattr(item, "_elapsed", 0.0)
    prev = _RESULTS.setdefault((number, title), [[], 0.0])
    prev[0].append(status)
    prev[1] += elapsed


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for (number, title), (statuses, elapsed) in sorted(_RESULTS.items(), key=lambda kv: (int(kv[0][0]), kv[0][1])):
        if "FAIL" in statuses:
            status = "FAIL"
        elif "PASS" in statuses:
            status = "PASS"
        else:
            status = "SKIP"
        skipped = statuses.count("SKIP")
        extra = f", {skipped} skipped" if skipped else ""
        tr.write_line(f"[{status}] criterion {number}: {title} ({len(statuses)} check(s){extra}, {elapsed:.1f} s)")
