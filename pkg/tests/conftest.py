import time

import pytest

_RESULTS = {}


class Criterion:
    """Timing and a one-line summary for an acceptance criterion."""

    def __init__(self, number, title, budget):
        self.number, self.title, self.budget = number, title, budget
        self.detail = ""
        self.start = time.perf_counter()

    def note(self, detail):
        self.detail = detail

    @property
    def elapsed(self):
        return time.perf_counter() - self.start

    def check_runtime(self):
        assert self.elapsed < self.budget, f"took {self.elapsed:.2f} s, budget {self.budget} s"


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.acceptance_passed = rep.passed


@pytest.fixture
def criterion(request):
    marker = request.node.get_closest_marker("acceptance")
    crit = Criterion(*marker.args)
    yield crit
    passed = getattr(request.node, "acceptance_passed", False)
    _RESULTS[crit.number] = (crit, passed, crit.elapsed)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        crit, passed, seconds = _RESULTS[number]
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(
            f"[{status}] criterion {number:2d} {crit.title}: {crit.detail} "
            f"({seconds:.2f} s, budget {crit.budget:g} s)")
