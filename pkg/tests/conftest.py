import numpy as np
import pytest

from qcorr.states import random_density

_CRITERIA = []


@pytest.fixture
def rng():
    return np.random.default_rng(20181)


@pytest.fixture(scope="session")
def random_bipartite_states():
    """500 random 2x2 and 2x3 states (Gaussian purification, fixed seed)."""
    gen = np.random.default_rng(7)
    return [random_density(4 if k % 2 == 0 else 6, gen) for k in range(500)]


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    number, title = marker.args
    _CRITERIA.append((number, title, item.name, call.excinfo is None))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    grouped = {}
    for number, title, name, ok in _CRITERIA:
        grouped.setdefault((number, title), []).append((name, ok))
    terminalreporter.section("acceptance criteria")
    for (number, title), results in sorted(grouped.items()):
        ok = all(r for _, r in results)
        failed = [n for n, r in results if not r]
        note = f"  (failed: {', '.join(failed)})" if failed else ""
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {number:>2}: {title}{note}")
