import pytest

from misiurewicz.rescale import compute_Q
from misiurewicz.solver import find_misiurewicz, solve_misiurewicz
from misiurewicz.tricorn import find_tricorn_misiurewicz, solve_tricorn_misiurewicz

# seeds a little way from known Misiurewicz parameters
JM2 = complex(-0.8597644816892409, 0.23487923150145784)
JM3 = complex(-1.162341599884035, 0.2923689338965703)
JT1 = complex(-1.2222454262925588, 0.18411010266019595)
MJT = -1.4303576324513074


@pytest.fixture(scope="session")
def basilica_tip():
    """c0 = -2, l = p = 1."""
    return compute_Q(solve_misiurewicz(1, 1, -1.9))


@pytest.fixture(scope="session")
def dendrite_i():
    """c0 = i, l = 1, p = 2."""
    return compute_Q(solve_misiurewicz(1, 2, 0.1 + 0.9j))


@pytest.fixture(scope="session")
def real_mj():
    return compute_Q(find_misiurewicz(MJT))


@pytest.fixture(scope="session")
def tricorn_jt1():
    return find_tricorn_misiurewicz(JT1)


@pytest.fixture(scope="session")
def tricorn_minus2():
    return solve_tricorn_misiurewicz(1, 1, -1.9)


@pytest.fixture(scope="session")
def tricorn_real():
    return find_tricorn_misiurewicz(MJT)


# one summary line per acceptance criterion, whatever the outcome
_CRITERIA = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call":
        return
    n = mark.args[0]
    part = mark.args[1] if len(mark.args) > 1 else item.name
    _CRITERIA.setdefault(n, []).append((part, rep.passed, rep.duration))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        parts = _CRITERIA[n]
        ok = all(p for _, p, _ in parts)
        detail = "; ".join(f"{name} {'ok' if p else 'FAILED'} ({t:.2f}s)" for name, p, t in parts)
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
