import itertools
import math

import pytest


def brute_kendall(p, q):
    pos = {x: i for i, x in enumerate(q)}
    s = [pos[x] for x in p]
    return sum(s[i] > s[j] for i in range(len(s)) for j in range(i + 1, len(s)))


def brute_success(n, k, phi_a, phi_h, w=0.0):
    """Pure-Python reference: sum over every (algorithm, human) pair."""
    perms = list(itertools.permutations(range(1, n + 1)))
    ident = perms[0]
    wa = [math.exp(-phi_a * brute_kendall(ident, p)) for p in perms]
    za = sum(wa)
    joint = algo = 0.0
    for a, pa in zip(perms, wa):
        wh = [math.exp(-phi_h * ((1 - w) * brute_kendall(ident, h) + w * brute_kendall(a, h)))
              for h in perms]
        zh = sum(wh)
        algo += pa / za * (a[0] == 1)
        for h, ph in zip(perms, wh):
            shown = set(a[:k])
            pick = next(x for x in h if x in shown)
            joint += pa / za * ph / zh * (pick == 1)
    return joint, algo


@pytest.fixture(scope="session")
def brute():
    return brute_success


_CRITERIA = {}


def pytest_runtest_logreport(report):
    m = report.nodeid.split("::")[-1]
    if "test_acceptance.py" in report.nodeid and m.startswith("test_criterion_"):
        if report.when == "call" or (report.when == "setup" and report.failed):
            props = dict(report.user_properties)
            _CRITERIA[m] = ("PASS" if report.passed else "FAIL",
                            props.get("check_seconds"), props.get("budget_seconds"))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_CRITERIA):
        status, secs, budget = _CRITERIA[name]
        number, label = name[len("test_criterion_"):].split("_", 1)
        timing = f"  ({secs:.1f}s of {budget:.0f}s)" if secs is not None else ""
        terminalreporter.write_line(f"{status}  criterion {int(number):2d}  "
                                    f"{label.replace('_', ' ')}{timing}")
