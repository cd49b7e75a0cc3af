import math
import re

import pytest

from pothenot import triangle_from_sides


@pytest.fixture(scope="session")
def equilateral_base():
    return triangle_from_sides(1.0, 1.0, 1.0)


@pytest.fixture(scope="session")
def right_base():
    return triangle_from_sides(2.0, math.sqrt(2.0), math.sqrt(2.0))


@pytest.fixture(scope="session")
def obtuse_base():
    return triangle_from_sides(math.sqrt(3.0), 1.0, 1.0)


@pytest.fixture(scope="session")
def canonical_bases(equilateral_base, right_base, obtuse_base):
    return (equilateral_base, right_base, obtuse_base)


_ACCEPTANCE_LABELS = {
    1: "equilateral worked example, two solutions, < 10 ms",
    2: "equilateral one-solution worked examples",
    3: "right-base worked examples with spurious-root rejection",
    4: "obtuse-base worked examples",
    5: "region sweep, 33 bases, three-way agreement, < 2 min",
    6: "quartic coefficient identities on 10^4 random pairs",
    7: "degeneracy: circumcircle rank drop, arcs, orthocenter",
    8: "ellipse arcs carry one solution on, zero off",
    9: "decomposition figures at grid 256, < 30 s",
}

_ACCEPTANCE_RE = re.compile(r"test_acceptance\.py::test_(\d\d)_")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One line per acceptance check, printed after the run."""
    seen = {}
    for outcome in ("passed", "failed", "error", "skipped"):
        for report in terminalreporter.stats.get(outcome, []):
            m = _ACCEPTANCE_RE.search(str(getattr(report, "nodeid", "")))
            if m:
                seen[int(m.group(1))] = outcome.upper()
    if not seen:
        return
    terminalreporter.section("acceptance checks")
    for num in sorted(_ACCEPTANCE_LABELS):
        status = seen.get(num, "NOT RUN")
        status = {"PASSED": "PASS", "FAILED": "FAIL", "ERROR": "FAIL"}.get(
            status, status)
        label = _ACCEPTANCE_LABELS[num]
        terminalreporter.write_line(f"  {num}. {label:<58} {status}")
