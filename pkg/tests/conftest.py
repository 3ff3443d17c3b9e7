import itertools

import pytest

from catalan_mixing.paths import LatticePath


def brute_paths(m, r=None):
    """Every step string of length m (optionally with r ups), by product enumeration."""
    for steps in itertools.product("UD", repeat=m):
        s = "".join(steps)
        if r is None or s.count("U") == r:
            yield s


def brute_between(a, b):
    a, b = LatticePath(str(a)), LatticePath(str(b))
    out = []
    for s in brute_paths(a.m, a.r):
        h = LatticePath(s).heights
        if all(x <= y <= z for x, y, z in zip(a.heights, h, b.heights)):
            out.append(s)
    return out


@pytest.fixture
def lpm_file(tmp_path):
    def make(lower, upper):
        path = tmp_path / "m.lpm"
        path.write_text(f"{lower}\n{upper}\n")
        return str(path)

    return make


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
