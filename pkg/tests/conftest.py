import itertools
from fractions import Fraction

import pytest


def naive_polygonal(m, x):
    """Generalized m-gonal number straight from the definition, in rationals."""
    return Fraction((m - 2) * x * x - (m - 4) * x, 2)


def brute_count(triple, n, box=None):
    """Triple loop over a generous box; independent of the exact index ranges."""
    a, b, c = triple
    box = box or (int((2 * n) ** 0.5) + 3)
    vals = {m: [naive_polygonal(m, x) for x in range(-box, box + 1)] for m in set(triple)}
    return sum(1 for u, v, w in itertools.product(vals[a], vals[b], vals[c]) if u + v + w == n)


@pytest.fixture
def brute():
    return brute_count


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
