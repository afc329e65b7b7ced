import itertools
import random
from functools import lru_cache

import pytest

from fatrev import fixture
from fatrev.oracle import (
    enumerate_fatgraphs,
    from_chords,
    random_clustered_fatgraph,
    random_fatgraph,
    random_walk_fatgraph,
)

CRITERIA = {}


def record_criterion(number, name, ok, detail=""):
    CRITERIA[number] = (name, ok, detail)
    line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}: {name}" + (f" ({detail})" if detail else "")
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(CRITERIA):
        name, ok, detail = CRITERIA[k]
        terminalreporter.write_line(
            f"criterion {k:>2} {'PASS' if ok else 'FAIL'}: {name}" + (f" ({detail})" if detail else ""))


@lru_cache(maxsize=None)
def enumerated(n):
    return tuple(enumerate_fatgraphs(n))


def enumerated_upto(n):
    return [F for k in range(1, n + 1) for F in enumerated(k)]


def super_star(branches, depth=2):
    """Branches of nested two-chord clusters; every exposed block is a super block."""
    labels = itertools.count()

    def branch(d):
        w, a, b = next(labels), next(labels), next(labels)
        inner = branch(d - 1) if d > 1 else []
        return [w, a] + inner + [b, a, b, w]

    return from_chords([t for _ in range(branches) for t in branch(depth)])


@lru_cache(maxsize=None)
def sampled(n, count, seed):
    """A deterministic mix of generated fatgraphs with ``n`` ribbons."""
    rng = random.Random(seed)
    out = []
    for k in range(count):
        s = rng.randrange(2**31)
        kind = k % 3
        if kind == 0:
            out.append(random_fatgraph(n, rng.randint(0, n), s))
        elif kind == 1:
            out.append(random_clustered_fatgraph(n, s))
        else:
            out.append(random_walk_fatgraph(n, rng.randint(1, 8), s))
    return tuple(out)


@pytest.fixture(scope="session")
def fixtures():
    return {name: fixture(name) for name in ("T1", "P1", "T2", "X2", "Y2", "O2")}


@pytest.fixture(scope="session")
def f2b():
    return fixture("F2B")
