import itertools
import random

import numpy as np
import pytest

from latinquot import Matrix2, Matrix3, Partition, latin_from_table, random_latin_square

EXAMPLE_M = [[0, 3, 3, 1], [5, 2, 4, 0], [1, 1, 0, 1], [2, 3, 5, 0]]


@pytest.fixture
def example_matrix():
    return Matrix2(EXAMPLE_M)


@pytest.fixture
def halves():
    return Partition.parse("1,2|3,4")


@pytest.fixture
def rng():
    return random.Random(20030326)


def cyclic_latin(n):
    return latin_from_table([[(i + j) % n + 1 for j in range(n)] for i in range(n)])


def random_latin(n, rng):
    return latin_from_table(random_latin_square(n, rng))


def random_composition(n, parts, rng):
    cuts = sorted(rng.sample(range(1, n), parts - 1))
    return [b - a for a, b in zip([0] + cuts, cuts + [n])]


def all_cells(k):
    return list(itertools.product(range(1, k + 1), repeat=3))


def lines_of(k):
    """Every line of a k-cube as a frozenset of 1-based cells."""
    out = []
    for t in range(3):
        for i, j in itertools.product(range(1, k + 1), repeat=2):
            cells = []
            for x in range(1, k + 1):
                c = [i, j]
                c.insert(t, x)
                cells.append(tuple(c))
            out.append(frozenset(cells))
    return out


def naive_rho(H, k):
    # smallest number of lines covering H, by increasing subset size
    H = set(H)
    if not H:
        return 0
    useful = [l for l in lines_of(k) if l & H]
    for size in range(1, len(useful) + 1):
        for combo in itertools.combinations(useful, size):
            if H <= set().union(*combo):
                return size
    raise AssertionError("lines always cover")


def naive_alpha_bar(H, k):
    H = sorted(H)
    lines = lines_of(k)
    for size in range(len(H), 0, -1):
        for X in itertools.combinations(H, size):
            if all(len(l & set(X)) <= 1 for l in lines):
                return size
    return 0


def random_matrix2(rng, m, n, hi=4):
    return Matrix2([[rng.randint(0, hi) for _ in range(n)] for _ in range(m)])


def _compositions(total, parts):
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def brute_gqpq(H, S, r):
    """Integer search: fill each vertical line over S with exactly r_i r_j units
    spread over its cells in H, then check the other two line families."""
    k = H.k
    lines = []
    for i, j in sorted(S.pairs):
        cells = [c for c in range(1, k + 1) if (i, j, c) in H.triples]
        target = r[i - 1] * r[j - 1]
        lines.append([(i, j, cells, comp) for comp in _compositions(target, len(cells))])
    for choice in itertools.product(*lines):
        horiz = {}
        trans = {}
        for i, j, cells, comp in choice:
            for c, v in zip(cells, comp):
                trans[(i, c)] = trans.get((i, c), 0) + v  # fix a and c, run over b
                horiz[(j, c)] = horiz.get((j, c), 0) + v  # fix b and c, run over a
        if all(v <= r[a - 1] * r[c - 1] for (a, c), v in trans.items()) and all(
            v <= r[b - 1] * r[c - 1] for (b, c), v in horiz.items()
        ):
            return True
    return False


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
