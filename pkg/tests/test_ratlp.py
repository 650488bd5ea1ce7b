import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from latinquot import PreconditionError
from latinquot.ratlp import INFEASIBLE, OPTIMAL, UNBOUNDED, LinearProgram, solve, strict_feasible


def test_solve_examples():
    sol = solve(LinearProgram(1, [1], [([1], "<=", 3)]))
    assert sol.status == OPTIMAL and sol.values == (3,) and sol.objective == 3
    sol = solve(LinearProgram(2, [1, 1], [([1, 1], "<=", 1)]))
    assert sol.objective == 1
    sol = solve(LinearProgram(1, [1], [([1], "<=", 1), ([1], ">=", 2)]))
    assert sol.status == INFEASIBLE
    sol = solve(LinearProgram(2, [1, 0], [([1, -1], "<=", 1)]))
    assert sol.status == UNBOUNDED


def test_values_are_exact_fractions():
    sol = solve(LinearProgram(2, [1, 1], [([3, 1], "<=", 1), ([1, 3], "<=", 1)]))
    assert sol.values == (Fraction(1, 4), Fraction(1, 4))
    assert all(isinstance(v, Fraction) for v in sol.values)


def test_strict_feasible_examples():
    assert strict_feasible(1, [([1], 1)], positive=[0]) == (1,)
    assert strict_feasible(2, [([1, 1], 1)], positive=[0, 1]) == (Fraction(1, 2), Fraction(1, 2))
    assert strict_feasible(1, [([1], 0)], positive=[0]) is None


def test_bad_programs_rejected():
    with pytest.raises(PreconditionError):
        LinearProgram(2, [1], [])
    with pytest.raises(PreconditionError):
        LinearProgram(2).add([1, 1], "<", 0)
    with pytest.raises(PreconditionError):
        LinearProgram(2).add({5: 1}, "<=", 0)


# ---- vertex enumeration oracle ---------------------------------------------

def gauss_solve(A, b):
    """Unique solution of a square system in Fractions, or None if singular."""
    n = len(A)
    M = [list(map(Fraction, row)) + [Fraction(v)] for row, v in zip(A, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col] / M[col][col]
                M[r] = [a - f * c for a, c in zip(M[r], M[col])]
    return [M[i][n] / M[i][i] for i in range(n)]


def vertex_optimum(lp):
    """Best objective over basic feasible points (the feasible set must be bounded)."""
    rows = [(c.coeffs, c.rhs) for c in lp.constraints]
    rows += [(tuple(int(i == j) for j in range(lp.num_vars)), lo) for i, lo in enumerate(lp.lower) if lo is not None]
    best = None
    for pick in itertools.combinations(rows, lp.num_vars):
        x = gauss_solve([p[0] for p in pick], [p[1] for p in pick])
        if x is not None and lp.is_feasible_point(x):
            v = lp.value(x)
            best = v if best is None or v > best else best
    return best


@st.composite
def bounded_lp(draw):
    n = draw(st.integers(1, 3))
    m = draw(st.integers(0, 4))
    small = st.integers(-3, 3)
    free = draw(st.lists(st.booleans(), min_size=n, max_size=n))
    lp = LinearProgram(
        n,
        objective=draw(st.lists(small, min_size=n, max_size=n)),
        lower=[None if f else 0 for f in free],
    )
    for _ in range(m):
        lp.add(draw(st.lists(small, min_size=n, max_size=n)), draw(st.sampled_from(["<=", ">=", "="])), draw(st.integers(-4, 6)))
    for i in range(n):
        lp.add({i: 1}, "<=", 5)
        lp.add({i: 1}, ">=", -5)
    return lp


@settings(max_examples=300, deadline=None)
@given(bounded_lp())
def test_solve_matches_vertex_enumeration(lp):
    sol = solve(lp)
    best = vertex_optimum(lp)
    if best is None:
        assert sol.status == INFEASIBLE
    else:
        assert sol.status == OPTIMAL
        assert sol.objective == best
        assert lp.is_feasible_point(sol.values)
        assert lp.value(sol.values) == sol.objective


@settings(max_examples=60, deadline=None)
@given(bounded_lp())
def test_solve_is_deterministic(lp):
    assert solve(lp) == solve(lp)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 2 ** 32))
def test_packing_rounding_never_beats_optimum(n, m, seed):
    # nonnegative packing LP: rounding the optimum down stays feasible and is no better
    rng = random.Random(seed)
    lp = LinearProgram(n, [rng.randint(0, 4) for _ in range(n)])
    for _ in range(m):
        lp.add([rng.randint(0, 3) for _ in range(n)], "<=", rng.randint(0, 5))
    for i in range(n):
        lp.add({i: 1}, "<=", 4)
    sol = solve(lp)
    assert sol.status == OPTIMAL
    for q in (1, 2, 3, 7):
        y = [Fraction(int(v * q), q) for v in sol.values]
        assert lp.is_feasible_point(y)
        assert lp.value(y) <= sol.objective


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2 ** 32))
def test_strict_feasible_point_is_strict(n, seed):
    rng = random.Random(seed)
    eqs = [([rng.randint(0, 2) for _ in range(n)], rng.randint(0, 3)) for _ in range(rng.randint(0, 2))]
    ineqs = [([rng.randint(0, 2) for _ in range(n)], rng.randint(0, 3)) for _ in range(rng.randint(0, 2))]
    x = strict_feasible(n, eqs, ineqs, positive=range(n))
    # oracle: a strictly positive point exists iff the max-slack LP is positive
    lp = LinearProgram(n + 1, [0] * n + [1])
    for c, b in eqs:
        lp.add(list(c) + [0], "=", b)
    for c, b in ineqs:
        lp.add(list(c) + [0], "<=", b)
    for i in range(n):
        lp.add({i: 1, n: -1}, ">=", 0)
    lp.add({n: 1}, "<=", 1)
    if x is not None:
        assert all(v > 0 for v in x)
        assert all(sum(a * v for a, v in zip(c, x)) == b for c, b in eqs)
        assert all(sum(a * v for a, v in zip(c, x)) <= b for c, b in ineqs)
    if n <= 3:
        best = vertex_optimum(lp)
        assert (x is not None) == (best is not None and best > 0)
