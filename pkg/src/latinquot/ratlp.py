"""Exact rational linear programming.

A two-phase primal simplex with Bland's rule.  The tableau is kept in
fraction-free form: integer entries over a shared positive denominator equal to
the last pivot, updated by exact Bareiss division.  Values are turned back into
lowest-terms :class:`~fractions.Fraction` only when a solution is read out, so
no floating point is involved anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import InvariantError, PreconditionError

__all__ = [
    "Constraint",
    "LinearProgram",
    "LpSolution",
    "OPTIMAL",
    "INFEASIBLE",
    "UNBOUNDED",
    "solve",
    "strict_feasible",
]

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_RELATIONS = ("<=", "=", ">=")


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple
    relation: str
    rhs: Fraction

    def holds(self, x):
        lhs = sum((c * v for c, v in zip(self.coeffs, x)), Fraction(0))
        if self.relation == "<=":
            return lhs <= self.rhs
        if self.relation == ">=":
            return lhs >= self.rhs
        return lhs == self.rhs


@dataclass
class LinearProgram:
    """maximize objective . x subject to constraints and x_i >= lower[i].

    ``lower[i]`` defaults to 0; ``None`` makes the variable free.
    """

    num_vars: int
    objective: list = field(default_factory=list)
    constraints: list = field(default_factory=list)
    lower: list = field(default_factory=list)
    names: list = field(default_factory=list)

    def __post_init__(self):
        if self.num_vars < 0:
            raise PreconditionError("num_vars must be nonnegative")
        if not self.objective:
            self.objective = [Fraction(0)] * self.num_vars
        self.objective = [Fraction(c) for c in self.objective]
        if not self.lower:
            self.lower = [Fraction(0)] * self.num_vars
        self.lower = [None if v is None else Fraction(v) for v in self.lower]
        if len(self.objective) != self.num_vars or len(self.lower) != self.num_vars:
            raise PreconditionError("objective/lower length must match num_vars")
        cons, self.constraints = self.constraints, []
        for c in cons:
            if isinstance(c, Constraint):
                self.add(c.coeffs, c.relation, c.rhs)
            else:
                self.add(*c)

    def add(self, coeffs, relation, rhs):
        """Append ``coeffs . x relation rhs``; ``coeffs`` may be a dict {index: value}."""
        if relation not in _RELATIONS:
            raise PreconditionError(f"unknown relation {relation!r}")
        if isinstance(coeffs, dict):
            dense = [Fraction(0)] * self.num_vars
            for i, v in coeffs.items():
                if not 0 <= i < self.num_vars:
                    raise PreconditionError(f"variable index {i} out of range")
                dense[i] += Fraction(v)
            coeffs = dense
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != self.num_vars:
            raise PreconditionError("constraint length must match num_vars")
        self.constraints.append(Constraint(coeffs, relation, Fraction(rhs)))
        return self

    def is_feasible_point(self, x):
        if len(x) != self.num_vars:
            return False
        for v, lo in zip(x, self.lower):
            if lo is not None and v < lo:
                return False
        return all(c.holds(x) for c in self.constraints)

    def value(self, x):
        return sum((c * v for c, v in zip(self.objective, x)), Fraction(0))


@dataclass(frozen=True)
class LpSolution:
    status: str
    values: Optional[tuple] = None
    objective: Optional[Fraction] = None

    @property
    def optimal(self):
        return self.status == OPTIMAL


def _lcm_denominator(values):
    d = 1
    for v in values:
        d = d * v.denominator // math.gcd(d, v.denominator)
    return d


class _Tableau:
    """Fraction-free simplex tableau; true entry = ``rows[i][j] / den``."""

    def __init__(self, rows, rhs, basis, objectives):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.obj = objectives  # list of [coeffs, value] rows, pivoted alongside
        self.den = 1

    def pivot(self, r, c):
        p = self.rows[r][c]
        d = self.den
        prow = self.rows[r]
        prhs = self.rhs[r]
        ncol = len(prow)
        nz = [j for j in range(ncol) if prow[j]]
        for i, row in enumerate(self.rows):
            if i == r:
                continue
            f = row[c]
            if f == 0:
                if p != d:
                    for j in range(ncol):
                        if row[j]:
                            row[j] = row[j] * p // d
                    self.rhs[i] = self.rhs[i] * p // d
                continue
            for j in range(ncol):
                row[j] = row[j] * p
            for j in nz:
                row[j] -= f * prow[j]
            for j in range(ncol):
                q, rem = divmod(row[j], d)
                if rem:
                    raise InvariantError("inexact Bareiss division")
                row[j] = q
            self.rhs[i] = (self.rhs[i] * p - f * prhs) // d
        for ob in self.obj:
            coeffs = ob[0]
            f = coeffs[c]
            for j in range(ncol):
                coeffs[j] = coeffs[j] * p
            if f:
                for j in nz:
                    coeffs[j] -= f * prow[j]
            for j in range(ncol):
                coeffs[j] //= d
            ob[1] = (ob[1] * p - f * prhs) // d
        self.basis[r] = c
        self.den = p
        if p < 0:
            # keep the shared denominator positive; the represented values are unchanged
            self.den = -p
            for row in self.rows:
                for j in range(ncol):
                    row[j] = -row[j]
            self.rhs = [-v for v in self.rhs]
            for ob in self.obj:
                ob[0] = [-v for v in ob[0]]
                ob[1] = -ob[1]

    def run(self, which, allowed):
        """Minimize objective row ``which``; returns False if unbounded."""
        coeffs = self.obj[which][0]
        while True:
            enter = -1
            for j in range(len(coeffs)):
                if allowed[j] and coeffs[j] < 0:
                    enter = j
                    break
            if enter < 0:
                return True
            leave = -1
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a <= 0:
                    continue
                if leave < 0:
                    leave = i
                    continue
                lhs = self.rhs[i] * self.rows[leave][enter]
                rhs = self.rhs[leave] * a
                if lhs < rhs or (lhs == rhs and self.basis[i] < self.basis[leave]):
                    leave = i
            if leave < 0:
                return False
            self.pivot(leave, enter)
            coeffs = self.obj[which][0]


def solve(lp: LinearProgram) -> LpSolution:
    """Exact optimum of ``lp`` (a maximization).

    >>> lp = LinearProgram(1, objective=[1])
    >>> lp.add([1], "<=", 3).add([1], ">=", 0) and None
    >>> solve(lp).values
    (Fraction(3, 1),)
    """
    n = lp.num_vars
    # column layout: one or two columns per original variable (free ones split)
    col_of = []
    ncols = 0
    for lo in lp.lower:
        if lo is None:
            col_of.append((ncols, ncols + 1))
            ncols += 2
        else:
            col_of.append((ncols, None))
            ncols += 1
    shift = [Fraction(0) if lo is None else lo for lo in lp.lower]

    def expand(coeffs):
        out = [Fraction(0)] * ncols
        for v, (p, m) in zip(coeffs, col_of):
            out[p] = v
            if m is not None:
                out[m] = -v
        return out

    raw = []
    for con in lp.constraints:
        coeffs = expand(con.coeffs)
        rhs = con.rhs - sum((c * s for c, s in zip(con.coeffs, shift)), Fraction(0))
        rel = con.relation
        if rhs < 0:
            coeffs = [-c for c in coeffs]
            rhs = -rhs
            rel = {"<=": ">=", ">=": "<=", "=": "="}[rel]
        raw.append((coeffs, rel, rhs))

    nslack = sum(1 for _, rel, _ in raw if rel != "=")
    nart = sum(1 for _, rel, _ in raw if rel != "<=")
    total = ncols + nslack + nart
    rows, rhs, basis = [], [], []
    s_next, a_next = ncols, ncols + nslack
    art_rows = []
    for coeffs, rel, b in raw:
        scale = _lcm_denominator(coeffs + [b])
        row = [int(c * scale) for c in coeffs] + [0] * (nslack + nart)
        if rel == "<=":
            row[s_next] = 1
            basis.append(s_next)
            s_next += 1
        else:
            if rel == ">=":
                row[s_next] = -1
                s_next += 1
            row[a_next] = 1
            basis.append(a_next)
            art_rows.append(len(rows))
            a_next += 1
        rows.append(row)
        rhs.append(int(b * scale))

    # phase-1 objective: minimize the sum of artificials, reduced against the basis
    p1 = [0] * total
    p1_val = 0
    for j in range(ncols + nslack, total):
        p1[j] = 1
    for i in art_rows:
        for j in range(total):
            p1[j] -= rows[i][j]
        p1_val -= rhs[i]
    # phase-2 objective: minimize -c; reduced costs start equal to costs (basis costs 0)
    cexp = expand(lp.objective)
    cscale = _lcm_denominator(cexp)
    p2 = [int(-c * cscale) for c in cexp] + [0] * (nslack + nart)
    tab = _Tableau(rows, rhs, basis, [[p1, p1_val], [p2, 0]])

    allowed = [True] * total
    if art_rows:
        tab.run(0, allowed)
        if tab.obj[0][1] != 0:
            return LpSolution(INFEASIBLE)
        for j in range(ncols + nslack, total):
            allowed[j] = False
        # drive zero-level artificials out of the basis, dropping redundant rows
        i = 0
        while i < len(tab.rows):
            if tab.basis[i] >= ncols + nslack:
                col = next((j for j in range(ncols + nslack) if tab.rows[i][j]), -1)
                if col < 0:
                    del tab.rows[i]
                    del tab.rhs[i]
                    del tab.basis[i]
                    continue
                tab.pivot(i, col)
            i += 1

    if not tab.run(1, allowed):
        return LpSolution(UNBOUNDED)

    xcol = [Fraction(0)] * ncols
    for i, bcol in enumerate(tab.basis):
        if bcol < ncols:
            xcol[bcol] = Fraction(tab.rhs[i], tab.den)
    values = []
    for (p, m), s in zip(col_of, shift):
        v = xcol[p] - (xcol[m] if m is not None else 0) + s
        values.append(v)
    values = tuple(values)
    if not lp.is_feasible_point(values):
        raise InvariantError("simplex returned a point violating the constraints")
    return LpSolution(OPTIMAL, values, lp.value(values))


def strict_feasible(
    num_vars: int,
    equalities: Sequence = (),
    inequalities: Sequence = (),
    positive: Sequence[int] = (),
) -> Optional[tuple]:
    """Find a rational x >= 0 with the given relations and x_i > 0 on ``positive``.

    ``equalities`` and ``inequalities`` are ``(coeffs, rhs)`` pairs meaning
    ``coeffs . x = rhs`` and ``coeffs . x <= rhs``.  A slack ``eps`` bounded by
    1 is maximized subject to ``x_i >= eps``; returns None unless the optimum
    is positive.
    """
    lp = LinearProgram(num_vars + 1, objective=[0] * num_vars + [1])
    eps = num_vars

    def widen(coeffs):
        if isinstance(coeffs, dict):
            return dict(coeffs)
        return list(coeffs) + [0]

    for coeffs, rhs in equalities:
        lp.add(widen(coeffs), "=", rhs)
    for coeffs, rhs in inequalities:
        lp.add(widen(coeffs), "<=", rhs)
    for i in positive:
        lp.add({i: 1, eps: -1}, ">=", 0)
    lp.add({eps: 1}, "<=", 1)
    sol = solve(lp)
    if sol.status != OPTIMAL or sol.values[eps] <= 0:
        return None
    return sol.values[:num_vars]
