"""Lifting a k*k*k quotient matrix to a (partial) Latin square.

Given M in T(k,k,k), positive block sizes r and a pair set S with

    M(l^t_ij) <= r_i r_j  for every line,   M(l^3_ij) = r_i r_j  on S,

:func:`lift_partial` builds a partial S'-Latin square L of order n = sum(r)
with ((L o_1 s) o_2 s) o_3 s = M for the canonical partition s.  The build
refines one axis at a time, M -> M1 in T(k,k,n) -> M2 in T(k,n,n) -> M3 in
T(n,n,n), each step splitting 2-indexed slices with :func:`padded_decompose`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import InvariantError, PreconditionError
from .margin import MarginSpec, MarginVector, padded_decompose
from .ratlp import strict_feasible
from .tensor import (
    Matrix2,
    Matrix3,
    PairSet,
    Partition,
    RationalMatrix3,
    is_latin,
    is_partial_s_latin,
    line_sums,
    triple_quotient,
)

__all__ = [
    "QuotientInstance",
    "LiftResult",
    "RealLiftResult",
    "Violation",
    "Verification",
    "check_conditions",
    "lift_partial",
    "lift_hilton",
    "verify_lift",
    "lift_real",
]

_AXIS_NAMES = {1: "horizontal", 2: "transversal", 3: "vertical"}


@dataclass(frozen=True)
class Violation:
    axis: int
    i: int
    j: int
    value: int
    bound: int
    relation: str  # "<=" or "="

    def __str__(self):
        op = "exceeds" if self.relation == "<=" else "differs from"
        return (
            f"{_AXIS_NAMES[self.axis]} line l{self.axis}_({self.i},{self.j}): "
            f"sum {self.value} {op} {self.bound}"
        )


@dataclass(frozen=True)
class QuotientInstance:
    M: Matrix3
    r: MarginVector
    S: PairSet

    def __post_init__(self):
        object.__setattr__(self, "r", MarginVector(self.r))
        if any(v <= 0 for v in self.r):
            raise PreconditionError("block sizes r_i must be positive")
        violations = check_conditions(self.M, self.r, self.S)
        if violations:
            raise PreconditionError("; ".join(str(v) for v in violations))

    @property
    def k(self):
        return len(self.r)


@dataclass(frozen=True)
class LiftResult:
    L: Matrix3
    sigma: Partition
    S_prime: PairSet


@dataclass(frozen=True)
class RealLiftResult:
    lift: LiftResult
    instance: QuotientInstance
    block_size: int
    scale: int
    rational_solution: RationalMatrix3


@dataclass
class Verification:
    """Outcome of :func:`verify_lift`; truthy iff no reasons were recorded."""

    reasons: list = field(default_factory=list)

    def __bool__(self):
        return not self.reasons


def check_conditions(M, r, S):
    """List every violated hypothesis; an empty list means M is liftable."""
    r = MarginVector(r)
    k = len(r)
    if M.ndim != 3 or M.dims != (k, k, k):
        raise PreconditionError(f"matrix dims {M.dims} do not match {k} block sizes")
    if S.k != k:
        raise PreconditionError(f"pair set over ({S.k}) used with k = {k}")
    out = []
    for t in (1, 2, 3):
        sums = line_sums(M, t)
        for i in range(1, k + 1):
            for j in range(1, k + 1):
                v = sums[i - 1, j - 1]
                bound = r[i - 1] * r[j - 1]
                if v > bound:
                    out.append(Violation(t, i, j, v, bound, "<="))
                elif t == 3 and (i, j) in S and v != bound:
                    out.append(Violation(t, i, j, v, bound, "="))
    return out


def _refine(slices, sizes, exact_rows, blocks, nrows, ncols, row_margin, col_margin):
    """Split each slice c into r_c pieces and collect them by new index.

    ``slices[c]`` is ``nrows x ncols`` with row sums <= r_c * row_margin and
    column sums <= r_c * col_margin; the pieces satisfy the plain margins with
    row sums exact on ``exact_rows[c]``.  padded_decompose makes columns exact,
    so every slice is transposed on the way in and out.
    """
    pieces = {}
    for c, A in enumerate(slices):
        spec = MarginSpec(col_margin, row_margin, exact_rows[c])
        parts = padded_decompose(A.transpose(), spec, sizes[c])
        for idx, Q in zip(blocks[c], parts):
            pieces[idx] = Q.transpose().array
    return pieces


def lift_partial(inst):
    """Lift a checked :class:`QuotientInstance` to a partial S'-Latin square."""
    if not isinstance(inst, QuotientInstance):
        raise PreconditionError("lift_partial needs a QuotientInstance")
    M, r, S = inst.M, inst.r, inst.S
    k = len(r)
    sigma = Partition.canonical(r)
    n = sigma.n
    blocks = sigma.blocks
    labels = sigma.labels()
    A = M.array
    ones = MarginVector([1] * n)

    # stage 1: split M(., ., c); rows and columns stay indexed by (k)
    slices = [Matrix2._wrap(A[:, :, c]) for c in range(k)]
    none = [()] * k
    q = _refine(slices, r, none, blocks, k, k, r, r)
    M1 = np.empty((k, k, n), dtype=object)
    for g in range(1, n + 1):
        M1[:, :, g - 1] = q[g]
    _stage_check(M1, 1, r, S, labels)

    # stage 2: split M1(., c, .) over the second index;
    # first-index sums are exact for (a, c) in S
    slices = [Matrix2._wrap(M1[:, c, :]) for c in range(k)]
    exact = [frozenset(a for a in range(1, k + 1) if (a, c + 1) in S) for c in range(k)]
    q = _refine(slices, r, exact, blocks, k, n, r, ones)
    M2 = np.empty((k, n, n), dtype=object)
    for g in range(1, n + 1):
        M2[:, g - 1, :] = q[g]
    _stage_check(M2, 2, r, S, labels)

    # stage 3: split M2(c, ., .) over the first index
    slices = [Matrix2._wrap(M2[c, :, :]) for c in range(k)]
    exact = [
        frozenset(b for b in range(1, n + 1) if (c + 1, labels[b - 1] + 1) in S)
        for c in range(k)
    ]
    q = _refine(slices, r, exact, blocks, n, n, ones, ones)
    M3 = np.empty((n, n, n), dtype=object)
    for g in range(1, n + 1):
        M3[g - 1, :, :] = q[g]

    L = Matrix3._wrap(M3)
    S_prime = S.blow_up(sigma)
    if not is_partial_s_latin(L, S_prime):
        raise InvariantError("final stage is not a partial S'-Latin square")
    if triple_quotient(L, sigma) != M:
        raise InvariantError("lift does not quotient back to M")
    return LiftResult(L, sigma, S_prime)


def _stage_check(arr, stage, r, S, labels):
    # invariants of the intermediate matrices; failures are bugs, not bad input
    k = len(r)
    l1, l2, l3 = (arr.sum(axis=t) for t in range(3))
    if stage == 1:
        # arr in T(k,k,n)
        for a in range(k):
            for b in range(k):
                bound = r[a] * r[b]
                if l3[a, b] > bound or ((a + 1, b + 1) in S and l3[a, b] != bound):
                    raise InvariantError("stage 1 vertical line sum")
        ok = all(
            l1[b, g] <= r[b] and l2[a, g] <= r[a]
            for a in range(k) for b in range(k) for g in range(len(labels))
        )
    else:
        # arr in T(k,n,n)
        n = len(labels)
        ok = True
        for a in range(k):
            for g in range(n):
                exact = (a + 1, labels[g] + 1) in S
                if l3[a, g] > r[a] or (exact and l3[a, g] != r[a]) or l2[a, g] > r[a]:
                    ok = False
        ok = ok and bool(np.all(l1 <= 1))
    if not ok:
        raise InvariantError(f"stage {stage} line sum bound violated")


def lift_hilton(M, r):
    """Lift M whose every line sum equals r_i r_j to a Latin square."""
    r = MarginVector(r)
    k = len(r)
    S = PairSet.full(k)
    violations = check_conditions(M, r, S)
    for t in (1, 2):
        sums = line_sums(M, t)
        for i in range(k):
            for j in range(k):
                if sums[i, j] != r[i] * r[j]:
                    violations.append(Violation(t, i + 1, j + 1, sums[i, j], r[i] * r[j], "="))
    if violations:
        raise PreconditionError("; ".join(str(v) for v in violations))
    res = lift_partial(QuotientInstance(M, r, S))
    if not is_latin(res.L):
        raise InvariantError("Hilton lift is not a Latin square")
    return res


def verify_lift(inst, res):
    """Independently re-check every conclusion of a lift."""
    out = Verification()
    r, S = inst.r, inst.S
    sigma = res.sigma
    if sigma.sizes != tuple(r):
        out.reasons.append("partition block sizes differ from r")
    elif res.S_prime != S.blow_up(sigma):
        out.reasons.append("S' is not the blow-up of S")
    n = sigma.n
    L = res.L
    if L.dims != (n, n, n):
        out.reasons.append(f"L has dims {L.dims}, expected side {n}")
        return out
    if res.S_prime.k != n or not is_partial_s_latin(L, res.S_prime):
        out.reasons.append("line sum: L is not a partial S'-Latin square")
    if triple_quotient(L, sigma) != inst.M:
        out.reasons.append("quotient mismatch")
    return out


def _smallest_square_multiple(D):
    # least r with D dividing r*r
    r = 1
    for p, e in _factor(D):
        r *= p ** ((e + 1) // 2)
    return r


def _factor(n):
    out, p = [], 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out.append((p, e))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


def lift_real(M, beta, S):
    """Uniform lift of a nonnegative rational M with line sums <= beta.

    A rational matrix with the same support and the same (normalized, beta=1)
    line constraints is found by maximizing a positivity slack.  With D the
    common denominator of that solution, the smallest r with D | r^2 turns it
    into an integer instance with r_1 = ... = r_k = r, which is then lifted.
    """
    if not isinstance(M, RationalMatrix3) or len(set(M.dims)) != 1:
        raise PreconditionError("lift_real needs a cubic RationalMatrix3")
    beta = Fraction(beta)
    if beta <= 0:
        raise PreconditionError("beta must be positive")
    k = M.dims[0]
    if S.k != k:
        raise PreconditionError(f"pair set over ({S.k}) used with k = {k}")
    for t in (1, 2, 3):
        sums = line_sums(M, t)
        for i in range(k):
            for j in range(k):
                if sums[i, j] > beta:
                    raise PreconditionError(str(Violation(t, i + 1, j + 1, sums[i, j], beta, "<=")))
                if t == 3 and (i + 1, j + 1) in S and sums[i, j] != beta:
                    raise PreconditionError(str(Violation(t, i + 1, j + 1, sums[i, j], beta, "=")))

    cells = sorted(M.support())
    index = {c: v for v, c in enumerate(cells)}
    eqs, ineqs = [], []
    for t in (1, 2, 3):
        groups = {}
        for cell, v in index.items():
            key = cell[:t - 1] + cell[t:]
            groups.setdefault(key, []).append(v)
        for key, vs in sorted(groups.items()):
            coeffs = {v: 1 for v in vs}
            if t == 3 and key in S:
                eqs.append((coeffs, 1))
            else:
                ineqs.append((coeffs, 1))
    # vertical lines over S with no support cannot reach 1; M itself rules this out
    x = strict_feasible(len(cells), eqs, ineqs, range(len(cells)))
    if x is None:
        raise InvariantError("no strictly positive rational point for a satisfiable system")
    D = 1
    for v in x:
        D = D * v.denominator // math.gcd(D, v.denominator)
    r = _smallest_square_multiple(D)
    scale = r * r
    arr = np.zeros((k, k, k), dtype=object)
    rat = np.empty((k, k, k), dtype=object)
    rat.fill(Fraction(0))
    for cell, v in zip(cells, x):
        idx = tuple(c - 1 for c in cell)
        arr[idx] = int(v * scale)
        rat[idx] = v
    inst = QuotientInstance(Matrix3(arr), [r] * k, S)
    return RealLiftResult(lift_partial(inst), inst, r, scale, RationalMatrix3(rat))
