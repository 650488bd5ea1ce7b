"""Margin classes C(R, S), C'_I(R, S) and their decompositions.

Every choice left open by the existence arguments is fixed: vectors are split
greedily from the left, matchings are lexicographically first, and padding is
removed cell by cell in row-major order.  Identical inputs therefore always
give identical outputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import InvariantError, PreconditionError
from .tensor import Matrix2

__all__ = [
    "MarginVector",
    "MarginSpec",
    "split_vector",
    "split_vector_parts",
    "construct_class",
    "find_permutation",
    "perm_decompose",
    "class_decompose",
    "padded_decompose",
    "in_class",
    "in_padded_class",
]


class MarginVector(tuple):
    """Tuple of nonnegative integers; ``norm`` is |x|."""

    def __new__(cls, values=()):
        vals = tuple(int(v) for v in values)
        if any(v < 0 for v in vals):
            raise PreconditionError(f"margin vector {vals} has a negative component")
        return super().__new__(cls, vals)

    @property
    def norm(self):
        return sum(self)

    def scaled(self, k):
        return MarginVector(k * v for v in self)

    def __add__(self, other):
        return MarginVector(a + b for a, b in zip(self, other, strict=True))

    def __sub__(self, other):
        return MarginVector(a - b for a, b in zip(self, other, strict=True))

    def __le__(self, other):
        return len(self) == len(other) and all(a <= b for a, b in zip(self, other))

    def __repr__(self):
        return f"MarginVector({list(self)})"


@dataclass(frozen=True)
class MarginSpec:
    """Row sums R, column sums S and the set I of columns whose sum is exact."""

    rows: MarginVector
    cols: MarginVector
    exact_cols: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "rows", MarginVector(self.rows))
        object.__setattr__(self, "cols", MarginVector(self.cols))
        exact = frozenset(int(j) for j in self.exact_cols)
        if any(not 1 <= j <= len(self.cols) for j in exact):
            raise PreconditionError(f"exact columns {sorted(exact)} outside 1..{len(self.cols)}")
        object.__setattr__(self, "exact_cols", exact)

    def transposed(self):
        return MarginSpec(self.cols, self.rows)


def split_vector(x, N):
    """y <= x with |y| = N, taking greedily from the left."""
    x = MarginVector(x)
    N = int(N)
    if N < 0 or x.norm < N:
        raise PreconditionError(f"cannot take {N} units from {list(x)}")
    out = []
    for v in x:
        t = min(v, N)
        out.append(t)
        N -= t
    return MarginVector(out)


def split_vector_parts(x, r, k):
    """Split x (with |x| = r*k) into r left-greedy pieces each summing to k."""
    x = MarginVector(x)
    if r <= 0 or k < 0:
        raise PreconditionError("need r > 0 and k >= 0")
    if x.norm != r * k:
        raise PreconditionError(f"|x| = {x.norm} is not {r}*{k}")
    parts = []
    rest = x
    for _ in range(r - 1):
        y = split_vector(rest, k)
        parts.append(y)
        rest = rest - y
    parts.append(rest)
    return parts


def _check_dims(R, S):
    if not R or not S:
        raise PreconditionError("margin vectors must be nonempty")


def construct_class(R, S):
    """The left-greedy member of C(R, S); raises when |R| != |S|."""
    R, S = MarginVector(R), MarginVector(S)
    _check_dims(R, S)
    if R.norm != S.norm:
        raise PreconditionError(f"C(R,S) is empty: |R| = {R.norm} but |S| = {S.norm}")
    rows = []
    rest = S
    for r in R:
        x = split_vector(rest, r)
        rows.append(list(x))
        rest = rest - x
    return Matrix2(rows)


def _square_line_sum(M):
    if M.ndim != 2 or M.dims[0] != M.dims[1]:
        raise PreconditionError("expected a square 2-indexed matrix")
    sums = set(M.row_sums()) | set(M.col_sums())
    if len(sums) != 1:
        raise PreconditionError("line sums are not all equal")
    k = sums.pop()
    if k <= 0:
        raise PreconditionError("line sums must be positive")
    return k


def find_permutation(M):
    """Lexicographically first permutation matrix P with supp(P) inside supp(M)."""
    _square_line_sum(M)
    adj = np.ascontiguousarray(M.array != 0, dtype=np.uint8)
    cols = _kernels.lex_perfect_matching(adj)
    n = M.dims[0]
    if n and cols[0] < 0:
        raise InvariantError("no perfect matching in a regular bipartite support")
    P = np.zeros((n, n), dtype=object)
    for i, j in enumerate(cols.tolist()):
        P[i, j] = 1
    return Matrix2._wrap(P)


def perm_decompose(M):
    """M = P_1 + ... + P_k with permutation matrices, k the common line sum."""
    k = _square_line_sum(M)
    rest = M.array.copy()
    out = []
    for step in range(k):
        P = find_permutation(Matrix2._wrap(rest))
        out.append(P)
        rest = rest - P.array
    if np.any(rest != 0):
        raise InvariantError("permutation decomposition left a remainder")
    return out


def in_class(M, R, S):
    return list(M.row_sums()) == list(R) and list(M.col_sums()) == list(S)


def in_padded_class(M, spec):
    rows, cols = M.row_sums(), M.col_sums()
    if len(rows) != len(spec.rows) or len(cols) != len(spec.cols):
        return False
    if any(a > b for a, b in zip(rows, spec.rows)):
        return False
    if any(a > b for a, b in zip(cols, spec.cols)):
        return False
    return all(cols[j - 1] == spec.cols[j - 1] for j in spec.exact_cols)


def _expand_rows(arr, R, k):
    # replace row i by r_i rows each summing to k; returns the matrix and the grouping
    new_rows, sizes = [], []
    for row, r in zip(arr.tolist(), R):
        if r:
            new_rows.extend(list(p) for p in split_vector_parts(row, r, k))
        sizes.append(r)
    return new_rows, sizes


def _fold(P, row_sizes, col_sizes):
    # sum expanded rows/cols back into their groups; zero-size groups give zero lines
    m = sum(row_sizes)
    arr = np.asarray(P, dtype=object).reshape(m, -1)
    rows, start = [], 0
    for r in row_sizes:
        rows.append(arr[start:start + r].sum(axis=0) if r else np.zeros(arr.shape[1], dtype=object))
        start += r
    arr = np.array(rows, dtype=object).reshape(len(row_sizes), -1)
    cols, start = [], 0
    for s in col_sizes:
        cols.append(arr[:, start:start + s].sum(axis=1) if s else np.zeros(arr.shape[0], dtype=object))
        start += s
    return np.array(cols, dtype=object).reshape(len(col_sizes), -1).T


def class_decompose(M, R, S, k):
    """Split M in C(kR, kS) into k members of C(R, S)."""
    R, S = MarginVector(R), MarginVector(S)
    k = int(k)
    if k <= 0:
        raise PreconditionError("k must be positive")
    if M.ndim != 2 or M.dims != (len(R), len(S)):
        raise PreconditionError(f"matrix dims {M.dims} do not match margins ({len(R)}, {len(S)})")
    if not in_class(M, R.scaled(k), S.scaled(k)):
        raise PreconditionError("matrix margins are not (kR, kS)")
    if R.norm == 0:
        return [Matrix2.zeros(M.dims) for _ in range(k)]
    rows, _ = _expand_rows(M.array, R, k)
    wide = np.array(rows, dtype=object).T
    cols, _ = _expand_rows(wide, S, k)
    square = Matrix2(np.array(cols, dtype=object).T)
    pieces = perm_decompose(square)
    out = []
    for P in pieces:
        Q = Matrix2._wrap(_fold(P.array, list(R), list(S)))
        if not in_class(Q, R, S):
            raise InvariantError("folded permutation has the wrong margins")
        out.append(Q)
    return out


def padded_decompose(M, spec, k):
    """Split M in C'_I(kR, kS) into k members of C'_I(R, S).

    Pads M with the left-greedy complement M' in C(kR - R', kS - S'),
    decomposes M + M' with :func:`class_decompose`, then removes M' again:
    for each cell in row-major order its M' units come off Q_1, then Q_2, ...
    """
    k = int(k)
    if k <= 0:
        raise PreconditionError("k must be positive")
    R, S = spec.rows, spec.cols
    if R.norm != S.norm:
        raise PreconditionError(f"|R| = {R.norm} differs from |S| = {S.norm}")
    if M.ndim != 2 or M.dims != (len(R), len(S)):
        raise PreconditionError(f"matrix dims {M.dims} do not match margins ({len(R)}, {len(S)})")
    if not in_padded_class(M, MarginSpec(R.scaled(k), S.scaled(k), spec.exact_cols)):
        raise PreconditionError("matrix is not in C'_I(kR, kS)")
    deficit_r = R.scaled(k) - MarginVector(M.row_sums())
    deficit_c = S.scaled(k) - MarginVector(M.col_sums())
    pad = construct_class(deficit_r, deficit_c).array
    pieces = [Q.array.copy() for Q in class_decompose(M + Matrix2._wrap(pad), R, S, k)]
    m, n = M.dims
    for a in range(m):
        for b in range(n):
            need = pad[a, b]
            for Q in pieces:
                if not need:
                    break
                t = min(need, Q[a, b])
                Q[a, b] -= t
                need -= t
            if need:
                raise InvariantError("padding could not be removed")
    out = [Matrix2._wrap(Q) for Q in pieces]
    for Q in out:
        if not in_padded_class(Q, spec):
            raise InvariantError("padded piece violates its margins")
    return out
