"""2- and 3-indexed nonnegative matrices, lines, partitions and quotients.

All public indices are 1-based, as in ``(n) = {1, ..., n}``; storage is a
0-based numpy object array so entries stay arbitrary-precision Python ints
(or ``Fraction`` for :class:`RationalMatrix3`).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import PreconditionError

__all__ = [
    "Matrix2",
    "Matrix3",
    "RationalMatrix3",
    "Line",
    "Partition",
    "PairSet",
    "line_sum",
    "line_sums",
    "quotient",
    "triple_quotient",
    "is_latin",
    "is_partial_s_latin",
    "is_permutation",
    "latin_from_table",
    "enumerate_latin_squares",
    "random_latin_square",
]


def _as_int(v):
    if isinstance(v, bool):
        raise PreconditionError("matrix entries must be integers, got bool")
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, Fraction) and v.denominator == 1:
        return int(v.numerator)
    raise PreconditionError(f"matrix entries must be integers, got {v!r}")


def _as_fraction(v):
    if isinstance(v, bool):
        raise PreconditionError("matrix entries must be rationals, got bool")
    if isinstance(v, (int, np.integer)):
        return Fraction(int(v))
    if isinstance(v, Fraction):
        return v
    if isinstance(v, str):
        try:
            return Fraction(v)
        except ValueError:
            raise PreconditionError(f"bad rational literal {v!r}") from None
    raise PreconditionError(f"matrix entries must be exact rationals, got {v!r}")


class _Grid:
    """Immutable dense grid; subclasses fix the arity and the entry type."""

    ndim: int = 0
    _coerce = staticmethod(_as_int)

    __slots__ = ("_a",)

    def __init__(self, entries):
        if isinstance(entries, _Grid):
            entries = entries._a
        if isinstance(entries, np.ndarray) and entries.dtype != object:
            entries = entries.tolist()
        try:
            arr = np.array(entries, dtype=object)
        except ValueError:
            raise PreconditionError("ragged matrix entries") from None
        if arr.ndim != self.ndim:
            raise PreconditionError(
                f"{type(self).__name__} needs {self.ndim} indices, got shape {arr.shape}"
            )
        if any(d == 0 for d in arr.shape):
            raise PreconditionError("matrix dimensions must be positive")
        flat = arr.reshape(-1)
        for i, v in enumerate(flat):
            v = self._coerce(v)
            if v < 0:
                raise PreconditionError("matrix entries must be nonnegative")
            flat[i] = v
        arr.flags.writeable = False
        self._a = arr

    @classmethod
    def _wrap(cls, arr):
        # trusted constructor for arrays produced internally
        obj = cls.__new__(cls)
        arr = np.asarray(arr, dtype=object)
        if arr.flags.writeable:
            arr = arr.copy()
            arr.flags.writeable = False
        obj._a = arr
        return obj

    @classmethod
    def zeros(cls, dims):
        arr = np.empty(tuple(dims), dtype=object)
        arr.fill(0)
        out = cls._wrap(arr)
        if any(d <= 0 for d in out.dims):
            raise PreconditionError("matrix dimensions must be positive")
        return out

    @property
    def dims(self):
        return tuple(self._a.shape)

    @property
    def array(self):
        """Read-only 0-based object array of the entries."""
        return self._a

    def __getitem__(self, idx):
        if not isinstance(idx, tuple) or len(idx) != self.ndim:
            raise PreconditionError(f"expected {self.ndim} 1-based indices")
        for i, d in zip(idx, self.dims):
            if not 1 <= i <= d:
                raise PreconditionError(f"index {idx} out of range for dims {self.dims}")
        return self._a[tuple(i - 1 for i in idx)]

    def tolist(self):
        return self._a.tolist()

    def total(self):
        return sum(self._a.reshape(-1).tolist(), type(self._coerce(0))())

    def support(self):
        """Set of 1-based index tuples holding nonzero entries."""
        return frozenset(tuple(i + 1 for i in ix) for ix in zip(*np.nonzero(self._a != 0)))

    def replace(self, idx, value):
        """Copy with one 1-based entry replaced."""
        self[idx]
        arr = self._a.copy()
        arr[tuple(i - 1 for i in idx)] = value
        return type(self)(arr)

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.dims == other.dims and bool(np.all(self._a == other._a))

    def __hash__(self):
        return hash((type(self).__name__, self.dims, tuple(self._a.reshape(-1).tolist())))

    def __add__(self, other):
        if type(other) is not type(self) or other.dims != self.dims:
            return NotImplemented
        return type(self)._wrap(self._a + other._a)

    def __repr__(self):
        return f"{type(self).__name__}({self.tolist()!r})"


class Matrix2(_Grid):
    """Element of T(m, n): a 2-indexed nonnegative integer matrix."""

    ndim = 2
    __slots__ = ()

    def transpose(self):
        return Matrix2._wrap(self._a.T)

    def row_sums(self):
        return [sum(r) for r in self._a.tolist()]

    def col_sums(self):
        return [sum(c) for c in self._a.T.tolist()]


class Matrix3(_Grid):
    """Element of T(n1, n2, n3): a 3-indexed nonnegative integer matrix."""

    ndim = 3
    __slots__ = ()

    @classmethod
    def indicator(cls, k, cells):
        """0/1 cube of side ``k`` with ones at the given 1-based triples."""
        arr = np.zeros((k, k, k), dtype=object)
        for a, b, c in cells:
            arr[a - 1, b - 1, c - 1] = 1
        return cls(arr)


class RationalMatrix3(_Grid):
    """3-indexed matrix of nonnegative exact rationals."""

    ndim = 3
    _coerce = staticmethod(_as_fraction)
    __slots__ = ()

    def total(self):
        return sum(self._a.reshape(-1).tolist(), Fraction(0))


@dataclass(frozen=True)
class Line:
    """A line: ``axis`` is the running index, ``fixed`` the other indices in order.

    For a 3-indexed matrix ``Line(1, (a, b))`` is {(x, a, b)},
    ``Line(2, (a, b))`` is {(a, x, b)} and ``Line(3, (a, b))`` is {(a, b, x)}.
    For a 2-indexed matrix ``Line(1, (a,))`` is the column {(x, a)} and
    ``Line(2, (a,))`` the row {(a, x)}.
    """

    axis: int
    fixed: tuple

    def cells(self, dims):
        if not 1 <= self.axis <= len(dims) or len(self.fixed) != len(dims) - 1:
            raise PreconditionError(f"line {self} does not fit a {len(dims)}-indexed matrix")
        rest = [d for t, d in enumerate(dims, 1) if t != self.axis]
        for v, d in zip(self.fixed, rest):
            if not 1 <= v <= d:
                raise PreconditionError(f"line {self} out of range for dims {dims}")
        for x in range(1, dims[self.axis - 1] + 1):
            idx = list(self.fixed)
            idx.insert(self.axis - 1, x)
            yield tuple(idx)


def line_sum(M, line):
    """Sum of the entries of ``M`` along ``line``."""
    if not isinstance(line, Line):
        raise PreconditionError("line_sum needs a Line")
    return sum(M[idx] for idx in line.cells(M.dims))


def line_sums(M, axis):
    """All sums of lines running along ``axis``, indexed by the fixed indices.

    Returns a 0-based object array; entry ``[a-1, b-1]`` is ``M(l^axis_{ab})``.
    """
    if not 1 <= axis <= M.ndim:
        raise PreconditionError(f"axis {axis} invalid for a {M.ndim}-indexed matrix")
    return M.array.sum(axis=axis - 1)


@dataclass(frozen=True)
class Partition:
    """Ordered partition (P_1, ..., P_k) of (n); blocks are sorted tuples."""

    blocks: tuple

    def __post_init__(self):
        blocks = tuple(tuple(sorted(int(x) for x in b)) for b in self.blocks)
        if not blocks:
            raise PreconditionError("a partition needs at least one block")
        if any(not b for b in blocks):
            raise PreconditionError("partition blocks must be nonempty")
        elems = [x for b in blocks for x in b]
        if sorted(elems) != list(range(1, len(elems) + 1)):
            raise PreconditionError(f"blocks {blocks} do not partition (1..{len(elems)})")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def canonical(cls, sizes):
        """P_1 = {1..r_1}, P_2 = {r_1+1..r_1+r_2}, ..."""
        blocks, start = [], 1
        for r in sizes:
            r = int(r)
            if r <= 0:
                raise PreconditionError("block sizes must be positive")
            blocks.append(tuple(range(start, start + r)))
            start += r
        return cls(tuple(blocks))

    @classmethod
    def singletons(cls, n):
        return cls(tuple((i,) for i in range(1, n + 1)))

    @classmethod
    def parse(cls, text):
        """Parse the ``"1,2|3,4"`` syntax."""
        try:
            blocks = [tuple(int(x) for x in part.split(",")) for part in text.split("|")]
        except ValueError:
            raise PreconditionError(f"malformed partition {text!r}") from None
        return cls(tuple(blocks))

    @property
    def sizes(self):
        return tuple(len(b) for b in self.blocks)

    @property
    def n(self):
        return sum(self.sizes)

    @property
    def k(self):
        return len(self.blocks)

    def block_of(self, x):
        """1-based index of the block containing ``x``."""
        for i, b in enumerate(self.blocks, 1):
            if x in b:
                return i
        raise PreconditionError(f"{x} is not covered by the partition")

    def labels(self):
        """0-based block label of every element 1..n, as a list."""
        out = [0] * self.n
        for i, b in enumerate(self.blocks):
            for x in b:
                out[x - 1] = i
        return out

    def __str__(self):
        return "|".join(",".join(map(str, b)) for b in self.blocks)


@dataclass(frozen=True)
class PairSet:
    """A set S of 1-based pairs inside (k) x (k)."""

    k: int
    pairs: frozenset

    def __post_init__(self):
        pairs = frozenset((int(i), int(j)) for i, j in self.pairs)
        for i, j in pairs:
            if not (1 <= i <= self.k and 1 <= j <= self.k):
                raise PreconditionError(f"pair {(i, j)} outside ({self.k})x({self.k})")
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def full(cls, k):
        return cls(k, frozenset(itertools.product(range(1, k + 1), repeat=2)))

    @classmethod
    def empty(cls, k):
        return cls(k, frozenset())

    def __contains__(self, pair):
        return tuple(pair) in self.pairs

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(sorted(self.pairs))

    def blow_up(self, sigma):
        """S' = union of P_i x P_j over (i, j) in S."""
        if sigma.k != self.k:
            raise PreconditionError("partition and pair set disagree on k")
        out = set()
        for i, j in self.pairs:
            out.update(itertools.product(sigma.blocks[i - 1], sigma.blocks[j - 1]))
        return PairSet(sigma.n, frozenset(out))


def quotient(M, axis, sigma):
    """M o_axis sigma: sum entries over the blocks of ``sigma`` along ``axis``."""
    if not 1 <= axis <= M.ndim:
        raise PreconditionError(f"axis {axis} invalid for a {M.ndim}-indexed matrix")
    if sigma.n != M.dims[axis - 1]:
        raise PreconditionError(
            f"partition of ({sigma.n}) does not match axis {axis} of length {M.dims[axis - 1]}"
        )
    ax = axis - 1
    parts = [M.array.take([x - 1 for x in b], axis=ax).sum(axis=ax) for b in sigma.blocks]
    return type(M)._wrap(np.stack(parts, axis=ax))


def triple_quotient(M, sigma):
    """((M o_1 sigma) o_2 sigma) o_3 sigma for a cubic 3-indexed M."""
    if M.ndim != 3 or len(set(M.dims)) != 1:
        raise PreconditionError("triple_quotient needs a cubic 3-indexed matrix")
    for axis in (1, 2, 3):
        M = quotient(M, axis, sigma)
    return M


def _require_cubic(M):
    if M.ndim != 3 or len(set(M.dims)) != 1:
        raise PreconditionError(f"expected a cubic 3-indexed matrix, got dims {M.dims}")
    return M.dims[0]


def is_latin(M):
    """True iff every one of the 3n^2 line sums equals 1."""
    _require_cubic(M)
    return all(bool(np.all(line_sums(M, t) == 1)) for t in (1, 2, 3))


def is_partial_s_latin(M, S):
    """Line sums all <= 1, and vertical sums exactly 1 over ``S``."""
    n = _require_cubic(M)
    if S.k != n:
        raise PreconditionError(f"pair set over ({S.k}) used with a matrix of side {n}")
    if not all(bool(np.all(line_sums(M, t) <= 1)) for t in (1, 2, 3)):
        return False
    vert = line_sums(M, 3)
    return all(vert[i - 1, j - 1] == 1 for i, j in S.pairs)


def is_permutation(M):
    """True iff the square 2-indexed ``M`` has all 2n line sums equal to 1."""
    if M.ndim != 2 or M.dims[0] != M.dims[1]:
        raise PreconditionError("is_permutation needs a square 2-indexed matrix")
    return bool(np.all(line_sums(M, 1) == 1) and np.all(line_sums(M, 2) == 1))


def latin_from_table(table):
    """Graph of a quasigroup given as a 1-based table: M(i, j, table[i][j]) = 1."""
    n = len(table)
    arr = np.zeros((n, n, n), dtype=object)
    for i, row in enumerate(table):
        if len(row) != n:
            raise PreconditionError("quasigroup table must be square")
        for j, v in enumerate(row):
            if not 1 <= v <= n:
                raise PreconditionError(f"table entry {v} outside (1..{n})")
            arr[i, j, v - 1] += 1
    return Matrix3(arr)


def enumerate_latin_squares(n):
    """All Latin squares of order ``n`` as 1-based tables, in lexicographic order."""
    rows: list = []
    used_col = [set() for _ in range(n)]
    perms = list(itertools.permutations(range(1, n + 1)))

    def extend():
        if len(rows) == n:
            yield [list(r) for r in rows]
            return
        for p in perms:
            if all(p[j] not in used_col[j] for j in range(n)):
                rows.append(p)
                for j in range(n):
                    used_col[j].add(p[j])
                yield from extend()
                for j in range(n):
                    used_col[j].discard(p[j])
                rows.pop()

    yield from extend()


def random_latin_square(n, rng=None):
    """A random Latin square of order ``n`` as a 1-based table.

    Rows are added one at a time as random perfect matchings between columns
    and the symbols still missing from each column; a Latin rectangle always
    extends, so this never gets stuck.
    """
    rng = rng if rng is not None else random.Random()
    missing = [set(range(1, n + 1)) for _ in range(n)]
    table = []
    for _ in range(n):
        col_of = {}

        def assign(j, seen):
            cands = list(missing[j])
            rng.shuffle(cands)
            for s in cands:
                if s in seen:
                    continue
                seen.add(s)
                if s not in col_of or assign(col_of[s], seen):
                    col_of[s] = j
                    return True
            return False

        order = list(range(n))
        rng.shuffle(order)
        for j in order:
            if not assign(j, set()):  # pragma: no cover - Hall guarantees success
                raise RuntimeError("latin rectangle failed to extend")
        row = [0] * n
        for s, j in col_of.items():
            row[j] = s
            missing[j].discard(s)
        table.append(row)
    return table
