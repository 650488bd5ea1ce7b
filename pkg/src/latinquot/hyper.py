"""Sets of triples as line hypergraphs.

A support set H in (k)^3 is read as a hypergraph whose vertices are the
triples and whose edges are the traces of lines.  This module computes

* ``rho``: the fewest lines covering H,
* ``alpha_bar``: the largest subset of H meeting each line at most once,
* ``alpha_star``: the LP relaxation of ``alpha_bar``,

together with weak and strong quotients and searches that re-derive the two
small witnesses (a line-sum-2 cube without a Latin square inside its support,
and a generalized quotient quasigroup that is not uniform).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _kernels
from .errors import InvariantError, PreconditionError
from .margin import MarginVector
from .ratlp import OPTIMAL, LinearProgram, solve
from .tensor import Matrix3, PairSet, Partition, enumerate_latin_squares, latin_from_table

__all__ = [
    "SupportSet",
    "HyperNumbers",
    "weak_quotient",
    "strong_quotient",
    "restrict",
    "rho",
    "alpha_bar",
    "alpha_star",
    "hyper_numbers",
    "contains_s_quasigroup",
    "contains_s_guqpq",
    "find_statement_a_counterexample",
    "find_gqq_not_guqq",
]


@dataclass(frozen=True)
class SupportSet:
    """A set of 1-based triples inside (k)^3."""

    k: int
    triples: frozenset

    def __post_init__(self):
        triples = frozenset(tuple(int(x) for x in t) for t in self.triples)
        for t in triples:
            if len(t) != 3 or not all(1 <= x <= self.k for x in t):
                raise PreconditionError(f"triple {t} outside ({self.k})^3")
        object.__setattr__(self, "triples", triples)

    @classmethod
    def of(cls, M):
        """supp(M) of a cubic matrix."""
        if M.ndim != 3 or len(set(M.dims)) != 1:
            raise PreconditionError("support sets come from cubic 3-indexed matrices")
        return cls(M.dims[0], M.support())

    @classmethod
    def full(cls, k):
        return cls(k, frozenset(itertools.product(range(1, k + 1), repeat=3)))

    def __len__(self):
        return len(self.triples)

    def __iter__(self):
        return iter(sorted(self.triples))

    def __contains__(self, t):
        return tuple(t) in self.triples

    def indicator(self):
        return Matrix3.indicator(self.k, self.triples)

    def cells(self):
        """Sorted 0-based ``(m, 3)`` int64 array for the kernels."""
        if not self.triples:
            return np.zeros((0, 3), dtype=np.int64)
        return np.array(sorted(self.triples), dtype=np.int64) - 1


@dataclass(frozen=True)
class HyperNumbers:
    rho: int
    alpha_bar: int
    alpha_star: Fraction


def _quotient_sets(X, sigma):
    if isinstance(X, SupportSet):
        ground, elems, arity = X.k, X.triples, 3
    elif isinstance(X, PairSet):
        ground, elems, arity = X.k, X.pairs, 2
    else:
        raise PreconditionError("quotients apply to a SupportSet or a PairSet")
    if sigma.n != ground:
        raise PreconditionError(f"partition of ({sigma.n}) used on a set over ({ground})")
    labels = sigma.labels()
    hits = {}
    for t in elems:
        key = tuple(labels[x - 1] + 1 for x in t)
        hits[key] = hits.get(key, 0) + 1
    sizes = sigma.sizes
    strong = {key for key, c in hits.items() if c == np.prod([sizes[i - 1] for i in key])}
    build = (lambda s: SupportSet(sigma.k, s)) if arity == 3 else (lambda s: PairSet(sigma.k, s))
    return build(frozenset(hits)), build(frozenset(strong))


def weak_quotient(X, sigma):
    """Block-index tuples whose block product meets X."""
    return _quotient_sets(X, sigma)[0]


def strong_quotient(X, sigma):
    """Block-index tuples whose block product lies inside X."""
    return _quotient_sets(X, sigma)[1]


def restrict(H, S):
    """H intersected with S x (k)."""
    if S.k != H.k:
        raise PreconditionError("pair set and support set disagree on k")
    return SupportSet(H.k, frozenset(t for t in H.triples if t[:2] in S.pairs))


def rho(H):
    """Covering number: the fewest lines whose union contains H."""
    return int(_kernels.min_line_cover(H.cells(), H.k))


def alpha_bar(H):
    """Independence number: the largest X in H with |X & l| <= 1 for every line."""
    return int(_kernels.max_independent(H.cells(), H.k))


def _line_lp(H):
    cells = sorted(H.triples)
    lp = LinearProgram(len(cells), objective=[1] * len(cells))
    for t in (1, 2, 3):
        groups = {}
        for v, c in enumerate(cells):
            groups.setdefault(c[:t - 1] + c[t:], []).append(v)
        for _, vs in sorted(groups.items()):
            lp.add({v: 1 for v in vs}, "<=", 1)
    return lp


def alpha_star(H):
    """Fractional independence number, exact."""
    if not H.triples:
        return Fraction(0)
    sol = solve(_line_lp(H))
    if sol.status != OPTIMAL:
        raise InvariantError(f"alpha* LP ended {sol.status}")
    return sol.objective


def hyper_numbers(H):
    return HyperNumbers(rho(H), alpha_bar(H), alpha_star(H))


def contains_s_quasigroup(H, S):
    """H contains the graph of a partial S-quasigroup."""
    return alpha_bar(restrict(H, S)) == len(S)


def contains_s_guqpq(H, S):
    """H contains a uniform generalized quotient of a partial S-quasigroup."""
    return alpha_star(restrict(H, S)) == len(S)


@lru_cache(maxsize=None)
def _latin_patterns(k):
    return np.array(
        [np.array(latin_from_table(t).tolist(), dtype=np.uint8) for t in enumerate_latin_squares(k)]
    )


def _cube(row, k):
    return Matrix3(np.asarray(row, dtype=np.int64).reshape(k, k, k).tolist())


def find_statement_a_counterexample(k=3, line_sum=2):
    """First cube (lexicographic) with every line sum ``line_sum`` whose support
    contains no Latin square of order ``k``."""
    t = np.full((k, k), line_sum, dtype=np.int64)
    found = _kernels.enumerate_cubes(t, t, t, line_sum, _latin_patterns(k), 1)
    if len(found) == 0:
        raise InvariantError("no cube with equal line sums avoids every Latin square")
    return _cube(found[0], k)


def find_gqq_not_guqq(r=(1, 2, 2)):
    """First (H, M, r) with M a Hilton quotient for ``r`` and alpha*(H) < k^2.

    Cubes whose support already contains a Latin square are skipped in the
    kernel, since such supports have alpha* = k^2.
    """
    r = MarginVector(r)
    k = len(r)
    t = np.array([[a * b for b in r] for a in r], dtype=np.int64)
    cands = _kernels.enumerate_cubes(t, t, t, int(t.max()), _latin_patterns(k), 1 << 20)
    seen = {}
    for row in cands:
        M = _cube(row, k)
        H = SupportSet.of(M)
        if H not in seen:
            seen[H] = alpha_star(H)
        if seen[H] < k * k:
            return H, M, r
    raise InvariantError(f"every Hilton quotient for r={tuple(r)} has alpha* = {k * k}")
