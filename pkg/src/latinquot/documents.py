"""JSON documents exchanged by the command line tool.

Matrices serialize as ``{"dims": [...], "entries": [...], "rational": bool}``
with ``entries`` nested row-major lists (position 0 holds index 1).  Rational
entries are ``"p/q"`` strings so exactness survives the round trip.  Pair sets,
triples and partition blocks are written with their 1-based indices.
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction

from .errors import LatinQuotError, PreconditionError
from .hyper import SupportSet
from .lift import LiftResult
from .tensor import Matrix2, Matrix3, PairSet, Partition, RationalMatrix3

__all__ = [
    "MalformedDocument",
    "matrix_to_doc",
    "matrix_from_doc",
    "support_to_doc",
    "support_from_doc",
    "pairs_to_doc",
    "pairs_from_doc",
    "partition_to_doc",
    "partition_from_doc",
    "instance_to_doc",
    "instance_from_doc",
    "lift_to_doc",
    "lift_from_doc",
    "fraction_to_str",
    "load",
    "dumps",
]


class MalformedDocument(LatinQuotError):
    """The input is not a well-formed document of the expected kind."""


def fraction_to_str(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _parse_fraction(s):
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise MalformedDocument(f"rational entries must be 'p/q' strings, got {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise MalformedDocument(f"bad rational literal {s!r}") from None


def _require(doc, key, kind):
    if not isinstance(doc, dict) or key not in doc:
        raise MalformedDocument(f"{kind} document lacks {key!r}")
    return doc[key]


def _nested(entries, fn):
    if isinstance(entries, list):
        return [_nested(e, fn) for e in entries]
    return fn(entries)


def _shape(entries, depth):
    dims = []
    cur = entries
    for _ in range(depth):
        if not isinstance(cur, list) or not cur:
            raise MalformedDocument("entries do not match dims")
        dims.append(len(cur))
        cur = cur[0]
    return dims


def matrix_to_doc(M):
    rational = isinstance(M, RationalMatrix3)
    entries = M.tolist()
    if rational:
        entries = _nested(entries, fraction_to_str)
    return {"dims": list(M.dims), "entries": entries, "rational": rational}


def matrix_from_doc(doc):
    dims = _require(doc, "dims", "matrix")
    entries = _require(doc, "entries", "matrix")
    rational = doc.get("rational", False)
    if not isinstance(dims, list) or len(dims) not in (2, 3):
        raise MalformedDocument("dims must list 2 or 3 sizes")
    if not all(isinstance(d, int) and not isinstance(d, bool) and d > 0 for d in dims):
        raise MalformedDocument("dims must be positive integers")
    if _shape(entries, len(dims)) != dims:
        raise MalformedDocument(f"entries do not match dims {dims}")
    if rational:
        if len(dims) != 3:
            raise MalformedDocument("rational matrices are 3-indexed")
        entries = _nested(entries, _parse_fraction)
        cls = RationalMatrix3
    else:
        def as_int(v):
            if isinstance(v, bool) or not isinstance(v, int):
                raise MalformedDocument(f"integer entry expected, got {v!r}")
            return v
        entries = _nested(entries, as_int)
        cls = Matrix2 if len(dims) == 2 else Matrix3
    try:
        M = cls(entries)
    except PreconditionError as exc:
        raise MalformedDocument(str(exc)) from None
    if list(M.dims) != dims:
        raise MalformedDocument(f"entries do not match dims {dims}")
    return M


def _index_list(items, arity, kind):
    if not isinstance(items, list):
        raise MalformedDocument(f"{kind} must be a list")
    out = []
    for it in items:
        if (
            not isinstance(it, list)
            or len(it) != arity
            or not all(isinstance(x, int) and not isinstance(x, bool) for x in it)
        ):
            raise MalformedDocument(f"{kind} entries must be lists of {arity} integers")
        out.append(tuple(it))
    return out


def pairs_to_doc(S):
    return [list(p) for p in sorted(S.pairs)]


def pairs_from_doc(items, k):
    try:
        return PairSet(k, frozenset(_index_list(items, 2, "S")))
    except PreconditionError as exc:
        raise MalformedDocument(str(exc)) from None


def support_to_doc(H):
    return {"k": H.k, "triples": [list(t) for t in sorted(H.triples)]}


def support_from_doc(doc):
    """Read a support document, or take the support of a matrix document."""
    if isinstance(doc, dict) and "dims" in doc:
        M = matrix_from_doc(doc)
        if M.ndim != 3 or len(set(M.dims)) != 1:
            raise MalformedDocument("support matrices must be cubic")
        return SupportSet.of(M)
    k = _require(doc, "k", "support")
    if isinstance(k, bool) or not isinstance(k, int) or k <= 0:
        raise MalformedDocument("k must be a positive integer")
    try:
        return SupportSet(k, frozenset(_index_list(_require(doc, "triples", "support"), 3, "triples")))
    except PreconditionError as exc:
        raise MalformedDocument(str(exc)) from None


def partition_to_doc(sigma):
    return [list(b) for b in sigma.blocks]


def partition_from_doc(blocks):
    if not isinstance(blocks, list) or not all(isinstance(b, list) for b in blocks):
        raise MalformedDocument("partition must be a list of blocks")
    try:
        return Partition(tuple(tuple(b) for b in blocks))
    except (PreconditionError, TypeError, ValueError) as exc:
        raise MalformedDocument(f"bad partition: {exc}") from None


def instance_to_doc(M, r=None, S=None, beta=None):
    doc = {"matrix": matrix_to_doc(M)}
    if r is not None:
        doc["r"] = list(r)
    if S is not None:
        doc["S"] = pairs_to_doc(S)
    if beta is not None:
        doc["beta"] = fraction_to_str(beta)
    return doc


def instance_from_doc(doc):
    """Returns (matrix, r or None, S or None, beta or None)."""
    M = matrix_from_doc(_require(doc, "matrix", "instance"))
    k = M.dims[0]
    r = doc.get("r")
    if r is not None:
        if not isinstance(r, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in r):
            raise MalformedDocument("r must be a list of integers")
    S = pairs_from_doc(doc["S"], k) if "S" in doc else None
    beta = _parse_fraction(doc["beta"]) if "beta" in doc else None
    return M, r, S, beta


def lift_to_doc(res):
    return {
        "L": matrix_to_doc(res.L),
        "sigma": partition_to_doc(res.sigma),
        "S_prime": pairs_to_doc(res.S_prime),
    }


def lift_from_doc(doc):
    L = matrix_from_doc(_require(doc, "L", "lift"))
    if L.ndim != 3 or isinstance(L, RationalMatrix3):
        raise MalformedDocument("L must be a 3-indexed integer matrix")
    sigma = partition_from_doc(_require(doc, "sigma", "lift"))
    S_prime = pairs_from_doc(_require(doc, "S_prime", "lift"), sigma.n)
    return LiftResult(L, sigma, S_prime)


def load(path):
    """Parse JSON from a path ('-' for stdin)."""
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise MalformedDocument(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"invalid JSON in {path}: {exc.msg} at line {exc.lineno}") from None


def dumps(doc):
    return json.dumps(doc, separators=(",", ":"))
