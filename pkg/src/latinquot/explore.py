"""Falsification harness for the two covering-number conjectures.

For a support H and pair set S, "H contains an S-GQPQ" means: for some
positive block sizes r there is M in T(k,k,k) with supp(M) inside H,
M(l) <= r_i r_j on every line and M(l^3_ij) = r_i r_j on S.  Entries off
S x (k) can always be dropped, so only H & (S x (k)) matters.

The conjectures compare this with rho(H & (S x (k))) = |S|.  Containment is
decided exactly for each fixed r (LP relaxation plus branch and bound), but
the search over r stops at ``r_max``; a missing witness is therefore only a
*candidate* counterexample to the second conjecture.
"""

from __future__ import annotations

import itertools
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import PreconditionError
from .hyper import SupportSet, restrict, rho
from .margin import MarginVector
from .ratlp import OPTIMAL, LinearProgram, solve
from .tensor import Matrix3, PairSet

__all__ = [
    "ConjectureReport",
    "gqpq_witness",
    "contains_s_gqpq",
    "bounded_witness",
    "contains_s_gqpq_bounded",
    "check_instance",
    "test_conjectures",
    "encode_support",
    "encode_pairs",
    "reverify",
]

CONSISTENT = "consistent-within-bounds"
FOUND = "counterexample-found"


def _gqpq_lp(R, S, r):
    cells = sorted(R.triples)
    lp = LinearProgram(len(cells))
    for t in (1, 2, 3):
        groups = {}
        for v, c in enumerate(cells):
            groups.setdefault(c[:t - 1] + c[t:], []).append(v)
        for key, vs in sorted(groups.items()):
            bound = r[key[0] - 1] * r[key[1] - 1]
            lp.add({v: 1 for v in vs}, "=" if t == 3 else "<=", bound)
    return cells, lp


def _branch_and_bound(lp):
    stack = [[]]
    while stack:
        extra = stack.pop()
        trial = LinearProgram(lp.num_vars, constraints=lp.constraints + extra)
        sol = solve(trial)
        if sol.status != OPTIMAL:
            continue
        frac = next((i for i, v in enumerate(sol.values) if v.denominator != 1), None)
        if frac is None:
            return [int(v) for v in sol.values]
        v = sol.values[frac]
        up = Fraction(math.ceil(v))
        down = Fraction(math.floor(v))
        stack.append(extra + [({frac: 1}, ">=", up)])
        stack.append(extra + [({frac: 1}, "<=", down)])
    return None


def gqpq_witness(H, S, r) -> Optional[Matrix3]:
    """An integer M certifying an S-GQPQ inside H for block sizes r, or None."""
    r = MarginVector(r)
    k = H.k
    if len(r) != k or any(v <= 0 for v in r):
        raise PreconditionError(f"need {k} positive block sizes, got {tuple(r)}")
    R = restrict(H, S)
    covered = {t[:2] for t in R.triples}
    if any(p not in covered for p in S.pairs):
        return None
    cells, lp = _gqpq_lp(R, S, r)
    x = _branch_and_bound(lp) if cells else []
    if x is None:
        return None
    arr = np.zeros((k, k, k), dtype=object)
    for c, v in zip(cells, x):
        arr[c[0] - 1, c[1] - 1, c[2] - 1] = v
    return Matrix3(arr)


def contains_s_gqpq(H, S, r):
    """Decide containment of an S-GQPQ for the fixed block sizes ``r``."""
    return gqpq_witness(H, S, r) is not None


def bounded_witness(H, S, r_max):
    """First r (lexicographic, 1 <= r_i <= r_max) admitting a witness, with it."""
    if r_max < 1:
        raise PreconditionError("r_max must be at least 1")
    for r in itertools.product(range(1, r_max + 1), repeat=H.k):
        M = gqpq_witness(H, S, r)
        if M is not None:
            return r, M
    return None


def contains_s_gqpq_bounded(H, S, r_max):
    """Containment over all r with entries in 1..r_max (sound, not complete)."""
    return bounded_witness(H, S, r_max) is not None


def encode_support(H):
    """Bitmask of H over triples in lexicographic order."""
    k = H.k
    return sum(1 << (((a - 1) * k + (b - 1)) * k + (c - 1)) for a, b, c in H.triples)


def encode_pairs(S):
    return sum(1 << ((i - 1) * S.k + (j - 1)) for i, j in S.pairs)


def _decode_support(k, mask):
    cells = itertools.product(range(1, k + 1), repeat=3)
    return SupportSet(k, frozenset(c for i, c in enumerate(cells) if mask >> i & 1))


def _decode_pairs(k, mask):
    cells = itertools.product(range(1, k + 1), repeat=2)
    return PairSet(k, frozenset(c for i, c in enumerate(cells) if mask >> i & 1))


@dataclass
class ConjectureReport:
    instances_checked: int
    counterexamples: list
    candidates: list
    k: int
    r_max: int
    policy: str
    seed: Optional[int] = None
    samples: Optional[int] = None
    tally: dict = field(default_factory=dict)

    @property
    def verdict(self):
        return FOUND if self.counterexamples else CONSISTENT

    def to_dict(self):
        return {
            "instances_checked": self.instances_checked,
            "verdict": self.verdict,
            "bounds": {"k": self.k, "r_max": self.r_max},
            "policy": self.policy,
            "seed": self.seed,
            "samples": self.samples,
            "tally": dict(sorted(self.tally.items())),
            "counterexamples": self.counterexamples,
            "candidates": self.candidates,
        }


def check_instance(H, S, r_max, cache=None):
    """Evaluate one (H, S) pair; returns a dict of the computed facts."""
    R = restrict(H, S)
    key = (encode_support(R), encode_pairs(S))
    if cache is not None and key in cache:
        rho_val, found = cache[key]
    else:
        rho_val = rho(R)
        found = bounded_witness(H, S, r_max)
        if cache is not None:
            cache[key] = (rho_val, found)
    return {
        "H": encode_support(H),
        "S": encode_pairs(S),
        "rho": rho_val,
        "size_S": len(S),
        "contains": found is not None,
        "r": list(found[0]) if found else None,
        "witness": found[1].tolist() if found else None,
    }


def _classify(fact):
    if fact["contains"] and fact["rho"] != fact["size_S"]:
        return "conjecture1"
    if not fact["contains"] and fact["rho"] == fact["size_S"]:
        return "conjecture2-candidate"
    return None


def _instances(k, policy, samples, seed):
    if policy == "exhaustive":
        for hm in range(1 << (k ** 3)):
            for sm in range(1 << (k * k)):
                yield hm, sm
        return
    rng = random.Random(seed)
    seen = set()
    total = 0
    while total < samples:
        hm = rng.getrandbits(k ** 3)
        sm = rng.getrandbits(k * k)
        if (hm, sm) in seen:
            continue
        seen.add((hm, sm))
        total += 1
        yield hm, sm


def _run_chunk(args):
    k, r_max, pairs = args
    cache = {}
    return [check_instance(_decode_support(k, hm), _decode_pairs(k, sm), r_max, cache) for hm, sm in pairs]


def test_conjectures(k, r_max, policy=None, samples=200, seed=0, threads=1):
    """Run both conjecture checks over an enumeration of (H, S) pairs.

    ``policy`` is ``"exhaustive"`` (default for k <= 2) or ``"sample"``
    (default for k >= 3), which draws ``samples`` distinct pairs with
    ``random.Random(seed)``.
    """
    if k < 1 or r_max < 1:
        raise PreconditionError("k and r_max must be positive")
    policy = policy or ("exhaustive" if k <= 2 else "sample")
    if policy not in ("exhaustive", "sample"):
        raise PreconditionError(f"unknown policy {policy!r}")
    if policy == "exhaustive" and k > 2:
        raise PreconditionError("exhaustive enumeration is limited to k <= 2")
    pairs = sorted(_instances(k, policy, samples, seed))
    if threads > 1:
        size = max(1, len(pairs) // (threads * 4))
        chunks = [(k, r_max, pairs[i:i + size]) for i in range(0, len(pairs), size)]
        with ProcessPoolExecutor(threads) as pool:
            facts = [f for part in pool.map(_run_chunk, chunks) for f in part]
    else:
        facts = _run_chunk((k, r_max, pairs))
    facts.sort(key=lambda f: (f["H"], f["S"]))
    report = ConjectureReport(
        len(facts), [], [], k, r_max, policy,
        seed=seed if policy == "sample" else None,
        samples=samples if policy == "sample" else None,
    )
    for f in facts:
        tag = "contains" if f["contains"] else "no-witness"
        tag += "/rho=|S|" if f["rho"] == f["size_S"] else "/rho<|S|"
        report.tally[tag] = report.tally.get(tag, 0) + 1
        kind = _classify(f)
        if kind == "conjecture1":
            report.counterexamples.append(f)
        elif kind == "conjecture2-candidate":
            report.candidates.append(f)
    return report


def reverify(entry, k, r_max):
    """Recompute a reported instance from scratch; True iff it still violates."""
    H = _decode_support(k, entry["H"])
    S = _decode_pairs(k, entry["S"])
    fresh = check_instance(H, S, r_max)
    if _classify(fresh) != _classify(entry):
        return False
    if fresh["witness"] is not None:
        M = Matrix3(fresh["witness"])
        if not M.support() <= H.triples:
            return False
    return True


test_conjectures.__test__ = False  # keep pytest from collecting it
