"""Closed-form 3-to-1 classifiers for cubics, and the quartic search.

The cubic criteria are exact characterizations; the quartic nonexistence
is verified the way it was found, by exhaustive machine search (sampled
above q = 49 to keep runtimes bounded).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .counting import is_n_to_1
from .errors import DomainTooLarge, WrongCharacteristic
from .fields import Field
from .polys import Poly

_EXHAUSTIVE_Q_CAP = 49  # q^4 evaluations stay under 10^7
_SEARCH_Q_CAP = 343
_SAMPLE_COUNT = 10 ** 5


def cubic_char3_is3to1(ctx: Field, a: int, b: int) -> bool:
    """x^3 + a x^2 + b x over GF(3^m) is 3-to-1 iff a = 0 and -b is a
    nonzero square."""
    if ctx.p != 3:
        raise WrongCharacteristic(f"expected characteristic 3, got {ctx.p}")
    a = ctx.check(a)
    b = ctx.check(b)
    if a != 0 or b == 0:
        return False
    return ctx.power_class(ctx.neg(b), 2) == 0


def cubic_charne3_is3to1(ctx: Field, b: int) -> bool:
    """x^3 + b x over GF(p^m), p != 3, is 3-to-1 iff b = 0 and either
    p = 2 with m even, or p > 3 with 3 | p^m - 1."""
    if ctx.p == 3:
        raise WrongCharacteristic("characteristic 3 has its own criterion")
    if ctx.check(b) != 0:
        return False
    if ctx.p == 2:
        return ctx.m % 2 == 0
    return (ctx.order - 1) % 3 == 0


def cubic_poly(ctx: Field, a: int, b: int) -> Poly:
    return Poly(ctx, [(3, 1), (2, a), (1, b)])


@dataclass(frozen=True)
class QuarticSearch:
    hits: tuple  # (a, b, c) triples whose quartic is 3-to-1
    exhaustive: bool
    tried: int


def _rows_are_3to1(counts: np.ndarray, q: int) -> np.ndarray:
    """Row-wise definition check at n = 3 on a (rows, q) fiber-count matrix."""
    t = q % 3
    regular = (counts == 0) | (counts == 3)
    if t == 0:
        return regular.all(axis=1)
    exceptional = counts == t
    return (regular | exceptional).all(axis=1) & (exceptional.sum(axis=1) == 1)


def quartic_3to1_search(ctx: Field, seed: int = 0) -> QuarticSearch:
    """All (a, b, c) with x^4 + a x^3 + b x^2 + c x 3-to-1 over GF(q).

    Exhaustive over the q^3 coefficient space for q <= 49; above that a
    seeded random sample of 10^5 triples is classified instead and the
    result is flagged non-exhaustive.
    """
    q = ctx.order
    if q > _SEARCH_Q_CAP:
        raise DomainTooLarge(f"quartic search gated at q <= {_SEARCH_Q_CAP}")
    xs = ctx.elements_array()
    x2 = ctx.pow_vec(xs, 2)
    x3 = ctx.pow_vec(xs, 3)
    x4 = ctx.pow_vec(xs, 4)
    cs = ctx.elements_array()
    # value matrix of c*x for every c at once
    cx = ctx.mul_vec(cs[:, None], xs[None, :])
    hits = []
    if q <= _EXHAUSTIVE_Q_CAP:
        for a in range(q):
            ax3 = ctx.scalar_mul_vec(a, x3)
            for b in range(q):
                base = ctx.add_vec(ctx.add_vec(x4, ax3), ctx.scalar_mul_vec(b, x2))
                vals = ctx.add_vec(base[None, :], cx)
                flat = vals + q * cs[:, None]
                counts = np.bincount(flat.ravel(), minlength=q * q).reshape(q, q)
                for c in np.nonzero(_rows_are_3to1(counts, q))[0]:
                    hits.append((a, b, int(c)))
        return QuarticSearch(hits=tuple(hits), exhaustive=True, tried=q ** 3)
    rng = np.random.default_rng(seed)
    triples = rng.integers(0, q, size=(_SAMPLE_COUNT, 3))
    for a, b, c in triples:
        vals = ctx.add_vec(
            ctx.add_vec(x4, ctx.scalar_mul_vec(int(a), x3)),
            ctx.add_vec(ctx.scalar_mul_vec(int(b), x2), ctx.scalar_mul_vec(int(c), xs)),
        )
        if is_n_to_1(vals, None, 3):
            hits.append((int(a), int(b), int(c)))
    return QuarticSearch(hits=tuple(hits), exhaustive=False, tried=_SAMPLE_COUNT)
