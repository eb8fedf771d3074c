"""Ground-truth n-to-1 classification by brute force, plus closed-form oracles.

A map f on a finite domain A is n-to-1 when every value has n or 0
preimages, except that if n does not divide #A, exactly one value has
#A mod n preimages.  classify() finds the canonical such n (the common
nonzero fiber size); is_n_to_1() checks the definition at a given n,
which matters for degenerate maps that satisfy it for several n.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainTooLarge, ZeroInput
from .fields import Field
from .polys import LinearizedPoly, Poly

_DOMAIN_CAP = 2 ** 22


@dataclass(frozen=True)
class NTo1Report:
    n: int
    exception: Optional[tuple]  # (value, t) or None
    histogram: dict
    domain_size: int
    irregular: bool
    conflict: Optional[tuple] = None  # two smallest conflicting fiber sizes

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.n,
                "exception": list(self.exception) if self.exception else None,
                "domain_size": self.domain_size,
                "irregular": self.irregular,
            },
            sort_keys=True,
            separators=(",", ":"),
        )


def _values_of(f, domain):
    if isinstance(f, (Poly, LinearizedPoly)):
        if domain is None:
            return f.eval_all(), None
        vals = [f(x) for x in domain]
        return np.asarray(vals, dtype=np.int64), list(domain)
    if isinstance(f, np.ndarray):
        if domain is None:
            return f, None
        return f[np.asarray(list(domain))], list(domain)
    if isinstance(f, dict):
        dom = list(f.keys()) if domain is None else list(domain)
        return [f[x] for x in dom], dom
    if callable(f):
        if domain is None:
            raise ZeroInput("a callable map needs an explicit domain")
        dom = list(domain)
        return [f(x) for x in dom], dom
    raise TypeError(f"unsupported map object {type(f)!r}")


def histogram(f, domain=None) -> dict:
    """Exact value -> preimage-count table, single pass, codec order."""
    vals, _ = _values_of(f, domain)
    if isinstance(vals, np.ndarray) and vals.dtype.kind in "iu":
        if vals.size > _DOMAIN_CAP:
            raise DomainTooLarge(f"domain size {vals.size} exceeds 2^22")
        counts = np.bincount(vals)
        out = {int(v): int(c) for v, c in enumerate(counts) if c}
    else:
        if len(vals) > _DOMAIN_CAP:
            raise DomainTooLarge(f"domain size {len(vals)} exceeds 2^22")
        out = {}
        for v in vals:
            out[v] = out.get(v, 0) + 1
    total = sum(out.values())
    size = vals.size if isinstance(vals, np.ndarray) else len(vals)
    assert total == size, "histogram lost mass"
    return out


def merge_histograms(a: dict, b: dict) -> dict:
    """Associative merge for partitioned accumulation."""
    out = dict(a)
    for v, c in b.items():
        out[v] = out.get(v, 0) + c
    return out


def _decide(hist: dict, domain_size: int):
    """Core decision on a fiber-size multiset.

    Returns (n, exception, irregular, conflict); exception is (value, t)."""
    distinct = sorted(set(hist.values()))
    if len(distinct) == 1:
        return distinct[0], None, False, None
    if len(distinct) == 2:
        small, big = distinct
        small_values = [v for v, c in hist.items() if c == small]
        if len(small_values) == 1:
            assert domain_size % big == small, "exception count must be #A mod n"
            return big, (small_values[0], small), False, None
    return 0, None, True, (distinct[0], distinct[1])


def classify(f, domain=None) -> NTo1Report:
    """Find the canonical n fitting the definition, or report irregular."""
    hist = histogram(f, domain)
    if not hist:
        raise ZeroInput("empty domain")
    size = sum(hist.values())
    n, exc, irregular, conflict = _decide(hist, size)
    return NTo1Report(n=n, exception=exc, histogram=hist, domain_size=size, irregular=irregular, conflict=conflict)


def is_n_to_1(f, domain, n: int) -> bool:
    """Check the definition at a prescribed n (degenerate maps can pass for
    several n, so this is not the same as classify().n == n)."""
    if n < 1:
        return False
    hist = histogram(f, domain)
    size = sum(hist.values())
    counts = sorted(hist.values())
    if size % n == 0:
        return all(c == n for c in counts)
    t = size % n
    return counts.count(t) == 1 and all(c == n for c in counts if c != t)


def report_matches(report: NTo1Report, n: int) -> bool:
    """Does a classify() report certify n-to-1 at exactly this n, with the
    definition's exception pattern?"""
    if report.irregular:
        return False
    if report.n == n:
        if report.domain_size % n == 0:
            return report.exception is None
        return report.exception is not None and report.exception[1] == report.domain_size % n
    # degenerate fits (e.g. constant map on a small domain) are not certified here
    return False


# ----------------------------------------------------------------------
# Closed-form oracles the brute force must agree with.
# ----------------------------------------------------------------------

def monomial_oracle(ctx: Field, a: int, d: int) -> int:
    """a*x^d over GF(q) is n-to-1 with n = gcd(d, q-1); for n > 1 the value 0
    is the exception with a single preimage."""
    if ctx.check(a) == 0:
        raise ZeroInput("monomial coefficient must be nonzero")
    if d < 1:
        raise ZeroInput("exponent must be >= 1")
    return math.gcd(d, ctx.order - 1)


def linearized_oracle(L: LinearizedPoly) -> int:
    """A q-polynomial of rank k over GF(q^m) is q^{m-k}-to-1, no exception."""
    return L.q_sub ** (L.rel_degree - L.rank())
