"""Exact Walsh transforms over Z[omega] and the spectral n-to-1 test.

Everything here is integer or rational arithmetic: the verdict is an exact
equality against 1 or 0, so floating point has no place.  omega is a
primitive p-th root of unity; Z[omega] elements are stored reduced, with
the omega^{p-1} coordinate eliminated through 1 + omega + ... + omega^{p-1} = 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import DegreeTooHigh, DomainTooLarge, ZeroInput
from .fields import Field
from .polys import LinearizedPoly, Poly

_WALSH_DOMAIN_CAP = 2 ** 12
_CHAR_SUM_J_CAP = 3
_PHI_J_CAP = 8
_PHI_DEN_CAP = 2 ** 31


def _reduce(coeffs: list[int], p: int) -> tuple:
    last = coeffs[p - 1]
    if last:
        coeffs = [c - last for c in coeffs]
        coeffs[p - 1] = 0
    return tuple(int(c) for c in coeffs)


class CycloInt:
    """Z[omega] value as p integer coordinates on 1, omega, ..., omega^{p-1},
    kept in reduced form (last coordinate zero)."""

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs):
        coeffs = list(coeffs)
        if len(coeffs) != p:
            raise ZeroInput(f"need {p} coordinates, got {len(coeffs)}")
        self.p = p
        self.coeffs = _reduce(coeffs, p)

    @classmethod
    def from_int(cls, p: int, n: int) -> "CycloInt":
        return cls(p, [n] + [0] * (p - 1))

    @classmethod
    def root_power(cls, p: int, k: int) -> "CycloInt":
        e = [0] * p
        e[k % p] = 1
        return cls(p, e)

    def _check(self, other: "CycloInt"):
        if self.p != other.p:
            raise ZeroInput("mixed cyclotomic orders")

    def __add__(self, other: "CycloInt") -> "CycloInt":
        self._check(other)
        return CycloInt(self.p, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "CycloInt") -> "CycloInt":
        self._check(other)
        return CycloInt(self.p, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "CycloInt":
        return CycloInt(self.p, [-a for a in self.coeffs])

    def __mul__(self, other: "CycloInt") -> "CycloInt":
        self._check(other)
        p = self.p
        out = [0] * p
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[(i + j) % p] += a * b
        return CycloInt(p, out)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def as_int(self) -> int:
        if not self.is_rational():
            raise ZeroInput(f"{self!r} is not a rational integer")
        return self.coeffs[0]

    def __eq__(self, other):
        if isinstance(other, int):
            return self.is_rational() and self.coeffs[0] == other
        return isinstance(other, CycloInt) and self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def __repr__(self):
        return f"CycloInt(p={self.p}, {list(self.coeffs)})"


@dataclass(frozen=True)
class PhiGadget:
    """Rational polynomial phi whose value pattern on fiber sizes encodes the
    n-to-1 verdict: sum_j A_j p^{m-jm} S_j equals 1 (nondivisor mode) or 0
    (divisor mode) exactly when the map is n-to-1."""

    coeffs: tuple  # Fractions A_0..A_J
    mode: str  # "nondivisor" | "divisor"
    n: int
    p: int
    m: int
    k: Optional[int] = None

    @property
    def bound(self) -> Fraction:
        return Fraction(1) if self.mode == "nondivisor" else Fraction(0)

    @property
    def order(self) -> int:
        return self.p ** self.m


def phi_two(p: int, m: int) -> PhiGadget:
    """X(X-2)^2, the 2-to-1 pattern for odd q."""
    if p == 2:
        raise ZeroInput("nondivisor mode needs n=2 coprime to q")
    return PhiGadget(coeffs=(Fraction(0), Fraction(4), Fraction(-4), Fraction(1)), mode="nondivisor", n=2, p=p, m=m)


def phi_prime_power(p: int, m: int, k: int = 1) -> PhiGadget:
    """X(X-p^k)^2, the p^k-to-1 pattern when p^k divides q."""
    if not 1 <= k <= m:
        raise ZeroInput(f"need 1 <= k <= m, got k={k}")
    pk = p ** k
    return PhiGadget(coeffs=(Fraction(0), Fraction(pk * pk), Fraction(-2 * pk), Fraction(1)), mode="divisor", n=pk, p=p, m=m, k=k)


def validate_phi(g: PhiGadget):
    """Evaluate phi over every integer in [0, p^m] and check the mode's exact
    pattern.  Returns (ok, violating_X)."""
    if len(g.coeffs) - 1 > _PHI_J_CAP:
        return False, None
    if any(Fraction(c).denominator > _PHI_DEN_CAP for c in g.coeffs):
        return False, None
    q = g.order

    def phi(x: int) -> Fraction:
        acc = Fraction(0)
        for a in reversed(g.coeffs):
            acc = acc * x + a
        return acc

    if g.mode == "nondivisor":
        if q % g.n == 0:
            return False, None
        t = q % g.n
        zeros = {0, g.n}
        for X in range(q + 1):
            v = phi(X)
            if X in zeros:
                if v != 0:
                    return False, X
            elif X == t:
                if v != 1:
                    return False, X
            elif v <= 1:
                return False, X
    else:
        pk = g.p ** g.k if g.k else g.n
        zeros = {0, pk}
        for X in range(q + 1):
            v = phi(X)
            if X in zeros:
                if v != 0:
                    return False, X
            elif v <= 0:
                return False, X
    return True, None


def _value_table(f, ctx: Optional[Field]):
    if isinstance(f, (Poly, LinearizedPoly)):
        return f.ctx, f.eval_all()
    if isinstance(f, np.ndarray):
        if ctx is None:
            raise ZeroInput("a raw value table needs its Field")
        return ctx, f
    raise TypeError(f"unsupported map object {type(f)!r}")


def walsh(f, u: int, v: int, ctx: Optional[Field] = None) -> CycloInt:
    """W_F(u, v) = sum_x omega^{tr(v f(x)) + tr(u x)}, exact in Z[omega]."""
    ctx, values = _value_table(f, ctx)
    if ctx.order > _WALSH_DOMAIN_CAP:
        raise DomainTooLarge(f"field order {ctx.order} exceeds 2^12")
    tr = ctx.trace_to_prime_table()
    xs = ctx.elements_array()
    expo = (tr[ctx.scalar_mul_vec(v, values)] + tr[ctx.scalar_mul_vec(u, xs)]) % ctx.p
    counts = np.bincount(expo, minlength=ctx.p)
    return CycloInt(ctx.p, counts.tolist())


def walsh_zero_table(f, ctx: Optional[Field] = None) -> np.ndarray:
    """All W_F(0, v) at once, as a (q, p) integer matrix of unreduced
    root-of-unity counts (row v = multiplicities of omega^0..omega^{p-1})."""
    ctx, values = _value_table(f, ctx)
    if ctx.order > _WALSH_DOMAIN_CAP:
        raise DomainTooLarge(f"field order {ctx.order} exceeds 2^12")
    q, p = ctx.order, ctx.p
    tr = ctx.trace_to_prime_table()
    out = np.zeros((q, p), dtype=np.int64)
    for v in range(q):
        expo = tr[ctx.scalar_mul_vec(v, values)]
        out[v] = np.bincount(expo, minlength=p)
    return out


def _cyclic_rows(row: np.ndarray, mat: np.ndarray, p: int) -> np.ndarray:
    """row (*) each row of mat, cyclic convolution mod X^p - 1."""
    out = np.zeros_like(mat)
    for i in range(p):
        a = int(row[i])
        if a:
            out += a * np.roll(mat, i, axis=1)
    return out


def additive_convolution(ctx: Field, U: np.ndarray, T: np.ndarray) -> np.ndarray:
    """R[w] = sum_{v1 + v2 = w} U[v1] * T[v2], the additive-group convolution
    with Z[X]/(X^p - 1) multiplication along rows."""
    q, p = T.shape
    R = np.zeros_like(T)
    xs = ctx.elements_array()
    for v in range(q):
        if not U[v].any():
            continue
        w_idx = ctx.add_vec(np.int64(v), xs)
        R[w_idx] += _cyclic_rows(U[v], T, p)
    return R


def char_sum(f, gadget: PhiGadget, ctx: Optional[Field] = None) -> Fraction:
    """The exact characterization value A_0 + sum_j A_j p^{m-jm} S_j, where
    S_j is the j-fold additive-convolution power of v -> W_F(0, v) at v = 0."""
    ctx, values = _value_table(f, ctx)
    J = len(gadget.coeffs) - 1
    if J > _CHAR_SUM_J_CAP:
        raise DegreeTooHigh(f"char_sum supports degree <= {_CHAR_SUM_J_CAP}, got {J}")
    if gadget.p != ctx.p or gadget.m != ctx.m:
        raise ZeroInput("gadget was built for a different field")
    T = walsh_zero_table(values, ctx)
    p, m = ctx.p, ctx.m
    total = Fraction(gadget.coeffs[0])
    U = T
    for j in range(1, J + 1):
        if j > 1:
            U = additive_convolution(ctx, U, T)
        s_j = CycloInt(p, U[0].tolist())
        assert s_j.is_rational(), "constrained Walsh power sum must be a rational integer"
        total += Fraction(gadget.coeffs[j]) * Fraction(p) ** (m - j * m) * s_j.as_int()
    return total


def spectral_verdict(f, gadget: PhiGadget, ctx: Optional[Field] = None) -> bool:
    """True iff the characterization sum sits exactly at the mode's bound,
    which holds iff f is gadget.n-to-1."""
    return char_sum(f, gadget, ctx) == gadget.bound
