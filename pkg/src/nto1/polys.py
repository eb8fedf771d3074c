"""Polynomials over a Field, both as coefficient data and as maps.

Sparse exponent-coefficient pairs are the canonical form, because the
construction families use exponents far above the field size (reduction
mod x^q - x is explicit, never silent).  A dense view exists for Horner
evaluation and for the shift/compose algebra on low-degree polynomials.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ConstantPolynomial, DegreeTooHigh, DegreeMismatch, SingularSystem
from .fields import Field

_COMPOSE_DEGREE_CAP = 64
_DENSE_CAP = 1 << 22


class Poly:
    """Polynomial over a Field; immutable."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: Field, terms):
        acc = {}
        for e, c in terms:
            e = int(e)
            if e < 0:
                raise DegreeMismatch(f"negative exponent {e}")
            c = ctx.check(c)
            if c == 0 and e not in acc:
                continue
            acc[e] = ctx.add(acc.get(e, 0), c)
        self.ctx = ctx
        self.terms = tuple(sorted((e, c) for e, c in acc.items() if c != 0))

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_dense(cls, ctx: Field, coeffs) -> "Poly":
        return cls(ctx, list(enumerate(coeffs)))

    @classmethod
    def zero(cls, ctx: Field) -> "Poly":
        return cls(ctx, [])

    @classmethod
    def constant(cls, ctx: Field, c: int) -> "Poly":
        return cls(ctx, [(0, c)])

    @classmethod
    def x(cls, ctx: Field) -> "Poly":
        return cls(ctx, [(1, 1)])

    @classmethod
    def monomial(cls, ctx: Field, c: int, e: int) -> "Poly":
        return cls(ctx, [(e, c)])

    # -- inspection ----------------------------------------------------------

    @property
    def degree(self) -> int:
        return self.terms[-1][0] if self.terms else -1

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, e: int) -> int:
        for te, tc in self.terms:
            if te == e:
                return tc
        return 0

    def dense(self) -> list[int]:
        d = self.degree
        if d >= _DENSE_CAP:
            raise DegreeTooHigh(f"degree {d} too large for a dense view")
        out = [0] * (d + 1)
        for e, c in self.terms:
            out[e] = c
        return out

    def term_pairs(self) -> list[list]:
        """Serialization form: [[exponent, coefficient array], ...]."""
        return [[e, list(self.ctx.coeffs(c))] for e, c in self.terms]

    @classmethod
    def from_term_pairs(cls, ctx: Field, pairs) -> "Poly":
        return cls(ctx, [(e, ctx.element(c) if isinstance(c, (list, tuple)) else c) for e, c in pairs])

    # -- evaluation ------------------------------------------------------------

    def __call__(self, x: int) -> int:
        """Term-wise powering; exact for any exponent size."""
        ctx = self.ctx
        x = ctx.check(x)
        acc = 0
        for e, c in self.terms:
            t = c if e == 0 else ctx.mul(c, ctx.pow(x, e))
            acc = ctx.add(acc, t)
        return acc

    def eval_horner(self, x: int) -> int:
        """Horner on the dense view; cross-check partner of __call__."""
        ctx = self.ctx
        acc = 0
        for c in reversed(self.dense()):
            acc = ctx.add(ctx.mul(acc, x), c)
        return acc

    def eval_all(self) -> np.ndarray:
        """Value table over the whole field, vectorized."""
        ctx = self.ctx
        xs = ctx.elements_array()
        out = np.zeros(ctx.order, dtype=np.int64)
        for e, c in self.terms:
            if e == 0:
                out = ctx.add_vec(out, np.full(ctx.order, c, dtype=np.int64))
            else:
                out = ctx.add_vec(out, ctx.scalar_mul_vec(c, ctx.pow_vec(xs, e)))
        return out

    # -- algebra ------------------------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        return Poly(self.ctx, list(self.terms) + list(other.terms))

    def __neg__(self) -> "Poly":
        return Poly(self.ctx, [(e, self.ctx.neg(c)) for e, c in self.terms])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        ctx = self.ctx
        acc = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = e1 + e2
                acc[e] = ctx.add(acc.get(e, 0), ctx.mul(c1, c2))
        return Poly(ctx, acc.items())

    def scale(self, c: int) -> "Poly":
        return Poly(self.ctx, [(e, self.ctx.mul(c, tc)) for e, tc in self.terms])

    def shift(self, b: int) -> "Poly":
        """f(x + b), by polynomial Horner; degree must be modest."""
        if self.degree > 4096:
            raise DegreeTooHigh("shift on a very high-degree polynomial")
        ctx = self.ctx
        xb = Poly(ctx, [(1, 1), (0, b)])
        acc = Poly.zero(ctx)
        for c in reversed(self.dense()):
            acc = acc * xb + Poly.constant(ctx, c)
        return acc

    def compose(self, inner: "Poly") -> "Poly":
        """Symbolic self(inner(x)); both degrees gated at 64."""
        if self.degree > _COMPOSE_DEGREE_CAP or inner.degree > _COMPOSE_DEGREE_CAP:
            raise DegreeTooHigh("compose is only for degree <= 64 operands")
        ctx = self.ctx
        acc = Poly.zero(ctx)
        for c in reversed(self.dense()):
            acc = acc * inner + Poly.constant(ctx, c)
        return acc

    def reduce_exponents(self) -> "Poly":
        """Reduce mod x^q - x as a map on all of GF(q): e -> ((e-1) mod (q-1)) + 1."""
        n = self.ctx.order - 1
        out = []
        for e, c in self.terms:
            out.append((e if e == 0 else (e - 1) % n + 1, c))
        return Poly(self.ctx, out)

    def __eq__(self, other):
        return isinstance(other, Poly) and self.ctx == other.ctx and self.terms == other.terms

    def __hash__(self):
        return hash((self.ctx, self.terms))

    def __repr__(self):
        if not self.terms:
            return "Poly(0)"
        bits = []
        for e, c in reversed(self.terms):
            cs = str(c)
            if e == 0:
                bits.append(cs)
            elif e == 1:
                bits.append(f"{cs}*x" if c != 1 else "x")
            else:
                bits.append(f"{cs}*x^{e}" if c != 1 else f"x^{e}")
        return "Poly(" + " + ".join(bits) + ")"


def normalize(f: Poly):
    """Return (g, (a, b, c)) with g(x) = a*f(x+b) + c monic, g(0) = 0, and the
    x^{d-1} coefficient killed when gcd(p, d) = 1 (left alone otherwise, b=0)."""
    d = f.degree
    if d < 1:
        raise ConstantPolynomial("cannot normalize a constant")
    ctx = f.ctx
    a = ctx.inv(f.coeff(d))
    if math.gcd(ctx.p, d) == 1:
        # monic form has x^{d-1} coefficient a*c_{d-1} + d*b; solve for b
        b = ctx.neg(ctx.div(ctx.mul(a, f.coeff(d - 1)), d % ctx.p))
    else:
        b = 0
    c = ctx.neg(ctx.mul(a, f(b)))
    g = f.shift(b).scale(a) + Poly.constant(ctx, c)
    assert g.coeff(d) == 1 and g.coeff(0) == 0
    if math.gcd(ctx.p, d) == 1:
        assert g.coeff(d - 1) == 0
    return g, (a, b, c)


def apply_affine(f: Poly, a: int, b: int, c: int) -> Poly:
    """a*f(x+b) + c."""
    return f.shift(b).scale(a) + Poly.constant(f.ctx, c)


def _is_p_power(e: int, p: int) -> bool:
    if e < 1:
        return False
    while e % p == 0:
        e //= p
    return e == 1


def is_additive(f: Poly) -> bool:
    """True iff f(x+y) = f(x) + f(y) for all x, y.

    Decided structurally (every exponent a power of p); a structural miss
    falls back to exhaustive verification for q <= 2^10, since exponent
    collapse mod x^q - x can make a non-structural polynomial additive as
    a map.
    """
    ctx = f.ctx
    if all(_is_p_power(e, ctx.p) for e, _ in f.terms):
        return True
    if ctx.order > 2 ** 10:
        return False
    vals = f.eval_all()
    xs = ctx.elements_array()
    for x in range(ctx.order):
        if not np.array_equal(vals[ctx.add_vec(np.int64(x), xs)], ctx.add_vec(vals[x], vals)):
            return False
    return True


class LinearizedPoly:
    """sum a_i x^{q_sub^i} over GF(q_sub^rel): additive and GF(q_sub)-linear."""

    def __init__(self, ctx: Field, q_sub: int, l_coeffs):
        self.ctx = ctx
        k = 0
        t = q_sub
        while t % ctx.p == 0 and t > 1:
            t //= ctx.p
            k += 1
        if t != 1 or k == 0 or ctx.m % k:
            raise DegreeMismatch(f"q_sub={q_sub} is not a valid subfield size for {ctx!r}")
        self.q_sub = q_sub
        self.sub_degree = k
        self.rel_degree = ctx.m // k
        l_coeffs = [ctx.check(c) for c in l_coeffs]
        if len(l_coeffs) > self.rel_degree:
            raise DegreeMismatch("too many linearized coefficients")
        l_coeffs += [0] * (self.rel_degree - len(l_coeffs))
        self.l_coeffs = tuple(l_coeffs)
        self._sub_ctx = None
        self._coord_solver = None

    def as_poly(self) -> Poly:
        return Poly(self.ctx, [(self.q_sub ** i, c) for i, c in enumerate(self.l_coeffs)])

    def __call__(self, x: int) -> int:
        return self.as_poly()(x)

    def eval_all(self) -> np.ndarray:
        return self.as_poly().eval_all()

    def kernel(self) -> list[int]:
        vals = self.eval_all()
        return [int(x) for x in np.nonzero(vals == 0)[0]]

    def _coords(self):
        """Coordinate extractor over GF(q_sub) w.r.t. the basis x̄^j (x̄ the
        modulus root), solved once as a GF(p)-linear change of basis."""
        if self._coord_solver is not None:
            return self._coord_solver
        from .fields import SubfieldEmbed  # local to avoid cycle noise

        ctx = self.ctx
        k, rel = self.sub_degree, self.rel_degree
        sub = Field(ctx.p, k)
        emb = SubfieldEmbed(ctx, sub)
        xbar = ctx.element([0, 1]) if ctx.m > 1 else 1
        cols = []
        for j in range(rel):
            xj = ctx.pow(xbar, j) if ctx.m > 1 else 1
            for t in range(k):
                rho_t = emb.embed(sub.element([0] * t + [1])) if t else 1
                cols.append(ctx.coeffs(ctx.mul(rho_t, xj)))
        p = ctx.p
        mm = ctx.m
        rows = [[cols[j][i] for j in range(mm)] + [1 if i == r else 0 for r in range(mm)] for i, _ in enumerate(range(mm))]
        r = 0
        for col in range(mm):
            piv = next((i for i in range(r, mm) if rows[i][col]), None)
            assert piv is not None
            rows[r], rows[piv] = rows[piv], rows[r]
            invp = pow(rows[r][col], -1, p)
            rows[r] = [(v * invp) % p for v in rows[r]]
            for i in range(mm):
                if i != r and rows[i][col]:
                    fmul = rows[i][col]
                    rows[i] = [(a - fmul * b) % p for a, b in zip(rows[i], rows[r])]
            r += 1
        E = np.array([row[mm:] for row in rows], dtype=np.int64)

        def coords(y: int) -> list[int]:
            v = (E @ np.array(ctx.coeffs(y), dtype=np.int64)) % p
            return [sub.element(v[j * k:(j + 1) * k].tolist()) for j in range(rel)]

        self._sub_ctx = sub
        self._coord_solver = (sub, coords)
        return self._coord_solver

    def rank(self) -> int:
        """Rank as a GF(q_sub)-linear map, by row reduction over GF(q_sub)."""
        ctx = self.ctx
        sub, coords = self._coords()
        xbar = ctx.element([0, 1]) if ctx.m > 1 else 1
        basis = [ctx.pow(xbar, j) if ctx.m > 1 else 1 for j in range(self.rel_degree)]
        fmap = self.as_poly()
        mat = [coords(fmap(bj)) for bj in basis]
        return matrix_rank(sub, mat)


# ----------------------------------------------------------------------
# Exact linear algebra over a Field (small systems only).
# ----------------------------------------------------------------------

def row_reduce(ctx: Field, rows: list[list[int]]) -> int:
    """In-place RREF over ctx; returns the rank."""
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    r = 0
    for col in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = ctx.inv(rows[r][col])
        rows[r] = [ctx.mul(inv, v) for v in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [ctx.sub(a, ctx.mul(f, b)) for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


def matrix_rank(ctx: Field, mat: list[list[int]]) -> int:
    return row_reduce(ctx, [list(row) for row in mat])


def solve_linear(ctx: Field, mat: list[list[int]], rhs: list[int]) -> list[int]:
    """Solve the square system mat * x = rhs by Gaussian elimination; exact."""
    n = len(mat)
    aug = [list(row) + [b] for row, b in zip(mat, rhs)]
    rank = row_reduce(ctx, aug)
    if rank < n or any(all(v == 0 for v in row[:n]) and row[n] != 0 for row in aug):
        raise SingularSystem("linear system is singular or inconsistent")
    # rows are in RREF with unit pivots on the diagonal
    sol = [0] * n
    for row in aug:
        lead = next(i for i, v in enumerate(row[:n]) if v != 0)
        sol[lead] = row[n]
    return sol


def vandermonde_solve(ctx: Field, points: list[int], values: list[int]) -> list[int]:
    """Coefficients of the unique polynomial of degree < len(points) through
    (points[i], values[i]), via exact Gaussian elimination on the Vandermonde
    matrix."""
    n = len(points)
    mat = [[ctx.pow(pt, j) if j else 1 for j in range(n)] for pt in points]
    return solve_linear(ctx, mat, list(values))
