"""Exact arithmetic in GF(p^m).

An element of GF(p^m) is an integer in [0, p^m): its base-p digits, least
significant first, are the coordinates in the power basis 1, x, x^2, ...
of the modulus.  Constants c < p are therefore their own encoding, and
GF(p) elements are plain residues.

The modulus, when not supplied, is the lexicographically smallest monic
irreducible of degree m (coefficients compared low-to-high).  The primitive
element beta is found by ascending search, so two constructions with the
same (p, m, modulus) are identical in every detail.
"""

from __future__ import annotations

import json
import math
import threading

import numpy as np

from .errors import (
    DegreeMismatch,
    DivisionByZero,
    FieldMismatch,
    FieldTooLarge,
    NotPrime,
    ReducibleModulus,
    ZeroInput,
)

_PRIME_CAP = 2 ** 31
_LOG_TABLE_CAP = 2 ** 20


def _is_prime(p: int) -> bool:
    if p < 2 or p >= _PRIME_CAP:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


# ----------------------------------------------------------------------
# Polynomial helpers over Z/pZ.  Coefficient lists are low-to-high and
# trimmed; these run only during field construction, so clarity wins.
# ----------------------------------------------------------------------

def _p_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _p_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _p_trim(out)


def _p_mod(a, f, p):
    a = list(a)
    df = len(f) - 1
    inv_lead = pow(f[-1], -1, p)
    while len(a) - 1 >= df and a:
        if a[-1] == 0:
            a.pop()
            continue
        factor = (a[-1] * inv_lead) % p
        shift = len(a) - 1 - df
        for i, fi in enumerate(f):
            a[shift + i] = (a[shift + i] - factor * fi) % p
        _p_trim(a)
    return a


def _p_gcd(a, f, p):
    a, b = list(a), list(f)
    while b:
        a, b = b, _p_mod(a, b, p)
    return a


def _p_pow_frobenius(r, f, p):
    """r(x)^p mod f, by square-and-multiply on the exponent p."""
    result = [1]
    base = list(r)
    e = p
    while e:
        if e & 1:
            result = _p_mod(_p_mul(result, base, p), f, p)
        base = _p_mod(_p_mul(base, base, p), f, p)
        e >>= 1
    return result


def _is_irreducible(f, p) -> bool:
    """Monic f of degree m is irreducible iff it shares no factor with
    x^{p^i} - x for any i <= m/2 (any smaller-degree factor would show up)."""
    m = len(f) - 1
    if m == 1:
        return True
    r = [0, 1]
    for _ in range(m // 2):
        r = _p_pow_frobenius(r, f, p)
        diff = list(r)
        while len(diff) < 2:
            diff.append(0)
        diff[1] = (diff[1] - 1) % p
        _p_trim(diff)
        g = _p_gcd(f, diff, p)
        if len(g) - 1 >= 1:
            return False
    return True


def _smallest_irreducible(p: int, m: int) -> list[int]:
    # Enumerate monic candidates in lexicographic order of (c_0, c_1, ...),
    # i.e. c_0 is the most significant digit of the counter.
    for k in range(p ** m):
        rev = []
        t = k
        for _ in range(m):
            rev.append(t % p)
            t //= p
        coeffs = rev[::-1] + [1]
        if _is_irreducible(coeffs, p):
            return coeffs
    raise ReducibleModulus(f"no irreducible of degree {m} over GF({p})")  # pragma: no cover


class Field:
    """GF(p^m) with integer-coded elements and exact table-driven arithmetic."""

    def __init__(self, p: int, m: int, modulus=None):
        if not _is_prime(p):
            raise NotPrime(f"p={p} is not a prime below 2^31")
        if m < 1:
            raise DegreeMismatch(f"extension degree must be >= 1, got {m}")
        self.p = p
        self.m = m
        self.order = p ** m
        if modulus is None:
            modulus = _smallest_irreducible(p, m)
        else:
            modulus = [c % p for c in modulus]
            if len(modulus) != m + 1 or modulus[-1] != 1:
                raise DegreeMismatch(f"modulus must be monic of degree {m}")
            if not _is_irreducible(modulus, p):
                raise ReducibleModulus(f"modulus {modulus} is reducible over GF({p})")
        self.modulus = tuple(modulus)
        self._pow_p = tuple(p ** i for i in range(m))
        self.beta = self._find_primitive()
        self._lock = threading.Lock()
        self._exp = None
        self._log = None
        self._digits = None
        self._tr_prime = None

    # -- construction internals ----------------------------------------

    def _raw_mul(self, a: int, b: int) -> int:
        da = self.coeffs(a)
        db = self.coeffs(b)
        prod = _p_mod(_p_mul(list(da), list(db), self.p), list(self.modulus), self.p)
        return self.element(prod)

    def _raw_pow(self, a: int, e: int) -> int:
        result = 1
        base = a
        while e:
            if e & 1:
                result = self._raw_mul(result, base)
            base = self._raw_mul(base, base)
            e >>= 1
        return result

    def _find_primitive(self) -> int:
        n = self.order - 1
        if n == 1:
            return 1
        factors = _prime_factors(n)
        for cand in range(2, self.order):
            if all(self._raw_pow(cand, n // r) != 1 for r in factors):
                return cand
        raise ReducibleModulus("no primitive element found")  # pragma: no cover

    # -- element codec ---------------------------------------------------

    def element(self, coeffs) -> int:
        coeffs = list(coeffs)
        if len(coeffs) > self.m:
            raise DegreeMismatch(f"coefficient vector longer than m={self.m}")
        return sum((c % self.p) * self._pow_p[i] for i, c in enumerate(coeffs))

    def coeffs(self, a: int) -> tuple:
        self.check(a)
        out = []
        for _ in range(self.m):
            out.append(a % self.p)
            a //= self.p
        return tuple(out)

    def check(self, a: int) -> int:
        if not isinstance(a, (int, np.integer)) or not 0 <= a < self.order:
            raise FieldMismatch(f"{a!r} is not an element of GF({self.p}^{self.m})")
        return int(a)

    def elements(self) -> range:
        return range(self.order)

    def units(self) -> range:
        return range(1, self.order)

    # -- tables ------------------------------------------------------------

    def _ensure_tables(self):
        if self._exp is not None:
            return
        with self._lock:
            if self._exp is not None:
                return
            if self.order > _LOG_TABLE_CAP:
                raise FieldTooLarge(f"order {self.order} exceeds the log-table gate 2^20")
            n = self.order - 1
            exp = np.zeros(2 * n if n else 1, dtype=np.int64)
            log = np.full(self.order, -1, dtype=np.int64)
            v = 1
            for i in range(n):
                exp[i] = v
                log[v] = i
                v = self._raw_mul(v, self.beta)
            if n:
                exp[n:] = exp[:n]
            else:
                exp[0] = 1
                log[1] = 0
            self._log = log
            self._exp = exp

    def exp_of(self, i: int) -> int:
        """beta^i."""
        self._ensure_tables()
        n = self.order - 1
        return int(self._exp[i % n if n else 0])

    def log(self, a: int) -> int:
        """Discrete log base beta; a must be nonzero."""
        self.check(a)
        if a == 0:
            raise ZeroInput("log of zero")
        self._ensure_tables()
        return int(self._log[a])

    # -- scalar arithmetic ---------------------------------------------------

    def add(self, a: int, b: int) -> int:
        a = self.check(a)
        b = self.check(b)
        if self.p == 2:
            return a ^ b
        s = 0
        for pi in self._pow_p:
            s += ((a // pi + b // pi) % self.p) * pi
        return s

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def neg(self, a: int) -> int:
        a = self.check(a)
        if self.p == 2:
            return a
        s = 0
        for pi in self._pow_p:
            s += (-(a // pi) % self.p) * pi
        return s

    def mul(self, a: int, b: int) -> int:
        a = self.check(a)
        b = self.check(b)
        if a == 0 or b == 0:
            return 0
        if self.order <= _LOG_TABLE_CAP:
            self._ensure_tables()
            return int(self._exp[self._log[a] + self._log[b]])
        return self._raw_mul(a, b)

    def inv(self, a: int) -> int:
        a = self.check(a)
        if a == 0:
            raise DivisionByZero("inverse of zero")
        if self.order > _LOG_TABLE_CAP:
            return self._raw_pow(a, self.order - 2)
        self._ensure_tables()
        n = self.order - 1
        return int(self._exp[(n - self._log[a]) % n])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        a = self.check(a)
        if a == 0:
            if e > 0:
                return 0
            if e == 0:
                return 1
            raise DivisionByZero("negative power of zero")
        n = self.order - 1
        if self.order > _LOG_TABLE_CAP:
            return self._raw_pow(a, e % n)
        self._ensure_tables()
        return int(self._exp[(self._log[a] * (e % n)) % n])

    def frobenius(self, a: int, i: int = 1) -> int:
        return self.pow(a, self.p ** i)

    def trace_to_prime(self, a: int) -> int:
        """Absolute trace onto GF(p), returned as a residue in [0, p)."""
        t = 0
        y = a
        for _ in range(self.m):
            t = self.add(t, y)
            y = self.pow(y, self.p)
        assert t < self.p, "trace landed outside the prime field"
        return t

    # -- multiplicative structure ---------------------------------------------

    def element_order(self, a: int) -> int:
        if a == 0:
            raise ZeroInput("order of zero")
        n = self.order - 1
        o = n
        for r in _prime_factors(n):
            while o % r == 0 and self.pow(a, o // r) == 1:
                o //= r
        return o

    def unit_root(self, ell: int) -> int:
        """An element of multiplicative order exactly ell (requires ell | q-1)."""
        n = self.order - 1
        if ell <= 0 or n % ell:
            raise ZeroInput(f"{ell} does not divide q-1={n}")
        return self.exp_of(n // ell)

    def roots_of_unity(self, ell: int) -> list[int]:
        """mu_ell as [omega^0, omega^1, ...] for omega = beta^{(q-1)/ell}."""
        w = self.unit_root(ell)
        out = [1]
        for _ in range(ell - 1):
            out.append(self.mul(out[-1], w))
        return out

    def power_class(self, a: int, k: int) -> int:
        """Index j of the power-residue class of a for k-th powers:
        a^{(q-1)/g} = omega^j with g = gcd(k, q-1), omega = beta^{(q-1)/g}."""
        if a == 0:
            raise ZeroInput("power class of zero")
        g = math.gcd(k, self.order - 1)
        return self.log(a) % g

    # -- vectorized kernels -----------------------------------------------------

    def elements_array(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    def _digit_matrix(self) -> np.ndarray:
        if self._digits is None:
            with self._lock:
                if self._digits is None:
                    idx = np.arange(self.order, dtype=np.int64)
                    cols = [(idx // (self.p ** i)) % self.p for i in range(self.m)]
                    self._digits = np.stack(cols, axis=1).astype(np.int64)
        return self._digits

    def add_vec(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        dig = self._digit_matrix()
        s = (dig[a] + dig[b]) % self.p
        return s @ np.asarray(self._pow_p, dtype=np.int64)

    def neg_vec(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return a.copy()
        dig = self._digit_matrix()
        s = (-dig[a]) % self.p
        return s @ np.asarray(self._pow_p, dtype=np.int64)

    def sub_vec(self, a, b):
        return self.add_vec(a, self.neg_vec(b))

    def mul_vec(self, a, b):
        self._ensure_tables()
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        n = self.order - 1
        mask = (a != 0) & (b != 0)
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        la = self._log[a]
        lb = self._log[b]
        out[mask] = self._exp[((la + lb) % n)[mask]]
        return out

    def scalar_mul_vec(self, c: int, a):
        self.check(c)
        a = np.asarray(a, dtype=np.int64)
        if c == 0:
            return np.zeros(a.shape, dtype=np.int64)
        self._ensure_tables()
        n = self.order - 1
        lc = int(self._log[c])
        out = np.zeros(a.shape, dtype=np.int64)
        mask = a != 0
        out[mask] = self._exp[(self._log[a[mask]] + lc) % n]
        return out

    def pow_vec(self, a, e: int):
        """a^e elementwise for e >= 1 (0^e = 0)."""
        if e < 1:
            raise ZeroInput("pow_vec requires e >= 1")
        self._ensure_tables()
        a = np.asarray(a, dtype=np.int64)
        n = self.order - 1
        out = np.zeros(a.shape, dtype=np.int64)
        mask = a != 0
        out[mask] = self._exp[(self._log[a[mask]] * (e % n)) % n]
        return out

    def trace_to_prime_table(self) -> np.ndarray:
        # built outside the lock: the vec kernels take it for their own caches
        if self._tr_prime is None:
            t = self.elements_array()
            y = self.elements_array()
            for _ in range(self.m - 1):
                y = self.pow_vec(y, self.p)
                t = self.add_vec(t, y)
            assert int(t.max(initial=0)) < self.p
            self._tr_prime = t.astype(np.int64)
        return self._tr_prime

    # -- serialization ---------------------------------------------------------

    def spec_dict(self) -> dict:
        return {
            "p": self.p,
            "m": self.m,
            "modulus": list(self.modulus),
            "beta": list(self.coeffs(self.beta)),
        }

    def spec_json(self) -> str:
        return json.dumps(self.spec_dict(), sort_keys=True, separators=(",", ":"))

    def __repr__(self):
        return f"Field(p={self.p}, m={self.m})"

    def __eq__(self, other):
        return (
            isinstance(other, Field)
            and self.p == other.p
            and self.m == other.m
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))


def make_field(p: int, m: int, modulus=None) -> Field:
    return Field(p, m, modulus)


def field_from_spec(spec: dict | str) -> Field:
    if isinstance(spec, str):
        spec = json.loads(spec)
    ctx = Field(int(spec["p"]), int(spec["m"]), spec.get("modulus"))
    beta = spec.get("beta")
    if beta is not None:
        b = ctx.element(beta)
        if ctx.element_order(b) != ctx.order - 1:
            raise ReducibleModulus("supplied beta is not primitive")
        ctx.beta = b
        # tables keyed to the old beta would be stale
        ctx._exp = None
        ctx._log = None
    return ctx


class SubfieldEmbed:
    """GF(p^k) inside GF(p^m) for k | m: ring embedding, section, and trace.

    The embedding sends the power-basis root of the subfield modulus to its
    smallest-index root inside the big field, so it is deterministic.  The
    section (big -> sub, defined on the subfield image) is solved once as a
    GF(p)-linear system and cached.
    """

    def __init__(self, big: Field, sub: Field):
        if big.p != sub.p:
            raise FieldMismatch("different characteristics")
        if big.m % sub.m:
            raise DegreeMismatch(f"GF({sub.p}^{sub.m}) is not a subfield of GF({big.p}^{big.m})")
        self.big = big
        self.sub = sub
        self.sub_degree = sub.m
        self.rel_degree = big.m // sub.m
        self.q_sub = sub.order
        self._rho = self._find_root()
        self._rho_pows = [big.pow(self._rho, i) for i in range(sub.m)]
        self._E, self._rank = self._section_transform()
        self._tr_table = None

    def _find_root(self) -> int:
        coeffs = list(self.sub.modulus)
        for cand in self.big.elements():
            acc = 0
            for c in reversed(coeffs):
                acc = self.big.add(self.big.mul(acc, cand), c)
            if acc == 0:
                return cand
        raise ReducibleModulus("subfield modulus has no root in the big field")  # pragma: no cover

    def _section_transform(self):
        # Row-reduce [M | I] over GF(p), M the m x k matrix of rho powers.
        p = self.big.p
        m, k = self.big.m, self.sub.m
        rows = [[0] * (k + m) for _ in range(m)]
        for j, rp in enumerate(self._rho_pows):
            for i, d in enumerate(self.big.coeffs(rp)):
                rows[i][j] = d
        for i in range(m):
            rows[i][k + i] = 1
        r = 0
        for col in range(k):
            piv = next((i for i in range(r, m) if rows[i][col]), None)
            assert piv is not None, "embedding matrix must have full column rank"
            rows[r], rows[piv] = rows[piv], rows[r]
            inv = pow(rows[r][col], -1, p)
            rows[r] = [(v * inv) % p for v in rows[r]]
            for i in range(m):
                if i != r and rows[i][col]:
                    f = rows[i][col]
                    rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
            r += 1
        E = np.array([row[k:] for row in rows], dtype=np.int64)
        return E, r

    def embed(self, a: int) -> int:
        self.sub.check(a)
        out = 0
        for d, rp in zip(self.sub.coeffs(a), self._rho_pows):
            out = self.big.add(out, self.big.mul(d, rp))
        return out

    def project(self, x: int) -> int:
        """Inverse of embed; x must lie in the subfield image."""
        self.big.check(x)
        z = (self._E @ np.array(self.big.coeffs(x), dtype=np.int64)) % self.big.p
        if np.any(z[self.sub.m:]):
            raise FieldMismatch(f"element {x} is not in the embedded GF({self.sub.p}^{self.sub.m})")
        return self.sub.element(z[: self.sub.m].tolist())

    def in_subfield(self, x: int) -> bool:
        return self.big.pow(x, self.q_sub) == x

    def trace(self, x: int) -> int:
        """tr onto the subfield: sum of x^{q_sub^i}, returned as a sub element."""
        t = 0
        y = self.big.check(x)
        for _ in range(self.rel_degree):
            t = self.big.add(t, y)
            y = self.big.pow(y, self.q_sub)
        return self.project(t)

    def trace_table(self) -> np.ndarray:
        """Vectorized trace of every big-field element, as subfield indices."""
        if self._tr_table is None:
            big = self.big
            t = big.elements_array()
            y = big.elements_array()
            for _ in range(self.rel_degree - 1):
                y = big.pow_vec(y, self.q_sub)
                t = big.add_vec(t, y)
            dig = big._digit_matrix()[t]
            z = (dig @ self._E.T) % big.p
            assert not np.any(z[:, self.sub.m:]), "trace left the subfield"
            packs = np.asarray([self.sub.p ** i for i in range(self.sub.m)], dtype=np.int64)
            self._tr_table = z[:, : self.sub.m] @ packs
        return self._tr_table
