"""Field arithmetic, the element codec, and subfield embeddings."""

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nto1 import Field, SubfieldEmbed, field_from_spec
from nto1.errors import FieldMismatch, NotPrime, ReducibleModulus

F9 = Field(3, 2)
F16 = Field(2, 4)
F25 = Field(5, 2)
F27 = Field(3, 3)


def test_default_modulus_is_deterministic():
    # first monic irreducible in the search order, coefficients low-to-high
    assert F9.modulus == (1, 0, 1)
    assert Field(2, 3).modulus == (1, 0, 1, 1)
    assert F27.modulus == (1, 0, 2, 1)
    assert Field(3, 2).beta == F9.beta


def test_reducible_modulus_rejected():
    with pytest.raises(ReducibleModulus):
        Field(3, 2, modulus=[1, 2, 1])  # (x+1)^2
    with pytest.raises(NotPrime):
        Field(6, 1)


def test_codec_roundtrip():
    for a in F27.elements():
        assert F27.element(F27.coeffs(a)) == a
    assert F27.element([1, 2]) == 1 + 2 * 3
    with pytest.raises(FieldMismatch):
        F27.check(27)
    with pytest.raises(FieldMismatch):
        F27.check(-1)


@given(st.integers(0, 15), st.integers(0, 15), st.integers(0, 15))
def test_ring_axioms_gf16(a, b, c):
    F = F16
    assert F.add(a, b) == F.add(b, a)
    assert F.mul(a, b) == F.mul(b, a)
    assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))


@given(st.integers(1, 24))
def test_inverses_gf25(a):
    assert F25.mul(a, F25.inv(a)) == 1
    assert F25.add(a, F25.neg(a)) == 0


def test_beta_is_primitive():
    seen = set()
    x = 1
    for _ in range(F27.order - 1):
        seen.add(x)
        x = F27.mul(x, F27.beta)
    assert len(seen) == F27.order - 1
    assert F27.element_order(F27.beta) == 26


def test_pow_and_frobenius():
    for a in F9.elements():
        acc = 1
        for _ in range(5):
            acc = F9.mul(acc, a)
        assert F9.pow(a, 5) == acc
        # Frobenius is additive
    for a in F9.elements():
        for b in F9.elements():
            assert F9.frobenius(F9.add(a, b)) == F9.add(F9.frobenius(a), F9.frobenius(b))


def test_unit_root_and_power_class():
    w = Field(7, 1).unit_root(3)
    assert Field(7, 1).element_order(w) == 3
    F7 = Field(7, 1)
    squares = {F7.mul(a, a) for a in F7.units()}
    for a in F7.units():
        assert (F7.power_class(a, 2) == 0) == (a in squares)


def test_vec_kernels_match_scalar_ops():
    for F in (F16, Field(7, 1)):
        xs = F.elements_array()
        ys = np.roll(xs, 3)
        assert all(int(v) == F.add(int(x), int(y)) for v, x, y in zip(F.add_vec(xs, ys), xs, ys))
        assert all(int(v) == F.mul(int(x), int(y)) for v, x, y in zip(F.mul_vec(xs, ys), xs, ys))
        assert all(int(v) == F.pow(int(x), 5) for v, x in zip(F.pow_vec(xs, 5), xs))
        c = F.beta
        assert all(int(v) == F.mul(c, int(x)) for v, x in zip(F.scalar_mul_vec(c, xs), xs))


def test_trace_table_on_a_cold_field():
    # must not block when the table is the first thing ever computed
    F = Field(3, 2)
    tr = F.trace_to_prime_table()
    for a in F.elements():
        assert int(tr[a]) == F.trace_to_prime(a)


def test_spec_roundtrip():
    spec = json.loads(F25.spec_json())
    G = field_from_spec(spec)
    assert G.modulus == F25.modulus
    assert G.beta == F25.beta
    with pytest.raises(ReducibleModulus):
        field_from_spec({"p": 5, "m": 2, "beta": [1, 0]})  # 1 is not primitive


class TestSubfieldEmbed:
    emb = SubfieldEmbed(Field(2, 6), Field(2, 2))

    def test_ring_embedding(self):
        emb, sub = self.emb, self.emb.sub
        for a in sub.elements():
            for b in sub.elements():
                assert emb.embed(sub.add(a, b)) == emb.big.add(emb.embed(a), emb.embed(b))
                assert emb.embed(sub.mul(a, b)) == emb.big.mul(emb.embed(a), emb.embed(b))

    def test_section_inverts_embedding(self):
        for a in self.emb.sub.elements():
            assert self.emb.project(self.emb.embed(a)) == a

    def test_subfield_membership_count(self):
        members = [x for x in self.emb.big.elements() if self.emb.in_subfield(x)]
        assert len(members) == self.emb.q_sub

    def test_trace_lands_in_subfield_and_is_linear(self):
        emb, big, sub = self.emb, self.emb.big, self.emb.sub
        for x in range(0, big.order, 7):
            assert 0 <= emb.trace(x) < sub.order
        for x in range(0, big.order, 5):
            for y in range(0, big.order, 9):
                assert emb.trace(big.add(x, y)) == sub.add(emb.trace(x), emb.trace(y))
        c = emb.embed(sub.beta)
        for x in range(0, big.order, 5):
            assert emb.trace(big.mul(c, x)) == sub.mul(sub.beta, emb.trace(x))

    def test_trace_table_matches_scalar(self):
        tt = self.emb.trace_table()
        for x in self.emb.big.elements():
            assert int(tt[x]) == self.emb.trace(x)

    def test_bad_tower_rejected(self):
        with pytest.raises(Exception):
            SubfieldEmbed(Field(2, 6), Field(2, 4))
        with pytest.raises(FieldMismatch):
            SubfieldEmbed(Field(2, 6), Field(3, 2))
