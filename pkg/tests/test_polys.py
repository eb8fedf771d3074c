"""Polynomial algebra, evaluation routes, normalization, linear solving."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nto1 import Field, LinearizedPoly, Poly, apply_affine, is_additive, normalize, vandermonde_solve
from nto1.errors import SingularSystem
from nto1.polys import matrix_rank

F7 = Field(7, 1)
F25 = Field(5, 2)
F27 = Field(3, 3)

dense7 = st.lists(st.integers(0, 24), min_size=1, max_size=7)


def test_monomial_argument_order():
    # coefficient first, exponent second
    f = Poly.monomial(F7, 3, 5)
    assert f.terms == ((5, 3),)
    assert f(2) == F7.mul(3, F7.pow(2, 5))


@given(dense7, st.integers(0, 24))
def test_call_matches_horner(coeffs, x):
    f = Poly.from_dense(F25, coeffs)
    assert f(x) == f.eval_horner(x)


@given(dense7)
def test_eval_all_matches_pointwise(coeffs):
    f = Poly.from_dense(F25, coeffs)
    table = f.eval_all()
    for x in range(0, 25, 3):
        assert int(table[x]) == f(x)


@given(dense7, dense7, st.integers(0, 24))
def test_ring_homomorphism_of_evaluation(cf, cg, x):
    f, g = Poly.from_dense(F25, cf), Poly.from_dense(F25, cg)
    assert (f + g)(x) == F25.add(f(x), g(x))
    assert (f * g)(x) == F25.mul(f(x), g(x))
    assert (f - g)(x) == F25.sub(f(x), g(x))


@given(dense7, st.integers(0, 24), st.integers(0, 24))
def test_shift_is_translation(coeffs, b, x):
    f = Poly.from_dense(F25, coeffs)
    assert f.shift(b)(x) == f(F25.add(x, b))


@given(dense7, st.integers(1, 24), st.integers(0, 24), st.integers(0, 24))
def test_apply_affine_definition(coeffs, a, b, c):
    f = Poly.from_dense(F25, coeffs)
    g = apply_affine(f, a, b, c)
    for x in range(0, 25, 4):
        assert g(x) == F25.add(F25.mul(a, f(F25.add(x, b))), c)


def test_compose():
    f = Poly.from_dense(F7, [1, 0, 1])       # 1 + x^2
    g = Poly.from_dense(F7, [2, 3])          # 2 + 3x
    h = f.compose(g)
    for x in F7.elements():
        assert h(x) == f(g(x))


def test_reduce_exponents_preserves_the_map():
    f = Poly(F27, [(0, 2), (1, 1), (26, 3), (27, 5), (53, 4)])
    g = f.reduce_exponents()
    assert all(e == 0 or 1 <= e <= 26 for e, _ in g.terms)
    for x in F27.elements():
        assert f(x) == g(x)


def test_normalize_shape():
    f = Poly.from_dense(F7, [4, 2, 5, 3])  # cubic, gcd(p, d) = 1
    g, (a, b, c) = normalize(f)
    assert g.coeff(3) == 1
    assert g.coeff(0) == 0
    assert g.coeff(2) == 0  # the shift kills x^(d-1) when p does not divide d
    assert apply_affine(f, a, b, c) == g


def test_normalize_char_divides_degree():
    f = Poly.from_dense(F27, [1, 2, 0, 2])  # degree 3 = p: no shift available
    g, (a, b, c) = normalize(f)
    assert g.coeff(3) == 1 and g.coeff(0) == 0
    assert apply_affine(f, a, b, c) == g


def test_vandermonde_interpolates():
    points = [1, 2, 3, 4]
    values = [6, 0, 2, 2]
    coeffs = vandermonde_solve(F7, points, values)
    h = Poly.from_dense(F7, coeffs)
    for pt, v in zip(points, values):
        assert h(pt) == v
    with pytest.raises(SingularSystem):
        vandermonde_solve(F7, [1, 1], [2, 3])


def test_is_additive():
    assert is_additive(Poly(F27, [(3, 1), (1, 2)]))      # x^3 + 2x
    assert not is_additive(Poly(F27, [(2, 1)]))          # x^2 in char 3
    assert is_additive(Poly(Field(2, 4), [(2, 1), (4, 7)]))


class TestLinearizedPoly:
    def test_eval_matches_definition(self):
        L = LinearizedPoly(F27, 3, [1, 2, 1])  # x + 2x^3 + x^9
        for x in F27.elements():
            want = F27.add(F27.add(x, F27.mul(2, F27.pow(x, 3))), F27.pow(x, 9))
            assert L(x) == want
        assert list(L.eval_all()) == [L(x) for x in F27.elements()]

    def test_additivity(self):
        L = LinearizedPoly(F27, 3, [2, 0, 1])
        for x in range(0, 27, 2):
            for y in range(0, 27, 5):
                assert L(F27.add(x, y)) == F27.add(L(x), L(y))

    def test_rank_counts_kernel(self):
        # x^3 - x kills exactly the prime field
        L = LinearizedPoly(F27, 3, [F27.neg(1), 1])
        kernel = [x for x in F27.elements() if L(x) == 0]
        assert len(kernel) == 3
        assert 3 ** (3 - L.rank()) == len(kernel)

    def test_rank_is_matrix_rank(self):
        F16 = Field(2, 4)
        L = LinearizedPoly(F16, 2, [1, 0, 1, 0])
        rows = [list(F16.coeffs(L(F16.element([int(i == j) for j in range(4)]))))
                for i in range(4)]
        assert L.rank() == matrix_rank(F16, rows)
