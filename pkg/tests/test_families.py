"""Construction families: equivalence with the reduced partner, hypothesis
enforcement, and the closed-form predicates."""

import math
import random

import pytest

from nto1 import (
    Field, LinearizedPoly, PiecewiseSpec, Poly, SubfieldEmbed, classify,
    monomial_oracle, verify_diagram,
)
from nto1.errors import HypothesisViolated
from nto1.families import (
    branch_case_predicate, branch_constant_predicate, build_additive_split,
    build_branch_interpolation, build_coset_power, build_linearized_mix,
    build_norm_lift, build_shift_power, build_translate_link,
    build_two_branch_lift, coset_power_monomial_n, frobenius_twist,
    random_piecewise, reduced_blowup, shift_power_poly, solve_piecewise,
    sweep_shift_power, trace_class_reps,
)


def assert_equivalent(inst):
    """The transfer both ways, plus the square and the fiber blowup."""
    assert inst.ok, inst.violations
    assert inst.holds() == inst.holds_reduced()
    factor, ok, witness = reduced_blowup(inst)
    assert ok, (factor, witness)
    assert verify_diagram(inst.diagram()).ok


# -- additive split ----------------------------------------------------------

def _sub_coeff_qpolys(emb, rng, k):
    """Random q-polynomials with embedded-subfield coefficients; these
    commute with each other under composition."""
    big = emb.big
    pool = [emb.embed(c) for c in emb.sub.elements()]
    return [LinearizedPoly(big, emb.q_sub, [rng.choice(pool) for _ in range(big.m // emb.sub.m)])
            for _ in range(k)]


def test_additive_split_equivalence():
    rng = random.Random(2)
    for pm, sm in (((2, 4), 2), ((3, 4), 2)):
        emb = SubfieldEmbed(Field(*pm), Field(pm[0], sm))
        n = pm[0]  # |S| is a power of p, so p is the only safe nontrivial n
        clean = 0
        for _ in range(400):
            if clean == 6:
                break
            psi, phi = _sub_coeff_qpolys(emb, rng, 2)
            g = Poly.monomial(emb.big, 1, 2)
            try:
                inst = build_additive_split(emb, psi, psi, phi, Poly.constant(emb.big, 1), g, n)
            except HypothesisViolated:
                continue
            clean += 1
            assert_equivalent(inst)
        assert clean == 6


def test_additive_split_rejects_nonadditive_psi():
    emb = SubfieldEmbed(Field(3, 4), Field(3, 2))
    big = emb.big
    square = Poly.monomial(big, 1, 2)  # not additive in char 3
    ident = Poly.x(big)
    with pytest.raises(HypothesisViolated):
        build_additive_split(emb, square, square, ident, Poly.constant(big, 1), ident, 1)
    inst = build_additive_split(emb, square, square, ident, Poly.constant(big, 1), ident, 1,
                                strict=False)
    assert not inst.ok
    assert any("additive" in v.hypothesis for v in inst.violations)


# -- linearized mix -----------------------------------------------------------

def test_linearized_mix_equivalence():
    rng = random.Random(4)
    emb = SubfieldEmbed(Field(3, 4), Field(3, 2))
    norm = Poly.monomial(emb.big, 1, 1 + emb.q_sub)  # lands in the subfield
    clean = 0
    for _ in range(400):
        if clean == 6:
            break
        L1, L2, L3 = _sub_coeff_qpolys(emb, rng, 3)
        n = rng.choice([1, 3])
        try:
            inst = build_linearized_mix(emb, L1, L2, L3, norm, n)
        except HypothesisViolated:
            continue
        clean += 1
        assert_equivalent(inst)
    assert clean == 6


# -- coset power ---------------------------------------------------------------

def test_coset_power_monomial_shadow():
    ctx = Field(13, 1)
    for s in (1, 2, 3, 4, 6):
        ell = 12 // s
        for r in (1, 5, 7):
            if math.gcd(r, s) != 1:
                continue
            for t in range(ell):
                h = Poly.monomial(ctx, ctx.pow(ctx.beta, s), t)  # beta^s is an ell-th root
                n = coset_power_monomial_n(ctx, r, s, h)
                assert n is not None
                inst = build_coset_power(ctx, r, s, h, n, strict=False)
                rep = inst.classify()
                assert rep.n == n
                assert rep.exception == ((0, 1) if n > 1 else None)


def test_coset_power_s1_is_the_monomial_rule():
    ctx = Field(11, 1)
    for r in range(1, 11):
        for t in range(10):
            h = Poly.monomial(ctx, 1, t)
            n = coset_power_monomial_n(ctx, r, 1, h)
            assert n == monomial_oracle(ctx, 1, ((r + t - 1) % 10) + 1)


# -- norm lift -----------------------------------------------------------------

def test_norm_lift_equivalence_and_codec_consistency():
    emb = SubfieldEmbed(Field(3, 3), Field(3, 1))
    for r in (1, 3, 7):
        for hc in (1, 2):
            inst = build_norm_lift(emb, r, Poly.constant(emb.sub, hc), 2)
            assert_equivalent(inst)
            # the subfield-coded copy of the reduced map tells the same story
            sub_rep = classify(inst.meta["sub_reduced"], domain=tuple(emb.sub.units()))
            big_rep = inst.classify_reduced()
            assert sub_rep.n == big_rep.n and sub_rep.irregular == big_rep.irregular


def test_norm_lift_enforces_r_coprime_to_norm_exponent():
    emb = SubfieldEmbed(Field(3, 3), Field(3, 1))
    with pytest.raises(HypothesisViolated):
        build_norm_lift(emb, 13, Poly.constant(emb.sub, 1), 2)  # s = 13


# -- two-branch lift ------------------------------------------------------------

def test_frobenius_twist_is_pointwise_frobenius():
    ctx = Field(3, 3)
    f = Poly(ctx, [(5, 7), (2, 11), (0, 4)])
    for j in (1, 2):
        g = frobenius_twist(f, j)
        for x in ctx.elements():
            assert g(x) == ctx.frobenius(f(x), j)


def test_two_branch_lift_exhaustive_gf3_to_gf27():
    emb = SubfieldEmbed(Field(3, 3), Field(3, 1))
    checked = 0
    for r in (1, 2, 3):
        for a in range(3):
            for b in range(3):
                try:
                    inst = build_two_branch_lift(emb, r, a, b)
                except HypothesisViolated:
                    continue
                checked += 1
                assert inst.holds() == inst.meta["predicate"], (r, a, b)
    assert checked > 0


def test_two_branch_lift_needs_the_downstairs_hypotheses():
    # GF(5) has q = 1 mod 4: the two-branch criterion is not claimed there,
    # and the lift must not pretend otherwise
    emb = SubfieldEmbed(Field(5, 5), Field(5, 1))
    with pytest.raises(HypothesisViolated):
        build_two_branch_lift(emb, 1442, 1, 3)
    inst = build_two_branch_lift(emb, 1442, 1, 3, strict=False)
    assert any("3 mod 4" in v.hypothesis for v in inst.violations)


# -- branch interpolation ---------------------------------------------------------

def test_branch_predicates_agree():
    rng = random.Random(9)
    for q, ells in ((7, (2, 3)), (13, (2, 3, 4))):
        ctx = Field(q, 1)
        for ell in ells:
            for _ in range(40):
                values = [rng.randrange(q) for _ in range(ell)]
                assert (branch_constant_predicate(ctx, 2, values)
                        == branch_case_predicate(ctx, 2, values))


def test_branch_interpolation_mini_sweep():
    ctx = Field(7, 1)
    for r in (1, 2, 4, 5):
        for a in range(7):
            for b in range(7):
                pred = branch_case_predicate(ctx, r, [a, b])
                inst = build_branch_interpolation(ctx, r, [a, b], strict=False)
                assert inst.holds() == pred, (r, a, b)


def test_branch_interpolation_hits_its_values():
    ctx = Field(13, 1)
    values = [5, 0, 7]
    inst = build_branch_interpolation(ctx, 2, values, strict=False)
    h = inst.meta["h"]
    omega = ctx.unit_root(3)
    for i, v in enumerate(values):
        assert h(ctx.pow(omega, i)) == v


# -- piecewise ---------------------------------------------------------------------

def test_piecewise_lands_on_the_plan():
    rng = random.Random(12)
    for q, m in ((7, 1), (13, 1)):
        ctx = Field(q, m)
        for _ in range(20):
            spec = random_piecewise(ctx, rng)
            inst = solve_piecewise(ctx, spec)
            rep = inst.classify()
            assert rep.n == spec.n and rep.exception == (0, 1)
            omega = ctx.pow(ctx.beta, spec.s)
            for i, a in enumerate(spec.targets):
                assert inst.reduced[ctx.pow(omega, i)] == ctx.pow(omega, a)


def test_piecewise_rejects_unbalanced_targets():
    ctx = Field(7, 1)
    spec = PiecewiseSpec(r=1, s=1, n=2, targets=[0, 0, 0, 1, 2, 2], levels=[0] * 6)
    with pytest.raises(HypothesisViolated):
        solve_piecewise(ctx, spec)


# -- translate link ------------------------------------------------------------------

def test_translate_link_equivalence():
    rng = random.Random(6)
    for pm in ((2, 4), (3, 4)):
        ctx = Field(*pm)
        q = ctx.p ** (pm[1] // 2)
        made = 0
        for _ in range(400):
            if made == 10:
                break
            g = Poly.from_dense(ctx, [rng.randrange(ctx.order) for _ in range(4)])
            delta = rng.randrange(ctx.order)
            inst = build_translate_link(ctx, q, 1, g, 1, delta, ctx.p, strict=False)
            if not inst.ok:
                continue
            made += 1
            assert_equivalent(inst)
        assert made == 10


def test_translate_link_exceptional_reduced_blows_up_irregular():
    # a reduced map with an exception cannot transfer its class literally:
    # the fiber blowup turns the one exceptional value into q^ell of them
    ctx = Field(2, 4)
    for gc, delta in (([1, 3, 15, 4], 0), ([4, 0, 14, 13], 13)):
        inst = build_translate_link(ctx, 4, 1, Poly.from_dense(ctx, gc),
                                    1, delta, 2, strict=False)
        assert inst.ok
        assert inst.classify_reduced().exception is not None
        assert inst.classify().irregular


def test_translate_link_rejects_bad_c():
    ctx = Field(2, 4)
    # c = beta generates GF(16), not the linking subfield GF(4)
    with pytest.raises(HypothesisViolated):
        build_translate_link(ctx, 4, 1, Poly.x(ctx), ctx.beta, 0, 2)


# -- tabulated shift-power shapes ------------------------------------------------------

def test_shift_power_poly_matches_the_table():
    emb = SubfieldEmbed(Field(3, 6), Field(3, 3))
    inst = build_shift_power(emb, "gouzao1", 1, q1=27)
    f = shift_power_poly(emb.big, 27, inst.meta["e"], 1)
    table = f.eval_all()
    assert all(int(table[x]) == inst.f[x] for x in emb.big.elements())


def test_shift_power_predicate_is_a_trace_class_invariant():
    emb = SubfieldEmbed(Field(3, 6), Field(3, 3))
    tt = emb.trace_table()
    rng = random.Random(3)
    reps = trace_class_reps(emb)
    for tval in list(reps)[:5]:
        mates = [x for x in emb.big.elements() if int(tt[x]) == tval]
        d1, d2 = rng.sample(mates, 2)
        i1 = build_shift_power(emb, "gouzao3", d1)
        i2 = build_shift_power(emb, "gouzao3", d2)
        assert i1.meta["predicate"] == i2.meta["predicate"]
        assert i1.holds() == i2.holds()


def test_shift_power_small_sweep_counts():
    emb = SubfieldEmbed(Field(2, 8), Field(2, 4))
    rows = sweep_shift_power(emb, "2gouzao2")
    assert all(pred == got for _, _, pred, got in rows)
    assert sum(pred for _, _, pred, _ in rows) == 14


def test_shift_power_tower_validation():
    emb = SubfieldEmbed(Field(3, 6), Field(3, 3))
    with pytest.raises(ValueError):
        build_shift_power(emb, "gouzao1", 0, q1=12)  # not a power of 3
    with pytest.raises(ValueError):
        build_shift_power(emb, "2gouzao2", 0)  # wrong characteristic
    deep = SubfieldEmbed(Field(2, 8), Field(2, 2))
    with pytest.raises(ValueError):
        build_shift_power(deep, "2gouzao2", 0)  # not a quadratic extension
