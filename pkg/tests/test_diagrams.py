"""Commutative-square verification and the n-to-1 transfer."""

import json
import random

import pytest

from nto1 import DiagramSpec, condition3, random_diagram, transfer, verify_diagram
from nto1.errors import HypothesesNotVerified


def two_to_one_square():
    # lam halves A onto S; g folds S in two; f realizes g fiberwise:
    # the lam-fiber {2s, 2s+1} maps bijectively onto the lambar-fiber
    # over g(s), which is {2*g(s), 2*g(s)+1}
    A = tuple(range(8))
    S = (0, 1, 2, 3)
    Sbar = (0, 1, 2, 3)
    g = {0: 0, 1: 0, 2: 1, 3: 1}
    lam = {a: a // 2 for a in A}
    lambar = dict(lam)
    f = {a: 2 * g[a // 2] + (a % 2) for a in A}
    return DiagramSpec(A, S, Sbar, f, g, lam, lambar, 2)


def test_hand_built_square_verifies_and_transfers():
    d = two_to_one_square()
    rep = verify_diagram(d)
    assert rep.ok, rep.violations
    v = transfer(d, rep)
    assert v.f_n_to_1 and v.g_n_to_1
    assert v.forward_ok and v.backward_ok


def test_broken_commutation_is_caught():
    d = two_to_one_square()
    d.f[0] = 7  # 7 sits in a different lambar fiber
    rep = verify_diagram(d)
    assert not rep.ok
    names = {v.hypothesis for v in rep.violations}
    assert any("commut" in n or "bijective" in n for n in names)


def test_transfer_refuses_broken_squares():
    d = two_to_one_square()
    d.f[0] = 7
    with pytest.raises(HypothesesNotVerified):
        transfer(d)


def test_condition3_none_when_g_not_n_to_1():
    d = two_to_one_square()
    assert condition3(d) is True  # n = 2 divides #S = 4, nothing to locate
    # with n not dividing #S, a g that is not n-to-1 gives None
    A = tuple(range(7))
    S = Sbar = (0, 1, 2)
    g = {0: 0, 1: 0, 2: 0}
    lam = {a: min(a // 2, 2) for a in A}
    d2 = DiagramSpec(A, S, Sbar, {a: 0 for a in A}, g, lam, dict(lam), 2)
    assert condition3(d2) is None


def test_json_roundtrip():
    rng = random.Random(3)
    d = random_diagram(rng, max_set=40)
    blob = json.dumps(d.to_json_dict(), sort_keys=True)
    d2 = DiagramSpec.from_json_dict(json.loads(blob))
    assert verify_diagram(d2).ok == verify_diagram(d).ok
    v1, v2 = transfer(d, verify_diagram(d)), transfer(d2, verify_diagram(d2))
    assert (v1.f_n_to_1, v1.g_n_to_1, v1.condition3) == (v2.f_n_to_1, v2.g_n_to_1, v2.condition3)


def test_random_corpus_transfer_pins():
    rng = random.Random(20260817)
    verified = fwd = bwd = 0
    c3 = {True: 0, False: 0, None: 0}
    for _ in range(300):
        d = random_diagram(rng, max_set=100)
        rep = verify_diagram(d)
        if not rep.ok:
            continue
        verified += 1
        v = transfer(d, rep)
        fwd += v.forward_ok
        bwd += v.backward_ok
        c3[v.condition3] += 1
    assert verified == 300
    assert fwd == 300 and bwd == 300
    assert (c3[True], c3[False], c3[None]) == (184, 78, 38)


def test_condition3_failure_blocks_backward_inference():
    # g n-to-1 without condition (3) really does leave f undetermined:
    # the corpus contains many such squares where f is not n-to-1
    rng = random.Random(7)
    gap = 0
    for _ in range(400):
        d = random_diagram(rng, max_set=100)
        rep = verify_diagram(d)
        if not rep.ok:
            continue
        v = transfer(d, rep)
        if v.g_n_to_1 and v.condition3 is False and not v.f_n_to_1:
            gap += 1
    assert gap == 94
