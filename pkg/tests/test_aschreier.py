import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import field
from hermarcs.aschreier import (
    CurveParams,
    classify,
    count_brute,
    count_brute_linearized,
    count_closed,
    count_literal,
    genus,
    hasse_weil_interval,
    reduce_linearized,
    sweep,
    witnesses,
)
from hermarcs.charsums import f_map
from hermarcs.gf import LinearizedPoly

PARAMS = [(2, 1, 3, 1), (2, 1, 3, 2), (3, 1, 2, 0), (3, 1, 2, 1), (3, 1, 3, 2), (3, 1, 4, 1),
          (2, 1, 4, 3), (5, 1, 2, 1), (5, 1, 2, 0), (2, 2, 2, 1), (3, 2, 2, 0)]


def cp(pnl, r, a, b=0, c=0):
    return CurveParams(field(*pnl), r, a, b, c)


def test_params_validation():
    with pytest.raises(ValueError):
        cp((2, 1, 3), 2, 0)
    with pytest.raises(ValueError):
        cp((2, 1, 3), -1, 1)
    with pytest.raises(ValueError):
        cp((2, 1, 3), 2, 9)
    assert cp((3, 1, 2), 0, 1).u == 2


@pytest.mark.parametrize(
    "pnl,r,a,b,c,N",
    [((2, 1, 3), 2, 1, 0, 0, 8), ((2, 1, 3), 2, 1, 1, 0, 4), ((3, 1, 2), 0, 1, 0, 0, 15),
     ((2, 1, 3), 2, 1, 1, 1, 12)],
)
def test_count_examples(pnl, r, a, b, c, N):
    P = cp(pnl, r, a, b, c)
    assert count_brute(P) == N
    assert count_closed(P) == N
    assert count_literal(P) == N


def test_trace_condition_outside_fq_gives_q_to_the_l():
    F = field(2, 1, 3)
    for b in range(F.Q):
        if F.T(b) == 0:
            for c in range(F.Q):
                assert count_closed(CurveParams(F, 2, 1, b, c)) == F.Q


@pytest.mark.parametrize("pnlr", PARAMS)
def test_closed_equals_brute_everywhere(pnlr):
    F = field(*pnlr[:3])
    res = sweep(F, pnlr[3])
    assert res["match"], res["mismatches"][:5]


@pytest.mark.parametrize("pnlr", PARAMS)
def test_count_structure(pnlr):
    p, n, ell, r = pnlr
    F = field(p, n, ell)
    rng = random.Random(3)
    try:
        g = genus(F.q, r)
    except ValueError:
        g = None
    for _ in range(100):
        P = CurveParams(F, r, rng.randrange(1, F.Q), rng.randrange(F.Q), rng.randrange(F.Q))
        N = count_closed(P)
        assert N % F.q == 0 and N >= 0
        if g is not None:
            lo, hi = hasse_weil_interval(F.q, ell, g)
            assert lo <= N + 1 <= hi


def test_genus_and_hasse_weil():
    assert genus(3, 0) == 1 and genus(2, 1) == 1 and genus(5, 2) == 50
    assert hasse_weil_interval(2, 3, 0) == (9, 9)
    assert hasse_weil_interval(3, 2, 1) == (4, 16)
    assert hasse_weil_interval(2, 4, 2) == (1, 33)
    assert hasse_weil_interval(2, 3, 1) == (9 - 5, 9 + 5)  # floor(2 sqrt 8) = 5
    with pytest.raises(ValueError):
        genus(2, 0)


def test_hermitian_example_is_maximal():
    v = classify(cp((3, 1, 2), 0, 1))
    assert v.verdict == "Maximal" and v.N_closed + 1 == 16 and v.consistent


def test_nonsquare_gives_minimal():
    F = field(3, 1, 2)
    v = classify(CurveParams(F, 0, F.generator))
    assert v.verdict == "Minimal" and v.N_closed + 1 == 4 and v.consistent


def test_odd_degree_is_neither():
    F = field(2, 1, 3)
    for a in range(1, 8):
        assert classify(CurveParams(F, 2, a, 1, 0)).verdict == "Neither"


@pytest.mark.parametrize("pnlr", PARAMS)
def test_classify_agrees_with_count(pnlr):
    F = field(*pnlr[:3])
    rng = random.Random(5)
    for _ in range(80):
        v = classify(CurveParams(F, pnlr[3], rng.randrange(1, F.Q), rng.randrange(F.Q), rng.randrange(F.Q)))
        assert v.consistent


def test_witnesses_satisfy_their_equations():
    F = field(2, 1, 3)
    for a in range(1, 8):
        for b in range(8):
            w = witnesses(CurveParams(F, 2, a, b, 3))
            assert F.pow(w.a1, 5) == a
            if w.omega is not None:
                b1 = F.div(b, w.a1)
                tu = F.T(b1)
                assert F.add(F.add(F.qfrob(w.omega, 4), w.omega), 1) == F.div(b1, tu)
    F = field(3, 1, 4)
    for a in (1, 2, 7):
        for b in (0, 5, 40):
            w = witnesses(CurveParams(F, 1, a, b, 4))
            fm = f_map(F, a, 1)
            assert w.f_is_perm == fm.is_permutation
            if w.x0 is not None:
                lhs = F.add(F.mul(F.qfrob(a, 1), F.qfrob(w.x0, 2)), F.mul(a, w.x0))
                assert lhs == F.neg(F.qfrob(b, 1))
                assert w.c1 == F.sub(F.mul(a, F.pow(w.x0, 4)), 4)


def test_reduce_linearized_examples():
    F = field(2, 1, 3)
    assert reduce_linearized(F, 1, LinearizedPoly([5, 0, 0]), 0, 2).b == 5
    assert reduce_linearized(F, 1, LinearizedPoly([0, 0, 0]), 0, 2).b == 0
    L = LinearizedPoly.from_terms(F, [(1, 1)])
    P = reduce_linearized(F, 1, L, 0, 2)
    assert P.b == 1
    assert count_brute(P) == count_brute_linearized(F, 1, L, 0, 2)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([(2, 1, 3, 2), (3, 1, 3, 2), (2, 1, 4, 3), (2, 2, 3, 2), (5, 1, 3, 2), (2, 1, 10, 3)]),
       st.lists(st.integers(0, 2**20), min_size=1, max_size=10),
       st.integers(1, 2**20), st.integers(0, 2**20))
def test_reduce_linearized_preserves_count(pnlr, bs, a, c):
    F = field(*pnlr[:3])
    a = a % (F.Q - 1) + 1
    L = LinearizedPoly([x % F.Q for x in bs][: F.ell])
    P = reduce_linearized(F, a, L, c % F.Q, pnlr[3])
    assert count_brute(P) == count_brute_linearized(F, a, L, c % F.Q, pnlr[3])


def test_sweep_sampled_is_seeded():
    F = field(5, 1, 3)
    r1 = sweep(F, 2, sample=200, seed=4)
    r2 = sweep(F, 2, sample=200, seed=4, workers=2)
    assert r1 == r2 and r1["match"] and r1["checked"] == 200
