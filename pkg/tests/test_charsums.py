import random

import numpy as np
import pytest

from conftest import field
from hermarcs.charsums import (
    ClosedValue,
    _sqrt_p,
    chi1,
    closed_index,
    closed_to_cyclo,
    gauss_eta,
    gauss_eta_brute,
    gauss_trivial,
    gauss_trivial_brute,
    jacobi_two,
    weil_brute,
    weil_closed,
)
from hermarcs.cyclo import CycloInt


def test_chi1_examples(F8):
    assert chi1(F8, 0) == 1
    assert chi1(F8, 1) == -1


@pytest.mark.parametrize("pnl", [(2, 1, 3), (2, 1, 4), (3, 1, 2), (3, 1, 3), (5, 1, 2), (2, 2, 3)])
def test_character_orthogonality(pnl):
    F = field(*pnl)
    total = CycloInt.integer(chi1(F, 0).m, 0)
    for x in range(F.Q):
        total = total + chi1(F, x)
    assert total == 0


def test_jacobi_two():
    assert [jacobi_two(v) for v in (1, 3, 5, 7, 9)] == [1, -1, -1, 1, 1]
    with pytest.raises(ValueError):
        jacobi_two(4)


@pytest.mark.parametrize("pnl", [(3, 1, 2), (5, 1, 2), (7, 1, 2), (3, 2, 2), (5, 2, 2), (3, 3, 2)])
def test_gauss_eta_matches_brute(pnl):
    F = field(*pnl)
    M = closed_index(F.p)
    for Fe in F.base_elements:
        v = gauss_eta(F, int(Fe))
        assert closed_to_cyclo(v, F) == gauss_eta_brute(F, int(Fe)).embed(M)


def test_gauss_eta_examples():
    F = field(5, 1, 2)
    assert gauss_eta(F, 0).zero
    v = gauss_eta(F, 1)
    assert (v.sign, v.i_pow, v.q_half_exp) == (1, 0, 1)
    F3 = field(3, 1, 2)
    assert gauss_eta_brute(F3, 1).norm_sq() == 3
    with pytest.raises(ValueError):
        gauss_eta(field(2, 1, 3), 1)


@pytest.mark.parametrize("pnl", [(2, 1, 3), (2, 3, 2), (2, 2, 2), (3, 1, 2), (3, 2, 2)])
def test_gauss_trivial(pnl):
    F = field(*pnl)
    assert gauss_trivial(F, 0) == F.q - 1
    for Fe in F.base_elements:
        assert gauss_trivial_brute(F, int(Fe)) == gauss_trivial(F, int(Fe))


def test_sqrt_p_squares_to_p():
    for p in (3, 5, 7, 11, 13):
        assert _sqrt_p(p) ** 2 == p


def test_closed_to_cyclo_examples():
    F = field(3, 1, 2)
    assert closed_to_cyclo(ClosedValue.zero_value(), F) == 0
    assert closed_to_cyclo(ClosedValue(False, 1, 0, 0, 2), F) == 3
    assert closed_to_cyclo(ClosedValue(False, -1, 2, 0, 1), F) ** 2 == 3


def test_weil_brute_degenerate(F8):
    for C in range(8):
        assert weil_brute(F8, 0, 0, C, 2) == chi1(F8, C) * 8
        for B in range(1, 8):
            assert weil_brute(F8, 0, B, C, 2) == 0


@pytest.mark.parametrize(
    "pnlr",
    [(2, 1, 3, 1), (2, 1, 3, 2), (2, 2, 3, 2), (3, 1, 3, 2), (3, 1, 2, 1), (3, 1, 2, 0),
     (3, 1, 4, 1), (3, 1, 4, 2), (2, 1, 4, 3), (2, 1, 4, 2), (5, 1, 2, 1), (5, 1, 3, 1)],
)
def test_weil_closed_matches_brute(pnlr):
    p, n, ell, r = pnlr
    F = field(p, n, ell)
    M = closed_index(p)
    u = np.gcd(ell, r)
    mags = {0, F.Q, F.Q * F.q**u, F.Q * F.q ** (2 * u)}
    rng = random.Random(hash(pnlr))
    for _ in range(120):
        a, b, c = rng.randrange(1, F.Q), rng.randrange(F.Q), rng.randrange(F.Q)
        v = weil_closed(F, a, b, c, r)
        brute = weil_brute(F, a, b, c, r)
        assert closed_to_cyclo(v, F) == brute.embed(M), (a, b, c, v)
        assert brute.norm_sq().is_rational_integer() in mags
        assert v.abs_sq(F.q) == brute.norm_sq().is_rational_integer()


def test_weil_closed_zero_branches():
    F = field(2, 1, 4)  # r = 3: u = 1, l/u = 4
    found = False
    for b in range(F.Q):
        v = weil_closed(F, 1, b, 0, 3)
        if v.zero:
            found = True
            assert weil_brute(F, 1, b, 0, 3) == 0
    assert found
    F = field(2, 1, 3)
    for b in range(8):
        if F.T(b) != 1:
            assert weil_closed(F, 1, b, 0, 2).zero
    with pytest.raises(ValueError):
        weil_closed(F, 0, 1, 0, 2)


def test_weil_f9_hermitian_branch():
    F = field(3, 1, 2)
    v = weil_closed(F, 1, 0, 0, 1)
    assert closed_to_cyclo(v, F) == weil_brute(F, 1, 0, 0, 1).embed(12)
