import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import field
from hermarcs.gf import (
    Field,
    LinearizedPoly,
    enumerate_field,
    find_irreducible,
    is_irreducible,
)

FIELDS = [(2, 1, 3), (2, 1, 4), (2, 2, 3), (3, 1, 2), (3, 1, 3), (3, 1, 4), (5, 1, 3), (2, 1, 6), (3, 2, 2)]


@pytest.mark.parametrize(
    "p,m,expected",
    [(2, 3, (1, 1, 0, 1)), (3, 1, (0, 1)), (3, 2, (1, 0, 1)), (2, 4, (1, 1, 0, 0, 1))],
)
def test_find_irreducible(p, m, expected):
    assert find_irreducible(p, m) == expected


@pytest.mark.parametrize("p,m", [(2, 3), (2, 4), (3, 2), (3, 3), (5, 2)])
def test_find_irreducible_is_least(p, m):
    # candidates ordered by sum c_i p^i, the element order
    cands = (tuple(reversed(c)) for c in itertools.product(range(p), repeat=m))
    first = next(c + (1,) for c in cands if c[0] and is_irreducible(list(c) + [1], p))
    assert find_irreducible(p, m) == first


def test_rejects_bad_parameters():
    with pytest.raises(ValueError):
        Field(4, 1, 2)
    with pytest.raises(ValueError):
        Field(2, 1, 3, modulus=(1, 0, 0, 1))  # x^3 + 1 = (x + 1)(x^2 + x + 1)


def test_f8_examples(F8):
    t = 2
    assert F8.mul(F8.mul(t, t), t) == 3  # t + 1
    assert F8.inv(1) == 1
    assert F8.T(0) == 0
    assert F8.T(t) == 0
    assert F8.T(1) == 1
    with pytest.raises(ZeroDivisionError):
        F8.inv(0)


def test_f9_traces(F9):
    i = 3  # the class of x, with x^2 = -1
    assert F9.mul(i, i) == F9.neg(1)
    assert F9.absolute_trace(i) == 0
    assert F9.absolute_trace(1) == 2
    assert F9.absolute_trace(0) == 0


def test_quadratic_character(F9):
    assert F9.quadratic_character(1) == 1
    assert F9.quadratic_character(0) == 0
    assert F9.quadratic_character(F9.generator) == -1
    with pytest.raises(ValueError):
        field(2, 1, 3).quadratic_character(1)


def test_enumeration_order(F8):
    els = list(enumerate_field(F8))
    assert els[:2] == [0, 1] and len(els) == 8


def test_invert_exponent_solve(F8):
    for a in range(1, 8):
        x = F8.invert_exponent_solve(a, 5)
        assert x == F8.pow(a, 3) and F8.pow(x, 5) == a
        assert F8.invert_exponent_solve(a, 1) == a
    assert F8.invert_exponent_solve(1, 5) == 1
    with pytest.raises(ValueError):
        field(2, 1, 4).invert_exponent_solve(3, 3)  # gcd(3, 15) = 3
    with pytest.raises(ValueError):
        F8.invert_exponent_solve(0, 5)


def test_coefficient_roundtrip():
    F = field(3, 1, 3)
    for x in range(F.Q):
        assert F.from_coeffs(F.to_coeffs(x)) == x
    with pytest.raises(ValueError):
        F.from_coeffs([3, 0, 0])


@pytest.mark.parametrize("pnl", FIELDS)
def test_tables_match_schoolbook(pnl):
    F = field(*pnl)
    rng = np.random.default_rng(0)
    xs, ys = rng.integers(0, F.Q, 200), rng.integers(0, F.Q, 200)
    for x, y in zip(xs, ys):
        assert F.mul(int(x), int(y)) == F._slow_mul(int(x), int(y))
    assert np.array_equal(F.mul(xs, ys), [F._slow_mul(int(x), int(y)) for x, y in zip(xs, ys)])


@pytest.mark.parametrize("pnl", FIELDS)
def test_frobenius_is_a_ring_map(pnl):
    F = field(*pnl)
    rng = np.random.default_rng(1)
    x, y = rng.integers(0, F.Q, 1000), rng.integers(0, F.Q, 1000)
    assert np.array_equal(F.frob(F.add(x, y)), F.add(F.frob(x), F.frob(y)))
    assert np.array_equal(F.frob(F.mul(x, y)), F.mul(F.frob(x), F.frob(y)))
    assert np.array_equal(F.pow(F.elements(), F.Q), F.elements())


@pytest.mark.parametrize("pnl", FIELDS)
def test_trace_transitivity_and_fibres(pnl):
    F = field(*pnl)
    xs = F.elements()
    T = F.T(xs)
    assert np.all(F.in_subfield(T, F.n))
    down = F.trace_to(T, 1, source=F.n)
    assert np.array_equal(down, F.absolute_trace(xs))
    counts = np.bincount(T, minlength=F.Q)[F.base_elements]
    assert np.all(counts == F.Q // F.q)


@pytest.mark.parametrize("pnl", [(3, 1, 2), (3, 1, 3), (3, 1, 4), (5, 1, 2), (3, 2, 2)])
def test_eta_multiplicative(pnl):
    F = field(*pnl)
    nz = F.elements()[1:]
    eta = F.quadratic_character(nz)
    prod = F.quadratic_character(F.mul(nz[:, None], nz[None, :]))
    assert np.array_equal(prod, eta[:, None] * eta[None, :])


def test_trace_to_rejects_non_divisor():
    with pytest.raises(ValueError):
        field(2, 1, 4).trace_to(3, 3)


def test_solve_identity(F8):
    sol = F8.solve_linearized(lambda x: x, 5)
    assert sol.particular == 5 and sol.kernel == ()


def test_kernel_of_x4_plus_x_on_f16():
    F = field(2, 1, 4)
    L = LinearizedPoly.from_terms(F, [(6, 1), (0, 1)])  # x^(q^6) + x = x^4 + x on F_16
    sol = F.solve_linearized(L, 0)
    assert sol.size == 4
    assert set(L(F, F.elements()).tolist()).__len__() == 4
    kern = {x for x in range(F.Q) if L(F, x) == 0}
    assert kern == set(F.subfield_elements(2).tolist())
    assert not F.is_permutation(L)


def test_scalar_map_on_f9(F9):
    b = 5
    sol = F9.solve_linearized(lambda x: F9.mul(2, x), F9.neg(b))
    assert sol.particular == F9.mul(F9.neg(b), F9.inv(2)) and sol.size == 1


def test_permutation_examples():
    for p, ell in [(3, 3), (5, 3), (3, 5)]:
        F = field(p, 1, ell)
        assert F.is_permutation(LinearizedPoly.from_terms(F, [(4, 1), (0, 1)]))
    F = field(2, 1, 5)
    assert not F.is_permutation(LinearizedPoly.from_terms(F, [(6, 1), (0, 1)]))
    assert F.is_permutation(lambda x: x)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(FIELDS[:7]), st.lists(st.integers(0, 10**6), min_size=1, max_size=4),
       st.integers(0, 10**6))
def test_linear_solutions_verify(pnl, coeff_seeds, rhs_seed):
    F = field(*pnl)
    L = LinearizedPoly([s % F.Q for s in coeff_seeds][: F.ell])
    rhs = rhs_seed % F.Q
    sol = F.solve_linearized(L, rhs)
    image = L(F, F.elements())
    if sol is None:
        assert rhs not in set(image.tolist())
        return
    assert L(F, sol.particular) == rhs
    assert all(L(F, k) == 0 for k in sol.kernel)
    preimage = np.nonzero(image == rhs)[0]
    assert sol.size == len(preimage)
    assert sol.particular == preimage.min()
    assert F.is_permutation(L) == (len(set(image.tolist())) == F.Q)


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(FIELDS), st.integers(0, 10**9), st.integers(0, 10**9))
def test_linearized_additive(pnl, x, y):
    F = field(*pnl)
    L = LinearizedPoly.from_terms(F, [(1, 3 % F.Q), (2, 1)])
    x, y = x % F.Q, y % F.Q
    assert L(F, F.add(x, y)) == F.add(L(F, x), L(F, y))


def test_field_spec_roundtrip_and_pickle():
    import pickle

    F = field(3, 2, 2)
    assert Field.from_spec(F.spec()) == F
    assert pickle.loads(pickle.dumps(F)) == F
