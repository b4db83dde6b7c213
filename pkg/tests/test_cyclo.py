import random

import pytest

from hermarcs.cyclo import CycloInt, cyclotomic_poly, zeta_pow


def rand_elem(m, rng):
    d = len(cyclotomic_poly(m)) - 1
    return CycloInt(m, [rng.randint(-5, 5) for _ in range(d)])


@pytest.mark.parametrize("p", [3, 5, 7])
def test_roots_of_unity_sum_to_zero(p):
    total = sum((zeta_pow(p, k) for k in range(p)), CycloInt.integer(p, 0))
    assert total == 0


def test_conj_and_norm():
    assert zeta_pow(5, 2).conj() == zeta_pow(5, 3)
    for m in (2, 3, 5, 12, 20):
        for k in range(m):
            assert zeta_pow(m, k).norm_sq() == 1


def test_phi_4p_relation():
    # zeta_12^3 = i, and i^2 = -1
    i = zeta_pow(12, 3)
    assert i * i == -1
    assert zeta_pow(12, 4) ** 3 == 1


def test_mixed_index_is_an_error():
    with pytest.raises(ValueError):
        zeta_pow(3, 1) + zeta_pow(5, 1)


def test_unsupported_index():
    with pytest.raises(ValueError):
        CycloInt(9, [1])


@pytest.mark.parametrize("m", [2, 3, 5, 7, 12, 20])
def test_ring_laws(m):
    rng = random.Random(m)
    for _ in range(1000):
        a, b, c = (rand_elem(m, rng) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a
        assert a - a == 0


@pytest.mark.parametrize("m", [3, 5, 12, 20])
def test_norm_matches_float(m):
    rng = random.Random(7)
    for _ in range(200):
        z = CycloInt.from_exponents(m, [rng.randint(0, 3) for _ in range(m)])
        exact = z.norm_sq().to_complex()
        assert abs(exact - abs(z.to_complex()) ** 2) < 1e-6


def test_embed_and_rational():
    z = zeta_pow(5, 1).embed(20)
    assert z == zeta_pow(20, 4)
    assert CycloInt.integer(7, 4).is_rational_integer() == 4
    assert zeta_pow(7, 1).is_rational_integer() is None
