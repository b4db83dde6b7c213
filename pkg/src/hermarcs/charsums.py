"""Additive characters, Gauss sums and the Weil sums

    R(A, B, C) = sum_{x in F_{q^l}} chi1(A x^(q^r+1) + B x + C)

evaluated two ways: by exact summation into Z[zeta_p], and in closed form
as a symbolic value  sign * i^j * zeta_p^k * q^(h/2).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .cyclo import CycloInt
from .gf import Field, LinearMap

__all__ = [
    "ClosedValue",
    "chi1",
    "closed_to_cyclo",
    "cyclo_index",
    "f_map",
    "gauss_eta",
    "gauss_eta_brute",
    "gauss_trivial",
    "gauss_trivial_brute",
    "jacobi_two",
    "weil_brute",
    "weil_closed",
]


def cyclo_index(p: int) -> int:
    """Index of the ring holding values of the canonical additive character."""
    return 2 if p == 2 else p


def closed_index(p: int) -> int:
    """Index of the ring holding closed-form values (needs i and sqrt(p))."""
    return 2 if p == 2 else 4 * p


def jacobi_two(v: int) -> int:
    """The Jacobi symbol (2/v) for odd v."""
    if v % 2 == 0:
        raise ValueError(f"(2/v) needs odd v, got {v}")
    return 1 if v % 8 in (1, 7) else -1


@dataclass(frozen=True)
class ClosedValue:
    """sign * i^i_pow * zeta_p^zeta_exp * q^(q_half_exp/2), or zero.

    ``branch`` records which formula produced the value and is ignored by
    equality.
    """

    zero: bool = False
    sign: int = 1
    i_pow: int = 0
    zeta_exp: int = 0
    q_half_exp: int = 0
    branch: str = field(default="", compare=False)

    @classmethod
    def zero_value(cls, branch: str = "") -> "ClosedValue":
        return cls(zero=True, branch=branch)

    def normalized(self, p: int) -> "ClosedValue":
        if self.zero:
            return ClosedValue(zero=True, branch=self.branch)
        i_pow, sign = self.i_pow % 4, self.sign
        if i_pow >= 2:
            i_pow, sign = i_pow - 2, -sign
        return ClosedValue(False, sign, i_pow, self.zeta_exp % p, self.q_half_exp, self.branch)

    def abs_sq(self, q: int) -> int:
        return 0 if self.zero else q**self.q_half_exp


# --- characters --------------------------------------------------------------

def chi1(F: Field, x) -> CycloInt:
    """Canonical additive character zeta_p^t(x) of F_{q^l}."""
    return CycloInt.from_exponents(cyclo_index(F.p), [0] * F.absolute_trace(x) + [1])


def _subfield_trace(F: Field, x):
    """Absolute trace F_q -> F_p of an element of the subfield F_q."""
    return F.trace_to(x, 1, source=F.n)


def gauss_eta(F: Field, Fe: int) -> ClosedValue:
    """G(eta, chi^F) = sum_{h in F_q^*} eta(h) chi(F h) over the subfield F_q.

    For p = 3 (mod 4) the factor written (-1)^(n/2) is taken as i^n.
    """
    if F.p == 2:
        raise ValueError("quadratic Gauss sums need odd characteristic")
    if Fe == 0:
        return ClosedValue.zero_value("gauss: F=0")
    eta = F.quadratic_character(Fe, F.q)
    sign = (-1) ** (F.n - 1) * eta
    if F.p % 4 == 1:
        return ClosedValue(False, sign, 0, 0, 1, "gauss: p=1 mod 4")
    return ClosedValue(False, sign, F.n % 4, 0, 1, "gauss: p=3 mod 4").normalized(F.p)


def gauss_eta_brute(F: Field, Fe: int) -> CycloInt:
    hs = F.base_elements[1:]
    eta = F.quadratic_character(hs, F.q)
    t = _subfield_trace(F, F.mul(Fe, hs))
    m = cyclo_index(F.p)
    counts = np.zeros(F.p, dtype=np.int64)
    np.add.at(counts, t, eta)
    return CycloInt.from_exponents(m, counts.tolist())


def gauss_trivial(F: Field, Fe: int) -> int:
    """sum_{h in F_q^*} chi(F h)."""
    return F.q - 1 if Fe == 0 else -1


def gauss_trivial_brute(F: Field, Fe: int) -> CycloInt:
    hs = F.base_elements[1:]
    t = _subfield_trace(F, F.mul(Fe, hs))
    return CycloInt.from_exponents(cyclo_index(F.p), np.bincount(t, minlength=F.p).tolist())


# --- Weil sums ---------------------------------------------------------------

def weil_brute(F: Field, A: int, B: int, C: int, r: int) -> CycloInt:
    """Exact sum of chi1(A x^(q^r+1) + B x + C) over the whole field."""
    xs = F.elements()
    e = F.q**r + 1
    v = F.add(F.add(F.mul(A, F.pow(xs, e)), F.mul(B, xs)), C)
    counts = np.bincount(F.absolute_trace(v), minlength=F.p)
    return CycloInt.from_exponents(cyclo_index(F.p), counts.tolist())


@functools.lru_cache(maxsize=4096)
def f_map(F: Field, a: int, r: int) -> LinearMap:
    """Matrix of f(x) = a^(q^r) x^(q^(2r)) + a x."""
    ar = F.qfrob(a, r)
    return F.linear_map(lambda xs: F.add(F.mul(ar, F.qfrob(xs, 2 * r)), F.mul(a, xs)))


def weil_closed(F: Field, a: int, b: int, c: int, r: int) -> ClosedValue:
    """Closed form of R(a, b, c) for a != 0, following the case table.

    Branches: l/u odd with p = 2 (reduction to a = 1 through the root a1 of
    x^(q^r+1) = a, then T_u(b) decides), l/u odd with p odd (b = 0 and
    b != 0 formulas), and l/u even (no solution / f permutation / f not a
    permutation).
    """
    if a == 0:
        raise ValueError("the closed form needs a != 0")
    p, n, ell = F.p, F.n, F.ell
    u = gcd(ell, r)
    e = F.q**r + 1
    tc = F.absolute_trace(c)

    if (ell // u) % 2 == 1:
        if p == 2:
            a1 = F.invert_exponent_solve(a, e)
            b1 = F.div(b, a1)
            if F.T_u(b1, u) != 1:
                return ClosedValue.zero_value("l/u odd, p=2, T_u(b)!=1")
            sol = f_map(F, 1, r).solve(F.sub(b1, 1))
            if sol is None:
                raise AssertionError("w^(q^2r) + w + 1 = b has no solution although T_u(b) = 1")
            w = sol.particular
            k = F.absolute_trace(F.add(F.pow(w, e), w)) + tc
            sign = jacobi_two(ell // u) ** (n * u)
            return ClosedValue(False, sign, 0, k % p, ell + u, "l/u odd, p=2, T_u(b)=1")
        eta_factor = (-1) ** (n * ell - 1)
        if b == 0:
            sign = eta_factor * F.quadratic_character(a)
            i_pow = (n * ell) % 4 if p % 4 == 3 else 0
            return ClosedValue(False, sign, i_pow, tc, ell, "l/u odd, p odd, b=0").normalized(p)
        sol = f_map(F, a, r).solve(F.neg(F.qfrob(b, r)))
        if sol is None or sol.kernel:
            raise AssertionError("f should be a permutation polynomial when l/u is odd and p is odd")
        x0 = sol.particular
        sign = eta_factor * F.quadratic_character(F.neg(a))
        i_pow = (3 * n * ell) % 4 if p % 4 == 3 else 0
        k = tc - F.absolute_trace(F.mul(a, F.pow(x0, e)))
        return ClosedValue(False, sign, i_pow, k % p, ell, "l/u odd, p odd, b!=0").normalized(p)

    fm = f_map(F, a, r)
    sol = fm.solve(F.neg(F.qfrob(b, r)))
    if sol is None:
        return ClosedValue.zero_value("l/u even, f(x)=-b^(q^r) unsolvable")
    x0 = sol.particular
    k = (tc - F.absolute_trace(F.mul(a, F.pow(x0, e)))) % p
    half = ell // (2 * u)
    if fm.is_permutation:
        return ClosedValue(False, (-1) ** half, 0, k, ell, "l/u even, f permutation")
    return ClosedValue(False, (-1) ** (half + 1), 0, k, ell + 2 * u, "l/u even, f not permutation")


@functools.lru_cache(maxsize=None)
def _sqrt_p(p: int) -> CycloInt:
    """sqrt(p) > 0 inside Z[zeta_4p], via the quadratic Gauss sum."""
    M = 4 * p
    g = CycloInt.from_exponents(M, [0] * M)
    for t in range(p):
        g = g + CycloInt.from_exponents(M, [0] * (4 * (t * t % p)) + [1])
    if p % 4 == 1:
        return g
    minus_i = CycloInt.from_exponents(M, [0] * (3 * p) + [1])
    return minus_i * g


def closed_to_cyclo(v: ClosedValue, F: Field) -> CycloInt:
    """Embed a closed value into Z[zeta_4p] (into Z for p = 2)."""
    p, n = F.p, F.n
    M = closed_index(p)
    if v.zero:
        return CycloInt.integer(M, 0)
    nh = n * v.q_half_exp
    if p == 2:
        if v.i_pow % 2 or nh % 2:
            raise ValueError("value is not a rational integer in characteristic 2")
        sign = v.sign * (-1) ** (v.i_pow // 2) * (-1) ** v.zeta_exp
        return CycloInt.integer(M, sign * 2 ** (nh // 2))
    unit = [0] * M
    unit[(p * v.i_pow + 4 * v.zeta_exp) % M] = v.sign
    out = CycloInt(M, unit) * p ** (nh // 2)
    if nh % 2:
        out = out * _sqrt_p(p)
    return out
