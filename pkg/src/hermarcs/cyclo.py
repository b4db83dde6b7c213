"""Exact arithmetic in Z[zeta_m] for m = 2, an odd prime p, or 4p.

Elements are integer coefficient vectors in the basis 1, zeta, ...,
zeta^(phi(m)-1), reduced modulo the cyclotomic polynomial, so equality of
values is equality of vectors.
"""

from __future__ import annotations

import cmath
import functools

from .gf import is_prime

__all__ = ["CycloInt", "cyclotomic_poly", "zeta_pow"]


@functools.lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple[int, ...]:
    """Ascending coefficients of Phi_m for the supported indices."""
    if m == 2:
        return (1, 1)
    if is_prime(m) and m > 2:
        return (1,) * m
    if m % 4 == 0 and is_prime(m // 4) and m // 4 > 2:
        p = m // 4
        # Phi_4p(x) = Phi_p(-x^2)
        out = [0] * (2 * (p - 1) + 1)
        for k in range(p):
            out[2 * k] = (-1) ** k
        return tuple(out)
    raise ValueError(f"unsupported cyclotomic index m={m}; use 2, p or 4p with p an odd prime")


def _reduce(vec, m):
    """Reduce an integer polynomial (ascending) modulo Phi_m."""
    phi = cyclotomic_poly(m)
    d = len(phi) - 1
    a = list(vec)
    for top in range(len(a) - 1, d - 1, -1):
        c = a[top]
        if c:
            shift = top - d
            for i, f in enumerate(phi):
                a[shift + i] -= c * f
    a = a[:d] + [0] * (d - len(a))
    return tuple(a)


class CycloInt:
    """An element of Z[zeta_m]; immutable."""

    __slots__ = ("m", "coeffs")

    def __init__(self, m: int, coeffs=()):
        d = len(cyclotomic_poly(m)) - 1
        coeffs = [int(c) for c in coeffs]
        self.m = m
        self.coeffs = _reduce(coeffs, m) if len(coeffs) != d else tuple(coeffs)

    @classmethod
    def from_exponents(cls, m: int, counts) -> "CycloInt":
        """sum_k counts[k] * zeta^k for k = 0 .. len(counts)-1 (taken mod m)."""
        full = [0] * m
        for k, c in enumerate(counts):
            full[k % m] += int(c)
        return cls(m, full)

    @classmethod
    def integer(cls, m: int, v: int) -> "CycloInt":
        return cls(m, [v])

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def _check(self, other):
        if isinstance(other, int):
            return CycloInt.integer(self.m, other)
        if not isinstance(other, CycloInt):
            return NotImplemented
        if other.m != self.m:
            raise ValueError(f"mixed cyclotomic indices {self.m} and {other.m}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return CycloInt(self.m, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycloInt(self.m, [-a for a in self.coeffs])

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        prod = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        return CycloInt(self.m, prod)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = CycloInt.integer(self.m, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = CycloInt.integer(self.m, other)
        if not isinstance(other, CycloInt):
            return NotImplemented
        return self.m == other.m and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.m, self.coeffs))

    def conj(self) -> "CycloInt":
        """Complex conjugate: zeta -> zeta^(-1)."""
        full = [0] * self.m
        for j, c in enumerate(self.coeffs):
            full[(-j) % self.m] += c
        return CycloInt(self.m, full)

    def norm_sq(self) -> "CycloInt":
        return self * self.conj()

    def is_rational_integer(self) -> int | None:
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0]

    def embed(self, m: int) -> "CycloInt":
        """Image in Z[zeta_m] for m a multiple of self.m (zeta -> zeta_m^(m/self.m))."""
        if m == self.m:
            return self
        if m % self.m:
            raise ValueError(f"cannot embed Z[zeta_{self.m}] into Z[zeta_{m}]")
        step = m // self.m
        full = [0] * m
        for j, c in enumerate(self.coeffs):
            full[(j * step) % m] += c
        return CycloInt(m, full)

    def to_complex(self) -> complex:
        return sum(c * cmath.exp(2j * cmath.pi * k / self.m) for k, c in enumerate(self.coeffs))

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
                if mono and c == 1:
                    terms.append(mono)
                elif mono and c == -1:
                    terms.append("-" + mono)
                else:
                    terms.append(f"{c}{'*' + mono if mono else ''}")
        body = " + ".join(terms).replace("+ -", "- ") if terms else "0"
        return f"CycloInt[{self.m}]({body})"


def zeta_pow(m: int, k: int) -> CycloInt:
    full = [0] * m
    full[k % m] = 1
    return CycloInt(m, full)
