"""Arithmetic in the tower F_p <= F_q <= F_{q^l}.

The big field is a single absolute extension F_p[X]/(modulus) of degree
m = n*l.  Subfields are the fixed fields of Frobenius powers, there is no
separate tower arithmetic.

Elements are plain ints: the coefficient vector (c_0, ..., c_{m-1}) in the
power basis is stored as the integer c_0 + c_1 p + ... + c_{m-1} p^{m-1}.
Zero is 0, one is 1, and ``range(Q)`` enumerates the field in the fixed
element order.  Every operation accepts either an int or a numpy integer
array and returns the same kind.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Field",
    "LinearMap",
    "LinearizedPoly",
    "find_irreducible",
    "is_irreducible",
    "is_prime",
]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# --- polynomials over F_p as ascending coefficient lists ------------------

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, f, p):
    a = _trim(list(a))
    df = len(f) - 1
    inv_lead = pow(f[-1], -1, p)
    while len(a) - 1 >= df:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - df
        for i, fi in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fi) % p
        _trim(a)
    return a


def _poly_mulmod(a, b, f, p):
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    return _poly_mod(prod, f, p)


def _poly_powmod(a, e, f, p):
    result = [1]
    a = _poly_mod(a, f, p)
    while e:
        if e & 1:
            result = _poly_mulmod(result, a, f, p)
        e >>= 1
        if e:
            a = _poly_mulmod(a, a, f, p)
    return result


def _poly_gcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_mod(a, b, p)
    return a


def is_irreducible(f, p: int) -> bool:
    """Rabin's test: x^(p^m) = x mod f and gcd(x^(p^(m/k)) - x, f) = 1."""
    f = _trim([c % p for c in f])
    m = len(f) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    x = [0, 1]

    def frob_x(k):
        # x^(p^k) mod f by repeated p-th powering
        r = x
        for _ in range(k):
            r = _poly_powmod(r, p, f, p)
        return r

    if _trim(frob_x(m)) != x:
        return False
    for k in prime_factors(m):
        h = frob_x(m // k)
        h = h + [0] * (2 - len(h))
        h[1] = (h[1] - 1) % p
        if len(_poly_gcd(f, _trim(h), p)) > 1:
            return False
    return True


@functools.lru_cache(maxsize=None)
def find_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Least monic irreducible polynomial of degree m over F_p.

    Candidates are ordered by the integer sum(c_i p^i) of their non-leading
    coefficients, the same order used for field elements.  Returns the
    ascending coefficient tuple including the leading 1.
    """
    if not is_prime(p):
        raise ValueError(f"p={p} is not prime")
    if m < 1:
        raise ValueError("degree must be >= 1")
    for code in range(p**m):
        coeffs = [(code // p**i) % p for i in range(m)] + [1]
        if m > 1 and coeffs[0] == 0:
            continue
        if is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise AssertionError("no irreducible polynomial found")  # unreachable


# --- the field -------------------------------------------------------------

def _is_scalar(x) -> bool:
    return np.ndim(x) == 0


def _out(x, res):
    return int(res) if _is_scalar(x) else res


class Field:
    """The field F_{q^l}, q = p^n, with F_q as a distinguished subfield.

    >>> F = Field(2, 1, 3)
    >>> F.modulus
    (1, 1, 0, 1)
    >>> F.mul(F.mul(2, 2), 2)  # t^3 = t + 1
    3
    """

    def __init__(self, p: int, n: int, ell: int, modulus=None):
        if not is_prime(p):
            raise ValueError(f"p={p} is not prime")
        if n < 1 or ell < 1:
            raise ValueError("n and ell must be positive")
        self.p, self.n, self.ell = p, n, ell
        self.m = n * ell
        self.q = p**n
        self.Q = p**self.m
        if modulus is None:
            modulus = find_irreducible(p, self.m)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != self.m + 1 or modulus[-1] != 1:
            raise ValueError(f"modulus must be monic of degree {self.m}")
        if not is_irreducible(list(modulus), p):
            raise ValueError("modulus is not irreducible")
        self.modulus = modulus
        self._build_tables()

    def __repr__(self):
        return f"Field(p={self.p}, n={self.n}, ell={self.ell})"

    def __eq__(self, other):
        return isinstance(other, Field) and self.spec() == other.spec()

    def __hash__(self):
        return hash((self.p, self.n, self.ell, self.modulus))

    def __reduce__(self):
        return (Field, (self.p, self.n, self.ell, self.modulus))

    # serialization ---------------------------------------------------------

    def spec(self) -> dict:
        return {"p": self.p, "n": self.n, "ell": self.ell, "modulus": list(self.modulus)}

    @classmethod
    def from_spec(cls, d: dict) -> "Field":
        return cls(d["p"], d["n"], d["ell"], d.get("modulus"))

    # element <-> coefficients ---------------------------------------------

    def to_coeffs(self, x: int) -> list[int]:
        x = int(x)
        return [(x // self.p**i) % self.p for i in range(self.m)]

    def from_coeffs(self, coeffs) -> int:
        coeffs = list(coeffs)
        if len(coeffs) > self.m:
            raise ValueError(f"expected at most {self.m} coefficients, got {len(coeffs)}")
        if any(not 0 <= c < self.p for c in coeffs):
            raise ValueError(f"coefficients must lie in [0, {self.p})")
        return sum(int(c) * self.p**i for i, c in enumerate(coeffs))

    def elements(self) -> np.ndarray:
        return np.arange(self.Q, dtype=np.int64)

    # tables ------------------------------------------------------------------

    def _slow_mul(self, x: int, y: int) -> int:
        prod = _poly_mulmod(self.to_coeffs(x), self.to_coeffs(y), list(self.modulus), self.p)
        return sum(c * self.p**i for i, c in enumerate(prod))

    def _find_generator(self) -> int:
        order = self.Q - 1
        if order == 1:
            return 1
        f = list(self.modulus)
        for g in range(2, self.Q):
            gc = self.to_coeffs(g)
            if all(
                _trim(_poly_powmod(gc, order // k, f, self.p)) != [1]
                for k in prime_factors(order)
            ):
                return g
        raise AssertionError("no generator found")  # unreachable

    def _build_tables(self):
        Q, p, m = self.Q, self.p, self.m
        g = self._find_generator()
        self.generator = g
        exp = np.zeros(Q - 1, dtype=np.int64)
        log = np.full(Q, -1, dtype=np.int64)
        x = 1
        if p == 2:
            # carry-less multiplication by g, reduced by the modulus bitmask
            modmask = sum(c << i for i, c in enumerate(self.modulus))
            for k in range(Q - 1):
                exp[k] = x
                log[x] = k
                acc, a, b = 0, x, g
                while b:
                    if b & 1:
                        acc ^= a
                    b >>= 1
                    a <<= 1
                    if a >> m:
                        a ^= modmask
                x = acc
        else:
            gcoef = self.to_coeffs(g)
            f = list(self.modulus)
            cur = [1]
            weights = [p**i for i in range(m)]
            for k in range(Q - 1):
                x = sum(c * w for c, w in zip(cur, weights))
                exp[k] = x
                log[x] = k
                cur = _poly_mulmod(cur, gcoef, f, p)
        if (log[1:] < 0).any():
            raise AssertionError("generator does not span the multiplicative group")
        self._exp = exp
        self._log = log
        if p != 2:
            self._weights = p ** np.arange(m, dtype=np.int64)
            self._digits = ((np.arange(Q, dtype=np.int64)[:, None] // self._weights) % p).astype(np.int16)

    # arithmetic --------------------------------------------------------------

    @functools.cached_property
    def _add_table(self):
        # full Q x Q table for small odd-characteristic fields, else None
        if self.p == 2 or self.Q > 1024:
            return None
        xs = np.arange(self.Q, dtype=np.int64)
        return np.stack([self._add_digits(x, xs) for x in xs]).astype(np.int32)

    def _add_digits(self, x, y):
        d = (self._digits[np.asarray(x)] + self._digits[np.asarray(y)]) % self.p
        return d @ self._weights

    def add(self, x, y):
        if self.p == 2:
            res = np.bitwise_xor(np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64))
        elif self._add_table is not None:
            res = self._add_table[np.asarray(x), np.asarray(y)].astype(np.int64)
        else:
            res = self._add_digits(x, y)
        return _out(x if _is_scalar(y) else y, res)

    @functools.cached_property
    def _neg_table(self):
        return (((-self._digits) % self.p) @ self._weights) if self.p != 2 else None

    def neg(self, x):
        if self.p == 2:
            return x
        return _out(x, self._neg_table[np.asarray(x)])

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def mul(self, x, y):
        xa = np.asarray(x, dtype=np.int64)
        ya = np.asarray(y, dtype=np.int64)
        lx, ly = self._log[xa], self._log[ya]
        res = np.where((lx < 0) | (ly < 0), 0, self._exp[(lx + ly) % (self.Q - 1)])
        return _out(x if _is_scalar(y) else y, res)

    def inv(self, x):
        xa = np.asarray(x, dtype=np.int64)
        if np.any(xa == 0):
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        return _out(x, self._exp[(-self._log[xa]) % (self.Q - 1)])

    def div(self, x, y):
        return self.mul(x, self.inv(y))

    def pow(self, x, e: int):
        """x^e by exponent arithmetic on discrete logs; 0^0 = 1."""
        e = int(e)
        xa = np.asarray(x, dtype=np.int64)
        if e < 0:
            return self.pow(self.inv(x), -e)
        if e == 0:
            return _out(x, np.ones_like(xa))
        lx = self._log[xa]
        k = (lx * (e % (self.Q - 1))) % (self.Q - 1)
        res = np.where(lx < 0, 0, self._exp[k])
        return _out(x, res)

    def frob(self, x, k: int = 1):
        """x^(p^k); k is taken modulo m."""
        return self.pow(x, pow(self.p, k % self.m, self.Q - 1) if self.Q > 2 else 1)

    def qfrob(self, x, k: int = 1):
        """x^(q^k) with k reduced modulo ell (pointwise identity on F_{q^l})."""
        return self.frob(x, self.n * k)

    # traces and characters ---------------------------------------------------

    def trace_to(self, x, d: int, source: int | None = None):
        """Trace from F_{p^source} (default: the whole field) down to F_{p^d}.

        Sums the Frobenius orbit x + x^(p^d) + x^(p^2d) + ...; x must lie in
        F_{p^source} when a source degree is given.
        """
        src = self.m if source is None else source
        if d < 1 or src % d or self.m % src:
            raise ValueError(f"degree {d} does not divide {src}")
        acc = x
        y = x
        for _ in range(src // d - 1):
            y = self.frob(y, d)
            acc = self.add(acc, y)
        return acc

    def T(self, x):
        """Trace F_{q^l} -> F_q."""
        if _is_scalar(x):
            return int(self.trace_table[int(x)])
        return self.trace_table[np.asarray(x)]

    def T_u(self, x, u: int):
        """Trace F_{q^l} -> F_{q^u}."""
        return self.trace_to(x, self.n * u)

    def absolute_trace(self, x):
        """Trace down to F_p, returned as the residue in [0, p)."""
        if _is_scalar(x):
            return int(self.abs_trace_table[int(x)])
        return self.abs_trace_table[np.asarray(x)]

    @functools.cached_property
    def trace_table(self) -> np.ndarray:
        return self.trace_to(self.elements(), self.n)

    @functools.cached_property
    def abs_trace_table(self) -> np.ndarray:
        # an element of F_p is encoded by its constant coefficient
        return self.trace_to(self.elements(), 1)

    def quadratic_character(self, x, order: int | None = None):
        """Quadratic character of the subfield of the given order (default Q).

        0 at 0, +1 on nonzero squares, -1 otherwise.  x must lie in that
        subfield.
        """
        if self.p == 2:
            raise ValueError("quadratic character is not defined in characteristic 2")
        order = self.Q if order is None else order
        r = self.pow(x, (order - 1) // 2)
        ra = np.asarray(r)
        res = np.where(ra == 0, 0, np.where(ra == 1, 1, -1))
        return _out(x, res)

    def in_subfield(self, x, d: int):
        """Whether x lies in F_{p^d}."""
        return self.frob(x, d) == x if _is_scalar(x) else np.asarray(self.frob(x, d)) == np.asarray(x)

    def subfield_elements(self, d: int) -> np.ndarray:
        """The elements of F_{p^d} in the field's element order."""
        if self.m % d:
            raise ValueError(f"{d} does not divide {self.m}")
        xs = self.elements()
        return xs[self.frob(xs, d) == xs]

    @functools.cached_property
    def base_elements(self) -> np.ndarray:
        return self.subfield_elements(self.n)

    def invert_exponent_solve(self, a, e: int):
        """The unique x with x^e = a, when gcd(e, Q-1) = 1."""
        from math import gcd

        if gcd(e, self.Q - 1) != 1:
            raise ValueError(f"gcd({e}, {self.Q - 1}) != 1: x^e is not a bijection")
        if np.any(np.asarray(a) == 0):
            raise ValueError("a must be nonzero")
        return self.pow(a, pow(e, -1, self.Q - 1) if self.Q > 2 else 1)

    # linear algebra ----------------------------------------------------------

    def linear_map(self, fn) -> "LinearMap":
        """Matrix of an F_p-linear map fn (vectorized callable on elements)."""
        basis = self.p ** np.arange(self.m, dtype=np.int64)
        images = np.asarray(fn(basis), dtype=np.int64)
        cols = [self.to_coeffs(v) for v in images]
        mat = [[cols[j][i] for j in range(self.m)] for i in range(self.m)]
        return LinearMap(self, mat)

    def solve_linearized(self, L, rhs: int):
        """Solutions of L(x) = rhs, or None.  L is a LinearizedPoly or callable."""
        lm = L.linear_map(self) if isinstance(L, LinearizedPoly) else self.linear_map(L)
        return lm.solve(rhs)

    def is_permutation(self, L) -> bool:
        lm = L.linear_map(self) if isinstance(L, LinearizedPoly) else self.linear_map(L)
        return lm.is_permutation


def _rref(rows, p, col_order):
    """Row-reduce a list of rows mod p, pivoting columns in col_order.

    Returns (reduced rows, pivot columns); rows are modified in place.
    """
    pivots = []
    r = 0
    for c in col_order:
        piv = next((i for i in range(r, len(rows)) if rows[i][c] % p), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [v * inv % p for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                k = rows[i][c]
                rows[i] = [(a - k * b) % p for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


@dataclass(frozen=True)
class LinearSolution:
    """particular + span(kernel); particular is the least element of the coset."""

    particular: int
    kernel: tuple[int, ...]
    p: int

    @property
    def size(self) -> int:
        return self.p ** len(self.kernel)


class LinearMap:
    """An F_p-linear endomorphism of F_{p^m} as an m x m matrix over F_p.

    Column j holds the coordinates of the image of the j-th basis element.
    Elimination is done once; ``solve`` is then cheap for many right-hand
    sides.
    """

    def __init__(self, field: Field, matrix):
        self.field = field
        p, m = field.p, field.m
        self.matrix = [list(r) for r in matrix]
        aug = [list(self.matrix[i]) + [int(i == j) for j in range(m)] for i in range(m)]
        red, pivots = _rref(aug, p, range(m))
        self._red = [row[:m] for row in red]
        self._transform = [row[m:] for row in red]
        self._pivots = pivots
        self.rank = len(pivots)
        free = [c for c in range(m) if c not in pivots]
        kern = []
        for fc in free:
            v = [0] * m
            v[fc] = 1
            for i, pc in enumerate(pivots):
                v[pc] = (-self._red[i][fc]) % p
            kern.append(v)
        # pivot on the most significant coordinates so the particular
        # solution can be pushed down to the coset minimum
        kern, kpiv = _rref(kern, p, range(m - 1, -1, -1)) if kern else ([], [])
        self._kernel_rows = kern[: len(kpiv)]
        self._kernel_pivots = kpiv
        self.kernel = tuple(field.from_coeffs(v) for v in self._kernel_rows)

    @property
    def is_permutation(self) -> bool:
        return self.rank == self.field.m

    def solve(self, rhs: int) -> LinearSolution | None:
        F = self.field
        p, m = F.p, F.m
        b = F.to_coeffs(rhs)
        y = [sum(t * v for t, v in zip(row, b)) % p for row in self._transform]
        if any(y[i] for i in range(self.rank, m)):
            return None
        x = [0] * m
        for i, pc in enumerate(self._pivots):
            x[pc] = y[i]
        for row, pc in zip(self._kernel_rows, self._kernel_pivots):
            k = x[pc]
            if k:
                x = [(a - k * r) % p for a, r in zip(x, row)]
        return LinearSolution(F.from_coeffs(x), self.kernel, p)


@dataclass
class LinearizedPoly:
    """L(x) = sum_i coeffs[i] * x^(q^i), i = 0 .. ell-1."""

    coeffs: list = field(default_factory=list)

    @classmethod
    def from_terms(cls, F: Field, terms) -> "LinearizedPoly":
        """Build from (q-exponent, coefficient) pairs.

        Exponents >= ell wrap modulo ell, since x^(q^ell) = x on F_{q^ell};
        coinciding terms are added.
        """
        out = [0] * F.ell
        for k, c in terms:
            out[k % F.ell] = F.add(out[k % F.ell], int(c))
        return cls(out)

    def __call__(self, F: Field, x):
        acc = 0 if _is_scalar(x) else np.zeros(np.shape(x), dtype=np.int64)
        for k, c in enumerate(self.coeffs):
            if c:
                acc = F.add(acc, F.mul(c, F.qfrob(x, k)))
        return acc

    def linear_map(self, F: Field) -> LinearMap:
        return F.linear_map(lambda xs: self(F, xs))


def enumerate_field(F: Field):
    """Yield all elements of F in the fixed order (0, 1, ...)."""
    return iter(range(F.Q))

