"""Affine point counts N(a, b, c) of  y^q - y = a x^(q^r+1) + b x + c  over F_{q^l}.

``count_brute`` counts directly: y -> y^q - y maps F_{q^l} onto the kernel
of the trace T with fibres of size q, so N = q * #{x : T(g(x)) = 0}.
``count_closed`` evaluates the closed formulas, dispatching on the parity
of l/u (u = gcd(l, r)), on p, and on the linear map
f(x) = a^(q^r) x^(q^(2r)) + a x.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from math import gcd, isqrt

import numpy as np

from .charsums import f_map, jacobi_two
from .gf import Field, LinearizedPoly

__all__ = [
    "ClosedCount",
    "CurveParams",
    "MaximalityVerdict",
    "WitnessBundle",
    "classify",
    "classify_all_c",
    "closed_count",
    "count_brute",
    "count_brute_all_c",
    "count_brute_linearized",
    "count_closed",
    "count_literal",
    "genus",
    "hasse_weil_interval",
    "reduce_linearized",
    "sweep",
]


@dataclass(frozen=True)
class CurveParams:
    field: Field
    r: int
    a: int
    b: int = 0
    c: int = 0

    def __post_init__(self):
        if self.a == 0:
            raise ValueError("a must be nonzero")
        if self.r < 0:
            raise ValueError("r must be >= 0")
        if self.field.ell < 2:
            raise ValueError("ell must be >= 2")
        for name in ("a", "b", "c"):
            v = getattr(self, name)
            if not 0 <= v < self.field.Q:
                raise ValueError(f"{name}={v} is not an element of F_{self.field.Q}")

    @property
    def u(self) -> int:
        # gcd(l, 0) = l
        return gcd(self.field.ell, self.r)

    @property
    def exponent(self) -> int:
        return self.field.q**self.r + 1

    def to_dict(self) -> dict:
        return {"r": self.r, "u": self.u, "a": self.a, "b": self.b, "c": self.c}


@dataclass
class WitnessBundle:
    a1: int | None = None
    omega: int | None = None
    x0: int | None = None
    c1: int | None = None
    f_is_perm: bool = False


# --- brute force ---------------------------------------------------------------

def _g_values(F: Field, a, b, r, xs):
    return F.add(F.mul(a, F.pow(xs, F.q**r + 1)), F.mul(b, xs))


def count_brute(params: CurveParams) -> int:
    F = params.field
    v = F.add(_g_values(F, params.a, params.b, params.r, F.elements()), params.c)
    return F.q * int(np.count_nonzero(F.T(v) == 0))


def count_brute_all_c(F: Field, a: int, b: int, r: int, cs=None) -> np.ndarray:
    """count_brute for fixed (a, b) and every c in cs (default: all of F)."""
    cs = F.elements() if cs is None else np.asarray(cs, dtype=np.int64)
    v = _g_values(F, a, b, r, F.elements())
    out = np.empty(len(cs), dtype=np.int64)
    step = max(1, (1 << 20) // F.Q)
    for s in range(0, len(cs), step):
        blk = F.add(v[None, :], cs[s : s + step, None])
        out[s : s + step] = np.count_nonzero(F.T(blk) == 0, axis=1)
    return F.q * out


def count_brute_linearized(F: Field, a: int, L: LinearizedPoly, c: int, r: int) -> int:
    """Brute count for y^q - y = a x^(q^r+1) + L(x) + c."""
    xs = F.elements()
    v = F.add(F.add(F.mul(a, F.pow(xs, F.q**r + 1)), L(F, xs)), c)
    return F.q * int(np.count_nonzero(F.T(v) == 0))


def count_literal(params: CurveParams) -> int:
    """#{(x, y) : y^q - y = g(x)} by tabulating y^q - y; small fields only."""
    F = params.field
    ys = F.elements()
    as_image = np.bincount(F.sub(F.pow(ys, F.q), ys), minlength=F.Q)
    g = F.add(_g_values(F, params.a, params.b, params.r, F.elements()), params.c)
    return int(as_image[g].sum())


def reduce_linearized(F: Field, a: int, L: LinearizedPoly, c: int, r: int) -> CurveParams:
    """Replace L(x) by b x with b = sum_i b_i^(q^(l-i)); the count is unchanged."""
    b = 0
    for i, bi in enumerate(L.coeffs):
        if bi:
            b = F.add(b, F.qfrob(bi, F.ell - i))
    return CurveParams(F, r, a, b, c)


# --- closed form ---------------------------------------------------------------

@dataclass
class ClosedCount:
    """Closed-form N(a, b, .) for fixed (a, b): call it on c (int or array).

    kind selects the formula family; the remaining fields are the
    c-independent constants of that formula.
    """

    field: Field
    branch: str
    kind: str
    witnesses: WitnessBundle
    const: int = 0  # N when c plays no role
    amp: int = 0  # signed amplitude multiplying the c-dependent factor
    scale: int = 0  # p = 2: chi1(scale * c); otherwise a * x0^(q^r+1)
    amp_zero: int = 0  # l/u even, odd p and l even: term when T(c1) = 0
    amp_nonzero: int = 0  # ... and when T(c1) != 0
    a: int = 0

    def __call__(self, c):
        F = self.field
        Ql = F.Q
        scalar = np.ndim(c) == 0
        c = np.asarray(c, dtype=np.int64)
        if self.kind == "const":
            res = np.full(c.shape, self.const, dtype=np.int64)
        elif self.kind == "p2":
            sign = 1 - 2 * F.absolute_trace(F.mul(self.scale, c))
            res = Ql + self.amp * sign
        else:
            tc1 = F.T(F.sub(self.scale, c))
            if self.kind == "eta":
                eta = F.quadratic_character(F.mul(self.a, tc1))
                res = Ql + np.where(tc1 == 0, 0, self.amp * eta)
            else:  # "gauss1": the trivial-character Gauss sum over F_q
                res = Ql + np.where(tc1 == 0, self.amp_zero, self.amp_nonzero)
        return int(res) if scalar else res


def closed_count(F: Field, a: int, b: int, r: int) -> ClosedCount:
    """Prepare the closed-form count for fixed (a, b)."""
    if a == 0:
        raise ValueError("the closed form needs a != 0")
    p, n, ell, q = F.p, F.n, F.ell, F.q
    Ql = F.Q
    u = gcd(ell, r)
    e = q**r + 1
    w = WitnessBundle()

    if (ell // u) % 2 == 1 and p == 2:
        a1 = F.invert_exponent_solve(a, e)
        w.a1 = a1
        b1 = F.div(b, a1)
        tu = F.T_u(b1, u)
        if tu == 0 or not F.in_subfield(tu, n):
            return ClosedCount(F, "N: l/u odd, p=2, T_u(b) not in F_q^*", "const", w, const=Ql)
        rhs = F.sub(F.div(b1, tu), 1)
        sol = f_map(F, 1, r).solve(rhs)
        if sol is None:
            raise AssertionError("no omega with b/T_u(b) = omega^(q^2r) + omega + 1")
        omega = sol.particular
        w.omega = omega
        s = 1 - 2 * F.absolute_trace(F.add(F.pow(omega, e), omega))
        amp = s * jacobi_two(ell // u) ** (n * u) * 2 ** (n * (ell + u) // 2)
        scale = F.inv(F.mul(tu, tu))
        return ClosedCount(F, "N: l/u odd, p=2, T_u(b) in F_q^*", "p2", w, amp=amp, scale=scale)

    fm = f_map(F, a, r)
    w.f_is_perm = fm.is_permutation
    sol = fm.solve(F.neg(F.qfrob(b, r)))
    if sol is None:
        return ClosedCount(F, "N: l/u even, f(x)=-b^(q^r) unsolvable", "const", w, const=Ql)
    x0 = sol.particular
    w.x0 = x0
    A0 = F.mul(a, F.pow(x0, e))
    eta_a = F.quadratic_character(a) if p != 2 else 1

    if (ell // u) % 2 == 1:
        # p odd
        if ell % 2 == 1:
            half = q ** ((ell + 1) // 2)
            if p % 4 == 1:
                coef = 1
            else:
                # one sign for b = 0 and b != 0: summing the Weil sums over
                # h in F_q^* gives i^(3nl) * i^n * eta1(-a) * eta(-1) either
                # way.  (-1)^(n(l+1)/2) is wrong for b = 0 when n is odd.
                coef = (-1) ** (n * (3 * ell + 1) // 2)
            return ClosedCount(F, f"N: l/u odd, p odd, l odd, p={p % 4} mod 4, b{'=' if b == 0 else '!='}0",
                               "eta", w, amp=coef * half, scale=A0, a=a)
        h = q ** (ell // 2)
        if p % 4 == 1:
            z, nz = -h * (q - 1) * eta_a, h * eta_a
        else:
            sgn = (-1) ** (n * ell // 2)
            z, nz = -sgn * h * (q - 1) * eta_a, sgn * h * eta_a
        return ClosedCount(F, f"N: l/u odd, p odd, l even, p={p % 4} mod 4", "gauss1", w,
                           scale=A0, amp_zero=z, amp_nonzero=nz)

    half = ell // (2 * u)
    if fm.is_permutation:
        h = q ** (ell // 2)
        z, nz = (-1) ** half * h * (q - 1), (-1) ** (half + 1) * h
        branch = "N: l/u even, f permutation"
    else:
        h = q ** (ell // 2 + u)
        z, nz = (-1) ** (half + 1) * h * (q - 1), (-1) ** half * h
        branch = "N: l/u even, f not permutation"
    return ClosedCount(F, branch, "gauss1", w, scale=A0, amp_zero=z, amp_nonzero=nz)


def count_closed(params: CurveParams) -> int:
    return closed_count(params.field, params.a, params.b, params.r)(params.c)


def witnesses(params: CurveParams) -> WitnessBundle:
    cc = closed_count(params.field, params.a, params.b, params.r)
    w = cc.witnesses
    if w.x0 is not None:
        F = params.field
        w.c1 = F.sub(F.mul(params.a, F.pow(w.x0, params.exponent)), params.c)
    return w


# --- genus, Hasse-Weil, maximality ----------------------------------------------

def genus(q: int, r: int) -> int:
    """q^r (q - 1) / 2."""
    num = q**r * (q - 1)
    if num % 2:
        raise ValueError(f"q^r(q-1)/2 is not an integer for q={q}, r={r}")
    return num // 2


def hasse_weil_interval(q: int, ell: int, g: int) -> tuple[int, int]:
    """Bounds on the number of projective points: q^l + 1 -/+ floor(2 g q^(l/2))."""
    dev = isqrt(4 * g * g * q**ell)
    return q**ell + 1 - dev, q**ell + 1 + dev


@dataclass
class MaximalityVerdict:
    verdict: str  # "Maximal" | "Minimal" | "Neither"
    conditions: dict = field(default_factory=dict)
    N_closed: int = 0
    N_maximal: int | None = None
    N_minimal: int | None = None
    consistent: bool = True

    def to_dict(self) -> dict:
        return asdict(self)


def _structural_conditions(F: Field, a: int, b: int, r: int):
    """The c-independent conditions, and a x0^(q^r+1) (None when f(x) = -b^(q^r) has no root)."""
    p, n, ell, q = F.p, F.n, F.ell, F.q
    fm = f_map(F, a, r)
    sol = fm.solve(F.neg(F.qfrob(b, r)))
    A0 = None if sol is None else F.mul(a, F.pow(sol.particular, q**r + 1))
    f_perm = fm.is_permutation
    square = None if p == 2 else F.quadratic_character(a) == 1
    r0_even = r == 0 and ell % 2 == 0 and p != 2
    half_odd = (n * ell // 2) % 2 == 1
    two_r_div = r >= 1 and ell % (2 * r) == 0
    cond = {"i": (n * ell) % 2 == 0}
    cond["1"] = r0_even and p % 4 == 1 and not square
    cond["2"] = r0_even and p % 4 == 3 and ((half_odd and square) or (not half_odd and not square))
    cond["3"] = two_r_div and (ell // (2 * r)) % 2 == 1 and not f_perm
    cond["1'"] = r0_even and p % 4 == 1 and bool(square)
    cond["2'"] = r0_even and p % 4 == 3 and ((half_odd and not square) or (not half_odd and square))
    cond["3'"] = two_r_div and (ell // (2 * r)) % 2 == 0 and not f_perm
    return cond, A0


def _verdict(cond: dict, ii) -> np.ndarray:
    ii = np.asarray(ii, dtype=bool)
    base = cond["i"] & ii
    maximal = base & (cond["1"] or cond["2"] or cond["3"])
    minimal = base & ~maximal & (cond["1'"] or cond["2'"] or cond["3'"])
    return np.where(maximal, "Maximal", np.where(minimal, "Minimal", "Neither"))


def _extremal_counts(F: Field, r: int):
    p, n, ell, q = F.p, F.n, F.ell, F.q
    if (n * ell) % 2:
        return None, None
    dev = p ** (n * ell // 2) * q**r * (q - 1)
    return q**ell + dev, q**ell - dev


def classify(params: CurveParams) -> MaximalityVerdict:
    """Maximal/minimal classification from the structural conditions.

    The verdict is then checked against the closed count; a mismatch is
    reported through ``consistent`` rather than raised.
    """
    F, r, c = params.field, params.r, params.c
    cond, A0 = _structural_conditions(F, params.a, params.b, r)
    cond["ii"] = A0 is not None and F.T(F.sub(A0, c)) == 0
    verdict = str(_verdict(cond, cond["ii"]))
    N = count_closed(params)
    n_max, n_min = _extremal_counts(F, r)
    consistent = (verdict == "Maximal") == (N == n_max) and (verdict == "Minimal") == (N == n_min)
    return MaximalityVerdict(verdict, cond, N, n_max, n_min, consistent)


def classify_all_c(F: Field, a: int, b: int, r: int) -> tuple[np.ndarray, np.ndarray]:
    """Verdicts for every c (element order) and whether each agrees with the count criterion."""
    cs = F.elements()
    cond, A0 = _structural_conditions(F, a, b, r)
    ii = np.zeros(F.Q, dtype=bool) if A0 is None else F.T(F.sub(A0, cs)) == 0
    verdicts = _verdict(cond, ii)
    N = closed_count(F, a, b, r)(cs)
    n_max, n_min = _extremal_counts(F, r)
    ok = ((verdicts == "Maximal") == (N == n_max)) & ((verdicts == "Minimal") == (N == n_min))
    return verdicts, ok


# --- sweeps ---------------------------------------------------------------------------

def _sweep_a(args):
    F, r, a_values = args
    mismatches = []
    branches = {}
    checked = 0
    cs = F.elements()
    for a in a_values:
        for b in range(F.Q):
            cc = closed_count(F, a, b, r)
            closed = cc(cs)
            brute = count_brute_all_c(F, a, b, r, cs)
            branches[cc.branch] = branches.get(cc.branch, 0) + F.Q
            checked += F.Q
            for c in np.nonzero(closed != brute)[0]:
                mismatches.append({"a": int(a), "b": b, "c": int(c),
                                   "N_closed": int(closed[c]), "N_brute": int(brute[c])})
    return checked, branches, mismatches


def _sample_chunk(args):
    F, r, triples = args
    mismatches = []
    branches = {}
    for a, b, c in triples:
        cc = closed_count(F, a, b, r)
        N_c = cc(c)
        N_b = count_brute(CurveParams(F, r, a, b, c))
        branches[cc.branch] = branches.get(cc.branch, 0) + 1
        if N_c != N_b:
            mismatches.append({"a": a, "b": b, "c": c, "N_closed": N_c, "N_brute": N_b})
    return len(triples), branches, mismatches


def sweep(F: Field, r: int, sample: int | None = None, seed: int = 0, workers: int = 1) -> dict:
    """Compare closed and brute counts over all (a, b, c) with a != 0, or a sample."""
    if sample is None:
        a_all = list(range(1, F.Q))
        chunks = [a_all[i::workers] for i in range(workers)]
        jobs, fn = [(F, r, ch) for ch in chunks if ch], _sweep_a
    else:
        rng = random.Random(seed)
        triples = [(rng.randrange(1, F.Q), rng.randrange(F.Q), rng.randrange(F.Q)) for _ in range(sample)]
        jobs, fn = [(F, r, triples[i::workers]) for i in range(workers)], _sample_chunk
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(fn, jobs))
    else:
        parts = [fn(j) for j in jobs]
    checked = sum(x[0] for x in parts)
    branches: dict = {}
    mismatches = []
    for _, br, mm in parts:
        for k, v in br.items():
            branches[k] = branches.get(k, 0) + v
        mismatches.extend(mm)
    mismatches.sort(key=lambda d: (d["a"], d["b"], d["c"]))
    return {
        "mode": "exhaustive" if sample is None else "sampled",
        "checked": checked,
        "mismatch_count": len(mismatches),
        "mismatches": mismatches[:50],
        "branches": dict(sorted(branches.items())),
        "match": not mismatches,
    }
