"""PG(2, q^l): incidence, the curve H : T(y) = T(x^(q^r+1)), and arcs built from it.

Points and lines share one dense indexing.  A triple is normalized so its
leftmost nonzero coordinate is 1; then

    (1 : Y : Z)  ->  Y*Q + Z
    (0 : 1 : Z)  ->  Q^2 + Z
    (0 : 0 : 1)  ->  Q^2 + Q

with Q = q^l and elements in their int encoding.  The line [a : b : c] is
aX + bY + cZ = 0.  The incidence equation is symmetric, so ``pencil``
lists the lines through a point and, equally, the points on a line.

Exhaustive censuses are the ground truth here.  Theorem-level claims are
recorded on the Arc and compared, never assumed.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from math import gcd
from pathlib import Path

import numpy as np

from .aschreier import closed_count
from .gf import Field

__all__ = [
    "Arc",
    "CompletenessReport",
    "Plane",
    "SecantDistribution",
    "H_set",
    "arc_case",
    "build_arc",
    "closed_line_counts",
    "curve_points",
    "line_counts_linewise",
    "r_of_ell",
    "secant_distribution",
    "secant_size_closed",
    "verify_complete",
    "verify_theorem_case",
]

_CHUNK = 1 << 21  # incidences materialized per block


def r_of_ell(ell: int) -> int:
    """Smallest r >= l/2 with gcd(l, r) = 1."""
    if ell < 2:
        raise ValueError("ell must be >= 2")
    if ell == 2:
        r = 1
    elif ell % 4 == 0:
        r = ell // 2 + 1
    elif ell % 4 == 2:
        r = ell // 2 + 2
    else:
        r = (ell + 1) // 2
    assert 2 * r >= ell and gcd(ell, r) == 1
    return r


class Plane:
    """The projective plane over a field F."""

    def __init__(self, F: Field):
        self.field = F
        self.Q = F.Q
        self.size = F.Q * F.Q + F.Q + 1

    @property
    def infinity_line(self) -> int:
        """Index of Z = 0, i.e. [0 : 0 : 1]."""
        return self.Q * self.Q + self.Q

    def index(self, X, Y, Z) -> np.ndarray:
        """Dense index of the points (X : Y : Z); triples must be nonzero."""
        F, Q = self.field, self.Q
        X, Y, Z = (np.asarray(v, dtype=np.int64) for v in (X, Y, Z))
        X, Y, Z = np.broadcast_arrays(X, Y, Z)
        out = np.empty(X.shape, dtype=np.int64)
        s1 = X != 0
        s2 = ~s1 & (Y != 0)
        s3 = ~s1 & ~s2
        if np.any(s3 & (Z == 0)):
            raise ValueError("(0:0:0) is not a projective point")
        if s1.any():
            ix = F.inv(X[s1])
            out[s1] = F.mul(Y[s1], ix) * Q + F.mul(Z[s1], ix)
        if s2.any():
            out[s2] = Q * Q + F.mul(Z[s2], F.inv(Y[s2]))
        out[s3] = Q * Q + Q
        return out

    def affine_index(self, x, y) -> np.ndarray:
        return self.index(x, y, 1)

    def coords(self, idx):
        """Normalized (X, Y, Z) arrays for indices."""
        Q = self.Q
        idx = np.asarray(idx, dtype=np.int64)
        X = np.where(idx < Q * Q, 1, 0)
        Y = np.where(idx < Q * Q, idx // Q, np.where(idx < Q * Q + Q, 1, 0))
        Z = np.where(idx < Q * Q, idx % Q, np.where(idx < Q * Q + Q, idx - Q * Q, 1))
        return X, Y, Z

    def pencil(self, idx) -> np.ndarray:
        """Rows of the Q+1 dual indices incident with each index in idx."""
        F, Q = self.field, self.Q
        idx = np.asarray(idx, dtype=np.int64).ravel()
        out = np.empty((len(idx), Q + 1), dtype=np.int64)
        els = F.elements()
        QQ = Q * Q
        inf = QQ + Q

        s1 = idx < QQ
        Y = idx // Q
        Z = idx % Q

        # (1 : Y : Z) with Z != 0: [1 : b : -(1 + bY)/Z] for all b, and [0 : 1 : -Y/Z]
        m = s1 & (Z != 0)
        if m.any():
            y, iz = Y[m], F.inv(Z[m])
            g = F.neg(F.mul(F.add(1, F.mul(els[None, :], y[:, None])), iz[:, None]))
            out[m, :Q] = els[None, :] * Q + g
            out[m, Q] = QQ + F.neg(F.mul(y, iz))
        # (1 : Y : 0), Y != 0: [1 : -1/Y : c] for all c, and [0 : 0 : 1]
        m = s1 & (Z == 0) & (Y != 0)
        if m.any():
            b = F.neg(F.inv(Y[m]))
            out[m, :Q] = b[:, None] * Q + els[None, :]
            out[m, Q] = inf
        # (1 : 0 : 0): [0 : 1 : c] for all c, and [0 : 0 : 1]
        m = s1 & (Z == 0) & (Y == 0)
        if m.any():
            out[m, :Q] = QQ + els[None, :]
            out[m, Q] = inf
        # (0 : 1 : Z): [1 : -cZ : c] for all c, and [0 : 1 : -1/Z] or [0 : 0 : 1]
        m = (idx >= QQ) & (idx < inf)
        if m.any():
            z = idx[m] - QQ
            out[m, :Q] = F.neg(F.mul(els[None, :], z[:, None])) * Q + els[None, :]
            last = np.full(len(z), inf, dtype=np.int64)
            nz = z != 0
            if nz.any():
                last[nz] = QQ + F.neg(F.inv(z[nz]))
            out[m, Q] = last
        # (0 : 0 : 1): [1 : b : 0] for all b, and [0 : 1 : 0]
        m = idx == inf
        if m.any():
            out[m, :Q] = els[None, :] * Q
            out[m, Q] = QQ
        return out

    def _chunks(self, idx):
        step = max(1, _CHUNK // (self.Q + 1))
        for s in range(0, len(idx), step):
            yield idx[s : s + step]


# --- arcs ----------------------------------------------------------------------------

@dataclass
class Arc:
    """A pointset of PG(2, Q) with the (N, d) it is claimed to be."""

    field: Field
    points: np.ndarray  # sorted dense indices
    case: str = ""
    claimed_N: int | None = None
    claimed_d: int | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.points = np.unique(np.asarray(self.points, dtype=np.int64))

    def __len__(self):
        return len(self.points)

    @property
    def plane(self) -> Plane:
        return Plane(self.field)

    def mask(self) -> np.ndarray:
        m = np.zeros(self.plane.size, dtype=bool)
        m[self.points] = True
        return m

    def to_json(self) -> dict:
        return {
            "field": self.field.spec(),
            "case": self.case,
            "claimed_N": self.claimed_N,
            "claimed_d": self.claimed_d,
            "meta": self.meta,
            "points": self.points.tolist(),
        }

    @classmethod
    def from_json(cls, d: dict) -> "Arc":
        return cls(Field.from_spec(d["field"]), np.asarray(d["points"], dtype=np.int64),
                   d.get("case", ""), d.get("claimed_N"), d.get("claimed_d"), d.get("meta", {}))

    def save(self, path):
        Path(path).write_text(json.dumps(self.to_json()))

    @classmethod
    def load(cls, path) -> "Arc":
        return cls.from_json(json.loads(Path(path).read_text()))


def curve_points(F: Field) -> Arc:
    """Rational points of H : T(y) = T(x^(q^r+1)), r = r(l), plus (0:1:0)."""
    q, ell, Q = F.q, F.ell, F.Q
    if ell < 2 or (ell == 2 and F.p == 2):
        raise ValueError("the curve H needs l >= 3, or l = 2 with p odd")
    r = r_of_ell(ell)
    plane = Plane(F)
    xs = F.elements()
    ty = F.T(xs)
    order = np.argsort(ty, kind="stable")
    fiber_start = np.searchsorted(ty[order], F.base_elements)
    start_of = np.zeros(Q, dtype=np.int64)
    start_of[F.base_elements] = fiber_start
    fib = Q // q
    tx = F.T(F.pow(xs, q**r + 1))
    ys = order[start_of[tx][:, None] + np.arange(fib)[None, :]]
    pts = plane.affine_index(np.repeat(xs, fib), ys.ravel())
    pts = np.append(pts, Q * Q)  # (0 : 1 : 0)
    expected = q ** (2 * ell - 1) + 1
    if len(np.unique(pts)) != expected:
        raise RuntimeError(f"H has {len(np.unique(pts))} rational points, expected {expected}")
    N, d = expected, q ** (ell - 1) + q ** (r - 1)
    return Arc(F, pts, "K", N, d, {"r": r})


def H_set(F: Field, r: int | None = None) -> np.ndarray:
    """{B : x^(q^2r) + x = B^(q^r) is solvable}, ascending."""
    r = r_of_ell(F.ell) if r is None else r
    xs = F.elements()
    image = np.zeros(F.Q, dtype=bool)
    image[F.add(F.qfrob(xs, 2 * r), xs)] = True
    return xs[image[F.qfrob(xs, r)]]


def arc_case(F: Field) -> int:
    """The construction case that applies to (p, n, l)."""
    p, n, ell = F.p, F.n, F.ell
    if ell < 3:
        raise ValueError("arc constructions need l >= 3")
    if ell % 4 == 0:
        return 5
    if p > 2:
        return 1 if ell % 2 else 2
    if ell % 2 == 0:
        return 6
    return 3 if (n % 2 == 0 or ell % 8 in (1, 7)) else 4


def _case_ok(F: Field, case: int) -> bool:
    p, n, ell = F.p, F.n, F.ell
    return {
        1: p > 2 and ell % 2 == 1,
        2: p > 2 and ell % 4 == 2 and ell >= 6,
        3: p == 2 and ell % 2 == 1 and (n % 2 == 0 or ell % 8 in (1, 7)),
        4: p == 2 and ell % 2 == 1 and n % 2 == 1 and ell % 8 in (3, 5),
        5: ell % 4 == 0,
        6: p == 2 and ell % 4 == 2 and ell >= 6,
    }[case]


def build_arc(F: Field, case="auto", subset_seed: int | None = None) -> Arc:
    """Build the arc of the given construction case with its claimed (N, d).

    Cases 5 and 6 adjoin the infinite points (1 : B : 0) for B in a subset
    of the complement of H_set; the subset is the least elements, or a
    seeded random choice when subset_seed is given.
    """
    if F.ell < 3:
        raise ValueError("arc constructions need l >= 3")
    case = arc_case(F) if case == "auto" else int(case)
    if case not in range(1, 7):
        raise ValueError(f"unknown case {case}")
    if not _case_ok(F, case):
        raise ValueError(f"case {case} does not apply to p={F.p}, n={F.n}, l={F.ell}")
    q, ell, Q = F.q, F.ell, F.Q
    K = curve_points(F)
    r = K.meta["r"]
    N, d = K.claimed_N, K.claimed_d
    meta = {"r": r}
    extra = np.empty(0, dtype=np.int64)
    if case == 1:
        cN, cd = N, d
    elif case == 2:
        cN, cd = N, q ** (ell - 1) + q ** (r - 3)
    elif case in (3, 4):
        Bs = F.elements()
        tb = F.T(Bs)
        Bs = Bs[tb == 0] if case == 3 else Bs[tb != 0]
        extra = Bs * Q  # (1 : B : 0)
        if case == 3:
            cN, cd = N + q ** (ell - 1), d
        else:
            cN, cd = N + Q - q ** (ell - 1), q ** (ell - 1)
    else:
        H = H_set(F, r)
        comp = np.setdiff1d(F.elements(), H)
        if case == 5:
            size = q ** (ell - 1) + q ** (r - 1) - 1
            cd = d
        else:
            size = q ** (ell - 1) + q ** (r - 2) * (q - 1) - 1
            cd = q ** (ell - 1) + q ** (r - 2) * (q - 1)
        if size > len(comp):
            raise ValueError(f"complement of H has {len(comp)} elements, need {size}")
        if subset_seed is None:
            chosen = comp[:size]
        else:
            chosen = np.sort(np.asarray(random.Random(subset_seed).sample(comp.tolist(), size)))
        meta.update({"H_size": int(len(H)), "subset_seed": subset_seed,
                     "subset": chosen.tolist()})
        extra = chosen * Q
        cN = N + size
    pts = np.concatenate([K.points, extra])
    return Arc(F, pts, str(case), cN, cd, meta)


# --- censuses -----------------------------------------------------------------------

@dataclass
class SecantDistribution:
    counts: np.ndarray  # arc points on each line, by line index
    histogram: dict  # secant size -> number of lines
    max_size: int
    witness: dict  # secant size -> least line index of that size

    def to_dict(self) -> dict:
        return {
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "max_size": self.max_size,
            "witness_line": {str(k): v for k, v in sorted(self.witness.items())},
        }


def _distribution(counts: np.ndarray) -> SecantDistribution:
    sizes, first = np.unique(counts, return_index=True)
    hist = np.bincount(counts)
    histogram = {int(s): int(hist[s]) for s in sizes}
    witness = {int(s): int(i) for s, i in zip(sizes, first)}
    return SecantDistribution(counts, histogram, int(counts.max()), witness)


def secant_distribution(arc: Arc, order=None) -> SecantDistribution:
    """Exact number of arc points on every line, by walking the pencil of each arc point.

    ``order`` optionally permutes the arc points first (the result must not
    depend on it).
    """
    plane = arc.plane
    pts = arc.points if order is None else arc.points[np.asarray(order)]
    counts = np.zeros(plane.size, dtype=np.int64)
    for blk in plane._chunks(pts):
        counts += np.bincount(plane.pencil(blk).ravel(), minlength=plane.size)
    if counts.sum() != len(arc) * (plane.Q + 1):
        raise AssertionError("double counting identity violated")
    return _distribution(counts)


def line_counts_linewise(arc: Arc) -> np.ndarray:
    """Independent recount: for every line, list its points and test membership."""
    plane = arc.plane
    mask = arc.mask()
    lines = np.arange(plane.size, dtype=np.int64)
    out = np.empty(plane.size, dtype=np.int64)
    pos = 0
    for blk in plane._chunks(lines):
        out[pos : pos + len(blk)] = mask[plane.pencil(blk)].sum(axis=1)
        pos += len(blk)
    return out


def closed_line_counts(F: Field) -> np.ndarray:
    """#(K meet L) for every line L from the closed point counts.

    A line with Y-coefficient 1 after scaling is y + b x + c = 0 and meets K
    in N(1, b, c)/q affine points; x = const lines hold q^(l-1) affine
    points plus (0:1:0); the line at infinity holds (0:1:0) only.
    """
    q, Q = F.q, F.Q
    r = r_of_ell(F.ell)
    plane = Plane(F)
    out = np.empty(plane.size, dtype=np.int64)
    cs = F.elements()
    by_b = np.empty((Q, Q), dtype=np.int64)
    for b in range(Q):
        by_b[b] = closed_count(F, 1, b, r)(cs) // q
    beta = np.arange(Q, dtype=np.int64)
    # [1 : beta : gamma] with beta != 0  ->  b = 1/beta, c = gamma/beta
    inv_beta = F.inv(beta[1:])
    gam = F.elements()
    b_idx = np.repeat(inv_beta, Q)
    c_idx = F.mul(np.tile(gam, Q - 1), b_idx)
    out[Q : Q * Q] = by_b[b_idx, c_idx]
    out[:Q] = q ** (F.ell - 1) + 1  # [1 : 0 : gamma], x = -gamma
    out[Q * Q : Q * Q + Q] = by_b[0]  # [0 : 1 : gamma], b = 0
    out[Q * Q + Q] = 1
    return out


def secant_size_closed(F: Field, line: int) -> int:
    """Closed-form #(K meet L) for one line index."""
    q, Q = F.q, F.Q
    r = r_of_ell(F.ell)
    if line == Q * Q + Q:
        return 1
    if line >= Q * Q:
        b, c = 0, line - Q * Q
    else:
        beta, gamma = divmod(line, Q)
        if beta == 0:
            return q ** (F.ell - 1) + 1
        b = F.inv(beta)
        c = F.mul(gamma, b)
    return closed_count(F, 1, b, r)(c) // q


# --- completeness -------------------------------------------------------------------

@dataclass
class CompletenessReport:
    d: int
    N: int
    is_degree_d_arc: bool
    is_complete: bool
    max_secant: int
    uncovered_points: np.ndarray
    witness_lines: np.ndarray  # per point: a d-secant through it, -1 if none / on the arc
    external_points: int

    def to_dict(self, limit: int = 20) -> dict:
        ext = np.nonzero(self.witness_lines >= 0)[0]
        return {
            "d": self.d,
            "N": self.N,
            "is_degree_d_arc": self.is_degree_d_arc,
            "is_complete": self.is_complete,
            "max_secant": self.max_secant,
            "external_points": self.external_points,
            "uncovered_count": int(len(self.uncovered_points)),
            "uncovered_points": self.uncovered_points[:limit].tolist(),
            "witness_sample": {int(P): int(self.witness_lines[P]) for P in ext[:limit]},
        }


def verify_complete(arc: Arc, d: int, dist: SecantDistribution | None = None) -> CompletenessReport:
    """Check the (N, d)-arc property and completeness against the definition.

    Every point off the arc must lie on a line meeting the arc in exactly d
    points; the least such line is kept as the witness.
    """
    plane = arc.plane
    dist = secant_distribution(arc) if dist is None else dist
    counts = dist.counts
    mask = arc.mask()
    witness = np.full(plane.size, np.iinfo(np.int64).max, dtype=np.int64)
    d_lines = np.nonzero(counts == d)[0]
    for blk in plane._chunks(d_lines):
        pts = plane.pencil(blk)
        np.minimum.at(witness, pts.ravel(), np.repeat(blk, plane.Q + 1))
    witness[witness == np.iinfo(np.int64).max] = -1
    witness[mask] = -1
    uncovered = np.nonzero(~mask & (witness < 0))[0]
    return CompletenessReport(
        d=d,
        N=len(arc),
        is_degree_d_arc=dist.max_size <= d,
        is_complete=len(uncovered) == 0,
        max_secant=dist.max_size,
        uncovered_points=uncovered,
        witness_lines=witness,
        external_points=int(plane.size - len(arc)),
    )


def verify_theorem_case(F: Field, case="auto", subset_seed: int | None = None) -> dict:
    """Build the case's arc and compare every claim with the exhaustive census."""
    arc = build_arc(F, case, subset_seed)
    plane = arc.plane
    dist = secant_distribution(arc)
    at_claim = verify_complete(arc, arc.claimed_d, dist)
    at_max = at_claim if dist.max_size == arc.claimed_d else verify_complete(arc, dist.max_size, dist)
    inf_count = int(dist.counts[plane.infinity_line])
    q, ell, Q = F.q, F.ell, F.Q
    if arc.case in ("1", "2"):
        inf_ok = inf_count <= arc.claimed_d
    elif arc.case in ("5", "6"):
        inf_ok = inf_count == arc.claimed_d
    else:
        # every adjoined point sits on Z = 0, together with (0 : 1 : 0)
        inf_ok = inf_count == len(arc) - q ** (2 * ell - 1)
    confirmed = (
        len(arc) == arc.claimed_N
        and dist.max_size == arc.claimed_d
        and at_claim.is_complete
    )
    return {
        "case": arc.case,
        "r": arc.meta["r"],
        "claimed_N": arc.claimed_N,
        "actual_N": len(arc),
        "claimed_d": arc.claimed_d,
        "empirical_max_secant": dist.max_size,
        "is_complete_at_claimed_d": at_claim.is_complete,
        "is_complete_at_empirical_d": at_max.is_complete,
        "line_at_infinity_count": inf_count,
        "line_at_infinity_consistent": inf_ok,
        "double_counting": int(dist.counts.sum()) == len(arc) * (plane.Q + 1),
        "distribution": dist.to_dict(),
        "completeness_at_claimed_d": at_claim.to_dict(),
        "completeness_at_empirical_d": at_max.to_dict(),
        "arc_meta": {k: v for k, v in arc.meta.items() if k != "subset"},
        "confirmed": confirmed,
    }
