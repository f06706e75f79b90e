"""Completeness for large q by ruling out special points.

A point Q of Sigma is *special* when no good hyperplane passes through it.
After moving the curve so that XYZ = 0 cuts it in 9 rational points,
hyperplanes coming from reducible cubics account for almost every Q:

* XYZ gives X4 = 0, which handles q4 = 0;
* YZ*l gives a X4 + b X7 + c X8 = 0, for a trisecant l through
  P_Q = (q4 : q7 : q8) that avoids the curve points on Y = 0 and Z = 0;
* XY*l gives a X1 + b X3 + c X4 = 0, with l through P'_Q = (q1 : q3 : q4).

What is left are four families of candidates where both P_Q and P'_Q are
curve points on the triangle.  Each family splits into classes that share
(q1, q3, q6, q7, q8); a class is removed by a cubic Y*l1*l2 with l1, l2
trisecants through a point (a:0:1) off the curve, whose hyperplane has no
X2, X5, X9 term.  Classes with q7 = 0 that this misses are handled through
the Y <-> Z symmetry of the curve, which exchanges them with q8 = 0 points.
"""
from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field

import numpy as np

from . import geometry as geo
from .curves import (VERTICES, XYZ, CubicForm, CurveSpec, TriangleFrame, _poly_mul,
                     all_line_counts, intersect_with_cubic, is_yz_symmetric, j_invariant,
                     triangle_normalize)
from .errors import HypothesisViolated, NotNormalized
from .lift import Track, lift_curve, sigma_hyperplane, yz_swap

log = logging.getLogger(__name__)

LARGE_Q_MIN = 121
REPRESENTATIVES = 3

# which pair of coordinates vanishes in each candidate family
PATTERNS = {
    1: ("q1", "q7"),
    2: ("q1", "q8"),
    3: ("q3", "q7"),
    4: ("q3", "q8"),
}


@dataclass
class KillerWitness:
    method: str  # "cubic" or "symmetry"
    a: int | None = None
    m1: int | None = None
    m2: int | None = None
    hyperplane: tuple[int, ...] | None = None


@dataclass
class SpecialCandidate:
    """Points (q1, q2, ..., q9) of Sigma with q4 = 1 and the given zero pattern.

    q2, q5 and q9 are free inside a class.
    """

    pattern: int
    q1: int
    q3: int
    q6: int
    q7: int
    q8: int
    status: str = "unresolved"
    witness: KillerWitness | None = None

    def representative(self, q2: int, q5: int, q9: int) -> tuple[int, ...]:
        return (self.q1, q2, self.q3, 1, q5, self.q6, self.q7, self.q8, q9)

    @property
    def key(self) -> tuple[int, ...]:
        return (self.q1, self.q3, self.q6, self.q7, self.q8)


def check_triangle(E: CurveSpec) -> None:
    if any(E.contains(v) for v in VERTICES) or len(intersect_with_cubic(E, XYZ(E.field))) != 9:
        raise NotNormalized("XYZ = 0 does not cut the curve in 9 distinct points")


def _curve(frame_or_curve) -> CurveSpec:
    return frame_or_curve.curve if isinstance(frame_or_curve, TriangleFrame) else frame_or_curve


def special_candidates(frame_or_curve) -> list[SpecialCandidate]:
    E = _curve(frame_or_curve)
    check_triangle(E)
    F = E.field

    def scaled(P, k):
        s = F.inv(int(P[k]))
        return [int(F.mul(int(v), s)) for v in P]

    pts = E.points
    # (q1 : q3 : 1) on the curve with q1 = 0 or with q3 = 0
    on_x0 = sorted(scaled(P, 2)[1] for P in pts if P[0] == 0)
    on_y0 = sorted(scaled(P, 2)[0] for P in pts if P[1] == 0)
    # (1 : q7 : q8) on the curve with q7 = 0 or with q8 = 0
    on_y0_z = sorted(scaled(P, 0)[2] for P in pts if P[1] == 0)
    on_z0 = sorted(scaled(P, 0)[1] for P in pts if P[2] == 0)
    out = []
    for pat, (zero13, zero78) in PATTERNS.items():
        first = [(0, y) for y in on_x0] if zero13 == "q1" else [(x, 0) for x in on_y0]
        second = [(0, z) for z in on_y0_z] if zero78 == "q7" else [(y, 0) for y in on_z0]
        for q1, q3 in first:
            for q7, q8 in second:
                out.extend(SpecialCandidate(pat, q1, q3, q6, q7, q8) for q6 in range(F.q))
    return out


def trisecant_slopes(E: CurveSpec) -> dict[int, list[int]]:
    """For each a with (a:0:1) off the curve, the slopes m != 0 for which
    Y = m(X - aZ) meets the curve in 3 distinct rational points."""
    F = E.field
    pts = E.points
    X, Y, Z = pts[:, 0], pts[:, 1], pts[:, 2]
    fin = Z != 0
    zi = np.where(fin, F.inv(np.where(fin, Z, 1)), 0)
    xa, ya = F.mul(X, zi), F.mul(Y, zi)
    out = {}
    for a in range(F.q):
        if E.contains((a, 0, 1)):
            continue
        dx = np.where(fin, F.sub(xa, a), X)
        dy = np.where(fin, ya, Y)
        vertical = dx == 0
        m = np.where(vertical, -1, F.mul(dy, F.inv(np.where(vertical, 1, dx))))
        vals, counts = np.unique(m, return_counts=True)
        out[a] = [int(v) for v, c in zip(vals, counts) if c == 3 and v > 0]
    return out


def killer_hyperplane(F, a: int, m1: int, m2: int) -> tuple[int, ...]:
    """Sigma coordinates of Y (Y - m1 X + a m1 Z)(Y - m2 X + a m2 Z)."""
    s, t = F.add(m1, m2), F.mul(m1, m2)
    return geo.normalize(F, (t, 0, F.neg(s), F.neg(F.mul(F.mul(2, a), t)), 0, 1,
                             F.mul(a, s), F.mul(F.mul(a, a), t), 0))


def killer_cubic_form(F, a: int, m1: int, m2: int) -> CubicForm:
    poly = {(0, 1, 0): 1}
    for m in (m1, m2):
        poly = _poly_mul(F, poly, {(0, 1, 0): 1, (1, 0, 0): F.neg(m), (0, 0, 1): F.mul(a, m)})
    return CubicForm.from_terms(F, poly)


def killer_cubic(cls: SpecialCandidate, E: CurveSpec, slopes: dict | None = None):
    """First (a, m1, m2) in search order whose hyperplane contains the class.

    The incidence condition with q4 = 1 reads
    m1 m2 (q1 - 2a + a^2 q8) - (m1 + m2)(q3 - a q7) + q6 = 0.
    """
    F = E.field
    slopes = trisecant_slopes(E) if slopes is None else slopes
    for a, M in slopes.items():
        if len(M) < 2:
            continue
        Mset = set(M)
        A = F.add(F.sub(cls.q1, F.mul(2, a)), F.mul(F.mul(a, a), cls.q8))
        B = F.sub(cls.q3, F.mul(a, cls.q7))
        C = cls.q6
        for m1 in M:
            den = F.sub(F.mul(m1, A), B)
            num = F.sub(F.mul(m1, B), C)
            if den:
                m2 = int(F.div(num, den))
                if m2 in Mset and m2 != m1:
                    return a, m1, m2
            elif num == 0:
                return a, m1, next(m for m in M if m != m1)
    return None


# -- hyperplanes from the reducible cubics XYZ, YZ*l and XY*l -------------------
@dataclass
class LineFamilies:
    """Trisecants avoiding the curve points on Y = 0, Z = 0 (``yz``) or on
    X = 0, Y = 0 (``xy``)."""

    yz: np.ndarray
    xy: np.ndarray
    trisecants: np.ndarray
    side_yz: set = field(default_factory=set)
    side_xy: set = field(default_factory=set)


def line_families(E: CurveSpec) -> LineFamilies:
    F = E.field
    lines, counts = all_line_counts(E)
    tri = lines[counts == 3]
    pts = E.points

    def avoiding(axes):
        side = np.zeros(pts.shape[0], dtype=bool)
        for ax in axes:
            side |= pts[:, ax] == 0
        S = pts[side]
        hit = (F.dot(tri[:, None, :], S[None, :, :]) == 0).any(axis=1)
        return tri[~hit], {tuple(int(v) for v in P) for P in S}

    yz, s_yz = avoiding((1, 2))
    xy, s_xy = avoiding((0, 1))
    return LineFamilies(yz, xy, tri, s_yz, s_xy)


def reducible_hyperplane(Q, fam: LineFamilies, F) -> tuple[int, ...] | None:
    """A good hyperplane through Q from XYZ, YZ*l or XY*l, or None when Q is
    in one of the candidate families."""
    Q = [int(v) for v in Q]
    if Q[3] == 0:
        return (0, 0, 0, 1, 0, 0, 0, 0, 0)
    P = geo.normalize(F, (Q[3], Q[6], Q[7]))
    if P not in fam.side_yz:
        l = fam.yz[F.dot(fam.yz, P) == 0][0]
        return geo.normalize(F, (0, 0, 0, l[0], 0, 0, l[1], l[2], 0))
    P2 = geo.normalize(F, (Q[0], Q[2], Q[3]))
    if P2 not in fam.side_xy:
        l = fam.xy[F.dot(fam.xy, P2) == 0][0]
        return geo.normalize(F, (l[0], 0, l[1], l[2], 0, 0, 0, 0, 0))
    return None


@dataclass
class Coverage:
    """Checks under which only the candidate families can hold special points."""

    triangle: bool
    yz_lines_cover: bool
    xy_lines_cover: bool
    min_trisecants: int
    yz_uncovered: int = 0
    xy_uncovered: int = 0

    @property
    def ok(self) -> bool:
        return self.triangle and self.yz_lines_cover and self.xy_lines_cover


def coverage_certificate(E: CurveSpec, fam: LineFamilies | None = None) -> Coverage:
    """Every plane point off a side set lies on a trisecant of its family."""
    F = E.field
    try:
        check_triangle(E)
        tri_ok = True
    except NotNormalized:
        tri_ok = False
    fam = line_families(E) if fam is None else fam
    plane = geo.points_array(F, 2)
    through = geo.incidence_counts(F, plane, fam.trisecants)

    def missing(good, side) -> int:
        covered = geo.incidence_counts(F, plane, good) > 0
        side_idx = {geo.point_index(F, P) for P in side}
        return sum(1 for i in np.nonzero(~covered)[0].tolist() if i not in side_idx)

    yz = missing(fam.yz, fam.side_yz)
    xy = missing(fam.xy, fam.side_xy)
    return Coverage(tri_ok, yz == 0, xy == 0, int(through.min()), yz, xy)


def _verify_hyperplane(H, track: Track, pts) -> None:
    F = track.field
    on = int(geo.incidence_counts(F, np.array([H]), track.points)[0])
    assert on == 9, f"hyperplane meets the track in {on} points"
    for Q in pts:
        assert geo.incident(F, H, Q)


@dataclass
class LargeQResult:
    verdict: str  # "complete" | "unknown"
    n: int
    frame: list
    frame_identity: bool
    symmetric: bool
    coverage: Coverage
    classes: int
    by_cubic: int
    by_symmetry: int
    unresolved: list = field(default_factory=list)
    witnesses: list = field(default_factory=list)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["coverage"]["ok"] = self.coverage.ok
        return d


def large_q_verdict(E: CurveSpec, seed: int = 0, q_min: int = LARGE_Q_MIN,
                    keep_witnesses: int = 0) -> LargeQResult:
    F = E.field
    if F.q < q_min:
        raise HypothesisViolated(f"q = {F.q} < {q_min}")
    if F.p in (2, 3):
        raise HypothesisViolated(f"characteristic {F.p}")
    if j_invariant(E) == 0:
        raise HypothesisViolated("j(E) = 0")
    frame = triangle_normalize(E)
    En = frame.curve
    track = lift_curve(En)
    fam = line_families(En)
    cov = coverage_certificate(En, fam)
    symmetric = is_yz_symmetric(En)
    if symmetric:
        assert {geo.normalize(F, yz_swap(P)) for P in track.points} == set(track.index)
    classes = special_candidates(frame)
    slopes = trisecant_slopes(En)
    rng = np.random.default_rng(seed)

    def reps(cls):
        return [cls.representative(*(int(v) for v in rng.integers(0, F.q, 3)))
                for _ in range(REPRESENTATIVES)]

    for cls in classes:
        found = killer_cubic(cls, En, slopes)
        if found is None:
            continue
        a, m1, m2 = found
        H = sigma_hyperplane(killer_cubic_form(F, a, m1, m2), En)
        assert H == killer_hyperplane(F, a, m1, m2)
        _verify_hyperplane(H, track, reps(cls))
        cls.status = "eliminated"
        cls.witness = KillerWitness("cubic", a, m1, m2, H)

    # q7 = 0 classes: swap(Q) has q8 = 0, so it is either handled by a
    # reducible cubic or sits in a q8 = 0 class
    by_key = {c.key: c for c in classes if c.q8 == 0}
    if symmetric:
        for cls in classes:
            if cls.status != "unresolved" or cls.q7 != 0:
                continue
            images_ok = all(c.status == "eliminated" for c in by_key.values() if c.q7 == cls.q8)
            if not images_ok:
                continue
            for Q in reps(cls):
                S = yz_swap(Q)  # keeps X4, so S still has q4 = 1
                if geo.normalize(F, S) in track:
                    continue
                H = reducible_hyperplane(S, fam, F)
                if H is None:
                    img = by_key[(S[0], S[2], S[5], S[6], S[7])]
                    H = img.witness.hyperplane
                _verify_hyperplane(yz_swap(H), track, [Q])
            cls.status = "eliminated"
            cls.witness = KillerWitness("symmetry")

    unresolved = [asdict(c) for c in classes if c.status == "unresolved"]
    by_cubic = sum(1 for c in classes if c.witness is not None and c.witness.method == "cubic")
    by_sym = sum(1 for c in classes if c.witness is not None and c.witness.method == "symmetry")
    kept = [asdict(c) for c in classes if c.status == "eliminated"][:keep_witnesses]
    complete = cov.ok and not unresolved
    log.info("q=%d n=%d: %d classes, %d by cubic, %d by symmetry, %d unresolved",
             F.q, track.n, len(classes), by_cubic, by_sym, len(unresolved))
    return LargeQResult("complete" if complete else "unknown", track.n, frame.matrix.tolist(),
                        frame.is_identity, symmetric, cov, len(classes), by_cubic, by_sym,
                        unresolved, kept)
