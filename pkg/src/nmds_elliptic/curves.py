"""Plane cubics and elliptic curves over GF(q).

A cubic is stored by its 10 coefficients in the monomial order

    X^3, X^2Y, X^2Z, XY^2, XYZ, XZ^2, Y^3, Y^2Z, YZ^2, Z^3

which is also the coordinate order of the lift into PG(9, q) (slot 0 carries
the curve's own equation there).  All point counting is at the level of
distinct rational points.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Sequence

import numpy as np

from . import geometry as geo
from .errors import IdenticalCurves, NoTriangleFound, SingularCurve
from .field import GF

MONOMIALS: tuple[tuple[int, int, int], ...] = (
    (3, 0, 0), (2, 1, 0), (2, 0, 1), (1, 2, 0), (1, 1, 1),
    (1, 0, 2), (0, 3, 0), (0, 2, 1), (0, 1, 2), (0, 0, 3),
)
MONOMIAL_NAMES = ("X^3", "X^2Y", "X^2Z", "XY^2", "XYZ", "XZ^2", "Y^3", "Y^2Z", "YZ^2", "Z^3")
_SLOT = {e: i for i, e in enumerate(MONOMIALS)}

VERTICES = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def monomial_values(F: GF, pts) -> np.ndarray:
    """(N, 10) array of the cubic monomials evaluated at each row of ``pts``."""
    pts = np.atleast_2d(np.asarray(pts, dtype=np.int64))
    X, Y, Z = pts[:, 0], pts[:, 1], pts[:, 2]
    pw = {}
    for name, v in (("X", X), ("Y", Y), ("Z", Z)):
        sq = F.mul(v, v)
        pw[name] = (np.ones_like(v), v, sq, F.mul(sq, v))
    out = np.empty((pts.shape[0], 10), dtype=np.int64)
    for s, (i, j, k) in enumerate(MONOMIALS):
        out[:, s] = F.mul(F.mul(pw["X"][i], pw["Y"][j]), pw["Z"][k])
    return out


@dataclass(frozen=True)
class CubicForm:
    """A ternary cubic over ``field`` with coefficients in MONOMIALS order."""

    field: GF
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != 10:
            raise ValueError("a cubic has 10 coefficients")
        if not any(self.coeffs):
            raise ValueError("the zero polynomial is not a cubic")
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    @classmethod
    def from_terms(cls, F: GF, terms: dict) -> CubicForm:
        """Build from ``{(i, j, k): coefficient}``."""
        c = [0] * 10
        for e, v in terms.items():
            c[_SLOT[tuple(e)]] = F.add(c[_SLOT[tuple(e)]], int(v))
        return cls(F, tuple(c))

    def evaluate(self, P: Sequence[int]) -> int:
        return int(self.evaluate_many([P])[0])

    def evaluate_many(self, pts) -> np.ndarray:
        return self.field.dot(monomial_values(self.field, pts), np.array(self.coeffs))

    def is_multiple_of(self, other: CubicForm) -> bool:
        return geo.rank(self.field, np.array([self.coeffs, other.coeffs])) == 1

    def gradient_many(self, pts) -> np.ndarray:
        """(N, 3) array of the partial derivatives at each point."""
        F = self.field
        pts = np.atleast_2d(np.asarray(pts, dtype=np.int64))
        out = np.zeros((pts.shape[0], 3), dtype=np.int64)
        for c, e in zip(self.coeffs, MONOMIALS):
            if not c:
                continue
            for var in range(3):
                if e[var] == 0:
                    continue
                d = list(e)
                d[var] -= 1
                term = F.mul(c, F.from_int(e[var]))
                val = np.full(pts.shape[0], term, dtype=np.int64)
                for axis in range(3):
                    for _ in range(d[axis]):
                        val = F.mul(val, pts[:, axis])
                out[:, var] = F.add(out[:, var], val)
        return out

    def hessian_det(self, P: Sequence[int]) -> int:
        F = self.field
        H = [[0] * 3 for _ in range(3)]
        for c, e in zip(self.coeffs, MONOMIALS):
            if not c:
                continue
            for a in range(3):
                for b in range(3):
                    d = list(e)
                    f1 = d[a]
                    d[a] -= 1
                    if d[a] < 0:
                        continue
                    f2 = d[b]
                    d[b] -= 1
                    if d[b] < 0:
                        continue
                    v = F.mul(c, F.from_int(f1 * f2))
                    for axis in range(3):
                        for _ in range(d[axis]):
                            v = F.mul(v, int(P[axis]))
                    H[a][b] = F.add(H[a][b], v)
        m = F.mul
        det = F.sub(m(H[0][0], F.sub(m(H[1][1], H[2][2]), m(H[1][2], H[2][1]))),
                    m(H[0][1], F.sub(m(H[1][0], H[2][2]), m(H[1][2], H[2][0]))))
        return int(F.add(det, m(H[0][2], F.sub(m(H[1][0], H[2][1]), m(H[1][1], H[2][0])))))

    def substitute(self, M) -> CubicForm:
        """The cubic ``v -> self(M v)``."""
        F = self.field
        M = np.asarray(M, dtype=np.int64)
        # each old variable becomes a linear form in the new ones
        forms = [{(1, 0, 0): int(M[r, 0]), (0, 1, 0): int(M[r, 1]), (0, 0, 1): int(M[r, 2])}
                 for r in range(3)]
        total: dict = {}
        for c, e in zip(self.coeffs, MONOMIALS):
            if not c:
                continue
            poly = {(0, 0, 0): c}
            for var in range(3):
                for _ in range(e[var]):
                    poly = _poly_mul(F, poly, forms[var])
            for k, v in poly.items():
                total[k] = F.add(total.get(k, 0), v)
        return CubicForm.from_terms(F, total)


def _poly_mul(F: GF, a: dict, b: dict) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        if not ca:
            continue
        for eb, cb in b.items():
            if not cb:
                continue
            e = (ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2])
            out[e] = F.add(out.get(e, 0), F.mul(ca, cb))
    return out


XYZ = lambda F: CubicForm.from_terms(F, {(1, 1, 1): 1})  # noqa: E731


@dataclass(frozen=True)
class CurveSpec:
    """An elliptic curve given by a nonsingular plane cubic.

    ``form`` is ``"weierstrass"`` (params a, b), ``"hesse"`` (param c) or
    ``"cubic"`` for a curve obtained by a change of coordinates, in which case
    ``origin`` names the curve it came from.
    """

    field: GF
    form: str
    params: tuple[int, ...]
    cubic: CubicForm
    origin: CurveSpec | None = dc_field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.cubic.coeffs[0] == 0:
            raise ValueError("the defining cubic must contain X^3")

    @cached_property
    def points(self) -> np.ndarray:
        """Rational points in the enumeration order of PG(2, q), as rows."""
        F = self.field
        total = geo.point_count(F.q, 2)
        chunks = []
        for lo in range(0, total, 1 << 16):
            P = geo.points_array(F, 2, lo, min(lo + (1 << 16), total))
            chunks.append(P[self.cubic.evaluate_many(P) == 0])
        return np.concatenate(chunks)

    @property
    def n(self) -> int:
        return int(self.points.shape[0])

    def contains(self, P) -> bool:
        return self.cubic.evaluate(P) == 0

    def describe(self) -> dict:
        src = self
        while src.origin is not None:
            src = src.origin
        return {"form": src.form, "params": list(src.params), "q": self.field.q,
                "n": self.n, "j": j_invariant(self)}

    def label(self) -> str:
        src = self
        while src.origin is not None:
            src = src.origin
        F = self.field
        if src.form == "weierstrass":
            return f"q={F.q} weierstrass a={F.format(src.params[0])} b={F.format(src.params[1])}"
        return f"q={F.q} hesse c={F.format(src.params[0])}"


def weierstrass(F: GF, a: int, b: int) -> CurveSpec:
    """Y^2 Z = X^3 + aXZ^2 + bZ^3, stored as Y^2Z - X^3 - aXZ^2 - bZ^3."""
    a, b = int(a), int(b)
    disc = F.add(F.mul(4, F.pow(a, 3)), F.mul(F.from_int(27), F.mul(b, b)))
    if disc == 0:
        raise SingularCurve(f"4a^3 + 27b^2 = 0 for a={F.format(a)}, b={F.format(b)}")
    cubic = CubicForm.from_terms(F, {(0, 2, 1): 1, (3, 0, 0): F.neg(1),
                                     (1, 0, 2): F.neg(a), (0, 0, 3): F.neg(b)})
    return CurveSpec(F, "weierstrass", (a, b), cubic)


def singular_points(C: CubicForm) -> np.ndarray:
    """Rational points where the cubic and its three partials all vanish."""
    F = C.field
    total = geo.point_count(F.q, 2)
    found = []
    for lo in range(0, total, 1 << 16):
        P = geo.points_array(F, 2, lo, min(lo + (1 << 16), total))
        P = P[C.evaluate_many(P) == 0]
        if P.size:
            g = C.gradient_many(P)
            found.append(P[(g == 0).all(axis=1)])
    return np.concatenate(found) if found else np.zeros((0, 3), dtype=np.int64)


def hesse(F: GF, c: int) -> CurveSpec:
    """X^3 + Y^3 + Z^3 - 3cXYZ = 0."""
    c = int(c)
    cubic = CubicForm.from_terms(F, {(3, 0, 0): 1, (0, 3, 0): 1, (0, 0, 3): 1,
                                     (1, 1, 1): F.neg(F.mul(3, c))})
    excluded = F.pow(c, 3) == 1
    singular = singular_points(cubic).shape[0] > 0
    # the exclusion list c in {1, w, w^2} and the exhaustive test must agree
    assert excluded == singular, (F, c)
    if excluded:
        raise SingularCurve(f"Hesse parameter c={F.format(c)} is a cube root of unity")
    return CurveSpec(F, "hesse", (c,), cubic)


def hasse_check(n: int, q: int) -> bool:
    return (n - q - 1) ** 2 <= 4 * q


# -- j-invariant -------------------------------------------------------------
def short_weierstrass_model(E: CurveSpec) -> tuple[int, int]:
    """(a, b) with E isomorphic to y^2 = x^3 + ax + b."""
    F = E.field
    if E.form == "weierstrass":
        return E.params
    if E.form == "hesse":
        flex = geo.normalize(F, (1, F.neg(1), 0))
    else:
        flex = next((tuple(int(v) for v in P) for P in E.points
                     if E.cubic.hessian_det(P) == 0), None)
        if flex is None:
            raise ValueError("no rational flex to reduce from")
    L = tuple(int(v) for v in E.cubic.gradient_many([flex])[0])
    # new coordinates: flex -> (0:1:0), tangent line -> Z = 0
    on_L = geo.right_kernel(F, np.array([L]))
    m1 = next(v for v in on_L if geo.rank(F, np.array([v, flex])) == 2)
    k = next(i for i in range(3) if L[i])
    m3 = tuple(int(i == k) for i in range(3))
    M = np.array([m1, flex, m3], dtype=np.int64).T
    g = E.cubic.substitute(M).coeffs
    alpha = g[_SLOT[(3, 0, 0)]]
    assert g[_SLOT[(2, 1, 0)]] == g[_SLOT[(1, 2, 0)]] == g[_SLOT[(0, 3, 0)]] == 0
    beta = g[_SLOT[(0, 2, 1)]]
    gamma, delta = g[_SLOT[(1, 1, 1)]], g[_SLOT[(0, 1, 2)]]
    eps, zeta, eta = g[_SLOT[(2, 0, 1)]], g[_SLOT[(1, 0, 2)]], g[_SLOT[(0, 0, 3)]]
    ib = F.inv(beta)
    A = F.neg(F.mul(alpha, ib))
    a1, a3 = F.mul(gamma, ib), F.mul(delta, ib)
    a2, a4, a6 = (F.neg(F.mul(t, ib)) for t in (eps, zeta, eta))
    # x = X/A, y = Y/A makes the cubic term monic
    a3, a4, a6 = F.mul(a3, A), F.mul(a4, A), F.mul(a6, F.mul(A, A))
    m, ad, fi = F.mul, F.add, F.from_int
    b2 = ad(m(a1, a1), m(4, a2))
    b4 = ad(m(2, a4), m(a1, a3))
    b6 = ad(m(a3, a3), m(4, a6))
    c4 = F.sub(m(b2, b2), m(fi(24), b4))
    c6 = ad(F.neg(m(b2, m(b2, b2))), F.sub(m(fi(36), m(b2, b4)), m(fi(216), b6)))
    return int(F.neg(m(fi(27), c4))), int(F.neg(m(fi(54), c6)))


def j_invariant(E: CurveSpec) -> int:
    """1728 * 4a^3 / (4a^3 + 27b^2) on a short Weierstrass model."""
    src = E
    while src.origin is not None:
        src = src.origin
    F = src.field
    a, b = short_weierstrass_model(src)
    four_a3 = F.mul(4, F.pow(a, 3))
    den = F.add(four_a3, F.mul(F.from_int(27), F.mul(b, b)))
    if den == 0:
        raise SingularCurve("singular model")
    return int(F.div(F.mul(F.from_int(1728), four_a3), den))


# -- lines and secants -------------------------------------------------------
def cross(F: GF, u, v) -> np.ndarray:
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    m = F.mul
    return np.stack([F.sub(m(u[..., 1], v[..., 2]), m(u[..., 2], v[..., 1])),
                     F.sub(m(u[..., 2], v[..., 0]), m(u[..., 0], v[..., 2])),
                     F.sub(m(u[..., 0], v[..., 1]), m(u[..., 1], v[..., 0]))], axis=-1)


def lines_through(E: CurveSpec, P: Sequence[int]) -> dict[tuple[int, ...], list[int]]:
    """Lines through P meeting E outside P, mapped to the indices (into
    ``E.points``) of the curve points they carry other than P."""
    F = E.field
    pts = E.points
    P = np.asarray(P, dtype=np.int64)
    others = ~(pts == P).all(axis=1)
    idx = np.nonzero(others)[0]
    L = geo.normalize_rows(F, cross(F, np.broadcast_to(P, (idx.size, 3)), pts[idx]))
    out: dict = {}
    for i, row in zip(idx, L):
        out.setdefault(tuple(int(v) for v in row), []).append(int(i))
    return out


def trisecant_count(E: CurveSpec, P: Sequence[int]) -> int:
    """Rational lines through P carrying exactly 3 distinct points of E."""
    P = geo.normalize(E.field, P)
    on = 1 if E.contains(P) else 0
    lines = lines_through(E, P)
    # every curve point other than P lies on exactly one line through P
    assert sum(len(v) for v in lines.values()) == E.n - on
    return sum(1 for v in lines.values() if len(v) + on == 3)


def all_line_counts(E: CurveSpec) -> tuple[np.ndarray, np.ndarray]:
    """Every line of PG(2, q) (as rows) and how many curve points it carries."""
    F = E.field
    lines = geo.points_array(F, 2)
    return lines, geo.incidence_counts(F, lines, E.points)


def intersect_with_cubic(E: CurveSpec, C: CubicForm) -> list[tuple[int, ...]]:
    if C.is_multiple_of(E.cubic):
        raise IdenticalCurves("the cubic is the curve's own equation")
    pts = E.points[C.evaluate_many(E.points) == 0]
    assert pts.shape[0] <= 9, "more than 9 common points contradicts Bezout"
    return [tuple(int(v) for v in P) for P in pts]


# -- triangle normalization --------------------------------------------------
@dataclass(frozen=True)
class TriangleFrame:
    """A projectivity ``matrix`` (new = matrix @ old) after which XYZ = 0 cuts
    the curve in 9 distinct rational points, none a coordinate vertex."""

    matrix: np.ndarray
    curve: CurveSpec

    @property
    def points(self) -> np.ndarray:
        return self.curve.points

    @property
    def is_identity(self) -> bool:
        return bool((self.matrix == np.eye(3, dtype=np.int64)).all())


def _meets_triangle(E: CurveSpec) -> bool:
    if any(E.contains(v) for v in VERTICES):
        return False
    return len(intersect_with_cubic(E, XYZ(E.field))) == 9


def transform_curve(E: CurveSpec, T) -> CurveSpec:
    """Image of E under the projectivity new = T @ old."""
    F = E.field
    Tinv = geo.inverse(F, T)
    return CurveSpec(F, "cubic", (), E.cubic.substitute(Tinv), origin=E)


YZ_MATRIX = np.array([[1, 0, 0], [0, 0, 1], [0, 1, 0]], dtype=np.int64)


def is_yz_symmetric(E: CurveSpec) -> bool:
    return E.cubic.substitute(YZ_MATRIX).is_multiple_of(E.cubic)


def _symmetric_triangle(E: CurveSpec, tri: np.ndarray) -> np.ndarray | None:
    """Rows (l1, l2, l3) with l1 fixed by Y <-> Z and l3 the mirror of l2, so
    the new coordinates keep the Y <-> Z symmetry."""
    F = E.field
    fixed = [l for l in tri if l[1] == l[2]]
    for l2 in tri:
        l3 = l2[[0, 2, 1]]  # not rescaled, so the mirror is exact
        if geo.rank(F, np.array([l2, l3])) < 2:
            continue
        v23 = cross(F, l2, l3)
        if E.contains(v23):
            continue
        for l1 in fixed:
            T = np.array([l1, l2, l3], dtype=np.int64)
            if geo.rank(F, T) < 3:
                continue
            if E.contains(cross(F, l1, l2)) or E.contains(cross(F, l1, l3)):
                continue
            return T
    return None


def triangle_normalize(E: CurveSpec, keep_symmetry: bool | None = None) -> TriangleFrame:
    """Move E so that XYZ = 0 meets it in 9 distinct rational points.

    A curve symmetric under Y <-> Z keeps that symmetry (by default) by
    choosing a mirror-symmetric triangle.
    """
    F = E.field
    if _meets_triangle(E):
        return TriangleFrame(np.eye(3, dtype=np.int64), E)
    lines, counts = all_line_counts(E)
    tri = lines[counts == 3]
    if tri.shape[0] < 3:
        raise NoTriangleFound("fewer than three rational trisecants")
    if keep_symmetry is None:
        keep_symmetry = is_yz_symmetric(E)
    if keep_symmetry:
        T = _symmetric_triangle(E, tri)
        if T is None:
            raise NoTriangleFound("no mirror-symmetric triangle of rational trisecants")
        frame = TriangleFrame(T, transform_curve(E, T))
        assert _meets_triangle(frame.curve) and is_yz_symmetric(frame.curve)
        return frame
    inc = (F.dot(tri[:, None, :], E.points[None, :, :]) == 0)
    on_curve = set()
    for P in E.points:
        on_curve.add(tuple(int(v) for v in P))
    total = geo.point_count(F.q, 2)
    for lo in range(0, total, 4096):
        for P in geo.points_array(F, 2, lo, min(lo + 4096, total)):
            if tuple(int(v) for v in P) in on_curve:
                continue
            through = F.dot(tri, P) == 0
            cand = np.nonzero(through)[0]
            for i, j in itertools.combinations(cand, 2):
                used = inc[i] | inc[j]
                ok = ~through & ~(inc & used[None, :]).any(axis=1)
                k = np.nonzero(ok)[0]
                if k.size == 0:
                    continue
                T = np.array([tri[i], tri[j], tri[k[0]]], dtype=np.int64)
                frame = TriangleFrame(T, transform_curve(E, T))
                assert _meets_triangle(frame.curve)
                return frame
    raise NoTriangleFound("no triangle of rational trisecants off the curve")
