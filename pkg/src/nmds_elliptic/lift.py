"""The cubic Veronese lift PG(2, q) -> PG(9, q) and the cubic/hyperplane
dictionary.

A plane point P goes to (f(P), X^2Y, X^2Z, XY^2, XYZ, XZ^2, Y^3, Y^2Z, YZ^2,
Z^3) evaluated at P, where f is the curve's equation.  Curve points land in
the hyperplane X0 = 0, which we identify with PG(8, q) by dropping X0; track
points are always stored with these 9 coordinates.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from . import geometry as geo
from .curves import CubicForm, CurveSpec, monomial_values
from .errors import SigmaHyperplane, TooFewPoints

# (1 2)(3 5)(6 9)(7 8) on X1..X9, written 0-based on the 9 stored coordinates
YZ_SWAP = (1, 0, 4, 3, 2, 8, 7, 6, 5)


def lift_values(E: CurveSpec, pts) -> np.ndarray:
    """Unnormalized 10-coordinate lifts of the rows of ``pts``."""
    mv = monomial_values(E.field, pts)
    out = mv.copy()
    out[:, 0] = E.field.dot(mv, np.array(E.cubic.coeffs))
    return out


def lift_point(E: CurveSpec, P: Sequence[int]) -> tuple[int, ...]:
    return geo.normalize(E.field, lift_values(E, [P])[0])


@dataclass(frozen=True)
class Track:
    curve: CurveSpec
    points: np.ndarray  # (n, 9), normalized rows

    @property
    def n(self) -> int:
        return int(self.points.shape[0])

    @property
    def field(self):
        return self.curve.field

    def generator_matrix(self) -> np.ndarray:
        """9 x n generator matrix of the code (columns are track points)."""
        return self.points.T.copy()

    @cached_property
    def index(self) -> dict[tuple[int, ...], int]:
        return {tuple(int(v) for v in row): i for i, row in enumerate(self.points)}

    def __contains__(self, P) -> bool:
        return tuple(int(v) for v in P) in self.index

    def with_point(self, P) -> Track:
        """The point set with one more point (curve bookkeeping unchanged)."""
        pts = np.vstack([self.points, np.asarray(P, dtype=np.int64)[None, :]])
        return Track(self.curve, pts)


def lift_curve(E: CurveSpec) -> Track:
    if E.n < 9:
        raise TooFewPoints(f"the curve has {E.n} < 9 rational points")
    vals = lift_values(E, E.points)
    assert (vals[:, 0] == 0).all()
    pts = geo.normalize_rows(E.field, vals[:, 1:])
    assert np.unique(pts, axis=0).shape[0] == pts.shape[0], "lift is not injective"
    return Track(E, pts)


def cubic_to_hyperplane(C: CubicForm, E: CurveSpec) -> tuple[int, ...]:
    """Coefficients (l0..l9) with C = l0*f + sum li * monomial_i."""
    F = E.field
    f = E.cubic.coeffs
    l0 = F.div(C.coeffs[0], f[0])
    lam = [l0] + [F.sub(C.coeffs[i], F.mul(l0, f[i])) for i in range(1, 10)]
    return geo.normalize(F, lam)


def sigma_hyperplane(C: CubicForm, E: CurveSpec) -> tuple[int, ...]:
    """The trace on X0 = 0 of the hyperplane of C, in 9 coordinates."""
    lam = cubic_to_hyperplane(C, E)
    if not any(lam[1:]):
        raise SigmaHyperplane("the cubic is a multiple of the curve equation")
    return geo.normalize(E.field, lam[1:])


def hyperplane_to_cubic(H: Sequence[int], E: CurveSpec) -> CubicForm:
    F = E.field
    H = [int(v) for v in H]
    if len(H) != 10:
        raise ValueError("expected 10 hyperplane coefficients")
    if not any(H[1:]):
        raise SigmaHyperplane("X0 = 0 carries the whole track")
    f = E.cubic.coeffs
    coeffs = [F.mul(H[0], f[0])] + [F.add(F.mul(H[0], f[i]), H[i]) for i in range(1, 10)]
    return CubicForm(F, tuple(coeffs))


def yz_swap(v):
    """Relabel coordinates of Sigma (9) or PG(9, q) (10) under Y <-> Z."""
    v = np.asarray(v)
    if v.shape[-1] == 9:
        out = v[..., list(YZ_SWAP)]
    elif v.shape[-1] == 10:
        out = v[..., [0] + [i + 1 for i in YZ_SWAP]]
    else:
        raise ValueError("expected 9 or 10 coordinates")
    return tuple(int(x) for x in out) if out.ndim == 1 else out
