"""Brute-force reference computations used only by the tests.

These walk every hyperplane (or every point) of PG(8, q) directly, sharing
nothing with the scan beyond field tables and point ranking.
"""
from __future__ import annotations

import itertools

import numpy as np

from nmds_elliptic import _kernels
from nmds_elliptic import geometry as geo

CHUNK = 1 << 20


def hyperplane_counts(track) -> np.ndarray:
    """|H cap track| for every hyperplane H of PG(8, q), indexed by rank."""
    F = track.field
    add, mul, _, _ = F.tables
    total = geo.point_count(F.q, 8)
    pts = np.ascontiguousarray(track.points)
    return np.concatenate([_kernels.all_hyperplane_counts(pts, F.q, lo, min(lo + CHUNK, total), add, mul)
                           for lo in range(0, total, CHUNK)])


def nine_point_hyperplanes(track, counts=None) -> np.ndarray:
    counts = hyperplane_counts(track) if counts is None else counts
    return geo.points_from_indices(track.field, 8, np.nonzero(counts == 9)[0])


def addable_ranks(track, counts=None) -> np.ndarray:
    """Ranks of points off the track lying on no 9-point hyperplane."""
    F = track.field
    add, mul, _, _ = F.tables
    hyps = np.ascontiguousarray(nine_point_hyperplanes(track, counts))
    total = geo.point_count(F.q, 8)
    found = np.concatenate([_kernels.uncovered_points(hyps, F.q, lo, min(lo + CHUNK, total), add, mul)
                            for lo in range(0, total, CHUNK)])
    return np.setdiff1d(found, geo.point_indices(F, track.points))


def curve_points_naive(F, form) -> list[tuple[int, int, int]]:
    """Rational points of a cubic by trying every normalized triple."""
    out = []
    for P in itertools.chain([(0, 0, 1)], ((0, 1, z) for z in range(F.q)),
                             ((1, y, z) for y in range(F.q) for z in range(F.q))):
        if int(form.evaluate(P)) == 0:
            out.append(P)
    return out


def weierstrass_group(q: int, a: int, b: int, points) -> np.ndarray:
    """Addition table (indices into ``points``) of y^2 = x^3 + ax + b over a
    prime field, with the point at infinity (0:1:0) as identity.  Chord and
    tangent formulas with plain modular arithmetic."""
    idx = {}
    for i, P in enumerate(points):
        X, Y, Z = (int(v) for v in P)
        idx[None if Z == 0 else (X * pow(Z, -1, q) % q, Y * pow(Z, -1, q) % q)] = i

    def add(P, R):
        if P is None:
            return R
        if R is None:
            return P
        (x1, y1), (x2, y2) = P, R
        if x1 == x2 and (y1 + y2) % q == 0:
            return None
        if P == R:
            lam = (3 * x1 * x1 + a) * pow(2 * y1, -1, q) % q
        else:
            lam = (y2 - y1) * pow(x2 - x1, -1, q) % q
        x3 = (lam * lam - x1 - x2) % q
        return (x3, (lam * (x1 - x3) - y1) % q)

    keys = list(idx)
    table = np.empty((len(keys), len(keys)), dtype=np.int64)
    for P in keys:
        for R in keys:
            table[idx[P], idx[R]] = idx[add(P, R)]
    return table


def subset_sums(table: np.ndarray, subsets: np.ndarray, zero: int) -> np.ndarray:
    acc = np.full(subsets.shape[0], zero, dtype=np.int64)
    for j in range(subsets.shape[1]):
        acc = table[acc, subsets[:, j]]
    return acc
