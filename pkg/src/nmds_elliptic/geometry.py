"""Projective points, hyperplanes and exact matrix algebra over GF(q).

Points and dual vectors are tuples of field encodings, normalized so that the
first nonzero coordinate is 1.  Matrices are numpy ``int64`` arrays of
encodings; every routine takes the field explicitly.
"""
from __future__ import annotations

from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from . import _kernels
from .errors import ZeroVector
from .field import GF


def normalize(F: GF, v: Sequence[int]) -> tuple[int, ...]:
    v = [int(c) for c in v]
    lead = next((c for c in v if c), None)
    if lead is None:
        raise ZeroVector("the zero vector is not a projective point")
    s = F.inv(lead)
    return tuple(int(F.mul(c, s)) for c in v)


def normalize_rows(F: GF, arr: np.ndarray) -> np.ndarray:
    """Normalize every row of ``arr``; all-zero rows raise ZeroVector."""
    arr = np.asarray(arr, dtype=np.int64)
    nz = arr != 0
    if not nz.any(axis=1).all():
        raise ZeroVector("zero row")
    lead = arr[np.arange(arr.shape[0]), nz.argmax(axis=1)]
    return F.mul(arr, F.inv(lead)[:, None])


def point_count(q: int, m: int) -> int:
    return (q ** (m + 1) - 1) // (q - 1)


def point_index(F: GF, pt: Sequence[int]) -> int:
    """Position of a normalized point in the enumeration order of PG(m, q)."""
    return int(_kernels.rank_point(np.asarray(pt, dtype=np.int64), F.q))


def point_from_index(F: GF, m: int, idx: int) -> tuple[int, ...]:
    out = np.empty(m + 1, dtype=np.int64)
    _kernels.unrank_point(idx, m, F.q, out)
    return tuple(int(c) for c in out)


def points_array(F: GF, m: int, start: int = 0, stop: int | None = None) -> np.ndarray:
    """Normalized points with indices in [start, stop) as rows."""
    total = point_count(F.q, m)
    stop = total if stop is None else min(stop, total)
    return points_from_indices(F, m, np.arange(start, stop, dtype=np.int64))


def points_from_indices(F: GF, m: int, idx) -> np.ndarray:
    q = F.q
    idx = np.asarray(idx, dtype=np.int64)
    out = np.zeros((idx.size, m + 1), dtype=np.int64)
    off = 0
    block = 1
    for lead in range(m, -1, -1):
        sel = (idx >= off) & (idx < off + block)
        if sel.any():
            rest = idx[sel] - off
            rows = np.zeros((rest.size, m + 1), dtype=np.int64)
            rows[:, lead] = 1
            for k in range(m, lead, -1):
                rows[:, k] = rest % q
                rest = rest // q
            out[sel] = rows
        off += block
        block *= q
    return out


def point_indices(F: GF, pts) -> np.ndarray:
    """Vectorized ``point_index`` for normalized rows."""
    pts = np.asarray(pts, dtype=np.int64)
    q, m = F.q, pts.shape[1] - 1
    lead = (pts != 0).argmax(axis=1)
    out = (q ** (m - lead) - 1) // (q - 1)
    val = np.zeros(pts.shape[0], dtype=np.int64)
    for k in range(m + 1):
        after = k > lead
        val = np.where(after, val * q + pts[:, k], val)
    return out + val


def enumerate_points(F: GF, m: int, start: int = 0, stop: int | None = None,
                     chunk: int = 1 << 16) -> Iterator[tuple[int, ...]]:
    """Yield the points of PG(m, q) with index in [start, stop), in order.

    Lexicographic order of normalized coordinate tuples: (0,..,0,1) first.
    Contiguous index ranges are the unit of parallel partitioning.
    """
    total = point_count(F.q, m)
    stop = total if stop is None else min(stop, total)
    for lo in range(start, stop, chunk):
        for row in points_array(F, m, lo, min(lo + chunk, stop)):
            yield tuple(int(c) for c in row)


def incident(F: GF, H: Sequence[int], P: Sequence[int]) -> bool:
    return int(F.dot(H, P)) == 0


# -- elimination -----------------------------------------------------------
def rref(F: GF, M) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form and its pivot columns.

    The pivot is the first nonzero entry at or below the current row, scanning
    columns left to right.
    """
    A = np.array(M, dtype=np.int64, copy=True)
    if A.ndim != 2:
        raise ValueError("expected a matrix")
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        A[r] = F.mul(A[r], F.inv(int(A[r, c])))
        col = A[:, c].copy()
        col[r] = 0
        others = np.nonzero(col)[0]
        if others.size:
            A[others] = F.sub(A[others], F.mul(col[others, None], A[r][None, :]))
        pivots.append(c)
        r += 1
    return A, pivots


def rref_with_transform(F: GF, M) -> tuple[np.ndarray, list[int], np.ndarray]:
    """RREF ``R`` of ``M`` plus the invertible ``T`` with ``R = T @ M``."""
    M = np.asarray(M, dtype=np.int64)
    rows, cols = M.shape
    aug = np.concatenate([M, np.eye(rows, dtype=np.int64)], axis=1)
    R, pivots = rref(F, aug)
    pivots = [c for c in pivots if c < cols]
    return R[:, :cols], pivots, R[:, cols:]


def rank(F: GF, M) -> int:
    return len(rref(F, M)[1])


def right_kernel(F: GF, M) -> list[tuple[int, ...]]:
    """Normalized basis of {v : M v = 0}, one vector per free column."""
    R, pivots = rref(F, M)
    cols = R.shape[1]
    basis = []
    for f in (c for c in range(cols) if c not in pivots):
        v = np.zeros(cols, dtype=np.int64)
        v[f] = 1
        for i, pc in enumerate(pivots):
            v[pc] = F.neg(int(R[i, f]))
        basis.append(normalize(F, v))
    return basis


def matmul(F: GF, A, B) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    return F.dot(A[:, None, :], B.T[None, :, :])


def inverse(F: GF, M) -> np.ndarray:
    M = np.asarray(M, dtype=np.int64)
    R, pivots, T = rref_with_transform(F, M)
    if len(pivots) != M.shape[0] or M.shape[0] != M.shape[1]:
        raise ValueError("matrix is not invertible")
    return T


def hyperplane_span(F: GF, points) -> tuple[int, ...] | None:
    """The hyperplane through ``points`` when they have rank dim - 1.

    Returns None when the points are rank deficient.
    """
    A = np.asarray(points, dtype=np.int64)
    if A.shape[0] < A.shape[1] - 1:
        return None
    ker = right_kernel(F, A)
    return ker[0] if len(ker) == 1 else None


# -- batched kernels -------------------------------------------------------
def batch_rank(F: GF, mats) -> np.ndarray:
    add, mul, neg, inv = F.tables
    return _kernels.batch_rank(np.ascontiguousarray(mats, dtype=np.int64), add, mul, neg, inv)


def batch_hyperplanes(F: GF, mats) -> tuple[np.ndarray, np.ndarray]:
    """Ranks and (when rank = cols - 1) normalized kernel vectors."""
    add, mul, neg, inv = F.tables
    return _kernels.batch_corank_one_kernel(
        np.ascontiguousarray(mats, dtype=np.int64), add, mul, neg, inv)


def incidence_counts(F: GF, hyps, pts) -> np.ndarray:
    add, mul, _, _ = F.tables
    return _kernels.incidence_counts(np.ascontiguousarray(hyps, dtype=np.int64),
                                     np.ascontiguousarray(pts, dtype=np.int64), add, mul)


# -- matrix text format ----------------------------------------------------
def format_matrix(M, q: int) -> str:
    M = np.asarray(M, dtype=np.int64)
    lines = [f"{M.shape[0]} {M.shape[1]} {q}"]
    lines += [" ".join(str(int(v)) for v in row) for row in M]
    return "\n".join(lines) + "\n"


def write_matrix(path, M, q: int) -> None:
    Path(path).write_text(format_matrix(M, q), encoding="utf-8")


def parse_matrix(text: str) -> tuple[np.ndarray, int]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    rows, cols, q = (int(t) for t in lines[0].split())
    body = [[int(t) for t in ln.split()] for ln in lines[1:]]
    if len(body) != rows or any(len(r) != cols for r in body):
        raise ValueError("matrix dimensions do not match header")
    M = np.array(body, dtype=np.int64).reshape(rows, cols)
    if M.size and (M.min() < 0 or M.max() >= q):
        raise ValueError("entry out of range")
    return M, q


def read_matrix(path) -> tuple[np.ndarray, int]:
    return parse_matrix(Path(path).read_text(encoding="utf-8"))
