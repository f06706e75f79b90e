"""Compiled inner loops.

Table-driven kernels take the ``(add, mul, neg, inv)`` lookup tables of a
field so they work for GF(p) and GF(p^2) alike.  The Sigma scan kernel uses
plain modular arithmetic and therefore needs a prime field.
"""
import numpy as np
from numba import njit


# -- projective point ranking -------------------------------------------------
@njit(cache=True, nogil=True)
def unrank_point(idx, m, q, out):
    off = 0
    block = 1
    lead = m
    for i in range(m, -1, -1):
        if idx < off + block:
            lead = i
            break
        off += block
        block *= q
    rest = idx - off
    for k in range(m + 1):
        out[k] = 0
    out[lead] = 1
    for k in range(m, lead, -1):
        out[k] = rest % q
        rest //= q


@njit(cache=True, nogil=True)
def rank_point(coords, q):
    m = coords.shape[0] - 1
    lead = 0
    while coords[lead] == 0:
        lead += 1
    off = 0
    block = 1
    for i in range(m, lead, -1):
        off += block
        block *= q
    rest = 0
    for k in range(lead + 1, m + 1):
        rest = rest * q + coords[k]
    return off + rest


# -- Gaussian elimination -----------------------------------------------------
@njit(cache=True, nogil=True)
def _rref_inplace(A, pivots, add, mul, neg, inv):
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if A[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for k in range(cols):
                t = A[r, k]
                A[r, k] = A[piv, k]
                A[piv, k] = t
        s = inv[A[r, c]]
        for k in range(c, cols):
            A[r, k] = mul[A[r, k], s]
        for i in range(rows):
            if i != r and A[i, c] != 0:
                f = neg[A[i, c]]
                for k in range(c, cols):
                    A[i, k] = add[A[i, k], mul[f, A[r, k]]]
        pivots[r] = c
        r += 1
    return r


@njit(cache=True, nogil=True)
def batch_rank(mats, add, mul, neg, inv):
    B, rows, cols = mats.shape
    out = np.empty(B, dtype=np.int64)
    A = np.empty((rows, cols), dtype=np.int64)
    piv = np.empty(min(rows, cols), dtype=np.int64)
    for b in range(B):
        for i in range(rows):
            for k in range(cols):
                A[i, k] = mats[b, i, k]
        out[b] = _rref_inplace(A, piv, add, mul, neg, inv)
    return out


@njit(cache=True, nogil=True)
def batch_corank_one_kernel(mats, add, mul, neg, inv):
    """Rank of each matrix and, when the right kernel is a line, its
    normalized spanning vector (zeros otherwise)."""
    B, rows, cols = mats.shape
    ranks = np.empty(B, dtype=np.int64)
    kern = np.zeros((B, cols), dtype=np.int64)
    A = np.empty((rows, cols), dtype=np.int64)
    piv = np.empty(min(rows, cols), dtype=np.int64)
    is_piv = np.zeros(cols, dtype=np.bool_)
    for b in range(B):
        for i in range(rows):
            for k in range(cols):
                A[i, k] = mats[b, i, k]
        r = _rref_inplace(A, piv, add, mul, neg, inv)
        ranks[b] = r
        if r != cols - 1:
            continue
        for k in range(cols):
            is_piv[k] = False
        for i in range(r):
            is_piv[piv[i]] = True
        free = 0
        while is_piv[free]:
            free += 1
        kern[b, free] = 1
        for i in range(r):
            kern[b, piv[i]] = neg[A[i, free]]
        lead = 0
        while kern[b, lead] == 0:
            lead += 1
        s = inv[kern[b, lead]]
        for k in range(cols):
            kern[b, k] = mul[kern[b, k], s]
    return ranks, kern


@njit(cache=True, nogil=True)
def incidence_counts(hyps, pts, add, mul):
    """For each hyperplane row, the number of point rows it contains."""
    B, d = hyps.shape
    n = pts.shape[0]
    out = np.zeros(B, dtype=np.int64)
    for b in range(B):
        c = 0
        for j in range(n):
            s = 0
            for k in range(d):
                s = add[s, mul[hyps[b, k], pts[j, k]]]
            if s == 0:
                c += 1
        out[b] = c
    return out


# -- brute-force oracles over all of PG(m, q) ---------------------------------
@njit(cache=True, nogil=True)
def all_hyperplane_counts(pts, q, lo, hi, add, mul):
    """|H cap pts| for every hyperplane H with index in [lo, hi)."""
    d = pts.shape[1]
    n = pts.shape[0]
    out = np.zeros(hi - lo, dtype=np.int64)
    h = np.empty(d, dtype=np.int64)
    for idx in range(lo, hi):
        unrank_point(idx, d - 1, q, h)
        c = 0
        for j in range(n):
            s = 0
            for k in range(d):
                s = add[s, mul[h[k], pts[j, k]]]
            if s == 0:
                c += 1
        out[idx - lo] = c
    return out


@njit(cache=True, nogil=True)
def uncovered_points(hyps, q, lo, hi, add, mul):
    """Indices in [lo, hi) of points lying on none of the hyperplanes."""
    d = hyps.shape[1]
    g = hyps.shape[0]
    found = np.empty(hi - lo, dtype=np.int64)
    nf = 0
    x = np.empty(d, dtype=np.int64)
    for idx in range(lo, hi):
        unrank_point(idx, d - 1, q, x)
        covered = False
        for j in range(g):
            s = 0
            for k in range(d):
                s = add[s, mul[hyps[j, k], x[k]]]
            if s == 0:
                covered = True
                break
        if not covered:
            found[nf] = idx
            nf += 1
    return found[:nf]


# -- the Sigma scan -----------------------------------------------------------
@njit(cache=True, nogil=True)
def scan_prefixes(cols, p, pruned, lo, hi, kgrid, max_hits, hits):
    """Scan candidate points of PG(8, p) against the columns of ``cols``.

    A candidate survives when every coordinate of ``x @ cols`` is nonzero.
    Candidates are grouped by their first seven coordinates (the prefix);
    for each prefix the zero sets of the first ``kgrid`` columns are lines
    in the grid of the last two coordinates and are struck out wholesale,
    survivors are then checked against the remaining columns.

    pruned:   prefixes are (1, x1..x6) with every xi nonzero and the grid is
              (GF(p)*)^2; hits are candidate ordinals.
    unpruned: prefixes are the normalized points of PG(6, p) and the grid
              is GF(p)^2; hits are point ranks in PG(8, p).

    Returns (number of hits written, first prefix not processed).
    """
    m = cols.shape[1]
    K = min(m, kgrid)
    nv = p - 1 if pruned else p
    base = 1 if pruned else 0
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        for b in range(1, p):
            if a * b % p == 1:
                inv[a] = b
                break
    x = np.zeros(9, dtype=np.int64)
    s = np.zeros(K, dtype=np.int64)
    dead = np.zeros(nv * nv, dtype=np.bool_)
    cap = hits.shape[0]
    nh = 0
    idx = lo
    while idx < hi:
        if nh + nv * nv > cap:
            break
        if max_hits >= 0 and nh >= max_hits:
            break
        if pruned:
            x[0] = 1
            r = idx
            for k in range(6, 0, -1):
                x[k] = r % nv + 1
                r //= nv
        else:
            unrank_point(idx, 6, p, x)
        for j in range(K):
            t = 0
            for k in range(7):
                t += x[k] * cols[k, j]
            s[j] = t % p
        for g in range(nv * nv):
            dead[g] = False
        all_dead = False
        for j in range(K):
            a = cols[7, j]
            b = cols[8, j]
            sj = s[j]
            if b != 0:
                binv = inv[b]
                for ia in range(nv):
                    v7 = ia + base
                    v8 = ((p - (sj + a * v7) % p) * binv) % p
                    ib = v8 - base
                    if ib >= 0:
                        dead[ia * nv + ib] = True
            elif a != 0:
                v7 = ((p - sj) * inv[a]) % p
                ia = v7 - base
                if ia >= 0:
                    for ib in range(nv):
                        dead[ia * nv + ib] = True
            elif sj == 0:
                all_dead = True
                break
        if not all_dead:
            for g in range(nv * nv):
                if dead[g]:
                    continue
                x[7] = g // nv + base
                x[8] = g % nv + base
                alive = True
                for j in range(K, m):
                    t = 0
                    for k in range(9):
                        t += x[k] * cols[k, j]
                    if t % p == 0:
                        alive = False
                        break
                if alive:
                    if pruned:
                        hits[nh] = idx * nv * nv + g
                    else:
                        hits[nh] = rank_point(x, p)
                    nh += 1
                    if max_hits >= 0 and nh >= max_hits:
                        break
        idx += 1
    return nh, idx
