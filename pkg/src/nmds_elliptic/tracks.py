"""Verification of the (n; 9, 7)-set conditions and NMDS code parameters.

The three track conditions on a point set Gamma of PG(8, q):

  (i)   every 8 points span a hyperplane,
  (ii)  some hyperplane contains exactly 9 points,
  (iii) every 10 points span PG(8, q).

Given (i), condition (iii) fails exactly when the span of some 8 points
carries at least 10 points, so everything is decided from 8-subset spans.
"""
from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass, field

import numpy as np

from . import geometry as geo
from .errors import TooFewPoints, TooLarge
from .lift import Track

MAX_SECANT_CAP = 24
PARITY_CAP = 18
CHUNK = 1 << 15


def combination_chunks(n: int, k: int, chunk: int = CHUNK):
    """All k-subsets of range(n) in lexicographic order, as int arrays."""
    it = itertools.combinations(range(n), k)
    while True:
        block = list(itertools.islice(it, chunk))
        if not block:
            return
        yield np.array(block, dtype=np.int64).reshape(len(block), k)


def sample_subsets(n: int, k: int, trials: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    out = np.empty((trials, k), dtype=np.int64)
    for lo in range(0, trials, CHUNK):
        hi = min(lo + CHUNK, trials)
        keys = rng.random((hi - lo, n))
        out[lo:hi] = np.sort(np.argpartition(keys, k - 1, axis=1)[:, :k], axis=1)
    return out


@dataclass
class Condition:
    holds: bool
    mode: str
    seed: int | None = None
    trials: int | None = None
    witness: list[int] | None = None
    detail: str = ""


@dataclass
class TrackReport:
    n: int
    condition_i: Condition
    condition_ii: Condition
    condition_iii: Condition
    max_secant: int | None = None
    d: int | None = None
    d_dual: int | None = None
    k: int | None = None
    s: int | None = None
    s_dual: int | None = None
    spans_with_8: int = 0  # spanned hyperplanes carrying only their 8 points
    histogram: dict = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return self.condition_i.holds and self.condition_ii.holds and self.condition_iii.holds

    def to_dict(self) -> dict:
        d = asdict(self)
        d["valid"] = self.valid
        d["histogram"] = {str(k): v for k, v in sorted(self.histogram.items())}
        return d


def _span_stats(track: Track, subsets: np.ndarray):
    F = track.field
    ranks, hyps = geo.batch_hyperplanes(F, track.points[subsets])
    counts = np.full(subsets.shape[0], -1, dtype=np.int64)
    ok = ranks == 8
    if ok.any():
        counts[ok] = geo.incidence_counts(F, hyps[ok], track.points)
    return ranks, hyps, counts


def check_track(track: Track, mode: str = "exhaustive", seed: int = 0,
                trials: int = 100_000) -> TrackReport:
    n = track.n
    if n < 9:
        raise TooFewPoints(f"{n} < 9 points")
    if mode == "exhaustive":
        source = combination_chunks(n, 8)
        info = dict(mode="exhaustive")
    elif mode == "sampled":
        subs = sample_subsets(n, 8, trials, seed)
        source = (subs[lo:lo + CHUNK] for lo in range(0, trials, CHUNK))
        info = dict(mode="sampled", seed=seed, trials=trials)
    else:
        raise ValueError(f"unknown mode {mode!r}")

    w_i = w_ii = w_iii = None
    hist: dict[int, int] = {}
    for subsets in source:
        ranks, _, counts = _span_stats(track, subsets)
        bad = np.nonzero(ranks != 8)[0]
        if w_i is None and bad.size:
            w_i = subsets[bad[0]].tolist()
        if w_ii is None:
            good = np.nonzero(counts == 9)[0]
            if good.size:
                w_ii = subsets[good[0]].tolist()
        over = np.nonzero(counts > 9)[0]
        if w_iii is None and over.size:
            w_iii = subsets[over[0]].tolist()
        vals, cnt = np.unique(counts[counts >= 0], return_counts=True)
        for v, c in zip(vals.tolist(), cnt.tolist()):
            hist[v] = hist.get(v, 0) + c

    report = TrackReport(
        n=n,
        condition_i=Condition(w_i is None, witness=w_i, **info),
        condition_ii=Condition(w_ii is not None, witness=w_ii, **info),
        condition_iii=Condition(w_iii is None, witness=w_iii, **info),
        histogram=hist,
    )
    report.spans_with_8 = hist.get(8, 0)
    if hist:
        report.max_secant = max(hist)
    if w_iii is not None:
        report.condition_iii.detail = f"span of 8 carries {max(hist)} points"
    if mode == "exhaustive" and n <= MAX_SECANT_CAP:
        params = code_parameters(track, report)
        report.k, report.d, report.d_dual, report.s, report.s_dual = (
            params["k"], params["d"], params["d_dual"], params["s"], params["s_dual"])
    return report


def max_secant(track: Track, cap: int = MAX_SECANT_CAP) -> int:
    """Largest number of track points on a hyperplane (exact for n <= cap)."""
    if track.n > cap:
        raise TooLarge(f"n = {track.n} exceeds the exhaustive cap {cap}")
    best = 0
    for subsets in combination_chunks(track.n, 8):
        _, _, counts = _span_stats(track, subsets)
        best = max(best, int(counts.max()))
    return best


def _some_dependent(F, cols: np.ndarray, w: int) -> bool:
    """Whether some w columns of ``cols`` (rows are columns) are dependent."""
    if w == 0:
        return False
    for subsets in combination_chunks(cols.shape[0], w):
        if (geo.batch_rank(F, cols[subsets]) < w).any():
            return True
    return False


def _all_full_rank(F, cols: np.ndarray, w: int, target: int) -> bool:
    if w == 0:
        return target == 0
    for subsets in combination_chunks(cols.shape[0], w):
        if (geo.batch_rank(F, cols[subsets]) < target).any():
            return False
    return True


def _max_on_hyperplane(F, cols: np.ndarray) -> int:
    """Most columns (rows of ``cols``, full rank k) on one hyperplane of F^k."""
    n, k = cols.shape
    best = 0
    for subsets in combination_chunks(n, k - 1):
        ranks, hyps = geo.batch_hyperplanes(F, cols[subsets])
        ok = ranks == k - 1
        if ok.any():
            best = max(best, int(geo.incidence_counts(F, hyps[ok], cols).max()))
    return best


def code_parameters(track: Track, report: TrackReport | None = None,
                    cap: int = MAX_SECANT_CAP) -> dict:
    """[n, k, d, d_dual, s, s_dual] of the code whose generator matrix has the
    track points as columns.

    When the points span less than PG(8, q) the code has k < 9 and distances
    are measured inside the span.
    """
    n = track.n
    if n > cap:
        raise TooLarge(f"n = {n} exceeds the exhaustive cap {cap}")
    F = track.field
    R, pivots = geo.rref(F, track.generator_matrix())
    k = len(pivots)
    cols = R[:k].T.copy()  # coordinates of the points in a basis of their span
    if k == 9:
        have = report is not None and report.max_secant is not None
        ms = report.max_secant if have else max_secant(track, cap)
    else:
        ms = _max_on_hyperplane(F, cols)
    d = n - ms
    skip = k == 9 and report is not None and report.condition_i.mode == "exhaustive" \
        and report.condition_i.holds  # any 8 columns already known independent
    d_dual = None
    for w in range(1, min(k + 1, n) + 1):
        if skip and w <= 8:
            continue
        if _some_dependent(F, cols, w):
            d_dual = w
            break
    s = n - k + 1 - d
    s_dual = None if d_dual is None else k + 1 - d_dual
    return {"n": n, "k": k, "d": d, "d_dual": d_dual, "s": s, "s_dual": s_dual,
            "nmds": s == 1 and s_dual == 1}


def nmds_by_generator(track: Track) -> bool:
    """Definition via a generator matrix: any k-1 columns independent, some k
    dependent, any k+1 of full rank."""
    F, cols, k = track.field, track.points, 9
    return (_all_full_rank(F, cols, k - 1, k - 1)
            and _some_dependent(F, cols, k)
            and _all_full_rank(F, cols, min(k + 1, track.n), k))


def parity_check_matrix(track: Track) -> np.ndarray:
    return np.array(geo.right_kernel(track.field, track.generator_matrix()), dtype=np.int64)


def nmds_by_parity_check(track: Track) -> bool:
    """Definition via a parity-check matrix H ((n-k) x n): any n-k-1 columns
    independent, some n-k dependent, any n-k+1 of full rank."""
    F, n = track.field, track.n
    H = parity_check_matrix(track)
    r = H.shape[0]
    cols = H.T.copy()
    if r == 0:
        return False
    return (_all_full_rank(F, cols, r - 1, r - 1)
            and _some_dependent(F, cols, r)
            and _all_full_rank(F, cols, min(r + 1, n), r))


def paritycheck_crosscheck(track: Track, cap: int = PARITY_CAP) -> dict:
    if track.n > cap:
        raise TooLarge(f"n = {track.n} exceeds the parity-check cap {cap}")
    g = nmds_by_generator(track)
    h = nmds_by_parity_check(track)
    return {"generator": g, "parity_check": h, "agree": g == h}

