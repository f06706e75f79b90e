import numpy as np
import pytest

from nmds_elliptic import geometry as geo
from nmds_elliptic.errors import TooFewPoints, TooLarge
from nmds_elliptic.lift import Track
from nmds_elliptic.tracks import (check_track, code_parameters, combination_chunks, max_secant,
                                  paritycheck_crosscheck, sample_subsets)

from conftest import wcurve, wtrack
from oracles import subset_sums, weierstrass_group


def test_combination_chunks_cover_all_subsets():
    blocks = list(combination_chunks(10, 4, chunk=17))
    allsubs = np.concatenate(blocks)
    assert allsubs.shape == (210, 4)
    assert np.unique(allsubs, axis=0).shape[0] == 210


def test_frozen_report_q7():
    r = check_track(wtrack(7, 0, 1))
    assert r.valid
    assert (r.max_secant, r.k, r.d, r.d_dual, r.s, r.s_dual) == (9, 9, 3, 9, 1, 1)


def test_frozen_report_q13_n21():
    r = check_track(wtrack(13, 0, 4))
    assert r.valid and r.n == 21
    assert (r.d, r.d_dual, r.s, r.s_dual) == (12, 9, 1, 1)
    # spans of 8 points carry 8 or 9 track points
    assert set(r.histogram) == {8, 9}
    assert sum(r.histogram.values()) == 203_490


def test_span_histogram_matches_group_law():
    """The span of 8 points picks up a 9th point exactly when minus their sum
    is a new curve point."""
    q, a, b = 13, 0, 4
    E, T = wcurve(q, a, b), wtrack(q, a, b)
    table = weierstrass_group(q, a, b, E.points.tolist())
    zero = [i for i, P in enumerate(E.points.tolist()) if P[2] == 0][0]
    neg = np.array([np.nonzero(table[i] == zero)[0][0] for i in range(E.n)])
    nine = eight = 0
    for subs in combination_chunks(E.n, 8):
        third = neg[subset_sums(table, subs, zero)]
        new = ~(subs == third[:, None]).any(axis=1)
        nine += int(new.sum())
        eight += int((~new).sum())
    r = check_track(T)
    assert r.histogram == {8: eight, 9: nine}


def test_sampled_mode_is_seeded():
    T = wtrack(13, 0, 4)
    r1 = check_track(T, mode="sampled", seed=7, trials=2000)
    r2 = check_track(T, mode="sampled", seed=7, trials=2000)
    assert r1.to_dict() == r2.to_dict()
    assert r1.condition_i.mode == "sampled" and r1.condition_i.seed == 7 and r1.valid
    subs = sample_subsets(21, 8, 500, 3)
    assert (np.diff(subs, axis=1) > 0).all()


def test_violations_are_detected():
    T = wtrack(11, 1, 3)
    F = T.field
    # a tenth point on the hyperplane of a good 9-set breaks condition (iii)
    r = check_track(T)
    subset = r.condition_ii.witness
    H = geo.hyperplane_span(F, T.points[subset[:8]])
    extra = next(P for P in geo.enumerate_points(F, 8, 0, 5000)
                 if geo.incident(F, H, P) and P not in T)
    bad = check_track(T.with_point(extra))
    assert not bad.condition_iii.holds and bad.condition_iii.witness is not None
    # a point in the span of 7 track points breaks condition (i)
    P = tuple(int(v) for v in F.add(T.points[0], T.points[1]))
    P = geo.normalize(F, P)
    assert not check_track(T.with_point(P)).condition_i.holds


def test_condition_ii_needs_a_nine_point_hyperplane():
    # 9 points in general position of PG(8, q): no hyperplane holds 9 of them
    F = wcurve(11, 1, 3).field
    pts = np.vstack([np.eye(9, dtype=np.int64)])
    pts = np.vstack([pts, np.ones((1, 9), dtype=np.int64)])
    r = check_track(Track(wcurve(11, 1, 3), pts))
    assert r.condition_i.holds and not r.condition_ii.holds
    assert F.q == 11


def test_too_few_and_too_large():
    T = wtrack(7, 0, 1)
    with pytest.raises(TooFewPoints):
        check_track(Track(T.curve, T.points[:8]))
    with pytest.raises(TooLarge):
        max_secant(T, cap=10)


def test_n9_track_spans_only_a_hyperplane():
    # all 9 points sum to zero, so they lie on one cubic other than E
    p = code_parameters(wtrack(7, 0, 2))
    assert p["n"] == 9 and (p["k"], p["d"], p["d_dual"], p["s"], p["s_dual"]) == (8, 2, 9, 0, 0)


@pytest.mark.parametrize("q,a,b", [(7, 0, 1), (11, 1, 3), (13, 2, 2)])
def test_parity_check_crosscheck(q, a, b):
    x = paritycheck_crosscheck(wtrack(q, a, b))
    assert x == {"generator": True, "parity_check": True, "agree": True}
