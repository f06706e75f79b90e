import functools

import numpy as np
import pytest

from nmds_elliptic import geometry as geo
from nmds_elliptic import special as sp
from nmds_elliptic.curves import triangle_normalize, weierstrass
from nmds_elliptic.errors import HypothesisViolated, NotNormalized
from nmds_elliptic.lift import lift_curve, sigma_hyperplane, yz_swap
from nmds_elliptic.suites import harmonic_hesse

from conftest import field


@functools.lru_cache(maxsize=None)
def frame(q):
    return triangle_normalize(harmonic_hesse(q))


@functools.lru_cache(maxsize=None)
def verdict(q):
    return sp.large_q_verdict(harmonic_hesse(q), keep_witnesses=10**6)


def test_killer_hyperplane_is_the_lift_of_its_cubic():
    E = frame(121).curve
    F = E.field
    slopes = sp.trisecant_slopes(E)
    a = next(a for a, M in slopes.items() if len(M) >= 2)
    m1, m2 = slopes[a][:2]
    H = sp.killer_hyperplane(F, a, m1, m2)
    assert H == sigma_hyperplane(sp.killer_cubic_form(F, a, m1, m2), E)
    assert H[1] == H[4] == H[8] == 0
    assert int(geo.incidence_counts(F, np.array([H]), lift_curve(E).points)[0]) == 9


def test_trisecant_slopes_brute_force():
    E = frame(121).curve
    F = E.field
    slopes = sp.trisecant_slopes(E)
    for a in list(slopes)[:4]:
        brute = []
        for m in range(1, F.q):
            line = (F.neg(m), 1, F.mul(a, m))  # Y - mX + amZ
            on = sum(1 for P in E.points.tolist() if F.dot(np.array(line), np.array(P)) == 0)
            if on == 3:
                brute.append(m)
        assert slopes[a] == brute


def test_candidate_classes_shape():
    q = 121
    classes = sp.special_candidates(frame(q))
    assert len(classes) == 36 * q
    for pat in sp.PATTERNS:
        assert sum(c.pattern == pat for c in classes) == 9 * q
    c = classes[0]
    Q = c.representative(5, 6, 7)
    assert Q[3] == 1 and c.key == (Q[0], Q[2], Q[5], Q[6], Q[7])


def test_random_points_lie_on_good_hyperplanes():
    """Every sampled Sigma point off the track is met by a 9-point hyperplane,
    taken from the reducible families, a class witness or its mirror image."""
    res = verdict(121)
    E = frame(121).curve
    F = E.field
    track = lift_curve(E)
    fam = sp.line_families(E)
    by_key = {tuple(w[k] for k in ("q1", "q3", "q6", "q7", "q8")): w for w in res.witnesses}
    rng = np.random.default_rng(5)
    pts = geo.points_from_indices(F, 8, rng.integers(0, geo.point_count(F.q, 8), 3000))
    # add members of every candidate family, which random sampling rarely reaches
    classes = sp.special_candidates(E)
    extra = [c.representative(*(int(v) for v in rng.integers(0, F.q, 3)))
             for c in classes[:: len(classes) // 200]]
    for Q in list(pts.tolist()) + extra:
        Q = geo.normalize(F, Q)
        if Q in track:
            continue
        H = sp.reducible_hyperplane(Q, fam, F)
        if H is None:
            S = tuple(int(v) for v in F.mul(np.array(Q), F.inv(int(Q[3]))))
            w = by_key[(S[0], S[2], S[5], S[6], S[7])]
            if w["witness"]["method"] == "cubic":
                H = w["witness"]["hyperplane"]
            else:
                T = yz_swap(S)
                H = sp.reducible_hyperplane(T, fam, F) or by_key[(T[0], T[2], T[5], T[6], T[7])]["witness"]["hyperplane"]
                H = yz_swap(H)
        assert geo.incident(F, H, Q)
        assert int(geo.incidence_counts(F, np.array([H]), track.points)[0]) == 9


def test_large_q_verdict_q121():
    res = verdict(121)
    assert res.verdict == "complete" and res.n == 144
    assert res.coverage.ok and res.coverage.min_trisecants >= 7
    assert res.classes == 36 * 121 == res.by_cubic + res.by_symmetry
    assert res.unresolved == []


def test_hypothesis_checks():
    with pytest.raises(HypothesisViolated):
        sp.large_q_verdict(harmonic_hesse(49))
    # y^2 = x^3 + 1 has j = 0
    with pytest.raises(HypothesisViolated):
        sp.large_q_verdict(weierstrass(field(127), 0, 1))


def test_not_normalized():
    # a Weierstrass model passes through the vertex (0:1:0)
    E = weierstrass(field(127), 1, 1)
    with pytest.raises(NotNormalized):
        sp.check_triangle(E)
    with pytest.raises(NotNormalized):
        sp.special_candidates(E)
    assert not sp.coverage_certificate(E).ok
    sp.check_triangle(frame(121).curve)
