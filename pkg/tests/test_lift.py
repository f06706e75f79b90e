import numpy as np
import pytest

from nmds_elliptic import geometry as geo
from nmds_elliptic.curves import CubicForm, monomial_values
from nmds_elliptic.errors import SigmaHyperplane, TooFewPoints
from nmds_elliptic.lift import (YZ_SWAP, cubic_to_hyperplane, hyperplane_to_cubic, lift_curve,
                                lift_point, sigma_hyperplane, yz_swap)
from nmds_elliptic.suites import harmonic_hesse, weierstrass_curves

from conftest import field, wcurve, wtrack


def random_cubic(F, rng):
    return CubicForm(F, tuple(int(v) for v in rng.integers(0, F.q, 10)))


def test_track_lies_in_sigma_and_lift_is_injective():
    for q in (7, 11, 13):
        for E in weierstrass_curves(field(q), all_curves=True):
            T = lift_curve(E)
            assert T.n == E.n
            assert np.unique(T.points, axis=0).shape[0] == E.n


def test_lift_on_whole_plane_is_injective():
    # the cubic Veronese map is injective on PG(2, q)
    for q in (7, 11, 13):
        E = next(weierstrass_curves(field(q)))
        F = E.field
        plane = geo.points_array(F, 2)
        lifted = {lift_point(E, P) for P in plane}
        assert len(lifted) == plane.shape[0]


def test_too_few_points():
    E = next(E for E in weierstrass_curves(field(7), min_n=0) if E.n < 9)
    with pytest.raises(TooFewPoints):
        lift_curve(E)


def test_cubic_hyperplane_dictionary_roundtrip():
    E = wcurve(13, 0, 4)
    F = E.field
    rng = np.random.default_rng(0)
    for _ in range(50):
        C = random_cubic(F, rng)
        if not any(C.coeffs):
            continue
        H = cubic_to_hyperplane(C, E)
        back = hyperplane_to_cubic(H, E)
        assert back.is_multiple_of(C)


def test_hyperplane_incidence_is_cubic_vanishing():
    E = wcurve(11, 1, 3)
    F = E.field
    T = lift_curve(E)
    rng = np.random.default_rng(5)
    for _ in range(30):
        C = random_cubic(F, rng)
        if C.is_multiple_of(E.cubic) or not any(C.coeffs):
            continue
        H = sigma_hyperplane(C, E)
        on_h = F.dot(T.points, np.array(H)) == 0
        on_c = C.evaluate_many(E.points) == 0
        assert (on_h == on_c).all()


def test_sigma_hyperplane_of_the_curve_itself():
    E = wcurve(7, 0, 1)
    with pytest.raises(SigmaHyperplane):
        sigma_hyperplane(E.cubic, E)
    with pytest.raises(SigmaHyperplane):
        hyperplane_to_cubic((1,) + (0,) * 9, E)


def test_bezout_on_random_hyperplanes_of_a_large_track():
    T = lift_curve(harmonic_hesse(121))
    F = T.field
    rng = np.random.default_rng(2024)
    H = rng.integers(0, F.q, (10_000, 9))
    H[(H == 0).all(axis=1), 0] = 1
    H = geo.normalize_rows(F, H)
    assert geo.incidence_counts(F, H, T.points).max() <= 9


def test_yz_swap_is_an_involution():
    v = tuple(range(9))
    assert yz_swap(yz_swap(v)) == v
    assert yz_swap(v)[3] == 3
    w = tuple(range(10))
    assert yz_swap(yz_swap(w)) == w and yz_swap(w)[0] == 0
    assert sorted(YZ_SWAP) == list(range(9))


def test_yz_swap_matches_monomials():
    F = field(13)
    pts = geo.points_array(F, 2)[:50]
    swapped = pts[:, [0, 2, 1]]
    mv, ms = monomial_values(F, pts), monomial_values(F, swapped)
    assert (np.asarray(yz_swap(mv[:, 1:])) == ms[:, 1:]).all()


def test_yz_swap_preserves_the_hesse_track():
    T = lift_curve(harmonic_hesse(121))
    F = T.field
    assert T.n == 144
    image = {geo.normalize(F, yz_swap(P)) for P in T.points}
    assert image == set(T.index)


def test_generator_matrix_shape():
    assert wtrack(7, 0, 1).generator_matrix().shape == (9, 12)
