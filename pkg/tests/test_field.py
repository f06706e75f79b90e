import pytest
from hypothesis import given, settings, strategies as st

from nmds_elliptic.errors import (CompositeP, DivisionByZero, NotASquare,
                                  UnsupportedCharacteristic, UnsupportedDegree)
from nmds_elliptic.field import GF, field_of_order, least_nonresidue

from conftest import field

QS = [7, 11, 13, 121, 169, 179, 25]


def poly_mul_mod(a, b, p, nu):
    """(a0 + a1 T)(b0 + b1 T) with T^2 = nu, coefficients mod p."""
    return ((a[0] * b[0] + nu * a[1] * b[1]) % p, (a[0] * b[1] + a[1] * b[0]) % p)


@pytest.mark.parametrize("q", QS)
def test_mul_matches_polynomial_arithmetic(q):
    F = field(q)
    for a in range(0, q, max(1, q // 23)):
        for b in range(0, q, max(1, q // 19)):
            if F.h == 1:
                assert int(F.mul(a, b)) == a * b % q
            else:
                got = F.coeffs(int(F.mul(a, b)))
                assert tuple(got) == poly_mul_mod(F.coeffs(a), F.coeffs(b), F.p, F.nonresidue)


@pytest.mark.parametrize("q", QS)
def test_every_nonzero_element_has_an_inverse(q):
    F = field(q)
    for a in range(1, q):
        assert int(F.mul(a, F.inv(a))) == 1


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(QS), st.data())
def test_field_axioms(q, data):
    F = field(q)
    a, b, c = (data.draw(st.integers(0, q - 1)) for _ in range(3))
    assert F.add(a, b) == F.add(b, a)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.add(a, F.neg(a)) == 0
    assert F.sub(F.add(a, b), b) == a


@pytest.mark.parametrize("q", [7, 11, 121, 179])
def test_multiplicative_group_is_cyclic_of_order_q_minus_1(q):
    F = field(q)
    for a in range(1, q):
        assert int(F.pow(a, q - 1)) == 1


def test_division_by_zero():
    F = field(7)
    with pytest.raises(DivisionByZero):
        F.inv(0)
    with pytest.raises(ZeroDivisionError):
        F.div(3, 0)


@pytest.mark.parametrize("q", [7, 13, 121, 169, 179])
def test_sqrt_roots_and_choice(q):
    F = field(q)
    squares = {int(F.mul(x, x)) for x in range(q)}
    for a in range(q):
        assert F.is_square(a) == (a in squares)
        if a in squares:
            r, s = int(F.sqrt(a)), int(F.sqrt(a, other_root=True))
            assert int(F.mul(r, r)) == a and int(F.mul(s, s)) == a
            assert r <= s and int(F.add(r, s)) == 0
        else:
            with pytest.raises(NotASquare):
                F.sqrt(a)


def test_sqrt3_exists_where_the_hesse_parameter_needs_it():
    for q in (121, 157, 169, 179):
        assert field(q).is_square(3)


def test_least_nonresidue():
    assert least_nonresidue(7) == 3
    assert least_nonresidue(11) == 2
    assert least_nonresidue(13) == 2
    assert field(121).nonresidue == 2


@pytest.mark.parametrize("q,err", [(8, UnsupportedCharacteristic), (9, UnsupportedCharacteristic),
                                   (343, UnsupportedDegree), (35, CompositeP), (1, CompositeP)])
def test_unsupported_orders(q, err):
    with pytest.raises(err):
        field_of_order(q)


def test_cube_roots_of_unity():
    for q, count in [(7, 3), (11, 1), (13, 3), (121, 3), (179, 1)]:
        F = field(q)
        roots = [int(w) for w in F.cube_roots_of_unity()]
        assert len(roots) == count
        assert all(int(F.pow(w, 3)) == 1 for w in roots)


def test_element_wrapper():
    F = GF(11, 2)
    x = F(13)
    assert int(x * x.inverse()) == 1
    assert int(x + 3 - 3) == 13
    assert (x ** 120) == F.one and int(F.zero) == 0
