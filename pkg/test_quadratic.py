"""Tests for quadratic irrational endpoints."""

from fractions import Fraction

import pytest

from nap.quadratic import (
    QuadraticIrrational,
    compare_reals,
    floor_difference,
    make_quadratic,
    parse_real,
    real_floor,
)

SQRT2 = make_quadratic(0, 1, 2)
SQRT5 = make_quadratic(0, 1, 5)


def test_rational_collapse():
    assert make_quadratic(1, 0, 2) == 1
    assert make_quadratic(1, 1, 4) == 3


def test_squarefree_radicand():
    assert make_quadratic(0, 1, 8) == make_quadratic(0, 2, 2)


def test_canonical_coefficients():
    x = make_quadratic(Fraction(1, 2), Fraction(1, 2), 5)
    assert (x.p, x.q, x.d, x.r) == (1, 1, 5, 2)


def test_floor():
    assert SQRT2.floor() == 1
    assert (-SQRT2).floor() == -2
    assert real_floor(SQRT2 * 100) == 141


def test_bracket():
    low, high = SQRT2.bracket(6)
    assert high - low == Fraction(1, 10 ** 6)
    assert compare_reals(low, SQRT2) < 0 < compare_reals(high, SQRT2)


def test_compare_with_rational():
    assert compare_reals(SQRT2, Fraction(141421, 100000)) == 1
    assert compare_reals(SQRT2, Fraction(3, 2)) == -1


def test_compare_different_radicands():
    assert compare_reals(SQRT2, SQRT5) == -1
    assert compare_reals(SQRT5 - 1, SQRT2) == -1


def test_same_radicand_arithmetic():
    assert SQRT2 - SQRT2 == 0
    assert isinstance(SQRT2 + 1, QuadraticIrrational)


def test_floor_difference_independent():
    assert floor_difference(SQRT5, SQRT2) == 0
    assert floor_difference(SQRT2 * 10, SQRT5) == 11


def test_parse_real():
    assert parse_real('1/3') == Fraction(1, 3)
    assert parse_real('sqrt(2)') == SQRT2
    assert parse_real('1/2*sqrt(2)') == make_quadratic(0, Fraction(1, 2), 2)
    assert parse_real('(sqrt(5) - 1)/2') == make_quadratic(-1, 1, 5, 2)


def test_parse_rejects_two_radicands():
    with pytest.raises(ValueError):
        parse_real('sqrt(2) + sqrt(3)')


def test_render():
    assert str(make_quadratic(-1, 1, 5, 2)) == '(-1 + sqrt(5))/2'
