"""Tests for the event algebras and their counts."""

from fractions import Fraction

import pytest
from hypothesis import given

from conftest import coin_sequences, cylinders, nat_events
from nap.errors import FamilyMismatchError, IncompatibleIndexError, UnsupportedFunctionError
from nap.events import (
    CoinIndex,
    CoinSequence,
    GridIndex,
    SpaceKind,
    WeightFn,
    coin,
    cylinder,
    interval,
    lift,
    line,
    nat,
    prog,
    sequences,
    weighted_count,
    weighted_count_at,
)
from nap.eventual import CountBounds, DirectedFamily, limit
from nap.hyperreal import ALPHA, GAMMA
from nap.quadratic import make_quadratic
from nap.oracle import DEFAULT_THETAS

FACT = DirectedFamily.FACTORIAL_N
SQRT2 = make_quadratic(0, 1, 2)
THETA = make_quadratic(-1, 1, 2)


# Natural numbers

def test_prog_multiples():
    sevens = prog(7, 0)
    assert str(sevens) == 'cls(7,0)'
    assert sevens.member(14)
    assert not sevens.member(15)


def test_prog_shifted():
    event = prog(2, -2)
    assert not event.member(2)
    assert event.member(4)
    assert str(event) == 'cls(2,0) & ~fin{2}'


def test_prog_wraps_to_small_members():
    event = prog(3, 5)
    assert event.member(1)
    assert event.member(4)
    assert not event.member(3)


def test_minimal_modulus():
    assert prog(4, 0).union(prog(4, 2)).modulus == 2


def test_nat_member_rejects_non_positive():
    with pytest.raises(IncompatibleIndexError):
        nat.full().member(0)


def test_nat_count_at():
    assert [prog(2, 0).count_at(n) for n in range(6)] == [0, 0, 1, 1, 2, 2]


def test_finite_nat_event():
    event = nat.finite([3, 1, 3])
    assert event.finite_points() == (1, 3)
    assert str(event) == 'fin{1,3}'


def test_nat_limit_factorial():
    count = prog(7, 0).eventual_count(FACT)
    assert limit(count, FACT).value == ALPHA / 7


def test_nat_family_check():
    with pytest.raises(FamilyMismatchError):
        prog(2, 0).eventual_count(DirectedFamily.Q_GRID)


@given(nat_events(), nat_events())
def test_nat_boolean_algebra_pointwise(a, b):
    for x in range(1, 61):
        assert a.union(b).member(x) == (a.member(x) or b.member(x))
        assert a.intersect(b).member(x) == (a.member(x) and b.member(x))
        assert a.complement().member(x) == (not a.member(x))


@given(nat_events(), nat_events())
def test_nat_de_morgan(a, b):
    assert (a | b).complement().same_as(~a & ~b)
    assert a.difference(b).disjoint_from(b)


@given(nat_events())
def test_nat_count_matches_quasi_polynomial(event):
    count = event.eventual_count(DirectedFamily.ALL_N)
    for n in range(count.threshold, count.threshold + 30):
        assert count.value_at(n) == event.count_at(n)


# Rational and real lines

def test_q_grid_size():
    assert line.whole(SpaceKind.Q).count_at(GridIndex(24)) == 1153


def test_q_interval_count():
    unit = interval(SpaceKind.Q, 0, 1)
    assert [unit.count_at(GridIndex(n)) for n in (1, 2, 6)] == [1, 2, 6]
    assert limit(unit.eventual_count(DirectedFamily.Q_GRID), DirectedFamily.Q_GRID).value == ALPHA


def test_q_total_numerosity():
    whole = line.whole(SpaceKind.Q).eventual_count(DirectedFamily.Q_GRID)
    assert limit(whole, DirectedFamily.Q_GRID).value == 2 * ALPHA ** 2 + 1


def test_q_positive_numerosity():
    count = line.positive(SpaceKind.Q).eventual_count(DirectedFamily.Q_GRID)
    assert limit(count, DirectedFamily.Q_GRID).value == ALPHA ** 2


def test_line_member():
    unit = interval(SpaceKind.Q, 0, 1)
    assert unit.member(0)
    assert unit.member(Fraction(1, 2))
    assert not unit.member(1)


def test_q_rejects_irrational_point():
    with pytest.raises(IncompatibleIndexError):
        line.whole(SpaceKind.Q).member(SQRT2)


def test_r_member_irrational():
    assert interval(SpaceKind.R, 1, 2).member(SQRT2)
    assert not line.rationals(SpaceKind.R).member(SQRT2)


def test_r_interval_count():
    unit = interval(SpaceKind.R, 0, 1)
    assert unit.count_at(GridIndex(24, (THETA,))) == 48


@pytest.mark.parametrize('theta', [theta for theta in DEFAULT_THETAS if theta])
@pytest.mark.parametrize('event', [
    interval(SpaceKind.R, 0, SQRT2),
    interval(SpaceKind.R, make_quadratic(0, -1, 2, 2), 3),
    line.halfline(SpaceKind.R, SQRT2) & ~line.rationals(SpaceKind.R),
    interval(SpaceKind.R, -1, make_quadratic(1, 1, 3, 2)) & ~line.finite(SpaceKind.R, [0]),
])
def test_r_irrational_cut_gives_bounds(event, theta):
    count = event.eventual_count(DirectedFamily.R_GRID)
    assert isinstance(count, CountBounds)
    checked = 0
    for n in (24, 120, 720):
        if count.lower.covers(n) and count.upper.covers(n):
            exact = event.count_at(GridIndex(n, theta))
            t = len(theta)
            assert count.lower.value_at(n, t=t) <= exact <= count.upper.value_at(n, t=t)
            checked += 1
    assert checked


def test_line_text_joins_pieces_across_removed_points():
    event = (interval(SpaceKind.Q, 0, 1) | line.finite(SpaceKind.Q, [5])) & ~line.finite(SpaceKind.Q, [Fraction(1, 2)])
    assert str(event) == 'interval(0,1) & ~fin{1/2} | fin{5}'
    assert str(~line.finite(SpaceKind.Q, [Fraction(1, 2)])) == '~fin{1/2}'
    cut = interval(SpaceKind.R, 0, 2) & ~line.finite(SpaceKind.R, [SQRT2, Fraction(1, 2)])
    assert str(cut) == 'interval(0,2) & ~fin{1/2,sqrt(2)}'


def test_embed_naturals():
    evens = lift(prog(2, 0), SpaceKind.Q)
    assert evens.member(4)
    assert not evens.member(Fraction(4, 3))
    assert evens.count_at(GridIndex(10)) == 5


def test_line_finite_points():
    event = line.finite(SpaceKind.Q, [Fraction(1, 2), 0, Fraction(1, 2)])
    assert event.finite_points() == (Fraction(0), Fraction(1, 2))


def test_line_complement_twice():
    event = interval(SpaceKind.R, Fraction(-1, 3), SQRT2)
    assert event.complement().complement().same_as(event)
    assert event.union(event.complement()).is_full


def test_empty_interval():
    assert interval(SpaceKind.Q, 1, 1).is_empty


def test_integers_between_cuts():
    event = interval(SpaceKind.Q, 0, 3).intersect(line.integers(SpaceKind.Q))
    assert event.finite_points() == (0, 1, 2)


# Coin tosses

def test_sequence_is_canonical():
    assert CoinSequence('HTH', 'H') == CoinSequence('HT', 'H')
    assert str(CoinSequence('HT', 'H')) == 'seq(HT,tail=H)'


def test_coin_grid_size():
    index = CoinIndex(3, (coin.ALL_HEADS, coin.ALL_TAILS))
    assert coin.full().count_at(index) == 16


def test_cylinder_count():
    index = CoinIndex(3, (coin.ALL_HEADS, coin.ALL_TAILS))
    assert cylinder({1: 'H'}).count_at(index) == 8


def test_cylinder_limit():
    event = cylinder({1: 'H', 3: 'T'})
    assert str(event) == 'cyl(i1=H,i3=T)'
    count = event.eventual_count(DirectedFamily.COIN_CT)
    assert limit(count, DirectedFamily.COIN_CT).value == GAMMA / 4


def test_sequences_required_tails():
    event = sequences([CoinSequence('T', 'H')])
    assert event.member(CoinSequence('T', 'H'))
    assert event.required_tails == frozenset({coin.ALL_HEADS})


@given(cylinders(), cylinders(), coin_sequences)
def test_coin_boolean_algebra_pointwise(a, b, point):
    assert a.union(b).member(point) == (a.member(point) or b.member(point))
    assert a.intersect(b).member(point) == (a.member(point) and b.member(point))
    assert a.complement().member(point) == (not a.member(point))


@given(cylinders())
def test_coin_count_matches(event):
    count = event.eventual_count(DirectedFamily.COIN_CT)
    for N in range(count.threshold, count.threshold + 3):
        index = CoinIndex(N, (coin.ALL_HEADS, coin.ALL_TAILS))
        assert count.value_at(N, s=index.s) == event.count_at(index)


# Weights

def test_periodic_weight():
    w = WeightFn.periodic([1, 2])
    assert weighted_count_at(nat.full(), w, 10) == 15
    count = weighted_count(nat.full(), w, FACT)
    assert limit(count, FACT).value == 3 * ALPHA / 2


def test_weight_exception():
    w = WeightFn.periodic([1], {5: 3})
    assert w.value(5) == 3
    assert weighted_count_at(nat.full(), w, 10) == 12


def test_only_constant_weights_off_nat():
    with pytest.raises(UnsupportedFunctionError):
        WeightFn(SpaceKind.Q, (Fraction(1), Fraction(2)))
