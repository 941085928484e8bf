"""Tests for NAP-spaces and the probability operations."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import cylinders, line_events, nat_events
from nap import engine
from nap.engine import FAIR_NAT, NAPSpace, ValueKind
from nap.errors import (
    ConditioningOnEmptyError,
    FairOnlyError,
    FamilyMismatchError,
    UnsupportedFunctionError,
)
from nap.events import CoinSequence, GridIndex, SpaceKind, WeightFn, coin, cylinder, interval, line, nat, prog
from nap.eventual import DirectedFamily
from nap.hyperreal import ALPHA, GAMMA, ONE, TAU, ZERO, HyperReal, infinitely_close, is_infinitesimal
from nap.oracle import DEFAULT_THETAS
from nap.quadratic import compare_reals, make_quadratic

Q_SPACE = NAPSpace(SpaceKind.Q)
R_SPACE = NAPSpace(SpaceKind.R)
COIN_SPACE = NAPSpace(SpaceKind.COIN)
SQRT2 = make_quadratic(0, 1, 2)


# Fair lottery on the natural numbers

def test_evens_and_odds_are_half():
    assert engine.probability(FAIR_NAT, prog(2, 0)).value == HyperReal(Fraction(1, 2))
    assert engine.probability(FAIR_NAT, prog(2, 1)).value == HyperReal(Fraction(1, 2))


@pytest.mark.parametrize('k', range(2, 11))
def test_multiples_of_k(k):
    assert engine.probability(FAIR_NAT, prog(k, 0)).value == HyperReal(Fraction(1, k))


def test_every_progression_has_probability_one_over_k():
    for k in range(1, 7):
        for l in range(k):
            assert engine.probability(FAIR_NAT, prog(k, l)).value == HyperReal(Fraction(1, k))


def test_numerosity_factorial():
    assert engine.numerosity(FAIR_NAT, prog(2, 0)).value == ALPHA / 2


def test_numerosity_odd_family():
    space = NAPSpace(SpaceKind.NAT, DirectedFamily.ODD_N)
    assert engine.numerosity(space, prog(2, 0)).value == (ALPHA - 1) / 2


def test_numerosity_all_family_candidates():
    space = NAPSpace(SpaceKind.NAT, DirectedFamily.ALL_N)
    result = engine.numerosity(space, prog(2, 0))
    assert result.kind is ValueKind.CANDIDATES
    assert set(result.values) == {ALPHA / 2, (ALPHA - 1) / 2}


def test_probability_all_family_candidates():
    space = NAPSpace(SpaceKind.NAT, DirectedFamily.ALL_N)
    result = engine.probability(space, prog(2, 0))
    assert str(result) == 'candidates: (1)/(2), (a - 1)/(2*a)'
    shadow = result.standard_part()
    assert shadow.kind is ValueKind.RATIONAL
    assert shadow.value == Fraction(1, 2)


def test_render_exact():
    assert str(engine.probability(FAIR_NAT, prog(7, 0))) == 'exact: (1)/(7)'


def test_numerosity_of_finite_set():
    assert engine.numerosity(FAIR_NAT, nat.finite([3, 7, 9])).value == HyperReal(3)


def test_numerosity_needs_fair_space():
    weighted = NAPSpace(SpaceKind.NAT, weight=WeightFn.periodic([1, 2]))
    with pytest.raises(FairOnlyError):
        engine.numerosity(weighted, prog(2, 0))


def test_space_rejects_wrong_family():
    with pytest.raises(FamilyMismatchError):
        NAPSpace(SpaceKind.Q, DirectedFamily.FACTORIAL_N)


def test_space_rejects_non_positive_weight():
    with pytest.raises(UnsupportedFunctionError):
        NAPSpace(SpaceKind.NAT, weight=WeightFn.periodic([1, 0]))


def test_epsilon0():
    assert engine.epsilon0(FAIR_NAT).value == 1 / ALPHA
    assert is_infinitesimal(engine.point_probability(FAIR_NAT, 17).value)


def test_epsilon0_times_total_weight_is_one():
    for space in (FAIR_NAT, NAPSpace(SpaceKind.NAT, weight=WeightFn.periodic([1, 2]))):
        total = engine.infinite_sum(space, space.weight, space.full())
        assert engine.epsilon0(space).value * total.value == ONE


def test_infinite_sums():
    ones = WeightFn.constant(SpaceKind.NAT)
    assert engine.infinite_sum(FAIR_NAT, ones, nat.full()).value == ALPHA
    assert engine.infinite_sum(FAIR_NAT, ones, prog(2, 0)).value == ALPHA / 2
    assert engine.infinite_sum(FAIR_NAT, ones, nat.finite([1, 2])).value == HyperReal(2)


def test_infinite_sum_space_mismatch():
    with pytest.raises(UnsupportedFunctionError):
        engine.infinite_sum(FAIR_NAT, WeightFn.constant(SpaceKind.Q), nat.full())


def test_weighted_probability():
    space = NAPSpace(SpaceKind.NAT, weight=WeightFn.periodic([1, 2]))
    assert engine.probability(space, prog(2, 0)).value == HyperReal(Fraction(1, 3))


def test_reference_point_does_not_change_probabilities():
    weight = WeightFn.periodic([1, 2])
    first = NAPSpace(SpaceKind.NAT, weight=weight, reference=1)
    second = NAPSpace(SpaceKind.NAT, weight=weight, reference=2)
    for event in (prog(2, 0), prog(3, 1), nat.finite([4, 5])):
        assert engine.probability(first, event).value == engine.probability(second, event).value
    assert engine.epsilon0(first).value != engine.epsilon0(second).value


def test_conditional_given_full():
    assert engine.conditional(FAIR_NAT, prog(3, 0), nat.full()).value == HyperReal(Fraction(1, 3))


def test_conditional_on_empty():
    with pytest.raises(ConditioningOnEmptyError):
        engine.conditional(FAIR_NAT, prog(2, 0), nat.empty())


def test_conditional_given_finite():
    assert engine.conditional_given_finite(FAIR_NAT, prog(2, 0), [1, 2, 3]) == Fraction(1, 3)
    weighted = NAPSpace(SpaceKind.NAT, weight=WeightFn.periodic([2, 1]))
    assert engine.conditional_given_finite(weighted, prog(2, 0), nat.finite([1, 2])) == Fraction(2, 3)


def test_conditional_given_empty_finite():
    with pytest.raises(ConditioningOnEmptyError):
        engine.conditional_given_finite(FAIR_NAT, prog(2, 0), [])


def test_density():
    assert engine.asymptotic_density(prog(3, 0)) == Fraction(1, 3)
    assert engine.asymptotic_density(nat.finite([5, 10])) == 0
    assert engine.asymptotic_density(prog(2, 1)) == Fraction(1, 2)


def test_decimal_text():
    assert engine.decimal_text(Fraction(1, 7), 6) == '0.142857'
    assert engine.decimal_text(Fraction(-7, 4), 2) == '-1.75'


# Rational line

def test_q_numerosities():
    assert engine.numerosity(Q_SPACE, line.positive(SpaceKind.Q)).value == ALPHA ** 2
    assert engine.numerosity(Q_SPACE, line.whole(SpaceKind.Q)).value == 2 * ALPHA ** 2 + 1


def test_q_naturals():
    result = engine.probability(Q_SPACE, nat.full())
    assert result.value == ALPHA / (2 * ALPHA ** 2 + 1)
    assert result.standard_part().value == 0


def test_q_point():
    assert engine.point_probability(Q_SPACE, Fraction(1, 2)).value == 1 / (2 * ALPHA ** 2 + 1)


@settings(max_examples=10)
@given(st.fractions(min_value=-4, max_value=4, max_denominator=5),
       st.fractions(min_value=Fraction(1, 5), max_value=4, max_denominator=5))
def test_q_numerosity_proportional_to_length(a, width):
    event = interval(SpaceKind.Q, a, a + width)
    assert engine.numerosity(Q_SPACE, event).value == width * ALPHA


def test_q_nested_conditional():
    inner = interval(SpaceKind.Q, Fraction(1, 3), Fraction(1, 2))
    outer = interval(SpaceKind.Q, 0, 2)
    assert engine.conditional(Q_SPACE, inner, outer).value == HyperReal(Fraction(1, 12))


@settings(max_examples=20)
@given(nat_events())
def test_natural_lottery_is_rational_lottery_given_naturals(event):
    on_nat = engine.probability(FAIR_NAT, event).value
    on_q = engine.conditional(Q_SPACE, event, nat.full()).value
    assert on_nat == on_q


# Real line

def test_r_rational_interval():
    value = engine.probability(R_SPACE, interval(SpaceKind.R, 0, 1)).value
    total = 2 * ALPHA ** 2 + 1 + 2 * ALPHA ** 2 * TAU
    assert value == ALPHA * (TAU + 1) / total


def test_r_nested_conditional():
    unit, four = interval(SpaceKind.R, 0, 1), interval(SpaceKind.R, 0, 4)
    assert engine.conditional(R_SPACE, unit, four).value == HyperReal(Fraction(1, 4))


def test_r_rationals_are_infinitesimal():
    shadow = engine.arch_probability(R_SPACE, line.rationals(SpaceKind.R))
    assert shadow.value == 0


@settings(max_examples=10)
@given(st.fractions(min_value=-3, max_value=3, max_denominator=4),
       st.fractions(min_value=Fraction(1, 4), max_value=3, max_denominator=4))
def test_rational_lottery_is_real_lottery_given_rationals(a, width):
    on_q = engine.probability(Q_SPACE, interval(SpaceKind.Q, a, a + width)).value
    on_r = engine.conditional(R_SPACE, interval(SpaceKind.R, a, a + width), line.rationals(SpaceKind.R)).value
    assert on_q == on_r


def test_r_irrational_endpoint_enclosure():
    result = engine.conditional(R_SPACE, interval(SpaceKind.R, 0, SQRT2), interval(SpaceKind.R, 0, 2))
    assert result.kind is ValueKind.ENCLOSURE
    shadow = result.standard_part()
    low, high = shadow.values[0], shadow.values[-1]
    target = SQRT2 / 2
    assert compare_reals(low, target) <= 0 <= compare_reals(high, target)
    assert high - low <= Fraction(1, 10 ** 5)


def test_r_conditioning_on_irrational_interval():
    half = interval(SpaceKind.R, 0, SQRT2 / 2)
    result = engine.conditional(R_SPACE, half, interval(SpaceKind.R, 0, SQRT2))
    assert result.kind is ValueKind.ENCLOSURE
    low, high = result.standard_part().values[0], result.standard_part().values[-1]
    assert low <= Fraction(1, 2) <= high
    assert high - low <= Fraction(1, 10 ** 4)


def test_r_conditioning_on_smaller_irrational_interval():
    wide = interval(SpaceKind.R, 0, make_quadratic(0, 1, 3))
    result = engine.conditional(R_SPACE, wide, interval(SpaceKind.R, 0, SQRT2))
    assert result.kind is ValueKind.ENCLOSURE
    assert result.values[-1] == ONE
    low = result.standard_part().values[0]
    assert Fraction(1) - Fraction(1, 10 ** 4) <= low <= 1


def test_r_irrational_probability_is_infinitesimal():
    shadow = engine.arch_probability(R_SPACE, interval(SpaceKind.R, 0, SQRT2))
    assert shadow.values == (Fraction(0),)


# Coin tosses

@pytest.mark.parametrize('codim', range(0, 11))
def test_cylinder_probability(codim):
    event = cylinder({i: 'H' if i % 2 else 'T' for i in range(1, codim + 1)})
    assert engine.probability(COIN_SPACE, event).value == HyperReal(Fraction(1, 2 ** codim))


def test_coin_singleton():
    value = engine.point_probability(COIN_SPACE, coin.ALL_HEADS).value
    assert value == 1 / GAMMA
    assert is_infinitesimal(value)


def test_coin_conditional_given_finite():
    lam = [coin.ALL_HEADS, CoinSequence('T', 'H'), coin.ALL_TAILS]
    assert engine.conditional_given_finite(COIN_SPACE, cylinder({1: 'H'}), lam) == Fraction(1, 3)


@given(cylinders(), st.lists(
    st.builds(CoinSequence, st.text(alphabet='HT', max_size=4), st.sampled_from('HT')),
    min_size=1, max_size=16,
))
def test_coin_conditional_counts_members(event, points):
    unique = list(dict.fromkeys(points))
    inside = sum(1 for p in unique if event.member(p))
    assert engine.conditional_given_finite(COIN_SPACE, event, unique) == Fraction(inside, len(unique))


# Axioms and properties

def test_axiom_report_on_natural_numbers():
    events = [prog(2, 0), prog(2, 1), nat.empty(), nat.finite([3])]
    partition = [prog(3, r) for r in range(3)]
    report = engine.axiom_report(FAIR_NAT, events, partition)
    assert report.passed
    assert report.summary()['fail'] == 0
    assert {c.name for c in report.checks} >= {
        'normalization', 'nonnegative', 'zero iff empty', 'one iff full',
        'finite additivity', 'equal infinitesimal singletons', 'perfect additivity',
    }
    assert list(report.to_frame().columns) == ['check', 'subject', 'status', 'detail']


def test_axiom_report_on_coin():
    report = engine.axiom_report(COIN_SPACE, [cylinder({1: 'H'}), cylinder({1: 'T', 2: 'H'})])
    assert report.passed


@pytest.mark.parametrize('k', range(2, 9))
def test_perfect_additivity(k):
    total = ZERO
    for l in range(k):
        total = total + engine.probability(FAIR_NAT, prog(k, l)).value
    assert total == ONE


@settings(max_examples=100)
@given(nat_events(), nat_events())
def test_finite_additivity(a, b):
    b = b.difference(a)
    joint = engine.probability(FAIR_NAT, a.union(b)).value
    assert joint == engine.probability(FAIR_NAT, a).value + engine.probability(FAIR_NAT, b).value


@settings(max_examples=100)
@given(cylinders(), cylinders())
def test_finite_additivity_coin(a, b):
    b = b.difference(a)
    joint = engine.probability(COIN_SPACE, a.union(b)).value
    assert joint == engine.probability(COIN_SPACE, a).value + engine.probability(COIN_SPACE, b).value


@settings(max_examples=60)
@given(line_events(SpaceKind.Q), line_events(SpaceKind.Q))
def test_finite_additivity_rational_line(a, b):
    b = b.difference(a)
    joint = engine.probability(Q_SPACE, a.union(b)).value
    assert joint == engine.probability(Q_SPACE, a).value + engine.probability(Q_SPACE, b).value


@settings(max_examples=60)
@given(line_events(SpaceKind.R), line_events(SpaceKind.R))
def test_finite_additivity_real_line(a, b):
    b = b.difference(a)
    joint = engine.probability(R_SPACE, a.union(b)).value
    assert joint == engine.probability(R_SPACE, a).value + engine.probability(R_SPACE, b).value


def _shadow_range(result):
    shadow = result.standard_part().values
    return shadow[0], shadow[-1]


@settings(max_examples=40)
@given(line_events(SpaceKind.R, irrational=True), line_events(SpaceKind.R, irrational=True))
def test_finite_additivity_real_enclosures(a, b):
    b = b.difference(a)
    window = interval(SpaceKind.R, -4, 4)
    joint_low, joint_high = _shadow_range(engine.conditional(R_SPACE, a.union(b), window))
    a_low, a_high = _shadow_range(engine.conditional(R_SPACE, a, window))
    b_low, b_high = _shadow_range(engine.conditional(R_SPACE, b, window))
    assert joint_low <= a_high + b_high
    assert a_low + b_low <= joint_high


@given(nat_events())
def test_zero_iff_empty(event):
    value = engine.probability(FAIR_NAT, event).value
    assert (value == ZERO) == event.is_empty
    assert (value == ONE) == event.is_full


@settings(max_examples=50)
@given(nat_events())
def test_asymptotic_limit_property(event):
    density = engine.asymptotic_density(event)
    assert engine.arch_probability(FAIR_NAT, event).value == density
    assert infinitely_close(engine.probability(FAIR_NAT, event).value, HyperReal(density))


@settings(max_examples=30)
@given(st.fractions(min_value=-3, max_value=3, max_denominator=4),
       st.fractions(min_value=Fraction(1, 4), max_value=2, max_denominator=4),
       st.integers(min_value=-3, max_value=3).filter(bool))
def test_shifted_intervals_have_equal_probabilities(a, width, shift):
    for space, kind, theta in ((Q_SPACE, SpaceKind.Q, ()), (R_SPACE, SpaceKind.R, DEFAULT_THETAS[2])):
        left = interval(kind, a, a + width)
        right = interval(kind, a + shift, a + shift + width)
        for n in (24, 120):
            assert left.count_at(GridIndex(n, theta)) == right.count_at(GridIndex(n, theta))
        assert engine.probability(space, left).value == engine.probability(space, right).value


@settings(max_examples=30)
@given(st.integers(min_value=1, max_value=8), st.data())
def test_identical_counts_give_equal_probabilities(k, data):
    l = data.draw(st.integers(min_value=0, max_value=k - 1))
    m = data.draw(st.integers(min_value=0, max_value=k - 1))
    for n in (5040, 40320):
        assert prog(k, l).count_at(n) == prog(k, m).count_at(n)
    assert engine.probability(FAIR_NAT, prog(k, l)).value == engine.probability(FAIR_NAT, prog(k, m)).value

    size = data.draw(st.integers(min_value=1, max_value=4))
    points = st.frozensets(st.integers(min_value=1, max_value=30), min_size=size, max_size=size)
    first, second = nat.finite(data.draw(points)), nat.finite(data.draw(points))
    assert engine.probability(FAIR_NAT, first).value == engine.probability(FAIR_NAT, second).value

    tosses = data.draw(st.integers(min_value=0, max_value=3))
    positions = st.lists(st.integers(min_value=1, max_value=6), unique=True, min_size=tosses, max_size=tosses)
    a = cylinder({p: data.draw(st.sampled_from('HT')) for p in data.draw(positions)})
    b = cylinder({p: data.draw(st.sampled_from('HT')) for p in data.draw(positions)})
    assert engine.probability(COIN_SPACE, a).value == engine.probability(COIN_SPACE, b).value
