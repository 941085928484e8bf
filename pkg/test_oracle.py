"""Tests for the exhaustive enumeration oracle."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import cylinders, line_events, nat_events
from nap import oracle
from nap.config import OracleCaps
from nap.errors import IncompatibleIndexError, ResourceLimitError
from nap.events import CoinIndex, CoinSequence, GridIndex, SpaceKind, WeightFn, coin, cylinder, interval, line, nat, prog
from nap.eventual import DirectedFamily
from nap.quadratic import make_quadratic

FACT = DirectedFamily.FACTORIAL_N
Q_GRID = DirectedFamily.Q_GRID
R_GRID = DirectedFamily.R_GRID
COIN_CT = DirectedFamily.COIN_CT
SQRT2 = make_quadratic(0, 1, 2)
BOTH_TAILS = (coin.ALL_HEADS, coin.ALL_TAILS)


def test_factorial_grid():
    grid = oracle.enumerate_grid(FACT, 4)
    assert grid.size == 24
    assert list(grid.points()) == list(range(1, 25))


def test_rational_grid_size():
    grid = oracle.enumerate_grid(Q_GRID, 24)
    assert grid.size == 1153
    assert grid.size == grid.closed_size


def test_real_grid_size():
    grid = oracle.enumerate_grid(R_GRID, GridIndex(24, oracle.DEFAULT_THETAS[2]))
    assert grid.size == 2 * 576 + 1 + 2 * 576 * 2


def test_coin_grid_size():
    grid = oracle.enumerate_grid(COIN_CT, CoinIndex(3, BOTH_TAILS))
    assert grid.size == 16
    assert len(set(grid.points())) == 16


def test_caps_are_enforced():
    with pytest.raises(ResourceLimitError):
        oracle.enumerate_grid(FACT, 9)
    with pytest.raises(ResourceLimitError):
        oracle.enumerate_grid(Q_GRID, 24, caps=OracleCaps(max_n=10))


def test_odd_family_rejects_even_size():
    with pytest.raises(IncompatibleIndexError):
        oracle.enumerate_grid(DirectedFamily.ODD_N, 4)


def test_rational_grid_takes_no_theta():
    with pytest.raises(IncompatibleIndexError):
        oracle.enumerate_grid(Q_GRID, GridIndex(24, (make_quadratic(-1, 1, 2),)))


def test_grid_contains():
    grid = oracle.enumerate_grid(R_GRID, GridIndex(24, oracle.DEFAULT_THETAS[1]))
    assert grid.contains(Fraction(1, 3))
    assert not grid.contains(Fraction(1, 5))
    assert grid.contains((make_quadratic(-1, 1, 2) + 5) / 24)
    assert not grid.contains(make_quadratic(0, 1, 5) / 24)


def test_evens_match_factorial_counts():
    report = oracle.verify_counts(prog(2, 0), FACT)
    assert report.passed
    assert report.summary() == {'passed': 7, 'failed': 0, 'skipped': 0}


def test_positive_rationals_match():
    report = oracle.verify_counts(line.positive(SpaceKind.Q), Q_GRID, [24, 120])
    assert report.passed
    assert [r.brute for r in report.records] == [576, 14400]


def test_empty_counts_zero():
    report = oracle.verify_counts(nat.empty(), FACT)
    assert report.passed
    assert all(r.brute == 0 for r in report.records)


def test_conditional_matches():
    report = oracle.verify_conditional(prog(7, 0), FACT, [7])
    assert report.passed
    assert report.records[0].brute == Fraction(1, 7)


def test_conditional_unit_interval():
    report = oracle.verify_conditional(interval(SpaceKind.Q, 0, 1), Q_GRID, [120])
    assert report.records[0].brute == Fraction(120, 28801)
    assert report.passed


def test_full_conditional_is_one():
    report = oracle.verify_conditional(nat.full(), DirectedFamily.ALL_N, range(1, 20))
    assert all(r.brute == 1 for r in report.records)


def test_threshold_skips_small_indices():
    event = nat.finite([31]).union(prog(2, 0))
    report = oracle.verify_counts(event, DirectedFamily.ALL_N, range(1, 40))
    assert report.passed
    assert report.summary()['skipped'] == 30
    assert report.threshold_honored


def test_report_with_only_skipped_indices_fails():
    event = nat.finite([50]).union(prog(2, 0))
    report = oracle.verify_counts(event, DirectedFamily.ALL_N, range(1, 20))
    assert report.summary() == {'passed': 0, 'failed': 0, 'skipped': 19}
    assert not report.threshold_honored
    assert not report.passed
    assert not oracle.VerificationReport('empty', FACT, 'count').passed


def test_real_interval_matches():
    event = interval(SpaceKind.R, Fraction(-1, 2), 3)
    report = oracle.verify_counts(event, R_GRID, oracle.default_indices(R_GRID, caps=OracleCaps(max_n=120)))
    assert report.passed
    assert report.summary()['skipped'] == 0


def test_irrational_endpoint_within_bounds():
    event = interval(SpaceKind.R, 0, SQRT2)
    report = oracle.verify_counts(event, R_GRID, oracle.default_indices(R_GRID, caps=OracleCaps(max_n=120)))
    assert report.passed


def test_cylinder_matches():
    event = cylinder({1: 'H', 2: 'T', 4: 'H'})
    report = oracle.verify_counts(event, COIN_CT, oracle.coin_indices(range(0, 9)))
    assert report.passed
    assert report.summary()['passed'] == 5


def test_coin_indices_hold_required_tails():
    event = coin.sequences([CoinSequence('T', 'H')]).union(cylinder({1: 'H'}))
    indices = oracle.coin_indices([3], [event])
    assert set(indices[0].sigma) == set(BOTH_TAILS)
    report = oracle.verify_counts(event, COIN_CT, oracle.coin_indices(range(1, 6), [event]))
    assert report.passed


def test_weighted_counts_match():
    weight = WeightFn.periodic([1, 3], {5: 2})
    report = oracle.verify_counts(prog(2, 1), DirectedFamily.ALL_N, range(1, 30), weight=weight)
    assert report.passed


def test_verify_grid_sizes():
    for family in (FACT, Q_GRID, COIN_CT):
        assert oracle.verify_grid_sizes(family, caps=OracleCaps(max_n=120, max_N=6)).passed


def test_fineness():
    report = oracle.verify_fineness(Fraction(1, 3), Q_GRID, [24, 120])
    assert report.passed
    assert oracle.verify_fineness(10, FACT, range(2, 7)).passed


def test_nested_grids():
    assert oracle.verify_nested(FACT, range(2, 7)).passed
    assert oracle.verify_nested(Q_GRID, [24, 120]).passed


def test_workers_give_same_records():
    serial = oracle.verify_counts(prog(3, 1), FACT)
    threaded = oracle.verify_counts(prog(3, 1), FACT, workers=4)
    assert serial.records == threaded.records


def test_report_frames():
    report = oracle.verify_counts(prog(2, 0), FACT, range(2, 5))
    assert list(report.to_frame().columns) == ['index', 'brute', 'predicted', 'status']
    frame = oracle.reports_frame([report])
    assert frame.loc[0, 'passed'] == 3


@settings(max_examples=25)
@given(nat_events())
def test_nat_events_match_every_family(event):
    for family in oracle.NAT_FAMILIES:
        indices = range(2, 7) if family is FACT else None
        assert oracle.verify_counts(event, family, indices).passed


@settings(max_examples=25)
@given(cylinders())
def test_cylinders_match(event):
    assert oracle.verify_counts(event, COIN_CT, oracle.coin_indices(range(0, 7))).passed


@settings(max_examples=30)
@given(line_events(SpaceKind.R, irrational=True))
def test_line_membership_agrees_with_member(event):
    grid = oracle.enumerate_grid(R_GRID, GridIndex(6, oracle.DEFAULT_THETAS[2]))
    found = np.concatenate(grid.membership(event))
    expected = np.array([event.member(x) for x in grid.points()])
    assert (found == expected).all()
    assert grid.count(event) == event.count_at(grid.index)


@settings(max_examples=30)
@given(line_events(SpaceKind.Q))
def test_rational_membership_agrees_with_member(event):
    grid = oracle.enumerate_grid(Q_GRID, 12)
    found = np.concatenate(grid.membership(event))
    assert found.tolist() == [event.member(x) for x in grid.points()]
