#!/usr/bin/env python3
"""
Acceptance run for the NAP engine
Checks the exact results every lottery must reproduce, then cross-checks the
eventual counts against brute enumeration of the concrete grids
"""

import argparse
import sys
from fractions import Fraction

import numpy as np

from nap import engine, oracle
from nap.config import OracleCaps, get_settings
from nap.engine import FAIR_NAT, NAPSpace, ValueKind
from nap.events import CoinSequence, SpaceKind, coin, cylinder, interval, line, nat, prog
from nap.eventual import N_VAR, DirectedFamily, QuasiPolynomial, eventually_different, eventually_equal, limit
from nap.hyperreal import ALPHA, GAMMA, ONE, ZERO, HyperReal, from_fraction, infinitely_close, is_infinitesimal
from nap.quadratic import compare_reals, make_quadratic

Q_SPACE = NAPSpace(SpaceKind.Q)
R_SPACE = NAPSpace(SpaceKind.R)
COIN_SPACE = NAPSpace(SpaceKind.COIN)
NAT_FAMILIES = (DirectedFamily.ALL_N, DirectedFamily.EVEN_N, DirectedFamily.ODD_N, DirectedFamily.FACTORIAL_N)


def check(condition, label):
    if not condition:
        raise AssertionError(label)


def random_fraction(rng, low, high, max_den=6):
    den = int(rng.integers(1, max_den + 1))
    return Fraction(int(rng.integers(low * den, high * den + 1)), den)


def random_nat_event(rng):
    modulus = int(rng.integers(1, 7))
    residues = {r for r in range(modulus) if rng.random() < 0.5}
    added = set(rng.integers(1, 21, size=int(rng.integers(0, 4))).tolist())
    removed = set(rng.integers(1, 21, size=int(rng.integers(0, 4))).tolist())
    return nat.NatEvent(modulus, frozenset(residues)).union(nat.finite(added)).difference(nat.finite(removed))


def random_cylinder(rng):
    tosses = rng.choice(np.arange(1, 7), size=int(rng.integers(0, 4)), replace=False)
    return cylinder({int(i): 'H' if rng.random() < 0.5 else 'T' for i in tosses})


def random_quasi_polynomial(rng):
    slope = random_fraction(rng, 0, 3, 4)
    period = int(rng.integers(1, 5))
    return QuasiPolynomial(tuple(
        N_VAR * from_fraction(slope) + from_fraction(random_fraction(rng, -5, 5)) for _ in range(period)
    ))


def suite_natural_numbers(rng):
    """Fair lottery on the natural numbers"""
    half = HyperReal(Fraction(1, 2))
    check(engine.probability(FAIR_NAT, prog(2, 0)).value == half, "P(evens) = 1/2")
    check(engine.probability(FAIR_NAT, prog(2, 1)).value == half, "P(odds) = 1/2")
    for k in range(2, 11):
        check(engine.probability(FAIR_NAT, prog(k, 0)).value == HyperReal(Fraction(1, k)), f"P(multiples of {k})")
    for k in range(1, 7):
        for l in range(k):
            check(engine.probability(FAIR_NAT, prog(k, l)).value == HyperReal(Fraction(1, k)), f"P(prog({k},{l}))")
    odd = NAPSpace(SpaceKind.NAT, DirectedFamily.ODD_N)
    check(engine.numerosity(odd, prog(2, 0)).value == (ALPHA - 1) / 2, "numerosity of evens on odd sizes")
    every = NAPSpace(SpaceKind.NAT, DirectedFamily.ALL_N)
    result = engine.numerosity(every, prog(2, 0))
    check(result.kind is ValueKind.CANDIDATES, "all sizes leave evens undetermined")
    check(set(result.values) == {ALPHA / 2, (ALPHA - 1) / 2}, "candidates for evens")
    return [prog(2, 0), prog(2, 1)] + [prog(k, 0) for k in range(2, 11)]


def suite_rational_line(rng):
    """Fair lottery on the rationals"""
    check(engine.numerosity(Q_SPACE, line.positive(SpaceKind.Q)).value == ALPHA ** 2, "numerosity(Q+)")
    check(engine.numerosity(Q_SPACE, line.whole(SpaceKind.Q)).value == 2 * ALPHA ** 2 + 1, "numerosity(Q)")
    naturals = engine.probability(Q_SPACE, nat.full())
    check(naturals.value == ALPHA / (2 * ALPHA ** 2 + 1), "P(naturals in Q)")
    check(naturals.standard_part().value == 0, "st P(naturals in Q) = 0")
    events = [line.positive(SpaceKind.Q), line.whole(SpaceKind.Q), line.naturals(SpaceKind.Q)]
    for _ in range(10):
        a = random_fraction(rng, -4, 4)
        b = a + random_fraction(rng, 1, 4)
        event = interval(SpaceKind.Q, a, b)
        check(engine.numerosity(Q_SPACE, event).value == (b - a) * ALPHA, f"numerosity [{a},{b})")
        events.append(event)
    inner, outer = interval(SpaceKind.Q, Fraction(1, 3), Fraction(1, 2)), interval(SpaceKind.Q, 0, 2)
    check(engine.conditional(Q_SPACE, inner, outer).value == HyperReal(Fraction(1, 12)), "nested conditional")
    return events


def suite_real_line(rng):
    """Fair lottery on the reals"""
    sqrt2 = make_quadratic(0, 1, 2)
    unit, four = interval(SpaceKind.R, 0, 1), interval(SpaceKind.R, 0, 4)
    check(engine.probability(R_SPACE, unit).kind is ValueKind.EXACT, "rational endpoints are exact")
    check(engine.conditional(R_SPACE, unit, four).value == HyperReal(Fraction(1, 4)), "nested rational conditional")
    cut = interval(SpaceKind.R, 0, sqrt2)
    enclosure = engine.conditional(R_SPACE, cut, interval(SpaceKind.R, 0, 2))
    check(enclosure.kind is ValueKind.ENCLOSURE, "irrational endpoint gives an enclosure")
    shadow = enclosure.standard_part()
    low, high = shadow.values[0], shadow.values[-1]
    check(compare_reals(low, sqrt2 / 2) <= 0 <= compare_reals(high, sqrt2 / 2), "enclosure contains sqrt(2)/2")
    check(high - low <= Fraction(1, 10 ** 5), "enclosure width")
    check(engine.arch_probability(R_SPACE, line.rationals(SpaceKind.R)).value == 0, "rationals are infinitesimal")
    return [unit, four, cut]


def suite_coin_tosses(rng):
    """Infinite coin tosses"""
    for codim in range(0, 11):
        event = cylinder({i: 'H' if i % 2 else 'T' for i in range(1, codim + 1)})
        check(engine.probability(COIN_SPACE, event).value == HyperReal(Fraction(1, 2 ** codim)), f"codimension {codim}")
    events = []
    for _ in range(20):
        event = random_cylinder(rng)
        size = int(rng.integers(1, 17))
        points = list(dict.fromkeys(
            CoinSequence(''.join(rng.choice(['H', 'T'], size=int(rng.integers(0, 5)))), str(rng.choice(['H', 'T'])))
            for _ in range(size)
        ))
        inside = sum(1 for p in points if event.member(p))
        check(engine.conditional_given_finite(COIN_SPACE, event, points) == Fraction(inside, len(points)),
              f"conditional given finite for {event}")
        events.append(event)
    singleton = engine.point_probability(COIN_SPACE, coin.ALL_HEADS).value
    check(singleton == 1 / GAMMA and is_infinitesimal(singleton), "singleton is 1/gamma")
    return events


def suite_cross_space(rng):
    """Natural lottery inside the rational lottery"""
    events = []
    for _ in range(20):
        event = random_nat_event(rng)
        on_nat = engine.probability(FAIR_NAT, event).value
        on_q = engine.conditional(Q_SPACE, event, nat.full()).value
        check(on_nat == on_q, f"cross-space {event}")
        events.append(event)
    return events


def suite_axioms(rng):
    """Axioms and asymptotic properties"""
    report = engine.axiom_report(FAIR_NAT, [prog(2, 0), prog(3, 1), nat.empty(), nat.finite([4])],
                                 [prog(3, r) for r in range(3)])
    check(report.passed, "axiom report on nat")
    check(engine.axiom_report(COIN_SPACE, [cylinder({1: 'H'}), cylinder({2: 'T'})]).passed, "axiom report on coin")
    for k in range(2, 9):
        total = ZERO
        for l in range(k):
            total = total + engine.probability(FAIR_NAT, prog(k, l)).value
        check(total == ONE, f"perfect additivity k={k}")
    for _ in range(100):
        a, b = random_nat_event(rng), random_nat_event(rng)
        b = b.difference(a)
        joint = engine.probability(FAIR_NAT, a.union(b)).value
        check(joint == engine.probability(FAIR_NAT, a).value + engine.probability(FAIR_NAT, b).value,
              f"finite additivity {a} ; {b}")
        c, d = random_cylinder(rng), random_cylinder(rng)
        d = d.difference(c)
        joint = engine.probability(COIN_SPACE, c.union(d)).value
        check(joint == engine.probability(COIN_SPACE, c).value + engine.probability(COIN_SPACE, d).value,
              f"finite additivity {c} ; {d}")
    for _ in range(50):
        event = random_nat_event(rng)
        value = engine.probability(FAIR_NAT, event).value
        check((value == ZERO) == event.is_empty, f"zero iff empty {event}")
        check(infinitely_close(value, HyperReal(engine.asymptotic_density(event))), f"density {event}")
    left, right = interval(SpaceKind.Q, 0, 1), interval(SpaceKind.Q, 5, 6)
    check(engine.probability(Q_SPACE, left).value == engine.probability(Q_SPACE, right).value, "identical counts")
    return []


def suite_limits(rng):
    """Limits of quasi-polynomial counts"""
    for _ in range(200):
        f, g = random_quasi_polynomial(rng), random_quasi_polynomial(rng)
        for family in NAT_FAMILIES:
            lf, lg = limit(f, family), limit(g, family)
            check(limit(f + g, family) == lf + lg, f"sum rule {f} ; {g}")
            check(limit(f * g, family) == lf * lg, f"product rule {f} ; {g}")
            if eventually_equal(f, g, family):
                check(lf == lg, f"equal counts give equal limits {f} ; {g}")
            if eventually_different(f, g, family):
                check(all(not v.is_zero for v in (lf - lg).branches.values()), f"different counts {f} ; {g}")
    return []


SUITES = [
    ("Natural numbers", suite_natural_numbers, DirectedFamily.FACTORIAL_N),
    ("Rational line", suite_rational_line, DirectedFamily.Q_GRID),
    ("Real line", suite_real_line, DirectedFamily.R_GRID),
    ("Coin tosses", suite_coin_tosses, DirectedFamily.COIN_CT),
    ("Cross-space", suite_cross_space, DirectedFamily.FACTORIAL_N),
    ("Axioms", suite_axioms, None),
    ("Limits", suite_limits, None),
]


def verify_with_oracle(emitted, caps):
    """Every emitted count against brute enumeration, plus grid sizes"""
    print("\n🔎 Oracle equivalence...")
    reports = []
    for family, events in emitted:
        for event in events:
            indices = oracle.default_indices(family, [event], caps)
            reports.append(oracle.verify_counts(event, family, indices, caps=caps))
    for family in (DirectedFamily.FACTORIAL_N, DirectedFamily.Q_GRID, DirectedFamily.R_GRID, DirectedFamily.COIN_CT):
        reports.append(oracle.verify_grid_sizes(family, caps=caps))
    frame = oracle.reports_frame(reports)
    failed = int(frame['failed'].sum())
    print(f"  {len(reports)} reports, {int(frame['passed'].sum())} indices passed, {failed} failed")
    for report in reports:
        if not report.passed:
            print(f"  ❌ {report.subject}")
    return failed == 0 and all(report.passed for report in reports)


def run_acceptance(caps):
    rng = np.random.default_rng(20240101)
    results, emitted = [], []
    for name, suite, family in SUITES:
        print(f"🧪 {name}...")
        try:
            events = suite(rng)
            print(f"✅ {name}")
            results.append((name, True))
            if family is not None:
                emitted.append((family, events))
        except AssertionError as e:
            print(f"❌ {name}: {e}")
            results.append((name, False))
        except Exception as e:
            print(f"❌ {name}: {type(e).__name__}: {e}")
            results.append((name, False))

    try:
        results.append(("Oracle equivalence", verify_with_oracle(emitted, caps)))
    except Exception as e:
        print(f"❌ Oracle equivalence: {type(e).__name__}: {e}")
        results.append(("Oracle equivalence", False))

    print("\n" + "=" * 50)
    print("📋 ACCEPTANCE SUMMARY")
    print("=" * 50)
    passed = 0
    for name, ok in results:
        print(f"{name:<25} {'✅ PASSED' if ok else '❌ FAILED'}")
        passed += ok
    print(f"\nOverall: {passed}/{len(results)} suites passed")
    if passed == len(results):
        print("\n🎉 ALL SUITES PASSED!")
    else:
        print(f"\n⚠️ {len(results) - passed} suite(s) failed.")
    return passed == len(results)


def main():
    parser = argparse.ArgumentParser(description="Acceptance suites for the NAP engine")
    parser.add_argument('--quick', action='store_true',
                        help="smaller oracle caps (m <= 6, n <= 120, N <= 8)")
    args = parser.parse_args()
    caps = get_settings().caps
    if args.quick:
        caps = caps.override(max_m=min(caps.max_m, 6), max_n=min(caps.max_n, 120), max_N=min(caps.max_N, 8))
    return 0 if run_acceptance(caps) else 1


if __name__ == '__main__':
    sys.exit(main())
