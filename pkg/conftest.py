"""
Shared hypothesis strategies for the test modules
"""

from fractions import Fraction

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from nap.events import CoinSequence, coin, line, nat
from nap.eventual import N_VAR, QuasiPolynomial
from nap.hyperreal import ALPHA, HyperReal, from_fraction
from nap.quadratic import compare_reals, make_quadratic

settings.register_profile('nap', deadline=None, max_examples=60)
settings.load_profile('nap')

small_ints = st.integers(min_value=-6, max_value=6)
rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def hyperreals(draw):
    """Ratios of small polynomials in alpha"""
    top = draw(st.lists(small_ints, min_size=1, max_size=3))
    bottom = draw(st.lists(small_ints, min_size=1, max_size=3).filter(any))
    num = sum((c * ALPHA ** k for k, c in enumerate(top)), HyperReal(0))
    den = sum((c * ALPHA ** k for k, c in enumerate(bottom)), HyperReal(0))
    return num / den


@st.composite
def nat_events(draw):
    """Unions of residue classes with a few points added or removed"""
    modulus = draw(st.integers(min_value=1, max_value=6))
    residues = draw(st.frozensets(st.integers(min_value=0, max_value=modulus - 1)))
    event = nat.NatEvent(modulus, residues)
    added = draw(st.frozensets(st.integers(min_value=1, max_value=20), max_size=3))
    removed = draw(st.frozensets(st.integers(min_value=1, max_value=20), max_size=3))
    return event.union(nat.finite(added)).difference(nat.finite(removed))


@st.composite
def cylinders(draw):
    conditions = draw(st.dictionaries(
        st.integers(min_value=1, max_value=4), st.sampled_from('HT'), max_size=3,
    ))
    return coin.cylinder(conditions)


line_cuts = st.fractions(min_value=-3, max_value=3, max_denominator=3)
irrational_cuts = st.sampled_from([
    make_quadratic(0, 1, 2),
    make_quadratic(0, -1, 2),
    make_quadratic(0, 1, 2, 2),
    make_quadratic(1, 1, 3, 2),
    make_quadratic(-1, 1, 5, 2),
])


@st.composite
def line_events(draw, space, irrational=False):
    """Intervals, half-lines, finite sets and integer classes, added or removed in turn"""
    cuts = line_cuts | irrational_cuts if irrational else line_cuts
    event = line.empty(space)
    for _ in range(draw(st.integers(min_value=1, max_value=3))):
        shape = draw(st.sampled_from(['interval', 'halfline', 'finite', 'class']))
        if shape == 'interval':
            a, b = draw(cuts), draw(cuts)
            piece = line.interval(space, a, b) if compare_reals(a, b) <= 0 else line.interval(space, b, a)
        elif shape == 'halfline':
            piece = line.halfline(space, draw(cuts))
        elif shape == 'finite':
            piece = line.finite(space, draw(st.lists(cuts, min_size=1, max_size=3)))
        else:
            k = draw(st.integers(min_value=1, max_value=4))
            piece = line.residue_class(space, k, draw(st.integers(min_value=0, max_value=k - 1)))
        if draw(st.booleans()):
            piece = piece.intersect(line.rationals(space))
        event = event.union(piece) if event.is_empty or draw(st.booleans()) else event.difference(piece)
    return event


coin_sequences = st.builds(
    CoinSequence,
    st.text(alphabet='HT', max_size=4),
    st.sampled_from('HT'),
)


@st.composite
def quasi_polynomials(draw):
    """Counting-like quasi-polynomials: a*n + periodic corrections"""
    slope = draw(st.fractions(min_value=0, max_value=3, max_denominator=4))
    period = draw(st.integers(min_value=1, max_value=4))
    corrections = draw(st.lists(rationals, min_size=period, max_size=period))
    return QuasiPolynomial(tuple(N_VAR * from_fraction(slope) + from_fraction(c) for c in corrections))


@pytest.fixture
def half_floor():
    """floor(n/2) = n/2 - c_n with c_n = 1/2 on odd n"""
    return QuasiPolynomial.floor_linear(Fraction(1, 2))
