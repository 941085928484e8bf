"""
NAP-spaces built from (sample space, directed family, weight) and the
probability operations on them
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import pandas as pd

from .errors import (
    AxiomViolation,
    ConditioningOnEmptyError,
    EnclosurePrecisionError,
    FairOnlyError,
    UnsupportedFunctionError,
)
from .eventual import CountBounds, DirectedFamily, LimitResult, QuasiPolynomial, limit
from .events import Event, NatEvent, SpaceKind, WeightFn, lift, weighted_count
from .events import coin, empty as empty_event, finite as finite_event, full as full_event
from .hyperreal import (
    ONE,
    ZERO,
    CompareResult,
    HyperReal,
    compare,
    infinitely_close,
    is_infinitesimal,
    standard_part,
)

logger = logging.getLogger(__name__)

DEFAULT_REFERENCE = {
    SpaceKind.NAT: 1,
    SpaceKind.Q: Fraction(0),
    SpaceKind.R: Fraction(0),
    SpaceKind.COIN: coin.ALL_HEADS,
}

DEFAULT_FAMILY = {
    SpaceKind.NAT: DirectedFamily.FACTORIAL_N,
    SpaceKind.Q: DirectedFamily.Q_GRID,
    SpaceKind.R: DirectedFamily.R_GRID,
    SpaceKind.COIN: DirectedFamily.COIN_CT,
}


@dataclass(frozen=True)
class NAPSpace:
    """(sample space, directed family, weight) with w(reference) = 1"""

    kind: SpaceKind
    family: DirectedFamily = None
    weight: WeightFn = None
    reference: object = None

    def __post_init__(self):
        family = self.family or DEFAULT_FAMILY[self.kind]
        self.kind.check_family(family)
        weight = self.weight or WeightFn.constant(self.kind)
        if weight.space is not self.kind:
            raise UnsupportedFunctionError(f"weight for {weight.space.value} given to a {self.kind.value} space")
        if not weight.is_positive:
            raise UnsupportedFunctionError(f"weights must be positive: {weight}")
        reference = DEFAULT_REFERENCE[self.kind] if self.reference is None else self.reference
        weight = weight.scaled(1 / weight.value(reference))
        object.__setattr__(self, 'family', family)
        object.__setattr__(self, 'weight', weight)
        object.__setattr__(self, 'reference', reference)

    @property
    def is_fair(self) -> bool:
        return self.weight.is_fair

    def full(self) -> Event:
        return full_event(self.kind)

    def empty(self) -> Event:
        return empty_event(self.kind)

    @property
    def total_weight_count(self) -> QuasiPolynomial:
        return weighted_count(self.full(), self.weight, self.family)

    @property
    def omega_numerosity(self) -> LimitResult:
        return limit(self.total_weight_count, self.family)

    def adopt(self, event: Event) -> Event:
        return lift(event, self.kind)

    def __str__(self):
        text = f"{self.kind.value}/{self.family.value}"
        return text if self.is_fair else f"{text} weight {self.weight}"


class ValueKind(Enum):
    EXACT = 'exact'
    CANDIDATES = 'candidates'
    ENCLOSURE = 'enclosure'
    RATIONAL = 'rational'


@dataclass(frozen=True)
class ArchValue:
    """Standard (real) shadow of a probability: one rational, candidates or an interval"""

    kind: ValueKind
    values: Tuple[Fraction, ...]

    @property
    def value(self) -> Fraction:
        if len(self.values) != 1:
            raise ValueError(f"no single standard value: {self}")
        return self.values[0]

    def decimal(self, digits: int = 6) -> str:
        return ', '.join(decimal_text(v, digits) for v in self.values)

    def __str__(self):
        if self.kind is ValueKind.ENCLOSURE:
            return f"[{self.values[0]}, {self.values[1]}]"
        return ', '.join(str(v) for v in self.values)


def decimal_text(value: Fraction, digits: int) -> str:
    scaled = round(value * 10 ** digits)
    sign = '-' if scaled < 0 else ''
    whole, frac = divmod(abs(scaled), 10 ** digits)
    return f"{sign}{whole}.{frac:0{digits}d}" if digits else f"{sign}{whole}"


@dataclass(frozen=True)
class ProbabilityValue:
    kind: ValueKind
    limit: Optional[LimitResult] = None
    lower: Optional[HyperReal] = None
    upper: Optional[HyperReal] = None

    @classmethod
    def from_limit(cls, result: LimitResult) -> "ProbabilityValue":
        kind = ValueKind.EXACT if result.is_determined else ValueKind.CANDIDATES
        return cls(kind, limit=result)

    @classmethod
    def enclosure(cls, lower: HyperReal, upper: HyperReal) -> "ProbabilityValue":
        return cls(ValueKind.ENCLOSURE, lower=lower, upper=upper)

    @property
    def value(self) -> HyperReal:
        if self.kind is not ValueKind.EXACT:
            raise ValueError(f"not an exact value: {self}")
        return self.limit.value

    @property
    def values(self) -> List[HyperReal]:
        if self.kind is ValueKind.ENCLOSURE:
            return [self.lower, self.upper]
        return self.limit.candidates

    def standard_part(self) -> ArchValue:
        if self.kind is ValueKind.ENCLOSURE:
            low, high = standard_part(self.lower), standard_part(self.upper)
            if low == high:
                return ArchValue(ValueKind.RATIONAL, (low,))
            return ArchValue(ValueKind.ENCLOSURE, (low, high))
        shadows = tuple(sorted({standard_part(v) for v in self.limit.branches.values()}))
        kind = ValueKind.RATIONAL if len(shadows) == 1 else ValueKind.CANDIDATES
        return ArchValue(kind, shadows)

    def __str__(self):
        if self.kind is ValueKind.ENCLOSURE:
            return f"enclosure: [{self.lower}, {self.upper}]"
        return str(self.limit)


Measure = Union[LimitResult, Tuple[HyperReal, HyperReal]]


def _measure(space: NAPSpace, event: Event, weight: Optional[WeightFn] = None) -> Measure:
    """Limit of the weighted count of `event`, or (lower, upper) limits"""
    weight = weight or space.weight
    points = event.finite_points()
    if points is not None:
        total = sum((weight.value(p) for p in points), Fraction(0))
        return LimitResult.determined(HyperReal(total), space.family)

    count = weighted_count(event, weight, space.family)
    if isinstance(count, CountBounds):
        low = limit(count.lower, space.family)
        high = limit(count.upper, space.family)
        return (max_zero(low.value), high.value)
    return limit(count, space.family)


def max_zero(x: HyperReal) -> HyperReal:
    return ZERO if compare(x, ZERO) is CompareResult.LESS else x


def _clamp_unit(x: HyperReal) -> HyperReal:
    return ONE if compare(x, ONE) is CompareResult.GREATER else max_zero(x)


def _ratio(top: Measure, bottom: Measure) -> ProbabilityValue:
    if isinstance(top, LimitResult) and isinstance(bottom, LimitResult):
        return ProbabilityValue.from_limit(top / bottom)

    top_lo, top_hi = (top.value, top.value) if isinstance(top, LimitResult) else top
    bottom_lo, bottom_hi = (bottom.value, bottom.value) if isinstance(bottom, LimitResult) else bottom
    positive = compare(bottom_lo, ZERO)
    if positive is CompareResult.UNDETERMINED:
        raise EnclosurePrecisionError(f"cannot decide the sign of the lower count {bottom_lo}")
    if positive is not CompareResult.GREATER:
        raise EnclosurePrecisionError(f"the conditioning event has no positive lower count: {bottom_lo}")
    lower = _clamp_unit(top_lo / bottom_hi)
    upper = _clamp_unit(top_hi / bottom_lo)
    if lower == upper:
        return ProbabilityValue.from_limit(LimitResult.determined(lower, DirectedFamily.R_GRID))
    return ProbabilityValue.enclosure(lower, upper)


def numerosity(space: NAPSpace, event: Event) -> ProbabilityValue:
    """Count of the event along the family; finite events count their points"""
    if not space.is_fair:
        raise FairOnlyError(f"numerosity needs a fair space, got {space}")
    measured = _measure(space, space.adopt(event))
    if isinstance(measured, LimitResult):
        return ProbabilityValue.from_limit(measured)
    return ProbabilityValue.enclosure(*measured)


def probability(space: NAPSpace, event: Event) -> ProbabilityValue:
    event = space.adopt(event)
    result = _ratio(_measure(space, event), space.omega_numerosity)
    logger.debug("P(%s) on %s = %s", event, space, result)
    return result


def conditional(space: NAPSpace, event: Event, given: Event) -> ProbabilityValue:
    event, given = space.adopt(event), space.adopt(given)
    if given.is_empty:
        raise ConditioningOnEmptyError(f"conditioning on the empty event {given}")
    result = _ratio(_measure(space, event.intersect(given)), _measure(space, given))
    if space.is_fair:
        _assert_hyperrational(result)
    return result


def _assert_hyperrational(result: ProbabilityValue):
    for value in result.values:
        if not value.has_integer_coefficients():
            raise AxiomViolation(f"conditional {value} is not a ratio of integer polynomials")


def conditional_given_finite(space: NAPSpace, event: Event, points: Union[Event, Iterable]) -> Fraction:
    """P(A | lam) for an explicit finite set lam"""
    event = space.adopt(event)
    if isinstance(points, Event):
        listed = space.adopt(points).finite_points()
        if listed is None:
            raise UnsupportedFunctionError(f"{points} is not an explicit finite set")
        points = listed
    points = list(dict.fromkeys(points))
    if not points:
        raise ConditioningOnEmptyError("conditioning on the empty finite set")
    weight = space.weight
    total = sum((weight.value(p) for p in points), Fraction(0))
    inside = sum((weight.value(p) for p in points if event.member(p)), Fraction(0))
    return inside / total


def infinite_sum(space: NAPSpace, function: WeightFn, event: Event) -> LimitResult:
    """Sum of `function` over the event's points, as a limit along the family"""
    if function.space is not space.kind:
        raise UnsupportedFunctionError(f"function on {function.space.value} summed over {space.kind.value}")
    measured = _measure(space, space.adopt(event), function)
    if not isinstance(measured, LimitResult):
        raise UnsupportedFunctionError(f"sum over {event} has only bounds: [{measured[0]}, {measured[1]}]")
    return measured


def epsilon0(space: NAPSpace) -> ProbabilityValue:
    """Probability of the reference point"""
    return point_probability(space, space.reference)


def point_probability(space: NAPSpace, point) -> ProbabilityValue:
    return probability(space, finite_event(space.kind, [point]))


def arch_probability(space: NAPSpace, event: Event) -> ArchValue:
    return probability(space, event).standard_part()


FAIR_NAT = NAPSpace(SpaceKind.NAT, DirectedFamily.FACTORIAL_N)


def asymptotic_density(event: NatEvent) -> Fraction:
    """Classical density of a set of positive integers, checked against its probability"""
    density = Fraction(len(event.residues), event.modulus)
    result = probability(FAIR_NAT, event)
    for value in result.values:
        if not infinitely_close(value, HyperReal(density)):
            raise AxiomViolation(f"P({event}) = {value} is not infinitely close to its density {density}")
    return density


@dataclass(frozen=True)
class AxiomCheck:
    name: str
    subject: str
    status: str
    detail: str = ''


@dataclass
class AxiomReport:
    space: str
    checks: List[AxiomCheck] = field(default_factory=list)

    def record(self, name: str, subject, status: str, detail: str = ''):
        self.checks.append(AxiomCheck(name, str(subject), status, detail))
        if status == 'undetermined':
            logger.warning("%s on %s could not be decided: %s", name, subject, detail)

    @property
    def passed(self) -> bool:
        return all(c.status != 'fail' for c in self.checks)

    @property
    def failures(self) -> List[AxiomCheck]:
        return [c for c in self.checks if c.status == 'fail']

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [(c.name, c.subject, c.status, c.detail) for c in self.checks],
            columns=['check', 'subject', 'status', 'detail'],
        )

    def summary(self) -> dict:
        counts = {'pass': 0, 'fail': 0, 'undetermined': 0}
        for check in self.checks:
            counts[check.status] += 1
        return counts


def _status(flags: Iterable[Optional[bool]]) -> str:
    flags = list(flags)
    if any(f is False for f in flags):
        return 'fail'
    if any(f is None for f in flags):
        return 'undetermined'
    return 'pass'


def _is(result: CompareResult, *wanted: CompareResult) -> Optional[bool]:
    if result is CompareResult.UNDETERMINED:
        return None
    return result in wanted


SINGLETON_SAMPLES = {
    SpaceKind.NAT: (1, 2, 17),
    SpaceKind.Q: (Fraction(0), Fraction(1, 2), Fraction(-7, 3)),
    SpaceKind.COIN: (coin.ALL_HEADS, coin.CoinSequence('T', 'H'), coin.ALL_TAILS),
}


def axiom_report(space: NAPSpace, events: Sequence[Event],
                 partition: Optional[Sequence[Event]] = None) -> AxiomReport:
    """Exact checks of the probability axioms on the given events"""
    report = AxiomReport(str(space))
    events = [space.adopt(e) for e in events]
    values = [probability(space, e) for e in events]

    whole = probability(space, space.full())
    report.record('normalization', 'all', _status([whole.kind is ValueKind.EXACT and whole.value == ONE]))

    for event, value in zip(events, values):
        report.record('nonnegative', event, _status(
            _is(compare(v, ZERO), CompareResult.GREATER, CompareResult.EQUAL) for v in value.values
        ))
        if value.kind is not ValueKind.ENCLOSURE:
            zero = [v == ZERO for v in value.values]
            one = [v == ONE for v in value.values]
            report.record('zero iff empty', event, _status([set(zero) == {event.is_empty}]))
            report.record('one iff full', event, _status([set(one) == {event.is_full}]))

    for (a, pa), (b, pb) in combinations(zip(events, values), 2):
        if not a.disjoint_from(b):
            continue
        if ValueKind.ENCLOSURE in (pa.kind, pb.kind):
            continue
        joint = probability(space, a.union(b))
        if joint.kind is ValueKind.ENCLOSURE:
            continue
        ok = joint.limit == pa.limit + pb.limit
        report.record('finite additivity', f"{a} ; {b}", _status([ok]))

    if space.is_fair and space.kind in SINGLETON_SAMPLES:
        base = epsilon0(space)
        for point in SINGLETON_SAMPLES[space.kind]:
            single = point_probability(space, point)
            flags = [single.limit == base.limit]
            flags += [is_infinitesimal(v) for v in single.values]
            report.record('equal infinitesimal singletons', point, _status(flags))

    if partition:
        parts = [space.adopt(e) for e in partition]
        disjoint = all(a.disjoint_from(b) for a, b in combinations(parts, 2))
        covering = parts[0]
        for part in parts[1:]:
            covering = covering.union(part)
        report.record('partition is a partition', len(parts), _status([disjoint and covering.is_full]))
        shares = [probability(space, p) for p in parts]
        if all(s.kind is not ValueKind.ENCLOSURE for s in shares):
            total = shares[0].limit
            for share in shares[1:]:
                total = total + share.limit
            report.record('perfect additivity', len(parts), _status([all(v == ONE for v in total.candidates)]))

    logger.debug("axiom report on %s: %s", space, report.summary())
    return report
