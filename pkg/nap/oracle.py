"""
Exhaustive ground truth for the symbolic counts

Grids are materialized at desk scale (numpy arrays of grid numerators, or
explicit coin sequences), membership is decided point by point from the
event's own description, and the brute counts are compared exactly with
the eventual counts and probabilities the engine predicts.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from .config import OracleCaps, get_settings
from .errors import IncompatibleIndexError, ResourceLimitError
from .eventual import CountBounds, DirectedFamily
from .events import (
    CoinEvent,
    CoinIndex,
    CoinSequence,
    Event,
    GridIndex,
    LineEvent,
    NatEvent,
    SpaceKind,
    WeightFn,
    coin,
    full,
    weighted_count,
)
from .quadratic import QuadraticIrrational, floor_difference, is_integer, make_quadratic, real_floor

logger = logging.getLogger(__name__)

NAT_FAMILIES = (DirectedFamily.ALL_N, DirectedFamily.EVEN_N, DirectedFamily.ODD_N, DirectedFamily.FACTORIAL_N)

DEFAULT_LINE_SIZES = (24, 120, 720)
DEFAULT_THETAS = (
    (),
    (make_quadratic(-1, 1, 2),),
    (make_quadratic(-1, 1, 2), make_quadratic(Fraction(-1, 2), Fraction(1, 2), 5)),
)


def space_of(family: DirectedFamily) -> SpaceKind:
    if family in NAT_FAMILIES:
        return SpaceKind.NAT
    if family is DirectedFamily.Q_GRID:
        return SpaceKind.Q
    if family is DirectedFamily.R_GRID:
        return SpaceKind.R
    return SpaceKind.COIN


@dataclass(frozen=True, eq=False)
class ConcreteGrid:
    """One finite grid of a directed family, fully materialized

    For the naturals `values` holds 1..n. For the lines it holds the
    numerators p of the rational points p/n, and `offsets` the p of the
    irrational points (p + a)/n, the same for every a in theta. Coin grids
    list their sequences explicitly.
    """

    family: DirectedFamily
    n: int
    theta: Tuple[QuadraticIrrational, ...] = ()
    sigma: Tuple[CoinSequence, ...] = ()
    values: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    offsets: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    sequences: Tuple[CoinSequence, ...] = ()

    @property
    def kind(self) -> SpaceKind:
        return space_of(self.family)

    @property
    def index(self):
        if self.kind is SpaceKind.COIN:
            return CoinIndex(self.n, self.sigma)
        if self.kind is SpaceKind.NAT:
            return self.n
        return GridIndex(self.n, self.theta)

    @property
    def size(self) -> int:
        if self.kind is SpaceKind.COIN:
            return len(self.sequences)
        return len(self.values) + len(self.offsets) * len(self.theta)

    @property
    def closed_size(self) -> int:
        n = self.n
        if self.kind is SpaceKind.NAT:
            return n
        if self.kind is SpaceKind.COIN:
            return 2 ** n * len(self.sigma)
        return 2 * n * n + 1 + 2 * n * n * len(self.theta)

    def describe(self) -> str:
        if self.kind is SpaceKind.COIN:
            return f"N={self.n}, sigma={{{', '.join(str(s) for s in self.sigma)}}}"
        if self.theta:
            return f"n={self.n}, theta={{{', '.join(str(a) for a in self.theta)}}}"
        return f"n={self.n}"

    def points(self):
        """Every grid point as an exact value"""
        if self.kind is SpaceKind.COIN:
            yield from self.sequences
        elif self.kind is SpaceKind.NAT:
            yield from (int(x) for x in self.values)
        else:
            yield from (Fraction(int(p), self.n) for p in self.values)
            for a in self.theta:
                yield from ((a + int(p)) / self.n for p in self.offsets)

    def contains(self, point) -> bool:
        if self.kind is SpaceKind.COIN:
            return self.index.contains(point)
        if self.kind is SpaceKind.NAT:
            return 1 <= point <= self.n
        n = self.n
        if isinstance(point, QuadraticIrrational):
            for a in self.theta:
                if a.d != point.d:
                    continue
                shift = point * n - a
                if is_integer(shift) and -n * n <= shift <= n * n - 1:
                    return True
            return False
        point = Fraction(point)
        return (point * n).denominator == 1 and abs(point) <= n

    # Membership, block by block

    def membership(self, event: Event) -> List[np.ndarray]:
        if event.space is not self.kind:
            raise IncompatibleIndexError(f"a {event.space.value} event cannot be counted on a {self.family.value} grid")
        if isinstance(event, NatEvent):
            return [_nat_mask(event, self.values)]
        if isinstance(event, CoinEvent):
            return [np.fromiter((event.member(s) for s in self.sequences), dtype=bool, count=len(self.sequences))]
        blocks = [_line_mask(event, self.values, self.n, None)]
        blocks.extend(_line_mask(event, self.offsets, self.n, a) for a in self.theta)
        return blocks

    def count(self, event: Event) -> int:
        return int(sum(int(block.sum()) for block in self.membership(event)))

    def weighted_sum(self, event: Event, weight: Optional[WeightFn] = None) -> Fraction:
        if weight is None or weight.is_fair:
            return Fraction(self.count(event))
        if self.kind is not SpaceKind.NAT:
            return weight.weights[0] * self.count(event)
        chosen = self.values[self.membership(event)[0]]
        per_class = np.bincount(chosen % weight.modulus, minlength=weight.modulus)
        total = sum((int(c) * w for c, w in zip(per_class, weight.weights)), Fraction(0))
        for x, w in weight.exceptions:
            if x <= self.n and event.member(x):
                total += w - weight.weights[x % weight.modulus]
        return total


def _nat_mask(event: NatEvent, values: np.ndarray) -> np.ndarray:
    mask = np.isin(values % event.modulus, sorted(event.residues))
    for x in event.added:
        if x <= len(values):
            mask[x - 1] = True
    for x in event.removed:
        if x <= len(values):
            mask[x - 1] = False
    return mask


def _grid_point(p: int, n: int, offset):
    return Fraction(p, n) if offset is None else (offset + p) / n


def _line_mask(event: LineEvent, numerators: np.ndarray, n: int, offset) -> np.ndarray:
    """Membership of the points (p + offset)/n, offset None for p/n

    Points that sit alike against every cut and share integrality and
    residue get one `event.member` answer, asked of the first of them.
    """
    position = np.zeros(len(numerators), dtype=np.int64)
    hit = np.full(len(numerators), -1, dtype=np.int64)
    for k, cut in enumerate(event.cuts):
        scaled = cut * n
        if offset is None:
            above = real_floor(scaled) + 1
            if is_integer(scaled):
                hit[numerators == int(scaled)] = k
        else:
            above = floor_difference(scaled, offset) + 1
            if isinstance(cut, QuadraticIrrational) and cut.d == offset.d:
                shift = scaled - offset
                if is_integer(shift):
                    hit[numerators == int(shift)] = k
        position += numerators >= above

    if offset is None:
        residue = np.where(numerators % n == 0, (numerators // n) % event.modulus, -1)
    else:
        residue = np.full(len(numerators), -2, dtype=np.int64)
    keys = np.stack([position, hit, residue], axis=1)
    _, first, inverse = np.unique(keys, axis=0, return_index=True, return_inverse=True)
    answers = np.fromiter(
        (event.member(_grid_point(int(numerators[i]), n, offset)) for i in first), dtype=bool, count=len(first),
    )
    return answers[inverse.reshape(-1)]


GridSpec = Union[int, GridIndex, CoinIndex]


def enumerate_grid(family: DirectedFamily, index: GridSpec, caps: Optional[OracleCaps] = None) -> ConcreteGrid:
    """Materialize the grid of `family` at `index`

    The index is m for the factorial family (the grid is {1..m!}), n for the
    other families on the naturals and for the rational grid, a GridIndex for
    real grids and a CoinIndex for coin grids.
    """
    caps = caps or get_settings().caps
    kind = space_of(family)

    if kind is SpaceKind.NAT:
        if family is DirectedFamily.FACTORIAL_N:
            if index > caps.max_m:
                raise ResourceLimitError(f"factorial index m={index} exceeds the cap m={caps.max_m}")
            n = factorial(index)
        else:
            n = int(index)
            if n > caps.max_nat_n:
                raise ResourceLimitError(f"grid size {n} exceeds the cap {caps.max_nat_n}")
        if n < 1:
            raise IncompatibleIndexError(f"grid size must be positive, got {n}")
        if family in (DirectedFamily.EVEN_N, DirectedFamily.ODD_N) and n % 2 not in family.hit_residues(2):
            raise IncompatibleIndexError(f"{n} is not an index of the {family.value} family")
        grid = ConcreteGrid(family, n, values=np.arange(1, n + 1, dtype=np.int64))

    elif kind is SpaceKind.COIN:
        if not isinstance(index, CoinIndex):
            raise IncompatibleIndexError(f"coin grids are indexed by (N, sigma), got {index!r}")
        if index.N > caps.max_N or index.s > caps.max_sigma:
            raise ResourceLimitError(
                f"coin grid N={index.N}, |sigma|={index.s} exceeds the caps N={caps.max_N}, sigma={caps.max_sigma}"
            )
        grid = ConcreteGrid(family, index.N, sigma=index.sigma, sequences=tuple(index.points()))

    else:
        index = index if isinstance(index, GridIndex) else GridIndex(int(index))
        if kind is SpaceKind.Q and index.theta:
            raise IncompatibleIndexError("rational grids take no irrational offsets")
        if index.n > caps.max_n:
            raise ResourceLimitError(f"grid size n={index.n} exceeds the cap n={caps.max_n}")
        for a in index.theta:
            if not isinstance(a, QuadraticIrrational) or not 0 < a < 1:
                raise IncompatibleIndexError(f"theta holds irrationals in (0, 1), got {a}")
        square = index.n * index.n
        grid = ConcreteGrid(
            family, index.n, theta=index.theta,
            values=np.arange(-square, square + 1, dtype=np.int64),
            offsets=np.arange(-square, square, dtype=np.int64) if index.theta else np.zeros(0, dtype=np.int64),
        )

    logger.debug("enumerated %s grid %s with %d points", family.value, grid.describe(), grid.size)
    return grid


# Verification

@dataclass(frozen=True)
class VerificationRecord:
    index: str
    brute: Fraction
    predicted: str
    status: str

    @property
    def matched(self) -> bool:
        return self.status == 'pass'


@dataclass
class VerificationReport:
    subject: str
    family: DirectedFamily
    kind: str
    records: List[VerificationRecord] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        """No index failed and at least one was compared"""
        return self.threshold_honored and all(r.status != 'fail' for r in self.records)

    @property
    def threshold_honored(self) -> bool:
        """At least one index was past the threshold and checked"""
        return any(r.status != 'skipped' for r in self.records)

    def summary(self) -> Dict[str, int]:
        counts = {'passed': 0, 'failed': 0, 'skipped': 0}
        for record in self.records:
            counts[{'pass': 'passed', 'fail': 'failed', 'skipped': 'skipped'}[record.status]] += 1
        return counts

    def lines(self) -> List[str]:
        return [
            f"{self.kind} {self.subject} {self.family.value} {r.index}: brute={r.brute} predicted={r.predicted} {r.status}"
            for r in self.records
        ]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [(r.index, str(r.brute), r.predicted, r.status) for r in self.records],
            columns=['index', 'brute', 'predicted', 'status'],
        )

    def merge(self, other: "VerificationReport") -> "VerificationReport":
        return VerificationReport(self.subject, self.family, self.kind, self.records + other.records)


def default_indices(family: DirectedFamily, events: Sequence[Event] = (), caps: Optional[OracleCaps] = None) -> List[GridSpec]:
    """The desk-scale index range tested for a family"""
    caps = caps or get_settings().caps
    if family is DirectedFamily.FACTORIAL_N:
        return list(range(2, caps.max_m + 1))
    if family is DirectedFamily.ALL_N:
        return list(range(1, 65))
    if family is DirectedFamily.EVEN_N:
        return list(range(2, 65, 2))
    if family is DirectedFamily.ODD_N:
        return list(range(1, 64, 2))
    sizes = [n for n in DEFAULT_LINE_SIZES if n <= caps.max_n]
    if family is DirectedFamily.Q_GRID:
        return sizes
    if family is DirectedFamily.R_GRID:
        return [GridIndex(n, theta) for n in sizes for theta in DEFAULT_THETAS]

    return coin_indices(range(0, min(caps.max_N, 10) + 1), events, caps)


def coin_indices(prefixes: Iterable[int], events: Sequence[Event] = (), caps: Optional[OracleCaps] = None) -> List[CoinIndex]:
    """Coin grid indices whose tails hold both constant sequences and every tail the events mention"""
    caps = caps or get_settings().caps
    tails = {coin.ALL_HEADS, coin.ALL_TAILS}
    for event in events:
        if isinstance(event, CoinEvent):
            tails |= event.required_tails
    sigma = tuple(sorted(tails, key=str))[:caps.max_sigma]
    return [CoinIndex(N, sigma) for N in prefixes]


def _primary(grid: ConcreteGrid) -> Tuple[int, int, int]:
    """(primary index, t, s) for evaluating a quasi-polynomial"""
    return grid.n, len(grid.theta), len(grid.sigma)


def _evaluate(count, grid: ConcreteGrid) -> Optional[Tuple[Fraction, Fraction]]:
    """(lower, upper) predicted at the grid, None when the count makes no claim there"""
    primary, t, s = _primary(grid)
    if isinstance(count, CountBounds):
        if not (count.lower.covers(primary) and count.upper.covers(primary)):
            return None
        return count.lower.value_at(primary, t, s), count.upper.value_at(primary, t, s)
    if not count.covers(primary):
        return None
    value = count.value_at(primary, t, s)
    return value, value


def _applicable(event: Event, grid: ConcreteGrid) -> bool:
    if isinstance(event, CoinEvent):
        return grid.index.covers(event.required_tails)
    return True


def _prediction_text(bounds: Optional[Tuple[Fraction, Fraction]]) -> str:
    if bounds is None:
        return '-'
    low, high = bounds
    return str(low) if low == high else f"[{low}, {high}]"


def _run(indices: Sequence[GridSpec], check, workers: int) -> List[VerificationRecord]:
    if workers > 1 and len(indices) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(check, indices))
    return [check(index) for index in indices]


def verify_counts(event: Event, family: DirectedFamily, indices: Optional[Sequence[GridSpec]] = None,
                  weight: Optional[WeightFn] = None, workers: int = 1,
                  caps: Optional[OracleCaps] = None) -> VerificationReport:
    """Brute weighted count against the eventual count at every index"""
    kind = space_of(family)
    weight = weight or WeightFn.constant(kind)
    count = weighted_count(event, weight, family)
    indices = list(indices) if indices is not None else default_indices(family, [event], caps)

    def check(index) -> VerificationRecord:
        grid = enumerate_grid(family, index, caps)
        bounds = _evaluate(count, grid) if _applicable(event, grid) else None
        brute = grid.weighted_sum(event, weight)
        if bounds is None:
            status = 'skipped'
        else:
            status = 'pass' if bounds[0] <= brute <= bounds[1] else 'fail'
        return VerificationRecord(grid.describe(), brute, _prediction_text(bounds), status)

    report = VerificationReport(str(event), family, 'count', _run(indices, check, workers))
    _log_report(report)
    return report


def _ratio_bounds(top, bottom) -> Optional[Tuple[Fraction, Fraction]]:
    if top is None or bottom is None or bottom[0] <= 0:
        return None
    return top[0] / bottom[1], top[1] / bottom[0]


def verify_conditional(event: Event, family: DirectedFamily, indices: Optional[Sequence[GridSpec]] = None,
                       given: Optional[Event] = None, weight: Optional[WeightFn] = None, workers: int = 1,
                       caps: Optional[OracleCaps] = None) -> VerificationReport:
    """Brute P(A | given, grid) as an exact rational against the ratio of predicted counts"""
    kind = space_of(family)
    weight = weight or WeightFn.constant(kind)
    given = given if given is not None else full(kind)
    joint = event.intersect(given)
    top = weighted_count(joint, weight, family)
    bottom = weighted_count(given, weight, family)
    indices = list(indices) if indices is not None else default_indices(family, [event, given], caps)

    def check(index) -> VerificationRecord:
        grid = enumerate_grid(family, index, caps)
        denominator = grid.weighted_sum(given, weight)
        bounds = None
        if _applicable(joint, grid) and _applicable(given, grid):
            bounds = _ratio_bounds(_evaluate(top, grid), _evaluate(bottom, grid))
        if denominator == 0 or bounds is None:
            brute = Fraction(0) if denominator == 0 else grid.weighted_sum(joint, weight) / denominator
            return VerificationRecord(grid.describe(), brute, _prediction_text(bounds), 'skipped')
        brute = grid.weighted_sum(joint, weight) / denominator
        status = 'pass' if bounds[0] <= brute <= bounds[1] else 'fail'
        return VerificationRecord(grid.describe(), brute, _prediction_text(bounds), status)

    subject = str(event) if given.is_full else f"{event} | {given}"
    report = VerificationReport(subject, family, 'conditional', _run(indices, check, workers))
    _log_report(report)
    return report


def verify_grid_sizes(family: DirectedFamily, indices: Optional[Sequence[GridSpec]] = None,
                      caps: Optional[OracleCaps] = None) -> VerificationReport:
    """Materialized grid sizes against their closed forms"""
    indices = list(indices) if indices is not None else default_indices(family, (), caps)
    records = []
    for index in indices:
        grid = enumerate_grid(family, index, caps)
        status = 'pass' if grid.size == grid.closed_size else 'fail'
        records.append(VerificationRecord(grid.describe(), Fraction(grid.size), str(grid.closed_size), status))
    report = VerificationReport('grid', family, 'size', records)
    _log_report(report)
    return report


def verify_fineness(point, family: DirectedFamily, indices: Optional[Sequence[GridSpec]] = None,
                    caps: Optional[OracleCaps] = None) -> VerificationReport:
    """Once a tested grid holds `point`, every later tested grid holds it too"""
    indices = list(indices) if indices is not None else default_indices(family, (), caps)
    records, seen = [], False
    for index in indices:
        grid = enumerate_grid(family, index, caps)
        inside = grid.contains(point)
        if inside:
            status = 'pass'
        else:
            status = 'fail' if seen else 'skipped'
        seen = seen or inside
        records.append(VerificationRecord(grid.describe(), Fraction(int(inside)), 'member' if seen else '-', status))
    report = VerificationReport(str(point), family, 'fineness', records)
    _log_report(report)
    return report


def verify_nested(family: DirectedFamily, indices: Optional[Sequence[GridSpec]] = None,
                  caps: Optional[OracleCaps] = None) -> VerificationReport:
    """Each tested grid is contained in the next one"""
    indices = list(indices) if indices is not None else default_indices(family, (), caps)
    grids = [enumerate_grid(family, index, caps) for index in indices]
    records = []
    for small, large in zip(grids, grids[1:]):
        nested = all(large.contains(p) for p in small.points())
        records.append(VerificationRecord(
            f"{small.describe()} -> {large.describe()}", Fraction(int(nested)), 'subset', 'pass' if nested else 'fail'
        ))
    report = VerificationReport('grid', family, 'nested', records)
    _log_report(report)
    return report


def _log_report(report: VerificationReport):
    summary = report.summary()
    if summary['failed']:
        logger.error("%s check of %s along %s failed: %s", report.kind, report.subject, report.family.value, summary)
    else:
        logger.debug("%s check of %s along %s: %s", report.kind, report.subject, report.family.value, summary)


def reports_frame(reports: Iterable[VerificationReport]) -> pd.DataFrame:
    """One row per report with its pass/fail/skip counts"""
    rows = []
    for report in reports:
        rows.append({'kind': report.kind, 'subject': report.subject, 'family': report.family.value, **report.summary()})
    return pd.DataFrame(rows, columns=['kind', 'subject', 'family', 'passed', 'failed', 'skipped'])
