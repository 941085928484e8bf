"""
Events over the rational and the real line

An event is described by sorted cut points splitting the line into open
pieces. Each piece says which integer classes (mod a common modulus) it
contains, whether it contains the non-integer rationals and, on the real
line, whether it contains the irrationals. Each cut point carries its own
membership flag.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from ..config import get_settings
from ..errors import EnclosurePrecisionError, IncompatibleIndexError
from ..eventual import N_VAR, T_VAR, CountBounds, DirectedFamily, QuasiPolynomial, lcm
from ..hyperreal import from_fraction
from ..quadratic import QuadraticIrrational, compare_reals, floor_difference, is_integer, real_floor
from .base import Count, Event, GridIndex, SpaceKind
from .nat import NatEvent

logger = logging.getLogger(__name__)

Cut = Union[Fraction, QuadraticIrrational]


@dataclass(frozen=True)
class Piece:
    residues: FrozenSet[int] = frozenset()
    fractional: bool = False
    irrational: bool = False


EMPTY_PIECE = Piece()


def _as_real(value) -> Cut:
    if isinstance(value, QuadraticIrrational):
        return value
    return Fraction(value)


def _lift(residues: FrozenSet[int], modulus: int, target: int) -> FrozenSet[int]:
    return frozenset(r for r in range(target) if r % modulus in residues)


def _first_int_above(x) -> int:
    return real_floor(x) + 1


def _last_int_below(x) -> int:
    return -real_floor(-x) - 1


def _integers_between(left: Optional[Cut], right: Optional[Cut], limit: int) -> Optional[List[int]]:
    """Integers strictly inside (left, right), None when unbounded"""
    if left is None or right is None:
        return None
    first, last = _first_int_above(left), _last_int_below(right)
    return list(range(first, min(last, first + limit - 1) + 1))


def _has_integers(left: Optional[Cut], right: Optional[Cut]) -> bool:
    if left is None or right is None:
        return True
    return _first_int_above(left) <= _last_int_below(right)


def _class_between(residue: int, modulus: int, low: int, high: int) -> int:
    """How many x in [low, high] have x = residue (mod modulus)"""
    if high < low:
        return 0
    return (high - residue) // modulus - (low - 1 - residue) // modulus


def _natural(cut: Cut, piece: Piece, modulus: int) -> bool:
    """Whether `cut` would belong to an open piece spanning it"""
    if isinstance(cut, QuadraticIrrational):
        return piece.irrational
    if is_integer(cut):
        return int(cut) % modulus in piece.residues
    return piece.fractional


def _merge(left: Piece, right: Piece, left_ints: bool, right_ints: bool,
           cut: Cut, flag: bool, modulus: int) -> Optional[Piece]:
    """One piece covering both sides and the cut, if the event allows it"""
    if left.fractional != right.fractional or left.irrational != right.irrational:
        return None
    if left_ints and right_ints:
        if left.residues != right.residues:
            return None
        residues = left.residues
    elif left_ints:
        residues = left.residues
    elif right_ints:
        residues = right.residues
    else:
        residues = None

    if isinstance(cut, QuadraticIrrational):
        if flag != left.irrational:
            return None
    elif is_integer(cut):
        x = int(cut) % modulus
        if residues is None:
            residues = frozenset({x}) if flag else frozenset()
        elif (x in residues) != flag:
            return None
    elif flag != left.fractional:
        return None
    return Piece(residues or frozenset(), left.fractional, left.irrational)


def _normalize(space: SpaceKind, modulus: int, cuts: Sequence[Cut], at_cut: Sequence[bool],
               pieces: Sequence[Piece]):
    cuts, at_cut, pieces = list(cuts), list(at_cut), list(pieces)
    if space is SpaceKind.Q:
        pieces = [Piece(p.residues, p.fractional, False) for p in pieces]
        at_cut = [flag and not isinstance(c, QuadraticIrrational) for c, flag in zip(cuts, at_cut)]

    changed = True
    while changed:
        changed = False
        bounds = [None] + cuts + [None]
        for i, cut in enumerate(cuts):
            merged = _merge(
                pieces[i], pieces[i + 1],
                _has_integers(bounds[i], cut), _has_integers(cut, bounds[i + 2]),
                cut, at_cut[i], modulus,
            )
            if merged is not None:
                del cuts[i]
                del at_cut[i]
                pieces[i:i + 2] = [merged]
                changed = True
                break

    bounds = [None] + cuts + [None]
    pieces = [
        p if _has_integers(bounds[j], bounds[j + 1]) else Piece(frozenset(), p.fractional, p.irrational)
        for j, p in enumerate(pieces)
    ]

    for d in sorted(k for k in range(1, modulus + 1) if modulus % k == 0):
        reduced = [frozenset(r % d for r in p.residues) for p in pieces]
        if all(_lift(red, d, modulus) == p.residues for red, p in zip(reduced, pieces)):
            pieces = [Piece(red, p.fractional, p.irrational) for red, p in zip(reduced, pieces)]
            modulus = d
            break
    return modulus, tuple(cuts), tuple(at_cut), tuple(pieces)


def _merge_cuts(first: Sequence[Cut], second: Sequence[Cut]) -> List[Cut]:
    merged: List[Cut] = []
    i = j = 0
    while i < len(first) or j < len(second):
        if j >= len(second):
            merged.append(first[i])
            i += 1
            continue
        if i >= len(first):
            merged.append(second[j])
            j += 1
            continue
        order = compare_reals(first[i], second[j])
        if order < 0:
            merged.append(first[i])
            i += 1
        elif order > 0:
            merged.append(second[j])
            j += 1
        else:
            merged.append(first[i])
            i += 1
            j += 1
    return merged


@dataclass(frozen=True)
class LineEvent(Event):
    space: SpaceKind
    modulus: int
    cuts: Tuple[Cut, ...]
    at_cut: Tuple[bool, ...]
    pieces: Tuple[Piece, ...]

    def __post_init__(self):
        if self.space not in (SpaceKind.Q, SpaceKind.R):
            raise IncompatibleIndexError(f"line events live on q or r, not {self.space.value}")
        if len(self.pieces) != len(self.cuts) + 1 or len(self.at_cut) != len(self.cuts):
            raise ValueError("a line event needs one more piece than cuts")
        if self.space is SpaceKind.Q and any(p.irrational for p in self.pieces):
            logger.debug("dropping irrational flags on a rational-line event")
        modulus, cuts, at_cut, pieces = _normalize(
            self.space, self.modulus, tuple(_as_real(c) for c in self.cuts), self.at_cut, self.pieces,
        )
        object.__setattr__(self, 'modulus', modulus)
        object.__setattr__(self, 'cuts', cuts)
        object.__setattr__(self, 'at_cut', at_cut)
        object.__setattr__(self, 'pieces', pieces)

    # Boolean algebra

    def _positions(self, merged: Sequence[Cut]):
        """For each merged cut: (cuts of self strictly below it, is it a cut of self)"""
        rows, k = [], 0
        for cut in merged:
            while k < len(self.cuts) and compare_reals(self.cuts[k], cut) < 0:
                k += 1
            own = k < len(self.cuts) and compare_reals(self.cuts[k], cut) == 0
            rows.append((k, own))
        return rows

    def _flag_at(self, position: int, own: bool, cut: Cut) -> bool:
        if own:
            return self.at_cut[position]
        return _natural(cut, self.pieces[position], self.modulus)

    def _combine(self, other: "LineEvent", op) -> "LineEvent":
        self._check_space(other)
        modulus = lcm(self.modulus, other.modulus)
        merged = _merge_cuts(self.cuts, other.cuts)
        mine, theirs = self._positions(merged), other._positions(merged)

        def piece_of(event, rows, j):
            if j == 0:
                return event.pieces[0]
            position, own = rows[j - 1]
            return event.pieces[position + (1 if own else 0)]

        pieces = []
        for j in range(len(merged) + 1):
            a, b = piece_of(self, mine, j), piece_of(other, theirs, j)
            ra, rb = _lift(a.residues, self.modulus, modulus), _lift(b.residues, other.modulus, modulus)
            pieces.append(Piece(
                frozenset(r for r in range(modulus) if op(r in ra, r in rb)),
                op(a.fractional, b.fractional),
                op(a.irrational, b.irrational),
            ))
        at_cut = [
            op(self._flag_at(pa, oa, c), other._flag_at(pb, ob, c))
            for c, (pa, oa), (pb, ob) in zip(merged, mine, theirs)
        ]
        return LineEvent(self.space, modulus, tuple(merged), tuple(at_cut), tuple(pieces))

    def union(self, other):
        return self._combine(other, lambda a, b: a or b)

    def intersect(self, other):
        return self._combine(other, lambda a, b: a and b)

    def complement(self):
        everything = frozenset(range(self.modulus))
        pieces = tuple(
            Piece(everything - p.residues, not p.fractional, not p.irrational and self.space is SpaceKind.R)
            for p in self.pieces
        )
        return LineEvent(self.space, self.modulus, self.cuts, tuple(not f for f in self.at_cut), pieces)

    # Queries

    def _bounds(self):
        return [None] + list(self.cuts) + [None]

    def member(self, point) -> bool:
        if isinstance(point, QuadraticIrrational):
            if self.space is SpaceKind.Q:
                raise IncompatibleIndexError(f"{point} is not a rational number")
        else:
            point = Fraction(point)
        position = 0
        for k, cut in enumerate(self.cuts):
            order = compare_reals(point, cut)
            if order == 0:
                return self.at_cut[k]
            if order < 0:
                break
            position = k + 1
        return _natural(point, self.pieces[position], self.modulus)

    @property
    def is_empty(self) -> bool:
        if any(self.at_cut):
            return False
        bounds = self._bounds()
        for j, piece in enumerate(self.pieces):
            if piece.fractional or piece.irrational:
                return False
            if not piece.residues:
                continue
            inside = _integers_between(bounds[j], bounds[j + 1], self.modulus)
            if inside is None or any(x % self.modulus in piece.residues for x in inside):
                return False
        return True

    def finite_points(self):
        points = [c for c, flag in zip(self.cuts, self.at_cut) if flag]
        bounds = self._bounds()
        for j, piece in enumerate(self.pieces):
            if piece.fractional or piece.irrational:
                return None
            if not piece.residues:
                continue
            left, right = bounds[j], bounds[j + 1]
            if left is None or right is None:
                return None
            for x in range(_first_int_above(left), _last_int_below(right) + 1):
                if x % self.modulus in piece.residues:
                    points.append(Fraction(x))
        return tuple(sorted(points, key=cmp_to_key(compare_reals)))

    def count_at(self, index: GridIndex) -> int:
        n = index.n
        theta = index.theta if self.space is SpaceKind.R else ()
        square = n * n
        total = 0
        bounds = self._bounds()
        for j, piece in enumerate(self.pieces):
            left, right = bounds[j], bounds[j + 1]
            first_p = -square if left is None else max(-square, real_floor(left * n) + 1)
            last_p = square if right is None else min(square, -real_floor(-(right * n)) - 1)
            rational_total = max(0, last_p - first_p + 1)

            first_x = -n if left is None else max(-n, _first_int_above(left))
            last_x = n if right is None else min(n, _last_int_below(right))
            integer_total = max(0, last_x - first_x + 1)

            total += sum(_class_between(r, self.modulus, first_x, last_x) for r in piece.residues)
            if piece.fractional:
                total += rational_total - integer_total
            if piece.irrational:
                for a in theta:
                    low = -square if left is None else max(-square, floor_difference(left * n, a) + 1)
                    high = square - 1 if right is None else min(square - 1, -floor_difference(a, right * n) - 1)
                    total += max(0, high - low + 1)

        for cut, flag in zip(self.cuts, self.at_cut):
            if flag and on_grid(cut, n, theta):
                total += 1
        return total

    def eventual_count(self, family: DirectedFamily) -> Count:
        self.space.check_family(family)
        if any(isinstance(c, QuadraticIrrational) for c in self.cuts):
            return self._count_bounds()
        return self._exact_count()

    def _exact_count(self) -> QuasiPolynomial:
        square = N_VAR ** 2
        threshold = max((real_floor(abs(c)) + 1 for c in self.cuts), default=1)
        denominators = 1
        for c in self.cuts:
            denominators = lcm(denominators, c.denominator)

        count = QuasiPolynomial.constant(0)
        irrational = QuasiPolynomial.constant(0)
        bounds = self._bounds()
        for j, piece in enumerate(self.pieces):
            left, right = bounds[j], bounds[j + 1]
            count = count + self._integer_count(piece, left, right)
            if piece.fractional:
                first_p = QuasiPolynomial.from_poly(-square) if left is None else QuasiPolynomial.floor_linear(left) + 1
                last_p = QuasiPolynomial.from_poly(square) if right is None else QuasiPolynomial.ceil_linear(right) - 1
                count = count + (last_p - first_p + 1) - _integer_span(left, right)
            if piece.irrational:
                first = -square if left is None else N_VAR * _q(left)
                last = square - 1 if right is None else N_VAR * _q(right) - 1
                irrational = irrational + QuasiPolynomial.from_poly(T_VAR * (last - first + 1))

        for cut, flag in zip(self.cuts, self.at_cut):
            if flag:
                count = count + QuasiPolynomial.indicator(cut.denominator, 0)
        if irrational != QuasiPolynomial.constant(0):
            count = count + irrational.with_support(denominators, [0])
        return count.with_threshold(threshold)

    def _integer_count(self, piece: Piece, left, right) -> QuasiPolynomial:
        count = QuasiPolynomial.constant(0)
        K = self.modulus
        for r in sorted(piece.residues):
            if right is None:
                high = QuasiPolynomial.floor_linear(Fraction(1, K), Fraction(-r, K))
            else:
                high = QuasiPolynomial.constant((_last_int_below(right) - r) // K)
            if left is None:
                low = QuasiPolynomial.floor_linear(Fraction(-1, K), Fraction(-1 - r, K))
            else:
                low = QuasiPolynomial.constant((_first_int_above(left) - 1 - r) // K)
            count = count + high - low
        return count

    def _brackets(self) -> List[Tuple[Fraction, Fraction]]:
        settings = get_settings()
        digits = settings.enclosure_digits
        while digits <= settings.max_refine_digits:
            brackets = [c.bracket(digits) if isinstance(c, QuadraticIrrational) else (c, c) for c in self.cuts]
            if all(brackets[k][1] < brackets[k + 1][0] for k in range(len(brackets) - 1)):
                return brackets
            digits *= 2
        raise EnclosurePrecisionError(f"cut points of {self} cannot be separated by rational brackets")

    def _count_bounds(self) -> CountBounds:
        """Lower and upper counts for events with irrational cut points"""
        square = N_VAR ** 2
        brackets = self._brackets()
        threshold = max(real_floor(abs(Fraction(x))) + 1 for pair in brackets for x in pair)
        lower = QuasiPolynomial.constant(0)
        upper = QuasiPolynomial.constant(0)

        bounds = self._bounds()
        ends = [None] + brackets + [None]
        for j, piece in enumerate(self.pieces):
            left, right = bounds[j], bounds[j + 1]
            left_br, right_br = ends[j], ends[j + 1]
            integers = self._integer_count(piece, left, right)
            lower, upper = lower + integers, upper + integers

            if piece.fractional:
                first_lo, first_hi = _first_point(left, left_br)
                last_lo, last_hi = _last_point(right, right_br)
                span = _integer_span(left, right)
                lower = lower + (last_lo - first_hi + 1) - span
                upper = upper + (last_hi - first_lo + 1) - span
            if piece.irrational:
                if left is None:
                    first_lo = first_hi = -square
                else:
                    first_lo, first_hi = N_VAR * _q(left_br[0]) - 1, N_VAR * _q(left_br[1]) + 1
                if right is None:
                    last_lo = last_hi = square - 1
                else:
                    last_lo, last_hi = N_VAR * _q(right_br[0]) - 2, N_VAR * _q(right_br[1])
                lower = lower + QuasiPolynomial.from_poly(T_VAR * (last_lo - first_hi + 1))
                upper = upper + QuasiPolynomial.from_poly(T_VAR * (last_hi - first_lo + 1))

        for cut, flag in zip(self.cuts, self.at_cut):
            if not flag:
                continue
            if isinstance(cut, QuadraticIrrational):
                upper = upper + QuasiPolynomial.from_poly(T_VAR)
            else:
                mark = QuasiPolynomial.indicator(cut.denominator, 0)
                lower, upper = lower + mark, upper + mark
        return CountBounds(lower.with_threshold(threshold), upper.with_threshold(threshold))

    # Rendering

    def _content(self, j: int) -> Optional[str]:
        bounds = self._bounds()
        return _content_text(self.pieces[j], self.modulus, self.space, _has_integers(bounds[j], bounds[j + 1]))

    def __str__(self):
        bounds = self._bounds()
        consumed = set()
        terms = []
        j = 0
        while j < len(self.pieces):
            left = bounds[j]
            content = self._content(j)
            if content is None:
                j += 1
                continue
            last = j
            if content == 'all':
                # join full pieces across excluded cuts
                while last + 1 < len(self.pieces) and not self.at_cut[last] and self._content(last + 1) == 'all':
                    last += 1
            closed = content == 'all' and left is not None and self.at_cut[j - 1]
            if closed:
                consumed.add(j - 1)
            span = _span_text(left, bounds[last + 1], closed, self.cuts[j:last])
            if span is None:
                terms.append(content)
            elif content == 'all':
                terms.append(span)
            else:
                wrapped = f"({content})" if ' | ' in content else content
                terms.append(f"{span} & {wrapped}")
            j = last + 1
        singles = [c for k, (c, flag) in enumerate(zip(self.cuts, self.at_cut)) if flag and k not in consumed]
        if singles:
            terms.append(points_text(singles))
        return ' | '.join(terms) if terms else 'empty'

    def __repr__(self):
        return f"LineEvent({self.space.value}: {self})"


def _q(value):
    return from_fraction(Fraction(value))


def _integer_span(left, right) -> QuasiPolynomial:
    """How many integers of the grid lie strictly inside (left, right)"""
    first = QuasiPolynomial.from_poly(-N_VAR) if left is None else QuasiPolynomial.constant(_first_int_above(left))
    last = QuasiPolynomial.from_poly(N_VAR) if right is None else QuasiPolynomial.constant(_last_int_below(right))
    return last - first + 1


def _first_point(left, bracket):
    """Bounds on the first grid numerator above n*left"""
    if left is None:
        value = QuasiPolynomial.from_poly(-N_VAR ** 2)
        return value, value
    if not isinstance(left, QuadraticIrrational):
        value = QuasiPolynomial.floor_linear(left) + 1
        return value, value
    return (QuasiPolynomial.from_poly(N_VAR * _q(bracket[0])),
            QuasiPolynomial.from_poly(N_VAR * _q(bracket[1]) + 1))


def _last_point(right, bracket):
    """Bounds on the last grid numerator below n*right"""
    if right is None:
        value = QuasiPolynomial.from_poly(N_VAR ** 2)
        return value, value
    if not isinstance(right, QuadraticIrrational):
        value = QuasiPolynomial.ceil_linear(right) - 1
        return value, value
    return (QuasiPolynomial.from_poly(N_VAR * _q(bracket[0]) - 1),
            QuasiPolynomial.from_poly(N_VAR * _q(bracket[1])))


def on_grid(point: Cut, n: int, theta: Sequence) -> bool:
    """Whether `point` belongs to the grid of size n with irrational offsets theta"""
    if not isinstance(point, QuadraticIrrational):
        return (point * n).denominator == 1 and abs(point) <= n
    for a in theta:
        if isinstance(a, QuadraticIrrational) and a.d != point.d:
            continue
        shift = point * n - a
        if is_integer(shift) and -n * n <= shift <= n * n - 1:
            return True
    return False


def _content_text(piece: Piece, modulus: int, space: SpaceKind, has_integers: bool) -> Optional[str]:
    # integer classes are irrelevant on a span without integers
    all_integers = not has_integers or len(piece.residues) == modulus
    if all_integers and piece.fractional and piece.irrational == (space is SpaceKind.R):
        return 'all'
    if space is SpaceKind.R and all_integers and piece.fractional and not piece.irrational:
        return 'rat'

    parts = []
    if has_integers and all_integers:
        parts.append('int')
    elif has_integers:
        parts.extend(f"cls({modulus},{r})" for r in sorted(piece.residues))
    if piece.fractional:
        parts.append('~int' if space is SpaceKind.Q else '(rat & ~int)')
    if piece.irrational:
        parts.append('~rat')
    return ' | '.join(parts) if parts else None


def _span_text(left, right, closed: bool, holes: Sequence[Cut] = ()) -> Optional[str]:
    """(left, right) with its closed left end and without the holes"""
    excluded = list(holes) if closed or left is None else [left] + list(holes)
    if left is None:
        base = None if right is None else f"~halfline({right})"
    else:
        base = f"halfline({left})" if right is None else f"interval({left},{right})"
    if not excluded:
        return base
    gap = f"~{points_text(excluded)}"
    return gap if base is None else f"{base} & {gap}"


def points_text(points: Iterable) -> str:
    return 'fin{' + ','.join(str(p) for p in points) + '}'


# Constructors

def _full_piece(space: SpaceKind) -> Piece:
    return Piece(frozenset({0}), True, space is SpaceKind.R)


def interval(space: SpaceKind, a, b) -> LineEvent:
    """[a, b) on the chosen line"""
    a, b = _as_real(a), _as_real(b)
    if compare_reals(a, b) >= 0:
        return empty(space)
    return LineEvent(space, 1, (a, b), (True, False), (EMPTY_PIECE, _full_piece(space), EMPTY_PIECE))


def halfline(space: SpaceKind, a) -> LineEvent:
    """[a, infinity)"""
    return LineEvent(space, 1, (_as_real(a),), (True,), (EMPTY_PIECE, _full_piece(space)))


def positive(space: SpaceKind) -> LineEvent:
    """(0, infinity)"""
    return LineEvent(space, 1, (Fraction(0),), (False,), (EMPTY_PIECE, _full_piece(space)))


def naturals(space: SpaceKind) -> LineEvent:
    return embed(space, NatEvent(1, frozenset({0})))


def integers(space: SpaceKind) -> LineEvent:
    return LineEvent(space, 1, (), (), (Piece(frozenset({0})),))


def residue_class(space: SpaceKind, k: int, r: int) -> LineEvent:
    """Integers congruent to r mod k"""
    return LineEvent(space, k, (), (), (Piece(frozenset({r % k})),))


def whole(space: SpaceKind) -> LineEvent:
    return LineEvent(space, 1, (), (), (_full_piece(space),))


def rationals(space: SpaceKind) -> LineEvent:
    return LineEvent(space, 1, (), (), (Piece(frozenset({0}), True, False),))


def empty(space: SpaceKind) -> LineEvent:
    return LineEvent(space, 1, (), (), (EMPTY_PIECE,))


def finite(space: SpaceKind, points: Iterable) -> LineEvent:
    values = []
    for p in points:
        p = _as_real(p)
        if isinstance(p, QuadraticIrrational) and space is SpaceKind.Q:
            raise IncompatibleIndexError(f"{p} is not a rational number")
        if all(compare_reals(p, q) != 0 for q in values):
            values.append(p)
    values.sort(key=cmp_to_key(compare_reals))
    return LineEvent(space, 1, tuple(values), (True,) * len(values), (EMPTY_PIECE,) * (len(values) + 1))


def embed(space: SpaceKind, event: NatEvent) -> LineEvent:
    """The copy of a set of positive integers inside the line"""
    exceptions = sorted(event.exception_points)
    cuts = (Fraction(0),) + tuple(Fraction(x) for x in exceptions)
    at_cut = (False,) + tuple(event.member(x) for x in exceptions)
    body = Piece(event.residues)
    pieces = (EMPTY_PIECE,) + (body,) * (len(exceptions) + 1)
    return LineEvent(space, event.modulus, cuts, at_cut, pieces)
