"""
Events over infinite coin-toss sequences

Cylinder conditions on the first M tosses, plus finitely many explicit
eventually-constant sequences added or removed.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import FrozenSet, Iterable, Mapping, Tuple

from ..errors import IncompatibleIndexError
from ..eventual import H_VAR, S_VAR, DirectedFamily, QuasiPolynomial
from ..hyperreal import from_fraction
from .base import Event, SpaceKind

logger = logging.getLogger(__name__)

SYMBOLS = 'HT'


def _check_symbols(text: str):
    if any(ch not in SYMBOLS for ch in text):
        raise ValueError(f"coin outcomes are H or T, got {text!r}")


@dataclass(frozen=True)
class CoinSequence:
    """prefix followed by the tail symbol forever"""

    prefix: str
    tail: str

    def __post_init__(self):
        _check_symbols(self.prefix + self.tail)
        if len(self.tail) != 1:
            raise ValueError("the tail is a single symbol")
        object.__setattr__(self, 'prefix', self.prefix.rstrip(self.tail))

    def symbol(self, position: int) -> str:
        """Outcome of toss `position`, counting from 1"""
        return self.prefix[position - 1] if position <= len(self.prefix) else self.tail

    def window(self, length: int) -> str:
        return ''.join(self.symbol(i) for i in range(1, length + 1))

    def shift(self, count: int) -> "CoinSequence":
        """The sequence with its first `count` tosses dropped"""
        return CoinSequence(self.prefix[count:], self.tail)

    def after(self, head: str) -> "CoinSequence":
        """head followed by this sequence"""
        _check_symbols(head)
        return CoinSequence(head + self.prefix, self.tail)

    def __str__(self):
        return f"seq({self.prefix},tail={self.tail})" if self.prefix else f"seq(tail={self.tail})"


ALL_HEADS = CoinSequence('', 'H')
ALL_TAILS = CoinSequence('', 'T')


@dataclass(frozen=True)
class CoinIndex:
    """Index of a coin grid: every length-N head followed by a tail from sigma"""

    N: int
    sigma: Tuple[CoinSequence, ...]

    def __post_init__(self):
        if self.N < 0:
            raise ValueError("prefix length must be nonnegative")
        unique = tuple(dict.fromkeys(self.sigma))
        if not unique:
            raise ValueError("sigma needs at least one sequence")
        object.__setattr__(self, 'sigma', unique)

    @property
    def s(self) -> int:
        return len(self.sigma)

    def covers(self, tails: Iterable[CoinSequence]) -> bool:
        return set(tails) <= set(self.sigma)

    def contains(self, sequence: CoinSequence) -> bool:
        return sequence.shift(self.N) in set(self.sigma)

    def points(self):
        for head in product(SYMBOLS, repeat=self.N):
            for tail in self.sigma:
                yield tail.after(''.join(head))


def _extend(patterns: FrozenSet[str], width: int, target: int) -> FrozenSet[str]:
    if target == width:
        return patterns
    suffixes = [''.join(p) for p in product(SYMBOLS, repeat=target - width)]
    return frozenset(p + s for p in patterns for s in suffixes)


def _minimal_window(patterns: FrozenSet[str], width: int):
    while width > 0:
        reduced = frozenset(p[:-1] for p in patterns)
        if _extend(reduced, width - 1, width) != patterns:
            break
        patterns, width = reduced, width - 1
    return patterns, width


def _implicants(patterns: FrozenSet[str]) -> Tuple[str, ...]:
    """Prime cylinders (with '-' for free tosses) whose union is `patterns`"""
    current = set(patterns)
    primes = set()
    while current:
        merged, used = set(), set()
        for a in current:
            for b in current:
                diff = [i for i, (x, y) in enumerate(zip(a, b)) if x != y]
                if len(diff) == 1 and '-' not in (a[diff[0]], b[diff[0]]):
                    i = diff[0]
                    merged.add(a[:i] + '-' + a[i + 1:])
                    used.update((a, b))
        primes |= current - used
        current = merged
    return tuple(sorted(primes))


@dataclass(frozen=True)
class CoinEvent(Event):
    """Window patterns over tosses 1..width, plus `added`, minus `removed`"""

    width: int
    patterns: FrozenSet[str]
    added: FrozenSet[CoinSequence] = frozenset()
    removed: FrozenSet[CoinSequence] = frozenset()

    space = SpaceKind.COIN

    def __post_init__(self):
        if any(len(p) != self.width for p in self.patterns):
            raise ValueError("every pattern must span the whole window")
        for p in self.patterns:
            _check_symbols(p)
        patterns, width = _minimal_window(frozenset(self.patterns), self.width)
        added = frozenset(s for s in self.added if s.window(width) not in patterns)
        removed = frozenset(s for s in self.removed if s.window(width) in patterns)
        object.__setattr__(self, 'width', width)
        object.__setattr__(self, 'patterns', patterns)
        object.__setattr__(self, 'added', added)
        object.__setattr__(self, 'removed', removed)

    def _combine(self, other: "CoinEvent", op) -> "CoinEvent":
        self._check_space(other)
        width = max(self.width, other.width)
        mine = _extend(self.patterns, self.width, width)
        theirs = _extend(other.patterns, other.width, width)
        every = _extend(frozenset({''}), 0, width)
        patterns = frozenset(p for p in every if op(p in mine, p in theirs))

        added, removed = set(), set()
        for seq in self.added | self.removed | other.added | other.removed:
            inside = op(self.member(seq), other.member(seq))
            generic = seq.window(width) in patterns
            if inside and not generic:
                added.add(seq)
            elif generic and not inside:
                removed.add(seq)
        return CoinEvent(width, patterns, frozenset(added), frozenset(removed))

    def union(self, other):
        return self._combine(other, lambda a, b: a or b)

    def intersect(self, other):
        return self._combine(other, lambda a, b: a and b)

    def complement(self):
        every = _extend(frozenset({''}), 0, self.width)
        return CoinEvent(self.width, every - self.patterns, self.removed, self.added)

    def member(self, point) -> bool:
        if not isinstance(point, CoinSequence):
            raise IncompatibleIndexError(f"{point!r} is not a coin sequence")
        if point in self.added:
            return True
        if point in self.removed:
            return False
        return point.window(self.width) in self.patterns

    @property
    def is_empty(self) -> bool:
        return not self.patterns and not self.added

    @property
    def is_full(self) -> bool:
        return len(self.patterns) == 2 ** self.width and not self.removed

    def finite_points(self):
        if self.patterns:
            return None
        return tuple(sorted(self.added, key=str))

    @property
    def required_tails(self) -> FrozenSet[CoinSequence]:
        """Constant tails sigma must hold for the eventual count to apply"""
        return frozenset(CoinSequence('', s.tail) for s in self.added | self.removed)

    @property
    def density(self) -> Fraction:
        return Fraction(len(self.patterns), 2 ** self.width)

    def count_at(self, index) -> int:
        N = index.N
        total = 0
        for tail in index.sigma:
            rest = tail.window(max(0, self.width - N))
            total += sum(1 for p in self.patterns if p[N:] == rest)
        total *= 2 ** max(0, N - self.width)
        total += sum(1 for s in self.added if index.contains(s))
        total -= sum(1 for s in self.removed if index.contains(s))
        return total

    def eventual_count(self, family: DirectedFamily) -> QuasiPolynomial:
        SpaceKind.COIN.check_family(family)
        poly = H_VAR * S_VAR * from_fraction(self.density)
        poly += from_fraction(Fraction(len(self.added) - len(self.removed)))
        threshold = max([self.width] + [len(s.prefix) for s in self.added | self.removed])
        return QuasiPolynomial.from_poly(poly, threshold)

    def __str__(self):
        if self.is_empty:
            return 'empty'
        if self.is_full:
            return 'all'
        terms = [_cylinder_text(c) for c in _implicants(self.patterns)]
        text = ' | '.join(terms)
        if self.removed:
            body = f"({text})" if len(terms) > 1 else text
            gone = ' | '.join(str(s) for s in sorted(self.removed, key=str))
            text = f"{body} & ~({gone})" if len(self.removed) > 1 else f"{body} & ~{gone}"
        if self.added:
            extra = ' | '.join(str(s) for s in sorted(self.added, key=str))
            text = f"{text} | {extra}" if text else extra
        return text

    def __repr__(self):
        return f"CoinEvent({self})"


def _cylinder_text(pattern: str) -> str:
    fixed = [f"i{i + 1}={ch}" for i, ch in enumerate(pattern) if ch != '-']
    return f"cyl({','.join(fixed)})" if fixed else 'all'


def cylinder(conditions: Mapping[int, str]) -> CoinEvent:
    """Sequences with toss i equal to conditions[i] (tosses counted from 1)"""
    if any(i < 1 for i in conditions):
        raise ValueError("toss indices start at 1")
    width = max(conditions, default=0)
    patterns = frozenset(
        ''.join(word) for word in product(SYMBOLS, repeat=width)
        if all(word[i - 1] == ch for i, ch in conditions.items())
    )
    return CoinEvent(width, patterns)


def sequences(points: Iterable[CoinSequence]) -> CoinEvent:
    return CoinEvent(0, frozenset(), added=frozenset(points))


def full() -> CoinEvent:
    return CoinEvent(0, frozenset({''}))


def empty() -> CoinEvent:
    return CoinEvent(0, frozenset())
