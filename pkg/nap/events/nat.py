"""
Events over the positive integers: residue classes modulo a common modulus
with finite exception sets
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, Iterable

from ..errors import IncompatibleIndexError
from ..eventual import DirectedFamily, QuasiPolynomial, lcm
from .base import Event, GridIndex, SpaceKind

logger = logging.getLogger(__name__)


def class_count(residue: int, modulus: int, n: int) -> int:
    """How many x in {1..n} have x = residue (mod modulus)"""
    return (n - residue) // modulus + (1 if residue > 0 else 0)


def class_qp(residue: int, modulus: int) -> QuasiPolynomial:
    """class_count as a quasi-polynomial in n, valid for every n >= 0"""
    base = QuasiPolynomial.floor_linear(Fraction(1, modulus), Fraction(-residue, modulus))
    return base + (1 if residue > 0 else 0)


def _lift(residues: FrozenSet[int], modulus: int, target: int) -> FrozenSet[int]:
    return frozenset(r for r in range(target) if r % modulus in residues)


def _minimal_modulus(residues: FrozenSet[int], modulus: int):
    for d in sorted(k for k in range(1, modulus + 1) if modulus % k == 0):
        reduced = frozenset(r % d for r in residues)
        if _lift(reduced, d, modulus) == residues:
            return reduced, d
    return residues, modulus


@dataclass(frozen=True)
class NatEvent(Event):
    """Union of residue classes mod `modulus`, plus `added`, minus `removed`

    The modulus is the smallest one the classes allow; `added` points lie
    outside the classes and `removed` points inside them.
    """

    modulus: int
    residues: FrozenSet[int]
    added: FrozenSet[int] = frozenset()
    removed: FrozenSet[int] = frozenset()

    space = SpaceKind.NAT

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be positive")
        residues = frozenset(r % self.modulus for r in self.residues)
        if any(x < 1 for x in self.added | self.removed):
            raise ValueError("exception points must be positive integers")
        residues, modulus = _minimal_modulus(residues, self.modulus)
        added = frozenset(x for x in self.added if x % modulus not in residues)
        removed = frozenset(x for x in self.removed if x % modulus in residues)
        object.__setattr__(self, 'modulus', modulus)
        object.__setattr__(self, 'residues', residues)
        object.__setattr__(self, 'added', added)
        object.__setattr__(self, 'removed', removed)

    # Boolean algebra

    def _combine(self, other: "NatEvent", op) -> "NatEvent":
        self._check_space(other)
        modulus = lcm(self.modulus, other.modulus)
        mine = _lift(self.residues, self.modulus, modulus)
        theirs = _lift(other.residues, other.modulus, modulus)
        residues = frozenset(r for r in range(modulus) if op(r in mine, r in theirs))

        added, removed = set(), set()
        for x in self.added | self.removed | other.added | other.removed:
            inside = op(self.member(x), other.member(x))
            generic = x % modulus in residues
            if inside and not generic:
                added.add(x)
            elif generic and not inside:
                removed.add(x)
        return NatEvent(modulus, residues, frozenset(added), frozenset(removed))

    def union(self, other):
        return self._combine(other, lambda a, b: a or b)

    def intersect(self, other):
        return self._combine(other, lambda a, b: a and b)

    def complement(self):
        rest = frozenset(range(self.modulus)) - self.residues
        return NatEvent(self.modulus, rest, self.removed, self.added)

    # Queries

    def member(self, point) -> bool:
        if isinstance(point, bool) or not isinstance(point, int) or point < 1:
            raise IncompatibleIndexError(f"{point!r} is not a positive integer")
        if point in self.added:
            return True
        if point in self.removed:
            return False
        return point % self.modulus in self.residues

    @property
    def is_empty(self) -> bool:
        return not self.residues and not self.added

    @property
    def is_full(self) -> bool:
        return len(self.residues) == self.modulus and not self.removed

    def finite_points(self):
        if self.residues:
            return None
        return tuple(sorted(self.added))

    def count_at(self, index) -> int:
        n = index.n if isinstance(index, GridIndex) else int(index)
        total = sum(class_count(r, self.modulus, n) for r in self.residues)
        total += sum(1 for x in self.added if x <= n)
        total -= sum(1 for x in self.removed if x <= n)
        return total

    def eventual_count(self, family: DirectedFamily) -> QuasiPolynomial:
        SpaceKind.NAT.check_family(family)
        count = QuasiPolynomial.constant(len(self.added) - len(self.removed))
        for r in sorted(self.residues):
            count = count + class_qp(r, self.modulus)
        threshold = max(self.added | self.removed, default=0)
        return count.with_threshold(threshold)

    @property
    def exception_points(self) -> FrozenSet[int]:
        return self.added | self.removed

    def __str__(self):
        if self.is_empty:
            return 'empty'
        if self.is_full:
            return 'all'
        terms = [f"cls({self.modulus},{r})" for r in sorted(self.residues)]
        if self.modulus == 1 and self.residues:
            terms = ['all']
        text = ' | '.join(terms)
        if self.removed:
            body = f"({text})" if len(terms) > 1 else text
            text = f"{body} & ~{_fin(self.removed)}"
        if self.added:
            text = f"{text} | {_fin(self.added)}" if text else _fin(self.added)
        return text

    def __repr__(self):
        return f"NatEvent({self})"


def _fin(points: Iterable[int]) -> str:
    return 'fin{' + ','.join(str(x) for x in sorted(points)) + '}'


def prog(k: int, l: int = 0) -> NatEvent:
    """{j*k - l : j >= 1} restricted to the positive integers"""
    if k < 1:
        raise ValueError("progression step must be positive")
    residue = (-l) % k
    removed = frozenset(x for x in range(1, max(k - l, 1)) if x % k == residue)
    return NatEvent(k, frozenset({residue}), removed=removed)


def residue_class(k: int, r: int) -> NatEvent:
    """Positive integers congruent to r mod k"""
    return NatEvent(k, frozenset({r % k}))


def finite(points: Iterable[int]) -> NatEvent:
    return NatEvent(1, frozenset(), added=frozenset(points))


def full() -> NatEvent:
    return NatEvent(1, frozenset({0}))


def empty() -> NatEvent:
    return NatEvent(1, frozenset())


EVENS = prog(2, 0)
ODDS = prog(2, 1)
