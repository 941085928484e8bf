"""
Shared pieces of the event algebras: sample-space kinds, grid indices and
the abstract Event interface
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import FrozenSet, Tuple, Union

from ..errors import FamilyMismatchError, IncompatibleIndexError
from ..eventual import CountBounds, DirectedFamily, QuasiPolynomial


class SpaceKind(Enum):
    NAT = 'nat'
    Q = 'q'
    R = 'r'
    COIN = 'coin'

    @property
    def families(self) -> FrozenSet[DirectedFamily]:
        return _LEGAL_FAMILIES[self]

    def check_family(self, family: DirectedFamily):
        if family not in self.families:
            raise FamilyMismatchError(f"family {family.value} is not legal for space {self.value}")


_LEGAL_FAMILIES = {
    SpaceKind.NAT: frozenset({
        DirectedFamily.ALL_N, DirectedFamily.EVEN_N, DirectedFamily.ODD_N, DirectedFamily.FACTORIAL_N,
    }),
    SpaceKind.Q: frozenset({DirectedFamily.Q_GRID}),
    SpaceKind.R: frozenset({DirectedFamily.R_GRID}),
    SpaceKind.COIN: frozenset({DirectedFamily.COIN_CT}),
}


@dataclass(frozen=True)
class GridIndex:
    """Index of a line grid: n, plus theta for real grids"""

    n: int
    theta: Tuple = ()

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"grid index must be positive, got {self.n}")
        object.__setattr__(self, 'theta', tuple(self.theta))

    @property
    def t(self) -> int:
        return len(self.theta)


Count = Union[QuasiPolynomial, CountBounds]


class Event(ABC):
    """A finitely described subset of one sample space"""

    space: SpaceKind

    @abstractmethod
    def union(self, other: "Event") -> "Event":
        ...

    @abstractmethod
    def intersect(self, other: "Event") -> "Event":
        ...

    @abstractmethod
    def complement(self) -> "Event":
        ...

    @abstractmethod
    def member(self, point) -> bool:
        ...

    @abstractmethod
    def count_at(self, index) -> int:
        ...

    @abstractmethod
    def eventual_count(self, family: DirectedFamily) -> Count:
        ...

    @property
    @abstractmethod
    def is_empty(self) -> bool:
        ...

    @property
    def is_full(self) -> bool:
        return self.complement().is_empty

    def finite_points(self):
        """Explicit points of a finite event, else None"""
        return None

    def difference(self, other: "Event") -> "Event":
        return self.intersect(other.complement())

    def subset_of(self, other: "Event") -> bool:
        return self.difference(other).is_empty

    def disjoint_from(self, other: "Event") -> bool:
        return self.intersect(other).is_empty

    def same_as(self, other: "Event") -> bool:
        return self.subset_of(other) and other.subset_of(self)

    def _check_space(self, other: "Event"):
        if not isinstance(other, Event) or other.space is not self.space:
            raise IncompatibleIndexError(
                f"cannot combine a {self.space.value} event with {getattr(other, 'space', other)}"
            )

    def __or__(self, other):
        return self.union(other)

    def __and__(self, other):
        return self.intersect(other)

    def __invert__(self):
        return self.complement()

    def __sub__(self, other):
        return self.difference(other)
