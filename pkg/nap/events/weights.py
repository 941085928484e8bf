"""
Rational weight functions and weighted counts
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Mapping, Optional, Sequence, Tuple

from ..errors import UnsupportedFunctionError
from ..eventual import CountBounds, DirectedFamily, QuasiPolynomial, lcm
from .base import Event, SpaceKind
from .nat import NatEvent, class_count, class_qp


@dataclass(frozen=True)
class WeightFn:
    """w(x) = weights[x % modulus] unless x is in `exceptions`

    Only the natural numbers carry residue weights and exceptions; every
    other space takes a single constant.
    """

    space: SpaceKind
    weights: Tuple[Fraction, ...] = (Fraction(1),)
    exceptions: Tuple[Tuple[int, Fraction], ...] = ()

    def __post_init__(self):
        weights = tuple(Fraction(w) for w in self.weights)
        if not weights:
            raise UnsupportedFunctionError("a weight function needs at least one value")
        exceptions = tuple(sorted((int(x), Fraction(w)) for x, w in dict(self.exceptions).items()))
        if self.space is not SpaceKind.NAT and (len(set(weights)) > 1 or exceptions):
            raise UnsupportedFunctionError(
                f"only constant functions are supported on {self.space.value}"
            )
        if self.space is not SpaceKind.NAT:
            weights = weights[:1]
        object.__setattr__(self, 'weights', weights)
        object.__setattr__(self, 'exceptions', exceptions)

    @classmethod
    def constant(cls, space: SpaceKind, value=1) -> "WeightFn":
        return cls(space, (Fraction(value),))

    @classmethod
    def periodic(cls, weights: Sequence, exceptions: Optional[Mapping[int, object]] = None) -> "WeightFn":
        return cls(SpaceKind.NAT, tuple(weights), tuple((exceptions or {}).items()))

    @property
    def modulus(self) -> int:
        return len(self.weights)

    @property
    def exception_map(self) -> Dict[int, Fraction]:
        return dict(self.exceptions)

    @property
    def is_constant(self) -> bool:
        return len(set(self.weights)) == 1 and not self.exceptions

    @property
    def is_fair(self) -> bool:
        return self.is_constant and self.weights[0] == 1

    @property
    def is_positive(self) -> bool:
        return all(w > 0 for w in self.weights) and all(w > 0 for _, w in self.exceptions)

    def value(self, point) -> Fraction:
        if self.space is not SpaceKind.NAT:
            return self.weights[0]
        exceptions = self.exception_map
        if point in exceptions:
            return exceptions[point]
        return self.weights[point % self.modulus]

    def scaled(self, factor) -> "WeightFn":
        factor = Fraction(factor)
        return WeightFn(
            self.space,
            tuple(w * factor for w in self.weights),
            tuple((x, w * factor) for x, w in self.exceptions),
        )

    def __str__(self):
        text = '[' + ', '.join(str(w) for w in self.weights) + ']'
        if self.exceptions:
            text += ' at {' + ', '.join(f"{x}: {w}" for x, w in self.exceptions) + '}'
        return text


def _nat_terms(event: NatEvent, weight: WeightFn):
    """Residue weights mod the joint modulus, and the corrections at special points"""
    modulus = lcm(event.modulus, weight.modulus)
    classes = {
        r: weight.weights[r % weight.modulus]
        for r in range(modulus) if r % event.modulus in event.residues
    }
    deltas: Dict[int, Fraction] = {}
    exceptions = weight.exception_map
    for x in event.exception_points | set(exceptions):
        actual = weight.value(x) if event.member(x) else Fraction(0)
        generic = classes.get(x % modulus, Fraction(0))
        if actual != generic:
            deltas[x] = actual - generic
    return modulus, classes, deltas


def weighted_count(event: Event, weight: WeightFn, family: DirectedFamily):
    """Eventual sum of w over the event's points in the grid"""
    if weight.space is not event.space:
        raise UnsupportedFunctionError(f"weight on {weight.space.value} used with a {event.space.value} event")
    if event.space is not SpaceKind.NAT:
        count = event.eventual_count(family)
        if isinstance(count, CountBounds):
            return count.scaled(weight.weights[0])
        return count * weight.weights[0]

    modulus, classes, deltas = _nat_terms(event, weight)
    SpaceKind.NAT.check_family(family)
    total = QuasiPolynomial.constant(sum(deltas.values(), Fraction(0)))
    for r, w in sorted(classes.items()):
        total = total + class_qp(r, modulus) * w
    return total.with_threshold(max(deltas, default=0))


def weighted_count_at(event: Event, weight: WeightFn, index) -> Fraction:
    """Sum of w over the event's points in one concrete grid"""
    if event.space is not SpaceKind.NAT:
        return weight.weights[0] * event.count_at(index)
    n = index.n if hasattr(index, 'n') else int(index)
    modulus, classes, deltas = _nat_terms(event, weight)
    total = sum((w * class_count(r, modulus, n) for r, w in classes.items()), Fraction(0))
    total += sum((d for x, d in deltas.items() if x <= n), Fraction(0))
    return total
