"""
Eventual counting functions and their limits along directed families

A QuasiPolynomial stores one polynomial in the index variables per residue
of the primary index modulo its period. `limit` substitutes the infinite
generators for the index variables on every residue class the family hits
cofinally; classes that disagree come back as candidate branches.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import gcd
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, ring

from .errors import DomainError, IncompatibleIndexError, UnsupportedShapeError
from .hyperreal import (
    HYPER_RING,
    HyperReal,
    from_fraction,
    is_infinitesimal,
    render_polynomial,
    standard_part,
    to_fraction,
)

logger = logging.getLogger(__name__)

INDEX_RING, N_VAR, T_VAR, H_VAR, S_VAR = ring("n,t,h,s", QQ, grlex)
INDEX_NAMES = ('n', 't', 'h', 's')

_GRID_VARS = frozenset({'n', 't'})
_COIN_VARS = frozenset({'h', 's'})


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


class DirectedFamily(Enum):
    """The seven directed sets a limit can be taken along"""

    ALL_N = 'all'
    EVEN_N = 'even'
    ODD_N = 'odd'
    FACTORIAL_N = 'factorial'
    Q_GRID = 'grid'
    R_GRID = 'rgrid'
    COIN_CT = 'ct'

    @property
    def is_coin(self) -> bool:
        return self is DirectedFamily.COIN_CT

    @property
    def allows_tau(self) -> bool:
        return self is DirectedFamily.R_GRID

    def hit_residues(self, period: int) -> FrozenSet[int]:
        """Residues mod `period` taken by arbitrarily large family indices"""
        if self is DirectedFamily.ALL_N:
            return frozenset(range(period))
        if self is DirectedFamily.EVEN_N:
            step = gcd(2, period)
            return frozenset(r for r in range(period) if r % step == 0)
        if self is DirectedFamily.ODD_N:
            step = gcd(2, period)
            return frozenset(r for r in range(period) if r % step == 1 % step)
        # factorial, grid and coin indices are eventually divisible by any period
        return frozenset({0})


def _poly(value) -> PolyElement:
    if isinstance(value, PolyElement):
        return value
    return INDEX_RING.ground_new(from_fraction(Fraction(value)))


def _variables(poly: PolyElement) -> FrozenSet[str]:
    used = set()
    for monom in poly.itermonoms():
        used.update(name for name, exp in zip(INDEX_NAMES, monom) if exp)
    return frozenset(used)


@dataclass(frozen=True)
class QuasiPolynomial:
    """Value at primary index i >= threshold is parts[i % period](i, ...)

    `support`, when set, lists the residues on which the parts are exact;
    other residues carry no claim.
    """

    parts: Tuple[PolyElement, ...]
    threshold: int = 0
    support: Optional[FrozenSet[int]] = None

    def __post_init__(self):
        if not self.parts:
            raise ValueError("a quasi-polynomial needs at least one part")
        object.__setattr__(self, 'parts', tuple(_poly(p) for p in self.parts))
        if self.support is not None:
            object.__setattr__(self, 'support', frozenset(r % len(self.parts) for r in self.support))

    # Constructors

    @classmethod
    def constant(cls, value) -> "QuasiPolynomial":
        return cls((_poly(value),))

    @classmethod
    def from_poly(cls, poly: PolyElement, threshold: int = 0) -> "QuasiPolynomial":
        return cls((poly,), threshold)

    @classmethod
    def periodic(cls, values: Sequence, threshold: int = 0) -> "QuasiPolynomial":
        return cls(tuple(_poly(v) for v in values), threshold).normalized()

    @classmethod
    def floor_linear(cls, c, d=0) -> "QuasiPolynomial":
        """floor(c*n + d) for rational c and d"""
        c, d = Fraction(c), Fraction(d)
        period = c.denominator
        parts = []
        for r in range(period):
            shift = c * r + d
            frac = shift - (shift.numerator // shift.denominator)
            parts.append(N_VAR * from_fraction(c) + from_fraction(d - frac))
        return cls(tuple(parts)).normalized()

    @classmethod
    def ceil_linear(cls, c, d=0) -> "QuasiPolynomial":
        """ceil(c*n + d), as -floor(-c*n - d)"""
        return -cls.floor_linear(-Fraction(c), -Fraction(d))

    @classmethod
    def indicator(cls, modulus: int, residue: int = 0) -> "QuasiPolynomial":
        """1 when n = residue (mod modulus), else 0"""
        return cls.periodic([1 if r == residue % modulus else 0 for r in range(modulus)])

    # Structure

    @property
    def period(self) -> int:
        return len(self.parts)

    @property
    def variables(self) -> FrozenSet[str]:
        used = set()
        for part in self.parts:
            used |= _variables(part)
        return frozenset(used)

    @property
    def polynomial_part(self) -> PolyElement:
        """Terms shared by every part"""
        common = dict(self.parts[0].terms())
        for part in self.parts[1:]:
            terms = dict(part.terms())
            common = {m: c for m, c in common.items() if terms.get(m) == c}
        return INDEX_RING.from_dict(common) if common else INDEX_RING.zero

    @property
    def corrections(self) -> Tuple[PolyElement, ...]:
        base = self.polynomial_part
        return tuple(part - base for part in self.parts)

    def residues(self) -> FrozenSet[int]:
        return self.support if self.support is not None else frozenset(range(self.period))

    def lifted(self, period: int) -> "QuasiPolynomial":
        if period % self.period:
            raise ValueError(f"cannot lift period {self.period} to {period}")
        parts = tuple(self.parts[r % self.period] for r in range(period))
        support = None
        if self.support is not None:
            support = frozenset(r for r in range(period) if r % self.period in self.support)
        return QuasiPolynomial(parts, self.threshold, support)

    def normalized(self) -> "QuasiPolynomial":
        """Shrink the period as far as the parts and support allow"""
        P = self.period
        for d in sorted(k for k in range(1, P + 1) if P % k == 0):
            if any(self.parts[r] != self.parts[r % d] for r in range(P)):
                continue
            support = None
            if self.support is not None:
                reduced = frozenset(r % d for r in self.support)
                if frozenset(r for r in range(P) if r % d in reduced) != self.support:
                    continue
                support = None if len(reduced) == d else reduced
            return QuasiPolynomial(self.parts[:d], self.threshold, support)
        return self

    # Arithmetic

    def _check_compatible(self, other: "QuasiPolynomial"):
        mine, theirs = self.variables, other.variables
        if (mine & _GRID_VARS and theirs & _COIN_VARS) or (mine & _COIN_VARS and theirs & _GRID_VARS):
            raise IncompatibleIndexError(
                f"cannot combine counts over {sorted(mine)} with counts over {sorted(theirs)}"
            )

    def _combine(self, other: "QuasiPolynomial", op) -> "QuasiPolynomial":
        self._check_compatible(other)
        period = lcm(self.period, other.period)
        left, right = self.lifted(period), other.lifted(period)
        parts = tuple(op(a, b) for a, b in zip(left.parts, right.parts))
        support = left.support
        if right.support is not None:
            support = right.support if support is None else support & right.support
        return QuasiPolynomial(parts, max(self.threshold, other.threshold), support).normalized()

    def __add__(self, other):
        other = _as_qp(other)
        if other is None:
            return NotImplemented
        return self._combine(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_qp(other)
        if other is None:
            return NotImplemented
        return self._combine(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return QuasiPolynomial(tuple(-p for p in self.parts), self.threshold, self.support)

    def __mul__(self, other):
        if isinstance(other, PolyElement):
            other = QuasiPolynomial.from_poly(other)
        other = _as_qp(other)
        if other is None:
            return NotImplemented
        return self._combine(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def with_threshold(self, threshold: int) -> "QuasiPolynomial":
        return QuasiPolynomial(self.parts, max(self.threshold, threshold), self.support)

    def with_support(self, modulus: int, residues: Iterable[int]) -> "QuasiPolynomial":
        """Restrict the claim to primary indices in the given classes mod `modulus`"""
        lifted = self.lifted(lcm(self.period, modulus))
        allowed = frozenset(r for r in range(lifted.period) if r % modulus in set(residues))
        if lifted.support is not None:
            allowed &= lifted.support
        return QuasiPolynomial(lifted.parts, lifted.threshold, allowed).normalized()

    # Evaluation

    def covers(self, index: int) -> bool:
        return index >= self.threshold and (index % self.period) in self.residues()

    def value_at(self, index: int, t: int = 0, s: int = 0) -> Fraction:
        """Value at primary index `index` (n, or N with h = 2**N)"""
        part = self.parts[index % self.period]
        total = Fraction(0)
        for monom, coeff in part.iterterms():
            en, et, eh, es = monom
            term = to_fraction(coeff)
            if en:
                term *= index ** en
            if et:
                term *= t ** et
            if eh:
                term *= 2 ** (index * eh)
            if es:
                term *= s ** es
            total += term
        return total

    def __str__(self):
        base = self.polynomial_part
        corr = ', '.join(render_polynomial(c, INDEX_NAMES) for c in self.corrections)
        text = f"{render_polynomial(base, INDEX_NAMES)}; period={self.period}; corr=[{corr}]; n0={self.threshold}"
        if self.support is not None:
            text += f"; support=[{', '.join(str(r) for r in sorted(self.support))}]"
        return text


def _as_qp(value) -> Optional[QuasiPolynomial]:
    if isinstance(value, QuasiPolynomial):
        return value
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return QuasiPolynomial.constant(value)
    return None


def qp_add(f: QuasiPolynomial, g: QuasiPolynomial) -> QuasiPolynomial:
    return f + g


def qp_mul(f: QuasiPolynomial, g: QuasiPolynomial) -> QuasiPolynomial:
    return f * g


def qp_scale(r, f: QuasiPolynomial) -> QuasiPolynomial:
    return QuasiPolynomial.constant(r) * f


@dataclass(frozen=True)
class CountBounds:
    """Lower and upper counting functions, both valid above their thresholds"""

    lower: QuasiPolynomial
    upper: QuasiPolynomial

    def __add__(self, other):
        if isinstance(other, CountBounds):
            return CountBounds(self.lower + other.lower, self.upper + other.upper)
        if isinstance(other, (QuasiPolynomial, int, Fraction)):
            return CountBounds(self.lower + other, self.upper + other)
        return NotImplemented

    __radd__ = __add__

    def scaled(self, factor) -> "CountBounds":
        factor = Fraction(factor)
        if factor < 0:
            return CountBounds(self.upper * factor, self.lower * factor)
        return CountBounds(self.lower * factor, self.upper * factor)

    def __str__(self):
        return f"lower: {self.lower} | upper: {self.upper}"


def _substitute(poly: PolyElement, family: DirectedFamily) -> HyperReal:
    terms: Dict[Tuple[int, int, int], object] = {}
    for (en, et, eh, es), coeff in poly.iterterms():
        if eh != es or eh > 1:
            raise UnsupportedShapeError(
                f"coin count term with h^{eh}*s^{es} is not affine in h*s"
            )
        key = (en, et, eh)
        terms[key] = terms.get(key, QQ.zero) + coeff
    return HyperReal(HYPER_RING.from_dict({m: c for m, c in terms.items() if c}))


def _check_family(f: QuasiPolynomial, family: DirectedFamily):
    used = f.variables
    if family.is_coin and used & _GRID_VARS:
        raise IncompatibleIndexError(f"coin family cannot take the limit of a grid count {f}")
    if not family.is_coin and used & _COIN_VARS:
        raise IncompatibleIndexError(f"{family.name} cannot take the limit of a coin count {f}")
    if 't' in used and not family.allows_tau:
        raise IncompatibleIndexError(f"{family.name} has no theta index for {f}")


class LimitResult:
    """Limit along a family: one value per residue class the family hits

    Determined when every branch agrees; otherwise the distinct branch values
    are the candidates. Nothing here ever picks one of them.
    """

    __slots__ = ('branches', 'modulus', 'family')

    def __init__(self, branches: Mapping[int, HyperReal], modulus: int, family: DirectedFamily):
        if not branches:
            raise IncompatibleIndexError(f"{family.name} hits no residue with a claimed value")
        self.branches = dict(sorted(branches.items()))
        self.modulus = modulus
        self.family = family

    @classmethod
    def determined(cls, value: HyperReal, family: DirectedFamily) -> "LimitResult":
        return cls({0: value}, 1, family)

    @property
    def is_determined(self) -> bool:
        return len(set(self.branches.values())) == 1

    @property
    def value(self) -> HyperReal:
        if not self.is_determined:
            raise ValueError(f"limit is not determined: {self}")
        return next(iter(self.branches.values()))

    @property
    def candidates(self) -> List[HyperReal]:
        unique = {str(v): v for v in self.branches.values()}
        return [unique[key] for key in sorted(unique)]

    def _aligned(self, other: "LimitResult") -> Tuple[int, List[Tuple[int, HyperReal, HyperReal]]]:
        if other.family is not self.family:
            raise IncompatibleIndexError(
                f"limits along {self.family.name} and {other.family.name} cannot be combined"
            )
        modulus = lcm(self.modulus, other.modulus)
        rows = []
        for r in sorted(self.family.hit_residues(modulus)):
            a = self.branches.get(r % self.modulus)
            b = other.branches.get(r % other.modulus)
            if a is not None and b is not None:
                rows.append((r, a, b))
        return modulus, rows

    def combine(self, other: "LimitResult", op) -> "LimitResult":
        modulus, rows = self._aligned(other)
        return LimitResult({r: op(a, b) for r, a, b in rows}, modulus, self.family).reduced()

    def map(self, fn) -> "LimitResult":
        return LimitResult({r: fn(v) for r, v in self.branches.items()}, self.modulus, self.family)

    def reduced(self) -> "LimitResult":
        if self.is_determined and self.modulus > 1:
            return LimitResult.determined(self.value, self.family)
        return self

    def __add__(self, other):
        return self.combine(_as_limit(other, self.family), lambda a, b: a + b)

    def __sub__(self, other):
        return self.combine(_as_limit(other, self.family), lambda a, b: a - b)

    def __mul__(self, other):
        return self.combine(_as_limit(other, self.family), lambda a, b: a * b)

    def __truediv__(self, other):
        def divide(a, b):
            if b.is_zero:
                raise DomainError(f"limit branch divides {a} by zero")
            return a / b
        return self.combine(_as_limit(other, self.family), divide)

    def __eq__(self, other):
        if not isinstance(other, LimitResult):
            return NotImplemented
        _, rows = self._aligned(other)
        return bool(rows) and all(a == b for _, a, b in rows)

    def __hash__(self):
        return hash(tuple(self.candidates))

    def __str__(self):
        if self.is_determined:
            return f"exact: {self.value}"
        return "candidates: " + ', '.join(str(v) for v in self.candidates)

    def __repr__(self):
        return f"LimitResult({self}, family={self.family.name})"


def _as_limit(value, family: DirectedFamily) -> LimitResult:
    if isinstance(value, LimitResult):
        return value
    if isinstance(value, (int, Fraction)):
        value = HyperReal(value)
    if isinstance(value, HyperReal):
        return LimitResult.determined(value, family)
    raise TypeError(f"cannot combine a limit with {type(value).__name__}")


def limit(f: QuasiPolynomial, family: DirectedFamily) -> LimitResult:
    """Substitute generators on every residue class the family hits"""
    _check_family(f, family)
    residues = family.hit_residues(f.period) & f.residues()
    if not residues:
        raise IncompatibleIndexError(f"{family.name} never reaches the residues where {f} holds")
    branches = {r: _substitute(f.parts[r], family) for r in residues}
    result = LimitResult(branches, f.period, family).reduced()
    logger.debug("limit of %s along %s: %s", f, family.name, result)
    return result


def _hit(f: QuasiPolynomial, g: QuasiPolynomial, family: DirectedFamily) -> List[PolyElement]:
    diff = f - g
    _check_family(diff, family)
    residues = family.hit_residues(diff.period) & diff.residues()
    return [diff.parts[r] for r in sorted(residues)]


def eventually_equal(f: QuasiPolynomial, g: QuasiPolynomial, family: DirectedFamily) -> bool:
    return all(not part for part in _hit(f, g, family))


def eventually_different(f: QuasiPolynomial, g: QuasiPolynomial, family: DirectedFamily) -> bool:
    """f - g is nonzero on every hit residue class from some index on

    A nonzero polynomial in one index variable has finitely many roots; in
    several variables the difference must also keep one sign.
    """
    parts = _hit(f, g, family)
    if not parts:
        return False
    for part in parts:
        if not part:
            return False
        if len(_variables(part)) > 1:
            signs = {c > 0 for c in part.itercoeffs()}
            if len(signs) > 1:
                return False
    return True


def standard_parts(result: LimitResult) -> List[Fraction]:
    """Distinct standard parts of the branches, in increasing order"""
    return sorted({standard_part(v) for v in result.branches.values()})


def infinitesimal_branches(result: LimitResult) -> bool:
    return all(is_infinitesimal(v) for v in result.branches.values())
