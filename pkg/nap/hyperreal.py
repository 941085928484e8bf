"""
Exact arithmetic in the field Q(a, t, g) of rational functions in the
infinite generators a (alpha), t (tau) and g (gamma)

Elements are kept in canonical form: integer-coefficient numerator and
denominator with no common factor and a positive leading denominator
coefficient under grlex with a > t > g.
"""

import logging
import re
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Tuple, Union

from sympy import Symbol, fraction, together
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations
from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, ring

from .errors import DomainError, NotFiniteError, UndeterminedMagnitudeError

logger = logging.getLogger(__name__)

BigRational = Fraction
Scalar = Union[int, Fraction]

HYPER_RING, _A, _T, _G = ring("a,t,g", QQ, grlex)


class Generator(Enum):
    """Infinite generators of the field"""

    ALPHA = ('a', 'numerosity of the natural numbers')
    TAU = ('t', 'limit of |theta| over the real grids')
    GAMMA = ('g', 'numerosity of the coin-toss space')

    def __init__(self, symbol: str, role: str):
        self.symbol = symbol
        self.role = role

    @property
    def index(self) -> int:
        return list(Generator).index(self)


class CompareResult(Enum):
    LESS = 'Less'
    EQUAL = 'Equal'
    GREATER = 'Greater'
    UNDETERMINED = 'Undetermined'


def to_fraction(coefficient) -> Fraction:
    """Convert a QQ domain element to a Fraction"""
    return Fraction(int(QQ.numer(coefficient)), int(QQ.denom(coefficient)))


def from_fraction(value: Scalar):
    """Convert an int or Fraction to a QQ domain element"""
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def _sign(value) -> int:
    return (value > 0) - (value < 0)


def _total_degree(poly: PolyElement) -> int:
    return max((sum(monom) for monom in poly.itermonoms()), default=-1)


def _divides(small: Tuple[int, ...], large: Tuple[int, ...]) -> bool:
    return all(a <= b for a, b in zip(small, large))


def _single_signed(poly: PolyElement) -> int:
    """Common sign of every coefficient, or 0 when the signs are mixed"""
    signs = {_sign(c) for c in poly.itercoeffs()}
    return signs.pop() if len(signs) == 1 else 0


def _top_monomial(poly: PolyElement) -> Optional[Tuple[int, ...]]:
    """The monomial every other monomial divides, if there is one"""
    monoms = list(poly.itermonoms())
    for candidate in monoms:
        if all(_divides(m, candidate) for m in monoms):
            return candidate
    return None


def _dominant(poly: PolyElement) -> Optional[Tuple[Tuple[int, ...], Fraction]]:
    """Top monomial and its coefficient

    Every other monomial divides the top one by a product of infinite
    generators, so the top term fixes both the sign and the size of poly.
    """
    top = _top_monomial(poly)
    if top is None:
        return None
    return top, to_fraction(poly[top])


def _poly_sign(poly: PolyElement) -> Optional[int]:
    common = _single_signed(poly)
    if common:
        return common
    dominant = _dominant(poly)
    return _sign(dominant[1]) if dominant else None


def render_polynomial(poly: PolyElement, names: Iterable[str]) -> str:
    """Render a polynomial as a sum of monomials in ring order"""
    names = list(names)
    if not poly:
        return '0'

    pieces = []
    for monom, coeff in poly.terms():
        value = to_fraction(coeff)
        factors = []
        for name, exponent in zip(names, monom):
            if exponent == 1:
                factors.append(name)
            elif exponent > 1:
                factors.append(f"{name}^{exponent}")

        magnitude = abs(value)
        if not factors:
            body = str(magnitude)
        elif magnitude == 1:
            body = '*'.join(factors)
        else:
            body = '*'.join([str(magnitude)] + factors)

        if not pieces:
            pieces.append(f"-{body}" if value < 0 else body)
        else:
            pieces.append(f"- {body}" if value < 0 else f"+ {body}")
    return ' '.join(pieces)


def _coerce_poly(value) -> PolyElement:
    if isinstance(value, PolyElement):
        if value.ring != HYPER_RING:
            return value.set_ring(HYPER_RING)
        return value
    if isinstance(value, (int, Fraction)):
        return HYPER_RING.ground_new(from_fraction(value))
    raise TypeError(f"cannot build a HyperReal part from {type(value).__name__}")


class HyperReal:
    """Element of Q(a, t, g) in canonical reduced form"""

    __slots__ = ('_numerator', '_denominator', '_hash')

    def __init__(self, numerator=0, denominator=1):
        num = _coerce_poly(numerator)
        den = _coerce_poly(denominator)
        if not den:
            raise DomainError("division by the zero element")
        self._numerator, self._denominator = num.cancel(den)
        self._hash = None

    @classmethod
    def generator(cls, gen: Generator) -> "HyperReal":
        return cls(HYPER_RING.gens[gen.index])

    @classmethod
    def from_terms(cls, terms: Mapping[Tuple[int, int, int], Scalar]) -> "HyperReal":
        """Build a polynomial element from {(ea, et, eg): coefficient}"""
        poly = HYPER_RING.from_dict({monom: from_fraction(c) for monom, c in terms.items() if c})
        return cls(poly)

    @property
    def numerator(self) -> PolyElement:
        return self._numerator

    @property
    def denominator(self) -> PolyElement:
        return self._denominator

    @property
    def generators(self) -> frozenset:
        used = set()
        for poly in (self._numerator, self._denominator):
            for monom in poly.itermonoms():
                used.update(g for g in Generator if monom[g.index])
        return frozenset(used)

    @property
    def is_zero(self) -> bool:
        return not self._numerator

    @property
    def is_constant(self) -> bool:
        return not self.generators

    def as_fraction(self) -> Fraction:
        """The rational value of a constant element"""
        if not self.is_constant:
            raise ValueError(f"{self} is not a constant")
        return to_fraction(self._numerator.coeff(1)) / to_fraction(self._denominator.coeff(1))

    def has_integer_coefficients(self) -> bool:
        return all(
            to_fraction(c).denominator == 1
            for poly in (self._numerator, self._denominator)
            for c in poly.itercoeffs()
        )

    # Field operations

    def __add__(self, other):
        other = _as_hyperreal(other)
        if other is None:
            return NotImplemented
        return HyperReal(
            self._numerator * other._denominator + other._numerator * self._denominator,
            self._denominator * other._denominator,
        )

    __radd__ = __add__

    def __neg__(self):
        return HyperReal(-self._numerator, self._denominator)

    def __sub__(self, other):
        other = _as_hyperreal(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_hyperreal(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _as_hyperreal(other)
        if other is None:
            return NotImplemented
        return HyperReal(self._numerator * other._numerator, self._denominator * other._denominator)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_hyperreal(other)
        if other is None:
            return NotImplemented
        if other.is_zero:
            raise DomainError(f"division of {self} by the zero element")
        return HyperReal(self._numerator * other._denominator, self._denominator * other._numerator)

    def __rtruediv__(self, other):
        other = _as_hyperreal(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return ONE / (self ** -exponent)
        return HyperReal(self._numerator ** exponent, self._denominator ** exponent)

    def __eq__(self, other):
        other = _as_hyperreal(other)
        if other is None:
            return NotImplemented
        return self._numerator == other._numerator and self._denominator == other._denominator

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._numerator, self._denominator))
        return self._hash

    # Evaluation

    def evaluate(self, values: Optional[Mapping[Generator, Scalar]] = None, **by_symbol: Scalar) -> Fraction:
        """Substitute rational values for the generators

        Missing generators default to the value given for any other one, so
        `x.evaluate(a=10**6)` sets every generator to 10**6.
        """
        assignment = {gen.symbol: Fraction(v) for gen, v in (values or {}).items()}
        assignment.update({key: Fraction(v) for key, v in by_symbol.items()})
        if not assignment:
            raise ValueError("no generator values supplied")
        fallback = next(iter(assignment.values()))
        point = [assignment.get(gen.symbol, fallback) for gen in Generator]

        den = _evaluate_poly(self._denominator, point)
        if den == 0:
            raise DomainError(f"denominator of {self} vanishes at {point}")
        return _evaluate_poly(self._numerator, point) / den

    # Rendering

    def __str__(self):
        names = [gen.symbol for gen in Generator]
        return f"({render_polynomial(self._numerator, names)})/({render_polynomial(self._denominator, names)})"

    def __repr__(self):
        return f"HyperReal('{self}')"


def _evaluate_poly(poly: PolyElement, point) -> Fraction:
    total = Fraction(0)
    for monom, coeff in poly.iterterms():
        term = to_fraction(coeff)
        for value, exponent in zip(point, monom):
            term *= value ** exponent
        total += term
    return total


def _as_hyperreal(value) -> Optional[HyperReal]:
    if isinstance(value, HyperReal):
        return value
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return HyperReal(value)
    return None


ZERO = HyperReal(0)
ONE = HyperReal(1)
ALPHA = HyperReal.generator(Generator.ALPHA)
TAU = HyperReal.generator(Generator.TAU)
GAMMA = HyperReal.generator(Generator.GAMMA)


def add(x: HyperReal, y: HyperReal) -> HyperReal:
    return x + y


def mul(x: HyperReal, y: HyperReal) -> HyperReal:
    return x * y


def div(x: HyperReal, y: HyperReal) -> HyperReal:
    return x / y


def neg(x: HyperReal) -> HyperReal:
    return -x


def sign(x: HyperReal) -> Optional[int]:
    """Sign of x, or None when it cannot be decided soundly

    Univariate (or constant) elements are ordered by their sign at +infinity.
    A multivariate numerator or denominator has a sign when its coefficients
    agree or when it has a dominant monomial.
    """
    if x.is_zero:
        return 0
    if len(x.generators) <= 1:
        return _sign(x.numerator.LC) * _sign(x.denominator.LC)
    combined = _single_signed(x.numerator * x.denominator)
    if combined:
        return combined
    top, bottom = _poly_sign(x.numerator), _poly_sign(x.denominator)
    if top is None or bottom is None:
        return None
    return top * bottom


def compare(x: HyperReal, y: HyperReal) -> CompareResult:
    result = sign(_as_hyperreal(x) - _as_hyperreal(y))
    if result is None:
        logger.debug("no determined order between %s and %s", x, y)
        return CompareResult.UNDETERMINED
    return {-1: CompareResult.LESS, 0: CompareResult.EQUAL, 1: CompareResult.GREATER}[result]


def _magnitude(x: HyperReal) -> Tuple[Optional[bool], Optional[bool]]:
    """(is_infinitesimal, is_finite), each None when undecided"""
    num, den = x.numerator, x.denominator
    if not num:
        return True, True
    if len(x.generators) <= 1:
        dn, dd = _total_degree(num), _total_degree(den)
        return dn < dd, dn <= dd

    top, bottom = _dominant(num), _dominant(den)
    if top and bottom:
        if top[0] == bottom[0]:
            return False, True
        if _divides(top[0], bottom[0]):
            return True, True
        if _divides(bottom[0], top[0]):
            return False, False

    if not (_single_signed(den) and _single_signed(num)):
        # Upper bounds only need a single-signed denominator
        if not _single_signed(den):
            return None, None
    num_monoms = list(num.itermonoms())
    den_monoms = list(den.itermonoms())

    infinitesimal: Optional[bool] = None
    finite: Optional[bool] = None

    if all(any(_divides(m, M) and m != M for M in den_monoms) for m in num_monoms):
        infinitesimal, finite = True, True
    elif all(any(_divides(m, M) for M in den_monoms) for m in num_monoms):
        finite = True

    if _single_signed(num):
        if any(all(_divides(M, m) for M in den_monoms) for m in num_monoms):
            infinitesimal = False
        if any(all(_divides(M, m) and M != m for M in den_monoms) for m in num_monoms):
            finite = False
    return infinitesimal, finite


def is_infinitesimal(x: HyperReal) -> bool:
    result, _ = _magnitude(x)
    if result is None:
        raise UndeterminedMagnitudeError(f"cannot decide whether {x} is infinitesimal")
    return result


def is_finite(x: HyperReal) -> bool:
    _, result = _magnitude(x)
    if result is None:
        raise UndeterminedMagnitudeError(f"cannot decide whether {x} is finite")
    return result


def standard_part(x: HyperReal) -> Fraction:
    """The unique rational infinitely close to a finite x"""
    num, den = x.numerator, x.denominator
    if len(x.generators) <= 1:
        if not is_finite(x):
            raise NotFiniteError(f"{x} is not finite")
        if is_infinitesimal(x):
            return Fraction(0)
        return to_fraction(num.LC) / to_fraction(den.LC)

    top, bottom = _dominant(num), _dominant(den)
    if top and bottom and top[0] == bottom[0]:
        return top[1] / bottom[1]

    infinitesimal, finite = _magnitude(x)
    if finite is False:
        raise NotFiniteError(f"{x} is not finite")
    if infinitesimal:
        return Fraction(0)
    raise UndeterminedMagnitudeError(f"cannot determine the standard part of {x}")


def infinitely_close(x: HyperReal, y: HyperReal) -> bool:
    return is_infinitesimal(_as_hyperreal(x) - _as_hyperreal(y))


_HYPER_TEXT = re.compile(r"^[0-9atg\s+\-*/^().]*$")
_SYMBOLS = {gen.symbol: Symbol(gen.symbol) for gen in Generator}


def parse_hyperreal(text: str) -> HyperReal:
    """Parse the canonical rendering (or any rational expression in a, t, g)"""
    if not text.strip() or not _HYPER_TEXT.match(text):
        raise ValueError(f"not a rational expression in a, t, g: {text!r}")
    expr = parse_expr(
        text,
        local_dict=dict(_SYMBOLS),
        transformations=standard_transformations + (convert_xor,),
    )
    num, den = fraction(together(expr))
    return HyperReal(HYPER_RING.from_expr(num), HYPER_RING.from_expr(den))
