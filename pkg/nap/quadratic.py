"""
Exact quadratic irrationals (p + q*sqrt(d))/r

Used for irrational interval endpoints and for the theta elements of real
grids. Values with the same radicand compare exactly; different radicands
are separated by refining rational brackets.
"""

import logging
from fractions import Fraction
from math import gcd, isqrt
from typing import Tuple, Union

from sympy import Integer, Rational, S, sympify
from sympy.parsing.sympy_parser import parse_expr, standard_transformations

from .config import get_settings
from .errors import EnclosurePrecisionError

logger = logging.getLogger(__name__)


def _squarefree_split(d: int) -> Tuple[int, int]:
    """Write d = f^2 * core with core squarefree; return (f, core)"""
    f, core, k = 1, d, 2
    while k * k <= core:
        while core % (k * k) == 0:
            core //= k * k
            f *= k
        k += 1
    return f, core


def make_quadratic(p, q, d: int, r=1):
    """Canonical value of (p + q*sqrt(d))/r: a Fraction when rational"""
    if d < 0:
        raise ValueError("negative radicand")
    p, q, r = Fraction(p), Fraction(q), Fraction(r)
    if r == 0:
        raise ZeroDivisionError("zero denominator in quadratic irrational")
    f, core = _squarefree_split(d) if d else (0, 1)
    q *= f
    if q == 0 or core == 1:
        return (p + q) / r if core == 1 else p / r

    # clear rational coefficients into integers
    scale = 1
    for value in (p, q, r):
        scale = scale * value.denominator // gcd(scale, value.denominator)
    P, Q, R = int(p * scale), int(q * scale), int(r * scale)
    if R < 0:
        P, Q, R = -P, -Q, -R
    g = gcd(gcd(P, Q), R)
    return QuadraticIrrational(P // g, Q // g, core, R // g)


def _sign_of_sum(a: Fraction, b: Fraction, d: int) -> int:
    """Sign of a + b*sqrt(d) for squarefree d > 1"""
    if b == 0:
        return (a > 0) - (a < 0)
    if a == 0 or (a > 0) == (b > 0):
        return 1 if b > 0 else -1
    # opposite signs: compare squares
    diff = a * a - b * b * d
    return (1 if a > 0 else -1) * ((diff > 0) - (diff < 0))


class QuadraticIrrational:
    """(p + q*sqrt(d))/r with d squarefree, q != 0, r > 0 and gcd(p, q, r) = 1"""

    __slots__ = ('p', 'q', 'd', 'r')

    def __init__(self, p: int, q: int, d: int, r: int):
        self.p, self.q, self.d, self.r = p, q, d, r

    def sign_vs(self, value) -> int:
        """Sign of self - value for a rational value"""
        value = Fraction(value)
        return _sign_of_sum(Fraction(self.p) - value * self.r, Fraction(self.q), self.d)

    def floor(self) -> int:
        root = isqrt(self.q * self.q * self.d)
        guess = (self.p + (root if self.q > 0 else -root - 1)) // self.r
        while self.sign_vs(guess) < 0:
            guess -= 1
        while self.sign_vs(guess + 1) > 0:
            guess += 1
        return guess

    def ceil(self) -> int:
        return self.floor() + 1

    def bracket(self, digits: int) -> Tuple[Fraction, Fraction]:
        """Rational (lo, hi) with lo < self < hi and hi - lo = 10**-digits"""
        unit = 10 ** digits
        low = (self * unit).floor()
        return Fraction(low, unit), Fraction(low + 1, unit)

    # Arithmetic with rationals and same-radicand values

    def __neg__(self):
        return QuadraticIrrational(-self.p, -self.q, self.d, self.r)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return make_quadratic(Fraction(self.p) + other * self.r, self.q, self.d, self.r)
        if isinstance(other, QuadraticIrrational) and other.d == self.d:
            return make_quadratic(
                Fraction(self.p, self.r) + Fraction(other.p, other.r),
                Fraction(self.q, self.r) + Fraction(other.q, other.r),
                self.d,
            )
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, QuadraticIrrational)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return make_quadratic(self.p * other, self.q * other, self.d, self.r)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def __abs__(self):
        return -self if self.sign_vs(0) < 0 else self

    # Ordering against any real handled here

    def _cmp(self, other) -> int:
        return compare_reals(self, other)

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        if isinstance(other, QuadraticIrrational):
            return (self.p, self.q, self.d, self.r) == (other.p, other.q, other.d, other.r)
        return False

    def __hash__(self):
        return hash((self.p, self.q, self.d, self.r))

    def __float__(self):
        return (self.p + self.q * self.d ** 0.5) / self.r

    def __str__(self):
        magnitude = abs(self.q)
        root = f"sqrt({self.d})" if magnitude == 1 else f"{magnitude}*sqrt({self.d})"
        if self.p:
            body = f"{self.p} {'+' if self.q > 0 else '-'} {root}"
        else:
            body = root if self.q > 0 else f"-{root}"
        if self.r == 1:
            return body
        return f"({body})/{self.r}"

    def __repr__(self):
        return f"QuadraticIrrational({self})"


Real = Union[Fraction, QuadraticIrrational]


def compare_reals(x, y) -> int:
    """Exact sign of x - y for rationals and quadratic irrationals"""
    if isinstance(x, QuadraticIrrational):
        if not isinstance(y, QuadraticIrrational):
            return x.sign_vs(y)
        if x.d == y.d:
            diff = x - y
            if isinstance(diff, QuadraticIrrational):
                return diff.sign_vs(0)
            return (diff > 0) - (diff < 0)
        return _separate(x, y)
    if isinstance(y, QuadraticIrrational):
        return -y.sign_vs(x)
    x, y = Fraction(x), Fraction(y)
    return (x > y) - (x < y)


def _separate(x: QuadraticIrrational, y: QuadraticIrrational) -> int:
    settings = get_settings()
    digits = settings.enclosure_digits
    while digits <= settings.max_refine_digits:
        x_lo, x_hi = x.bracket(digits)
        y_lo, y_hi = y.bracket(digits)
        if x_hi <= y_lo:
            return -1
        if y_hi <= x_lo:
            return 1
        digits *= 2
    raise EnclosurePrecisionError(
        f"cannot separate {x} from {y} within {settings.max_refine_digits} digits"
    )


def real_floor(x) -> int:
    if isinstance(x, QuadraticIrrational):
        return x.floor()
    x = Fraction(x)
    return x.numerator // x.denominator


def floor_difference(x, y) -> int:
    """floor(x - y) for any pair of rationals and quadratic irrationals"""
    if not (isinstance(x, QuadraticIrrational) and isinstance(y, QuadraticIrrational)) or x.d == y.d:
        return real_floor(x - y)

    # independent radicands: x - y is irrational, so brackets settle it
    settings = get_settings()
    digits = settings.enclosure_digits
    while digits <= settings.max_refine_digits:
        x_lo, x_hi = x.bracket(digits)
        y_lo, y_hi = y.bracket(digits)
        low, high = real_floor(x_lo - y_hi), real_floor(x_hi - y_lo)
        if low == high:
            return low
        digits *= 2
    raise EnclosurePrecisionError(f"cannot locate {x} - ({y}) between integers")


def is_integer(x) -> bool:
    return isinstance(x, (int, Fraction)) and Fraction(x).denominator == 1


def parse_real(text: str):
    """Parse a rational literal or a scaled sqrt form such as `1/2*sqrt(2)`"""
    cleaned = text.strip()
    if not cleaned or any(ch not in "0123456789+-*/() sqrt" for ch in cleaned):
        raise ValueError(f"not a real literal: {text!r}")
    expr = parse_expr(cleaned, transformations=standard_transformations, evaluate=True)
    expr = sympify(expr).expand()

    rational = Fraction(0)
    radical = None
    for term, coeff in expr.as_coefficients_dict().items():
        if term == S.One:
            rational += Fraction(int(Rational(coeff).p), int(Rational(coeff).q))
        elif term.is_Pow and term.exp == S.Half and isinstance(term.base, Integer):
            if radical is not None:
                raise ValueError(f"more than one radicand in {text!r}")
            radical = (int(term.base), Fraction(int(Rational(coeff).p), int(Rational(coeff).q)))
        else:
            raise ValueError(f"unsupported term {term} in {text!r}")

    if radical is None:
        return rational
    d, q = radical
    return make_quadratic(rational, q, d)


def format_real(x) -> str:
    return str(x)
