"""
Exact Arithmetic for Recurrent Sums

This module provides the scalar layer every evaluator is built on:
1. Rationals (fractions.Fraction, always stored reduced with a positive denominator)
2. PiPoly, finite sums of rational multiples of powers of the formal symbol pi
3. ValueRing, the small contract (zero, one, +, *, -, ==) that lets one
   reduction routine work over either of the two
"""

import logging
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Protocol, Sequence, Tuple, Union

import mpmath

from src.errors import InvalidInputError, ResourceGuardError

logger = logging.getLogger(__name__)

Rational = Fraction
RationalLike = Union[int, Fraction]

# Extra decimal digits carried while evaluating pi numerically
GUARD_DIGITS = 5

# Attempts at raising the working precision before a numeric value is given up on
MAX_PRECISION_ROUNDS = 12

_LOG10_2 = math.log10(2)

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")
_PI_TERM_RE = re.compile(r"^([+-]?)(\d+(?:/\d+)?)?(?:\*?(pi)(?:\^(\d+))?)?$")


def rational_make(num: int, den: int = 1) -> Fraction:
    """
    Build a canonical rational num/den.

    Args:
        num: Numerator
        den: Denominator, must be non-zero

    Returns:
        Reduced Fraction with the sign carried by the numerator
    """
    if den == 0:
        raise InvalidInputError(f"Zero denominator in rational {num}/{den}")
    return Fraction(int(num), int(den))


def parse_rational(text: str) -> Fraction:
    """Parse the text form `-3/2` or `7` into a Fraction."""
    match = _RATIONAL_RE.match(str(text))
    if not match:
        raise InvalidInputError(f"Not a rational number: {text!r}")
    num = int(match.group(1))
    den = int(match.group(2)) if match.group(2) is not None else 1
    return rational_make(num, den)


def format_rational(value: RationalLike) -> str:
    """Render a rational for humans: `-3/2`, integers without a denominator."""
    return str(Fraction(value))


def rational_to_json(value: RationalLike) -> str:
    """Render a rational for JSON documents, always as `num/den`."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


class RingElement(Protocol):
    """Operations an evaluator may use on its values."""

    def __add__(self, other: Any) -> Any: ...

    def __mul__(self, other: Any) -> Any: ...

    def __neg__(self) -> Any: ...

    def __eq__(self, other: Any) -> bool: ...


class PiPoly:
    """
    Immutable finite sum of c_k * pi^k with rational c_k and k >= 0.

    Pi is treated as a formal transcendental: equality compares coefficients,
    never numeric values. Plain rationals embed as exponent-0 polynomials and
    mix freely with PiPoly in +, - and *.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[int, RationalLike]] = None):
        cleaned: Dict[int, Fraction] = {}
        for exponent, coeff in (terms or {}).items():
            exponent = int(exponent)
            if exponent < 0:
                raise InvalidInputError(f"PiPoly exponents must be non-negative, got {exponent}")
            coeff = Fraction(coeff)
            if coeff != 0:
                cleaned[exponent] = coeff
        object.__setattr__(self, "_terms", tuple(sorted(cleaned.items())))

    def __setattr__(self, name, value):
        raise AttributeError("PiPoly is immutable")

    @classmethod
    def zero(cls) -> "PiPoly":
        return cls()

    @classmethod
    def one(cls) -> "PiPoly":
        return cls({0: 1})

    @classmethod
    def constant(cls, value: RationalLike) -> "PiPoly":
        return cls({0: value})

    @classmethod
    def monomial(cls, coeff: RationalLike, exponent: int) -> "PiPoly":
        """Return coeff * pi^exponent."""
        return cls({exponent: coeff})

    @classmethod
    def _coerce(cls, other: Any) -> Optional["PiPoly"]:
        if isinstance(other, PiPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return cls.constant(other)
        return None

    @property
    def terms(self) -> Dict[int, Fraction]:
        """Exponent -> coefficient map (a copy)."""
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[int, Fraction]]:
        return iter(self._terms)

    def coefficient(self, exponent: int) -> Fraction:
        return dict(self._terms).get(exponent, Fraction(0))

    @property
    def exponents(self) -> Tuple[int, ...]:
        return tuple(k for k, _ in self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_rational(self) -> bool:
        return all(k == 0 for k, _ in self._terms)

    @property
    def degree(self) -> int:
        """Largest exponent present; -1 for the zero polynomial."""
        return self._terms[-1][0] if self._terms else -1

    def __add__(self, other: Any) -> "PiPoly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        total = dict(self._terms)
        for k, c in other._terms:
            total[k] = total.get(k, Fraction(0)) + c
        return PiPoly(total)

    __radd__ = __add__

    def __neg__(self) -> "PiPoly":
        return PiPoly({k: -c for k, c in self._terms})

    def __sub__(self, other: Any) -> "PiPoly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> "PiPoly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other: Any) -> "PiPoly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        product: Dict[int, Fraction] = {}
        for k1, c1 in self._terms:
            for k2, c2 in other._terms:
                product[k1 + k2] = product.get(k1 + k2, Fraction(0)) + c1 * c2
        return PiPoly(product)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> "PiPoly":
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        if other == 0:
            raise InvalidInputError("Division of a PiPoly by zero")
        return PiPoly({k: c / other for k, c in self._terms})

    def __pow__(self, exponent: int) -> "PiPoly":
        if not isinstance(exponent, int) or exponent < 0:
            return NotImplemented
        result = PiPoly.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other: Any) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self.is_rational():
            # agree with hash(Fraction) so embedded rationals hash alike
            return hash(self.coefficient(0))
        return hash(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __repr__(self) -> str:
        return f"PiPoly({dict(self._terms)!r})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for index, (k, c) in enumerate(self._terms):
            sign = "-" if c < 0 else "+"
            magnitude = format_rational(abs(c))
            if k == 0:
                body = magnitude
            elif k == 1:
                body = f"{magnitude} * pi"
            else:
                body = f"{magnitude} * pi^{k}"
            if index == 0:
                parts.append(body if sign == "+" else f"-{body}")
            else:
                parts.append(f"{sign} {body}")
        return " ".join(parts)

    def to_json(self) -> Dict[str, Dict[str, str]]:
        return {"terms": {str(k): rational_to_json(c) for k, c in self._terms}}

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "PiPoly":
        try:
            terms = data["terms"]
        except (KeyError, TypeError):
            raise InvalidInputError("PiPoly JSON must be an object with a 'terms' map")
        return cls({int(k): parse_rational(v) for k, v in terms.items()})

    @classmethod
    def parse(cls, text: str) -> "PiPoly":
        """Parse the text form, e.g. `1/2 - 1/3 * pi^2` or `127/604800*pi^8`."""
        compact = re.sub(r"\s+", "", str(text))
        if compact in ("", "0"):
            return cls.zero()
        total = cls.zero()
        for term in re.findall(r"[+-]?[^+-]+", compact):
            match = _PI_TERM_RE.match(term)
            if not match or (match.group(2) is None and match.group(3) is None):
                raise InvalidInputError(f"Cannot parse PiPoly term {term!r} in {text!r}")
            sign, coeff_text, pi_symbol, power = match.groups()
            coeff = parse_rational(coeff_text) if coeff_text else Fraction(1)
            if sign == "-":
                coeff = -coeff
            exponent = 0
            if pi_symbol:
                exponent = int(power) if power else 1
            total = total + cls.monomial(coeff, exponent)
        return total

    def term_values(self, dps: int) -> List["mpmath.mpf"]:
        """Numeric value of each c_k * pi^k at `dps` working decimal digits."""
        with mpmath.workdps(dps):
            return [mpmath.mpf(c.numerator) / c.denominator * mpmath.pi ** k for k, c in self._terms]

    def to_mpf(self, dps: int) -> "mpmath.mpf":
        """Numeric value at `dps` working decimal digits."""
        with mpmath.workdps(dps):
            return mpmath.fsum(self.term_values(dps))


def pipoly_mul(a: PiPoly, b: PiPoly) -> PiPoly:
    """Distributive product of two pi-polynomials."""
    return PiPoly._coerce(a) * PiPoly._coerce(b)


def rational_to_mpf(value: RationalLike, dps: int) -> "mpmath.mpf":
    value = Fraction(value)
    with mpmath.workdps(dps):
        return mpmath.mpf(value.numerator) / value.denominator


def format_decimal(value: "mpmath.mpf", digits: int) -> str:
    """Round to `digits` significant digits; zero renders as `0`."""
    if value == 0:
        return "0"
    return mpmath.nstr(value, digits)


def stable_sum(terms: Callable[[int], Sequence["mpmath.mpf"]], digits: int) -> Tuple["mpmath.mpf", int]:
    """
    Sum numeric terms at a working precision that survives their cancellation.

    The terms are re-evaluated at higher precision until the digits lost
    between the largest term and the total are covered, so the total holds
    `digits + GUARD_DIGITS` correct significant digits.

    Args:
        terms: Returns the terms evaluated at a given number of decimal digits
        digits: Significant digits wanted in the total

    Returns:
        (total, dps) where dps is the working precision that produced it
    """
    dps = digits + GUARD_DIGITS
    for _ in range(MAX_PRECISION_ROUNDS):
        with mpmath.workdps(dps):
            parts = [t for t in terms(dps) if t != 0]
            if not parts:
                return mpmath.mpf(0), dps
            total = mpmath.fsum(parts)
            if total == 0:
                dps *= 2
                continue
            lost_bits = max(0, max(mpmath.mag(t) for t in parts) - mpmath.mag(total))
        needed = digits + GUARD_DIGITS + math.ceil(lost_bits * _LOG10_2) + 1
        if dps >= needed:
            return total, dps
        logger.debug(f"Cancellation of {lost_bits} bits at {dps} digits; retrying at {needed}")
        dps = needed
    raise ResourceGuardError("precision increases for a cancelling sum", MAX_PRECISION_ROUNDS + 1,
                             MAX_PRECISION_ROUNDS)


def pipoly_eval_numeric(x: Union[PiPoly, RationalLike], digits: int) -> str:
    """
    Evaluate a pi-polynomial as a decimal string.

    Args:
        x: Value to evaluate (rationals are accepted as constant polynomials)
        digits: Significant digits wanted in the result

    Returns:
        Decimal string correct to `digits` significant digits
    """
    if digits < 1:
        raise InvalidInputError(f"digits must be at least 1, got {digits}")
    poly = PiPoly._coerce(x)
    if poly is None:
        raise InvalidInputError(f"Cannot evaluate {x!r} numerically")
    value, dps = stable_sum(poly.term_values, digits)
    with mpmath.workdps(dps):
        return format_decimal(value, digits)


@dataclass(frozen=True)
class ValueRing:
    """A commutative ring the evaluators can compute in: a name and its 0 and 1."""
    name: str
    zero: Any
    one: Any

    def embed(self, value: RationalLike) -> Any:
        """Image of a rational constant in this ring."""
        return self.one * Fraction(value)

    def sum(self, values: Iterable[Any]) -> Any:
        total = self.zero
        for value in values:
            total = total + value
        return total

    def product(self, values: Iterable[Any]) -> Any:
        total = self.one
        for value in values:
            total = total * value
        return total

    def power(self, base: Any, exponent: int) -> Any:
        if exponent < 0:
            raise InvalidInputError(f"Negative ring power {exponent}")
        result = self.one
        for _ in range(exponent):
            result = result * base
        return result


RATIONALS = ValueRing("rational", Fraction(0), Fraction(1))
PI_POLYNOMIALS = ValueRing("pi-polynomial", PiPoly.zero(), PiPoly.one())
