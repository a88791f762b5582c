"""Exact scalars: the number field Q(i, sqrt2, sqrt3) and Laurent polynomials in epsilon."""

import logging
import math
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import sympy as sp
from sympy.parsing.sympy_parser import (
    convert_xor,
    parse_expr,
    standard_transformations,
)

from core.errors import (
    DivergentLimit,
    DivisionByZero,
    ExponentOverflow,
    FieldParseError,
    SquareRootOutsideField,
)

logger = logging.getLogger(__name__)

Rational = Fraction

# Coordinate k holds the coefficient of i^(k & 1) * sqrt(RADICAND[k >> 1]).
# Radical index bit 0 stands for sqrt2, bit 1 for sqrt3.
RADICAND = (1, 2, 3, 6)
UNIT_NAMES = ("1", "i", "s2", "i*s2", "s3", "i*s3", "s6", "i*s6")
DIMENSION = 8

EXPONENT_BOUND = 16

_TRANSFORMATIONS = standard_transformations + (convert_xor,)
_FIELD_NAMES = {"i": sp.I, "I": sp.I, "s2": sp.sqrt(2), "s3": sp.sqrt(3), "s6": sp.sqrt(6)}


def _basis_product(a: int, b: int) -> Tuple[int, int]:
    """Product of two basis units as (index, integer factor)."""
    rad_a, i_a = a >> 1, a & 1
    rad_b, i_b = b >> 1, b & 1
    factor = 1
    shared = rad_a & rad_b
    if shared & 1:
        factor *= 2
    if shared & 2:
        factor *= 3
    if i_a and i_b:
        factor = -factor
    return ((rad_a ^ rad_b) << 1) | (i_a ^ i_b), factor


_PRODUCT_TABLE = [[_basis_product(a, b) for b in range(DIMENSION)] for a in range(DIMENSION)]

Scalar = Union["FieldElem", int, Fraction]


class FieldElem:
    """Element of Q(i, sqrt2, sqrt3) stored by its eight rational coordinates."""

    __slots__ = ("_coords",)

    def __init__(self, coords: Optional[Sequence[Union[int, Fraction]]] = None):
        if coords is None:
            coords = (0,) * DIMENSION
        if len(coords) != DIMENSION:
            raise ValueError(f"FieldElem needs {DIMENSION} coordinates, got {len(coords)}")
        self._coords: Tuple[Fraction, ...] = tuple(Fraction(c) for c in coords)

    # construction

    @classmethod
    def zero(cls) -> "FieldElem":
        return cls()

    @classmethod
    def one(cls) -> "FieldElem":
        return cls.from_rational(1)

    @classmethod
    def from_rational(cls, value: Union[int, Fraction]) -> "FieldElem":
        coords = [Fraction(0)] * DIMENSION
        coords[0] = Fraction(value)
        return cls(coords)

    @classmethod
    def unit(cls, index: int) -> "FieldElem":
        coords = [0] * DIMENSION
        coords[index] = 1
        return cls(coords)

    @classmethod
    def coerce(cls, value: Scalar) -> "FieldElem":
        """Lift ints and Fractions into the field; FieldElems pass through."""
        if isinstance(value, FieldElem):
            return value
        if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
            return cls.from_rational(value)
        if isinstance(value, str):
            return cls.parse(value)
        raise TypeError(f"cannot coerce {type(value).__name__} to FieldElem")

    @classmethod
    def parse(cls, text: str) -> "FieldElem":
        """Parse the text syntax, e.g. ``-1/2+1/2*i`` or ``1/2*s2``."""
        if not isinstance(text, str) or not text.strip():
            raise FieldParseError(f"empty field literal: {text!r}")
        try:
            expr = parse_expr(text, local_dict=dict(_FIELD_NAMES), transformations=_TRANSFORMATIONS)
        except Exception as e:
            raise FieldParseError(f"cannot parse field literal {text!r}: {e}") from e
        return cls.from_sympy(expr, source=text)

    @classmethod
    def from_sympy(cls, expr: sp.Expr, source: Optional[str] = None) -> "FieldElem":
        """Convert a sympy constant built from rationals, I, sqrt2, sqrt3 and sqrt6."""
        shown = source if source is not None else str(expr)
        expr = sp.expand(sp.sympify(expr))
        if expr.free_symbols:
            names = sorted(str(s) for s in expr.free_symbols)
            raise FieldParseError(f"unexpected symbols {names} in field literal {shown!r}")
        total = cls.zero()
        for term in sp.Add.make_args(expr):
            coeff, rest = term.as_coeff_Mul()
            if not coeff.is_Rational:
                raise FieldParseError(f"non-rational coefficient {coeff} in {shown!r}")
            value = cls.from_rational(Fraction(int(coeff.p), int(coeff.q)))
            for factor in sp.Mul.make_args(rest):
                if factor == 1:
                    continue
                unit = _SYMPY_UNITS.get(factor)
                if unit is None:
                    raise FieldParseError(
                        f"{factor} is outside Q(i, sqrt2, sqrt3) in {shown!r}"
                    )
                value = value * unit
            total = total + value
        return total

    # inspection

    @property
    def coords(self) -> Tuple[Fraction, ...]:
        return self._coords

    def is_zero(self) -> bool:
        return not any(self._coords)

    def is_rational(self) -> bool:
        return not any(self._coords[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self._coords[0]

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FieldElem):
            return self._coords == other._coords
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self._coords == FieldElem.from_rational(other)._coords
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._coords)

    # ring operations

    def __add__(self, other: Scalar) -> "FieldElem":
        if not isinstance(other, (FieldElem, int, Fraction)):
            return NotImplemented
        other = FieldElem.coerce(other)
        return FieldElem([a + b for a, b in zip(self._coords, other._coords)])

    __radd__ = __add__

    def __neg__(self) -> "FieldElem":
        return FieldElem([-a for a in self._coords])

    def __sub__(self, other: Scalar) -> "FieldElem":
        if not isinstance(other, (FieldElem, int, Fraction)):
            return NotImplemented
        return self + (-FieldElem.coerce(other))

    def __rsub__(self, other: Scalar) -> "FieldElem":
        return FieldElem.coerce(other) - self

    def __mul__(self, other: Scalar) -> "FieldElem":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            factor = Fraction(other)
            return FieldElem([a * factor for a in self._coords])
        if not isinstance(other, FieldElem):
            return NotImplemented
        out = [Fraction(0)] * DIMENSION
        for a, ca in enumerate(self._coords):
            if not ca:
                continue
            row = _PRODUCT_TABLE[a]
            for b, cb in enumerate(other._coords):
                if not cb:
                    continue
                index, factor = row[b]
                out[index] += factor * ca * cb
        return FieldElem(out)

    __rmul__ = __mul__

    def __truediv__(self, other: Scalar) -> "FieldElem":
        if not isinstance(other, (FieldElem, int, Fraction)):
            return NotImplemented
        return self * FieldElem.coerce(other).inverse()

    def __rtruediv__(self, other: Scalar) -> "FieldElem":
        return FieldElem.coerce(other) * self.inverse()

    def __pow__(self, exponent: int) -> "FieldElem":
        if not isinstance(exponent, int):
            return NotImplemented
        base = self if exponent >= 0 else self.inverse()
        result = FieldElem.one()
        n = abs(exponent)
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # Galois conjugations fixing two of the three generators

    def conj_i(self) -> "FieldElem":
        return FieldElem([-c if k & 1 else c for k, c in enumerate(self._coords)])

    def conj_s2(self) -> "FieldElem":
        return FieldElem([-c if (k >> 1) & 1 else c for k, c in enumerate(self._coords)])

    def conj_s3(self) -> "FieldElem":
        return FieldElem([-c if (k >> 1) & 2 else c for k, c in enumerate(self._coords)])

    def inverse(self) -> "FieldElem":
        """Multiplicative inverse through the norm down the tower Q(i,s2,s3) > Q(i,s2) > Q(i) > Q."""
        if self.is_zero():
            raise DivisionByZero("inverse of zero field element")
        numerator = FieldElem.one()
        norm = self
        for conjugate in (FieldElem.conj_s3, FieldElem.conj_s2, FieldElem.conj_i):
            partner = conjugate(norm)
            numerator = numerator * partner
            norm = norm * partner
        return numerator * (1 / norm.rational_value())

    def sqrt(self) -> "FieldElem":
        """Square root inside the field, or SquareRootOutsideField."""
        root = _tower_sqrt(self, 3)
        if root is None:
            raise SquareRootOutsideField(f"sqrt({self}) is not in Q(i, sqrt2, sqrt3)")
        return root

    def try_sqrt(self) -> Optional["FieldElem"]:
        return _tower_sqrt(self, 3)

    # conversions

    def to_complex(self) -> complex:
        total = 0j
        for k, c in enumerate(self._coords):
            if not c:
                continue
            unit = math.sqrt(RADICAND[k >> 1]) * (1j if k & 1 else 1)
            total += float(c) * unit
        return complex(total)

    def to_text(self) -> str:
        parts: List[str] = []
        for k, c in enumerate(self._coords):
            if not c:
                continue
            name = UNIT_NAMES[k]
            if k == 0:
                term = str(c)
            elif c == 1:
                term = name
            elif c == -1:
                term = f"-{name}"
            else:
                term = f"{c}*{name}"
            if parts and not term.startswith("-"):
                term = "+" + term
            parts.append(term)
        return "".join(parts) if parts else "0"

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"FieldElem('{self.to_text()}')"


ZERO = FieldElem.zero()
ONE = FieldElem.one()
I = FieldElem.unit(1)
S2 = FieldElem.unit(2)
S3 = FieldElem.unit(4)
S6 = FieldElem.unit(6)

_SYMPY_UNITS = {sp.I: I, sp.sqrt(2): S2, sp.sqrt(3): S3, sp.sqrt(6): S6}

# (conjugation, generator, generator squared) per tower level
_TOWER = {
    1: (FieldElem.conj_i, I, Fraction(-1)),
    2: (FieldElem.conj_s2, S2, Fraction(2)),
    3: (FieldElem.conj_s3, S3, Fraction(3)),
}


def _rational_sqrt(value: Fraction) -> Optional[Fraction]:
    if value < 0:
        return None
    num, den = value.numerator, value.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def _tower_sqrt(a: FieldElem, level: int) -> Optional[FieldElem]:
    """Square root of ``a`` (an element of the level-th tower field) in that field."""
    if a.is_zero():
        return ZERO
    if level == 0:
        root = _rational_sqrt(a.rational_value())
        return None if root is None else FieldElem.from_rational(root)
    conjugate, r, d = _TOWER[level]
    sigma = conjugate(a)
    alpha = (a + sigma) * Fraction(1, 2)
    beta = (a - sigma) * r * Fraction(1, 2) / d
    if beta.is_zero():
        root = _tower_sqrt(alpha, level - 1)
        if root is not None:
            return root
        root = _tower_sqrt(alpha * (1 / d), level - 1)
        return None if root is None else root * r
    norm_root = _tower_sqrt(alpha * alpha - beta * beta * d, level - 1)
    if norm_root is None:
        return None
    for n in (norm_root, -norm_root):
        u = _tower_sqrt((alpha + n) * Fraction(1, 2), level - 1)
        if u is None or u.is_zero():
            continue
        v = beta / (u * 2)
        return u + v * r
    return None


def field_mul(a: FieldElem, b: FieldElem) -> FieldElem:
    return a * b


def field_inv(a: FieldElem) -> FieldElem:
    return a.inverse()


def field_to_float(a: FieldElem) -> complex:
    return a.to_complex()


class LaurentScalar:
    """Laurent polynomial in epsilon with FieldElem coefficients and bounded exponents."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[int, Scalar]] = None):
        cleaned: Dict[int, FieldElem] = {}
        for exponent, coeff in (terms or {}).items():
            value = FieldElem.coerce(coeff)
            if value.is_zero():
                continue
            if abs(exponent) > EXPONENT_BOUND:
                raise ExponentOverflow(
                    f"exponent {exponent} outside [-{EXPONENT_BOUND}, {EXPONENT_BOUND}]"
                )
            cleaned[int(exponent)] = value
        self._terms: Tuple[Tuple[int, FieldElem], ...] = tuple(sorted(cleaned.items()))

    @classmethod
    def constant(cls, value: Scalar) -> "LaurentScalar":
        return cls({0: value})

    @classmethod
    def monomial(cls, value: Scalar, exponent: int) -> "LaurentScalar":
        return cls({exponent: value})

    @classmethod
    def epsilon(cls) -> "LaurentScalar":
        return cls({1: 1})

    @classmethod
    def coerce(cls, value: Union["LaurentScalar", Scalar]) -> "LaurentScalar":
        if isinstance(value, LaurentScalar):
            return value
        return cls.constant(value)

    @classmethod
    def parse(cls, value: Union[str, Sequence[Sequence[Union[int, str]]], int]) -> "LaurentScalar":
        """Parse ``[[exp, "coeff"], ...]`` pairs or a string such as ``1/2*i*e^-1 + 2``."""
        if isinstance(value, LaurentScalar):
            return value
        if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
            return cls.constant(value)
        if isinstance(value, str):
            return cls._parse_text(value)
        terms: Dict[int, FieldElem] = {}
        for pair in value:
            if len(pair) != 2:
                raise FieldParseError(f"Laurent term must be [exponent, coefficient], got {pair!r}")
            exponent, coeff = pair
            if not isinstance(exponent, int) or isinstance(exponent, bool):
                raise FieldParseError(f"Laurent exponent must be an integer, got {exponent!r}")
            coeff_value = FieldElem.coerce(coeff)
            terms[exponent] = terms.get(exponent, ZERO) + coeff_value
        return cls(terms)

    @classmethod
    def _parse_text(cls, text: str) -> "LaurentScalar":
        eps = sp.Symbol("e")
        names = dict(_FIELD_NAMES)
        names.update({"e": eps, "eps": eps, "epsilon": eps})
        try:
            expr = parse_expr(text, local_dict=names, transformations=_TRANSFORMATIONS)
        except Exception as e:
            raise FieldParseError(f"cannot parse Laurent literal {text!r}: {e}") from e
        terms: Dict[int, FieldElem] = {}
        for term in sp.Add.make_args(sp.expand(expr)):
            coeff, exponent = term.as_coeff_exponent(eps)
            if not exponent.is_Integer:
                raise FieldParseError(f"non-integer power of e in {text!r}")
            k = int(exponent)
            terms[k] = terms.get(k, ZERO) + FieldElem.from_sympy(coeff, source=text)
        return cls(terms)

    # inspection

    def terms(self) -> Tuple[Tuple[int, FieldElem], ...]:
        return self._terms

    def coefficient(self, exponent: int) -> FieldElem:
        for k, c in self._terms:
            if k == exponent:
                return c
        return ZERO

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(k == 0 for k, _ in self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def valuation(self) -> Optional[int]:
        """Lowest exponent, None for the zero polynomial."""
        return self._terms[0][0] if self._terms else None

    def degree(self) -> Optional[int]:
        return self._terms[-1][0] if self._terms else None

    def limit(self) -> FieldElem:
        return laurent_limit(self)

    def evaluate(self, point: Scalar) -> FieldElem:
        x = FieldElem.coerce(point)
        total = ZERO
        for k, c in self._terms:
            total = total + c * x ** k
        return total

    def substitute_power(self, power: int) -> "LaurentScalar":
        """epsilon -> epsilon^power."""
        if power <= 0:
            raise ValueError("substitution power must be positive")
        return LaurentScalar({k * power: c for k, c in self._terms})

    def __eq__(self, other: object) -> bool:
        if isinstance(other, LaurentScalar):
            return self._terms == other._terms
        if isinstance(other, (FieldElem, int, Fraction)) and not isinstance(other, bool):
            return self._terms == LaurentScalar.constant(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    # arithmetic

    def __add__(self, other: Union["LaurentScalar", Scalar]) -> "LaurentScalar":
        if not isinstance(other, (LaurentScalar, FieldElem, int, Fraction)):
            return NotImplemented
        other = LaurentScalar.coerce(other)
        merged: Dict[int, FieldElem] = dict(self._terms)
        for k, c in other._terms:
            merged[k] = merged.get(k, ZERO) + c
        return LaurentScalar(merged)

    __radd__ = __add__

    def __neg__(self) -> "LaurentScalar":
        return LaurentScalar({k: -c for k, c in self._terms})

    def __sub__(self, other: Union["LaurentScalar", Scalar]) -> "LaurentScalar":
        if not isinstance(other, (LaurentScalar, FieldElem, int, Fraction)):
            return NotImplemented
        return self + (-LaurentScalar.coerce(other))

    def __rsub__(self, other: Scalar) -> "LaurentScalar":
        return LaurentScalar.coerce(other) - self

    def __mul__(self, other: Union["LaurentScalar", Scalar]) -> "LaurentScalar":
        if isinstance(other, (FieldElem, int, Fraction)) and not isinstance(other, bool):
            factor = FieldElem.coerce(other)
            return LaurentScalar({k: c * factor for k, c in self._terms})
        if not isinstance(other, LaurentScalar):
            return NotImplemented
        product: Dict[int, FieldElem] = {}
        for k1, c1 in self._terms:
            for k2, c2 in other._terms:
                k = k1 + k2
                product[k] = product.get(k, ZERO) + c1 * c2
        return LaurentScalar(product)

    __rmul__ = __mul__

    def inverse(self) -> "LaurentScalar":
        """Inverse of a monomial; general Laurent polynomials are not invertible."""
        if not self.is_monomial():
            raise DivisionByZero(f"{self} is not an invertible Laurent monomial")
        (k, c), = self._terms
        return LaurentScalar({-k: c.inverse()})

    # text forms

    def to_pairs(self) -> List[List[Union[int, str]]]:
        return [[k, c.to_text()] for k, c in self._terms]

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for k, c in self._terms:
            coeff = c.to_text()
            if k == 0:
                term = coeff if "+" not in coeff[1:] and "-" not in coeff[1:] else f"({coeff})"
            else:
                power = "e" if k == 1 else f"e^{k}"
                if coeff == "1":
                    term = power
                elif coeff == "-1":
                    term = f"-{power}"
                elif "+" in coeff[1:] or "-" in coeff[1:]:
                    term = f"({coeff})*{power}"
                else:
                    term = f"{coeff}*{power}"
            parts.append(term)
        text = parts[0]
        for term in parts[1:]:
            text += term if term.startswith("-") else "+" + term
        return text

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"LaurentScalar('{self.to_text()}')"


def laurent_limit(p: LaurentScalar) -> FieldElem:
    """epsilon -> 0 limit; DivergentLimit when a negative power survives."""
    negative = [k for k, _ in p.terms() if k < 0]
    if negative:
        raise DivergentLimit(f"{p} diverges as e -> 0 (lowest power {min(negative)})")
    return p.coefficient(0)
