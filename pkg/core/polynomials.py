"""Sparse multivariate polynomials over FieldElem.

A polynomial is a map from exponent tuples (aligned with an ordered variable tuple) to
nonzero FieldElem coefficients. ``PhasePoly`` lives on a phase-space chart, ``AbstractPoly``
on the abstract generators L1, L2, H, X and the parameter symbols.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Type, TypeVar, Union

import sympy as sp
from sympy.parsing.sympy_parser import parse_expr

from core.errors import ChartMismatch, FieldParseError, PolynomialParseError
from core.exactnum import _FIELD_NAMES, _TRANSFORMATIONS, ONE, ZERO, FieldElem, Scalar

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]
P = TypeVar("P", bound="SparsePoly")


class SparsePoly:
    """Immutable sparse polynomial; subclasses fix the variable tuple."""

    __slots__ = ("variables", "_terms")

    def __init__(self, variables: Sequence[str], terms: Optional[Mapping[Monomial, Scalar]] = None):
        self.variables: Tuple[str, ...] = tuple(variables)
        cleaned: Dict[Monomial, FieldElem] = {}
        n = len(self.variables)
        for monomial, coeff in (terms or {}).items():
            if len(monomial) != n:
                raise ValueError(f"monomial {monomial} does not match variables {self.variables}")
            value = FieldElem.coerce(coeff)
            if not value.is_zero():
                cleaned[tuple(monomial)] = value
        self._terms = cleaned

    # construction helpers

    def _like(self: P, terms: Mapping[Monomial, Scalar]) -> P:
        """New polynomial of the same kind and ring."""
        clone = object.__new__(type(self))
        for slot in type(self)._ring_slots():
            object.__setattr__(clone, slot, getattr(self, slot))
        SparsePoly.__init__(clone, self.variables, terms)
        return clone

    @classmethod
    def _ring_slots(cls) -> Tuple[str, ...]:
        return ()

    def constant(self: P, value: Scalar) -> P:
        return self._like({(0,) * len(self.variables): value})

    def zero(self: P) -> P:
        return self._like({})

    def var(self: P, name: str) -> P:
        index = self._index(name)
        monomial = [0] * len(self.variables)
        monomial[index] = 1
        return self._like({tuple(monomial): ONE})

    def _index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise ChartMismatch(f"variable {name!r} is not in {self.variables}") from None

    def _check_ring(self, other: "SparsePoly") -> None:
        if type(self) is not type(other) or self.variables != other.variables:
            raise ChartMismatch(
                f"cannot combine polynomials over {self.variables} and {other.variables}"
            )
        for slot in type(self)._ring_slots():
            if getattr(self, slot) != getattr(other, slot):
                raise ChartMismatch(f"{slot} differs: {getattr(self, slot)} vs {getattr(other, slot)}")

    def _lift(self: P, other: Union["SparsePoly", Scalar]) -> P:
        if isinstance(other, SparsePoly):
            self._check_ring(other)
            return other  # type: ignore[return-value]
        return self.constant(other)

    # inspection

    def terms(self) -> Dict[Monomial, FieldElem]:
        return dict(self._terms)

    def coefficient(self, monomial: Monomial) -> FieldElem:
        return self._terms.get(tuple(monomial), ZERO)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def used_variables(self) -> List[str]:
        used = set()
        for monomial in self._terms:
            used.update(k for k, e in enumerate(monomial) if e)
        return [self.variables[k] for k in sorted(used)]

    def depends_on(self, name: str) -> bool:
        index = self._index(name)
        return any(m[index] for m in self._terms)

    def degree_in(self, names: Iterable[str]) -> int:
        """Largest total degree in the given variables (-1 for the zero polynomial)."""
        indices = [self._index(n) for n in names]
        return max((sum(m[k] for k in indices) for m in self._terms), default=-1)

    def weighted_degrees(self, weights: Mapping[str, int]) -> List[int]:
        """Sorted distinct weighted degrees of the terms."""
        w = [weights.get(v, 0) for v in self.variables]
        return sorted({sum(e * wk for e, wk in zip(m, w)) for m in self._terms})

    def __eq__(self, other: object) -> bool:
        if isinstance(other, SparsePoly):
            return (
                type(self) is type(other)
                and self.variables == other.variables
                and all(getattr(self, s) == getattr(other, s) for s in type(self)._ring_slots())
                and self._terms == other._terms
            )
        if isinstance(other, (FieldElem, int, Fraction)) and not isinstance(other, bool):
            return self._terms == self.constant(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.variables, frozenset(self._terms.items())))

    # arithmetic

    def __add__(self: P, other: Union["SparsePoly", Scalar]) -> P:
        if not isinstance(other, (SparsePoly, FieldElem, int, Fraction)):
            return NotImplemented
        other = self._lift(other)
        merged = dict(self._terms)
        for m, c in other._terms.items():
            merged[m] = merged.get(m, ZERO) + c
        return self._like(merged)

    __radd__ = __add__

    def __neg__(self: P) -> P:
        return self._like({m: -c for m, c in self._terms.items()})

    def __sub__(self: P, other: Union["SparsePoly", Scalar]) -> P:
        if not isinstance(other, (SparsePoly, FieldElem, int, Fraction)):
            return NotImplemented
        return self + (-self._lift(other))

    def __rsub__(self: P, other: Scalar) -> P:
        return self.constant(other) - self

    def __mul__(self: P, other: Union["SparsePoly", Scalar]) -> P:
        if isinstance(other, (FieldElem, int, Fraction)) and not isinstance(other, bool):
            factor = FieldElem.coerce(other)
            return self._like({m: c * factor for m, c in self._terms.items()})
        if not isinstance(other, SparsePoly):
            return NotImplemented
        self._check_ring(other)
        product: Dict[Monomial, FieldElem] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                product[m] = product.get(m, ZERO) + c1 * c2
        return self._like(product)

    __rmul__ = __mul__

    def __pow__(self: P, exponent: int) -> P:
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = self.constant(ONE)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    # calculus and substitution

    def diff(self: P, name: str) -> P:
        index = self._index(name)
        out: Dict[Monomial, FieldElem] = {}
        for m, c in self._terms.items():
            e = m[index]
            if e == 0:
                continue
            lowered = list(m)
            lowered[index] = e - 1
            out[tuple(lowered)] = c * e
        return self._like(out)

    def subs(self: P, mapping: Mapping[str, Union["SparsePoly", Scalar]]) -> P:
        """Simultaneous substitution of variables by polynomials of the same ring."""
        replacements = {self._index(name): self._lift(value) for name, value in mapping.items()}
        return self.evaluate_on(
            {self.variables[k]: v for k, v in replacements.items()}, target=self, keep_unmapped=True
        )

    def evaluate_on(
        self,
        assignment: Mapping[str, Union["SparsePoly", Scalar]],
        target: "SparsePoly",
        keep_unmapped: bool = False,
    ) -> "SparsePoly":
        """Replace every variable by a polynomial of ``target``'s ring and expand."""
        total = target.zero()
        powers: Dict[Tuple[str, int], SparsePoly] = {}
        for m, c in self._terms.items():
            term = target.constant(c)
            for k, e in enumerate(m):
                if not e:
                    continue
                name = self.variables[k]
                if name in assignment:
                    value = assignment[name]
                    if not isinstance(value, SparsePoly):
                        value = target.constant(value)
                elif keep_unmapped:
                    value = target.var(name)
                else:
                    raise ChartMismatch(f"no value assigned to {name!r}")
                key = (name, e)
                if key not in powers:
                    powers[key] = value ** e
                term = term * powers[key]
            total = total + term
        return total

    def evaluate(self, point: Mapping[str, Scalar]) -> FieldElem:
        total = ZERO
        for m, c in self._terms.items():
            value = c
            for k, e in enumerate(m):
                if e:
                    value = value * FieldElem.coerce(point[self.variables[k]]) ** e
            total = total + value
        return total

    # text forms

    def sorted_terms(self) -> List[Tuple[Monomial, FieldElem]]:
        return sorted(self._terms.items(), key=lambda item: (-sum(item[0]), tuple(-e for e in item[0])))

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        pieces: List[str] = []
        for m, c in self.sorted_terms():
            factors = []
            for k, e in enumerate(m):
                if e == 1:
                    factors.append(self.variables[k])
                elif e > 1:
                    factors.append(f"{self.variables[k]}^{e}")
            monomial = "*".join(factors)
            coeff = c.to_text()
            compound = "+" in coeff[1:] or "-" in coeff[1:]
            if not monomial:
                term = f"({coeff})" if compound else coeff
            elif coeff == "1":
                term = monomial
            elif coeff == "-1":
                term = f"-{monomial}"
            else:
                term = f"({coeff})*{monomial}" if compound else f"{coeff}*{monomial}"
            if pieces and not term.startswith("-"):
                term = "+" + term
            pieces.append(term)
        return "".join(pieces)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"{type(self).__name__}('{self.to_text()}')"


def _parse_terms(text: str, variables: Sequence[str]) -> Dict[Monomial, FieldElem]:
    """Parse polynomial text into exponent-tuple terms; chart names shadow field unit names."""
    symbols = [sp.Symbol(v) for v in variables]
    names = dict(_FIELD_NAMES)
    names.update({v: s for v, s in zip(variables, symbols)})
    try:
        expr = parse_expr(text, local_dict=names, transformations=_TRANSFORMATIONS)
    except Exception as e:
        raise PolynomialParseError(f"cannot parse polynomial {text!r}: {e}") from e
    extra = sorted(str(s) for s in sp.sympify(expr).free_symbols if s not in symbols)
    if extra:
        raise PolynomialParseError(f"unknown symbols {extra} in {text!r}; expected {list(variables)}")
    try:
        poly = sp.Poly(sp.expand(expr), *symbols, domain="EX")
    except sp.PolynomialError as e:
        raise PolynomialParseError(f"{text!r} is not a polynomial in {list(variables)}: {e}") from e
    terms: Dict[Monomial, FieldElem] = {}
    for monomial, coeff in poly.terms():
        try:
            terms[tuple(int(e) for e in monomial)] = FieldElem.from_sympy(coeff, source=text)
        except FieldParseError as e:
            raise PolynomialParseError(str(e)) from e
    return terms


@dataclass(frozen=True)
class Chart:
    """Canonical coordinates with their conjugate momenta, paired by position."""

    name: str
    coordinates: Tuple[str, ...]
    momenta: Tuple[str, ...]

    @property
    def variables(self) -> Tuple[str, ...]:
        return self.coordinates + self.momenta


FLAT = Chart("Flat", ("x", "y"), ("p_x", "p_y"))
AMBIENT3 = Chart("Ambient3", ("s1", "s2", "s3"), ("ps1", "ps2", "ps3"))
CHARTS = {chart.name: chart for chart in (FLAT, AMBIENT3)}


class PhasePoly(SparsePoly):
    """Polynomial on a phase-space chart."""

    __slots__ = ("chart",)

    def __init__(self, chart: Chart, terms: Optional[Mapping[Monomial, Scalar]] = None):
        self.chart = chart
        super().__init__(chart.variables, terms)

    @classmethod
    def _ring_slots(cls) -> Tuple[str, ...]:
        return ("chart",)

    @classmethod
    def parse(cls, text: str, chart: Chart) -> "PhasePoly":
        return cls(chart, _parse_terms(text, chart.variables))

    @classmethod
    def variable(cls, name: str, chart: Chart) -> "PhasePoly":
        return cls(chart).var(name)

    def momentum_degrees(self) -> List[int]:
        """Sorted distinct degrees in the momenta."""
        return self.weighted_degrees({p: 1 for p in self.chart.momenta})


GENERATORS = ("L1", "L2", "H", "X")
PARAMETERS = ("a1", "a2", "b1", "b2", "c11", "c12", "c21", "c22")
ABSTRACT_SYMBOLS = GENERATORS + PARAMETERS
GRADING = {"L1": 2, "L2": 2, "H": 2, "X": 1}


class AbstractPoly(SparsePoly):
    """Polynomial in the abstract generators and the parameter symbols."""

    __slots__ = ()

    def __init__(self, terms: Optional[Mapping[Monomial, Scalar]] = None):
        super().__init__(ABSTRACT_SYMBOLS, terms)

    @classmethod
    def parse(cls, text: str) -> "AbstractPoly":
        return cls(_parse_terms(text, ABSTRACT_SYMBOLS))

    @classmethod
    def symbol(cls, name: str) -> "AbstractPoly":
        return cls().var(name)

    def grading_degree(self) -> int:
        """Largest degree with X of weight 1 and L1, L2, H of weight 2."""
        return max(self.weighted_degrees(GRADING), default=-1)

    def uses_parameters(self) -> bool:
        return any(self.depends_on(p) for p in PARAMETERS)


class MatrixPoly(SparsePoly):
    """Polynomial in an arbitrary list of unknowns, used for symbolic congruences."""

    __slots__ = ()

    @classmethod
    def ring(cls, names: Sequence[str]) -> "MatrixPoly":
        return cls(names)
