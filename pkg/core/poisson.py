"""Poisson brackets on phase space, abstract structure equations and the Stackel class procedure."""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from core.errors import (
    ChartMismatch,
    DegenerateCasimir,
    GradingViolation,
    SingularStackelMatrix,
)
from core.exactnum import ONE, FieldElem, Scalar
from core.forms import StructureConstant, matrix_rank
from core.polynomials import AMBIENT3, FLAT, GENERATORS, AbstractPoly, Chart, PhasePoly

logger = logging.getLogger(__name__)


def pbracket(f: PhasePoly, g: PhasePoly) -> PhasePoly:
    """Canonical bracket sum_i (df/dq_i dg/dp_i - df/dp_i dg/dq_i)."""
    if f.chart != g.chart:
        raise ChartMismatch(f"cannot bracket {f.chart.name} with {g.chart.name} polynomials")
    total = f.zero()
    for q, p in zip(f.chart.coordinates, f.chart.momenta):
        total = total + f.diff(q) * g.diff(p) - f.diff(p) * g.diff(q)
    return total


@dataclass(frozen=True)
class StructureEquations:
    """Right-hand sides of {X,L1}, {X,L2} and {L1,L2}; H is central."""

    x_l1: AbstractPoly
    x_l2: AbstractPoly
    l1_l2: AbstractPoly

    def as_dict(self) -> Dict[str, str]:
        return {
            "{X,L1}": self.x_l1.to_text(),
            "{X,L2}": self.x_l2.to_text(),
            "{L1,L2}": self.l1_l2.to_text(),
        }

    def bracket(self, f: AbstractPoly, g: AbstractPoly) -> AbstractPoly:
        """Extend to polynomials in the generators by the chain rule."""
        pairs = (("X", "L1", self.x_l1), ("X", "L2", self.x_l2), ("L1", "L2", self.l1_l2))
        total = f.zero()
        for a, b, value in pairs:
            total = total + (f.diff(a) * g.diff(b) - f.diff(b) * g.diff(a)) * value
        return total


def structure_equations(G: AbstractPoly, K: StructureConstant) -> StructureEquations:
    if G.is_zero() or not (G.depends_on("L1") or G.depends_on("L2")):
        raise DegenerateCasimir(f"{G} does not involve L1 or L2")
    k = K.K
    return StructureEquations(
        x_l1=G.diff("L2") * k,
        x_l2=-G.diff("L1") * k,
        l1_l2=G.diff("X") * k,
    )


@dataclass(frozen=True)
class GeneratorQuadruple:
    X: PhasePoly
    L1: PhasePoly
    L2: PhasePoly
    H: PhasePoly

    def __post_init__(self):
        chart = self.X.chart
        for name in ("L1", "L2", "H"):
            if getattr(self, name).chart != chart:
                raise ChartMismatch(f"{name} lives on {getattr(self, name).chart.name}, X on {chart.name}")
        if self.X.momentum_degrees() != [1]:
            raise GradingViolation(f"X must be homogeneous of degree 1 in the momenta, got {self.X}")
        for name in ("L1", "L2", "H"):
            if getattr(self, name).momentum_degrees() != [2]:
                raise GradingViolation(f"{name} must be homogeneous of degree 2 in the momenta")
        monomials = sorted({m for p in (self.L1, self.L2, self.H) for m in p.terms()})
        rows = [[p.coefficient(m) for m in monomials] for p in (self.L1, self.L2, self.H)]
        if matrix_rank(rows) < 3:
            raise GradingViolation("L1, L2 and H are linearly dependent")

    @classmethod
    def parse(cls, texts: Dict[str, str], chart: Chart) -> "GeneratorQuadruple":
        return cls(**{name: PhasePoly.parse(texts[name], chart) for name in GENERATORS})

    @property
    def chart(self) -> Chart:
        return self.X.chart

    def assignment(self) -> Dict[str, PhasePoly]:
        return {"X": self.X, "L1": self.L1, "L2": self.L2, "H": self.H}

    def substitute(self, poly: AbstractPoly) -> PhasePoly:
        return poly.evaluate_on(self.assignment(), target=self.X)  # type: ignore[return-value]


@dataclass
class RealizationCheck:
    closure_ok: bool
    casimir_ok: bool
    structure_ok: bool
    K: Optional[FieldElem] = None
    diagnostics: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.closure_ok and self.casimir_ok and self.structure_ok


def _solve_scale(actual: Sequence[PhasePoly], expected: Sequence[PhasePoly]) -> Optional[FieldElem]:
    """The scalar K with actual_i = K * expected_i for all i, if one exists."""
    pivot = next((i for i, e in enumerate(expected) if not e.is_zero()), None)
    if pivot is None:
        return None
    monomial, coeff = expected[pivot].sorted_terms()[0]
    K = actual[pivot].coefficient(monomial) / coeff
    if K.is_zero():
        return None
    if all(a == e * K for a, e in zip(actual, expected)):
        return K
    return None


def verify_realization(gens: GeneratorQuadruple, G: AbstractPoly) -> RealizationCheck:
    if G.uses_parameters():
        raise DegenerateCasimir("realizations are checked against parameter-free Casimirs")
    diagnostics = []

    closure_ok = True
    for name in ("X", "L1", "L2"):
        value = pbracket(gens.H, getattr(gens, name))
        if not value.is_zero():
            closure_ok = False
            diagnostics.append(f"{{H,{name}}} = {value}")

    residue = gens.substitute(G)
    casimir_ok = residue.is_zero()
    if not casimir_ok:
        diagnostics.append(f"G on the generators = {residue}")

    unit = structure_equations(G, StructureConstant(ONE))
    actual = [pbracket(gens.X, gens.L1), pbracket(gens.X, gens.L2), pbracket(gens.L1, gens.L2)]
    expected = [gens.substitute(p) for p in (unit.x_l1, unit.x_l2, unit.l1_l2)]
    K = _solve_scale(actual, expected)
    structure_ok = K is not None
    if not structure_ok:
        diagnostics.append("no single K matches the three brackets")

    check = RealizationCheck(closure_ok, casimir_ok, structure_ok, K, diagnostics)
    logger.debug(f"realization on {gens.chart.name}: ok={check.ok} K={K}")
    return check


@dataclass(frozen=True)
class Realization:
    """A bundled free realization: generator texts on a chart plus the Casimir they satisfy."""

    system: str
    chart: Chart
    generators: Tuple[Tuple[str, str], ...]
    casimir: str
    K: str

    def quadruple(self) -> GeneratorQuadruple:
        return GeneratorQuadruple.parse(dict(self.generators), self.chart)

    def casimir_poly(self) -> AbstractPoly:
        return AbstractPoly.parse(self.casimir)

    def verify(self) -> RealizationCheck:
        return verify_realization(self.quadruple(), self.casimir_poly())


_J1 = "(s2*ps3-s3*ps2)"
_J2 = "(s3*ps1-s1*ps3)"
_J3 = "(s1*ps2-s2*ps1)"
_M = "(x*p_y-y*p_x)"

REALIZATIONS: Dict[str, Realization] = {
    r.system: r
    for r in (
        Realization(
            "S3", AMBIENT3,
            (("X", _J3), ("L1", f"{_J1}^2"), ("L2", f"{_J1}*{_J2}"), ("H", f"{_J1}^2+{_J2}^2+{_J3}^2")),
            "L1^2+L2^2-L1*H+L1*X^2", "1",
        ),
        Realization(
            "E3", FLAT,
            (("X", _M), ("L1", "p_x^2"), ("L2", "p_x*p_y"), ("H", "p_x^2+p_y^2")),
            "L1^2+L2^2-L1*H", "1",
        ),
        Realization(
            "E5", FLAT,
            (("X", "p_y"), ("L1", "p_x*p_y"), ("L2", f"{_M}*p_y"), ("H", "p_x^2+p_y^2")),
            "L1^2+X^4-H*X^2", "-1/2",
        ),
        Realization(
            "E14", FLAT,
            (("X", "p_x+i*p_y"), ("L1", f"(p_x+i*p_y)*{_M}"), ("L2", f"-{_M}^2"), ("H", "p_x^2+p_y^2")),
            "-L1^2-L2*X^2", "-i",
        ),
    )
}


# Stackel transform

_C_SYMBOLS = (("c11", "c12"), ("c21", "c22"))


@dataclass(frozen=True)
class StackelMatrix:
    """Invertible 2x2 transform (c_jk); entries are constants or the c-symbols."""

    entries: Tuple[Tuple[AbstractPoly, AbstractPoly], Tuple[AbstractPoly, AbstractPoly]]

    def __post_init__(self):
        (a, b), (c, d) = self.entries
        if (a * d - b * c).is_zero():
            raise SingularStackelMatrix(f"det of {self} vanishes")

    @classmethod
    def symbolic(cls) -> "StackelMatrix":
        return cls(tuple(tuple(AbstractPoly.symbol(s) for s in row) for row in _C_SYMBOLS))

    @classmethod
    def numeric(cls, rows: Sequence[Sequence[Scalar]]) -> "StackelMatrix":
        zero = AbstractPoly()
        return cls(tuple(tuple(zero.constant(FieldElem.coerce(x)) for x in row) for row in rows))

    @classmethod
    def identity(cls) -> "StackelMatrix":
        return cls.numeric(((1, 0), (0, 1)))

    def as_substitution(self) -> Dict[str, AbstractPoly]:
        return {s: self.entries[j][k] for j, row in enumerate(_C_SYMBOLS) for k, s in enumerate(row)}

    def __str__(self) -> str:
        return "[" + "; ".join(", ".join(x.to_text() for x in row) for row in self.entries) + "]"


def stackel_class(G_param: AbstractPoly, C: StackelMatrix) -> AbstractPoly:
    """Free class Casimir of a parametrized Casimir.

    a_j -> sum_k c_jk b_k, then H and b2 are exchanged as H -> -b2, b2 -> -H in one
    simultaneous substitution, and finally b1 = b2 = 0.
    """
    if G_param.depends_on("b1") or G_param.depends_on("b2"):
        raise DegenerateCasimir("the parametrized Casimir may use a1 and a2 only")
    b1, b2, H = (AbstractPoly.symbol(s) for s in ("b1", "b2", "H"))
    (c11, c12), (c21, c22) = C.entries
    step1 = G_param.subs({"a1": c11 * b1 + c12 * b2, "a2": c21 * b1 + c22 * b2})
    step2 = step1.subs({"H": -b2, "b2": -H})
    result = step2.subs({"b1": 0, "b2": 0})
    logger.debug(f"Stackel class of {G_param}: {result}")
    return result


def specialize(poly: AbstractPoly, C: StackelMatrix) -> AbstractPoly:
    """Replace the c-symbols of a class Casimir by the entries of C."""
    return poly.subs(C.as_substitution())
