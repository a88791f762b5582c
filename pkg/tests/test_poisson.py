"""Tests for Poisson brackets, realizations and the Stackel class procedure."""

import random

import pytest

from config.settings import settings
from core.canon import SystemId, default_catalog
from core.errors import ChartMismatch, DegenerateCasimir, GradingViolation, SingularStackelMatrix
from core.exactnum import ONE, FieldElem
from core.forms import StructureConstant
from core.poisson import (
    REALIZATIONS,
    GeneratorQuadruple,
    StackelMatrix,
    pbracket,
    specialize,
    stackel_class,
    structure_equations,
    verify_realization,
)
from core.polynomials import AMBIENT3, FLAT, AbstractPoly, PhasePoly

COEFFICIENTS = [FieldElem.parse(t) for t in ("1", "-2", "1/3", "i", "1-i", "s2", "-1/2*s3")]


def random_phase_poly(rng: random.Random, terms: int = 4, degree: int = 3) -> PhasePoly:
    """Small random polynomial of total degree <= degree on the flat chart."""
    n = len(FLAT.variables)
    coefficients = {}
    for _ in range(terms):
        exponents = [0] * n
        for _ in range(rng.randint(0, degree)):
            exponents[rng.randrange(n)] += 1
        coefficients[tuple(exponents)] = rng.choice(COEFFICIENTS)
    return PhasePoly(FLAT, coefficients)


class TestPoissonBracket:
    """The canonical bracket."""

    def test_canonical_pairs(self):
        """{q, p} = 1 for conjugate pairs and 0 otherwise."""
        x, p_x, p_y = (PhasePoly.variable(n, FLAT) for n in ("x", "p_x", "p_y"))
        assert pbracket(x, p_x) == 1
        assert pbracket(x, p_y).is_zero()

    def test_angular_momenta(self):
        """{J1, J2} = J3 on the ambient chart."""
        J1 = PhasePoly.parse("s2*ps3-s3*ps2", AMBIENT3)
        J2 = PhasePoly.parse("s3*ps1-s1*ps3", AMBIENT3)
        J3 = PhasePoly.parse("s1*ps2-s2*ps1", AMBIENT3)
        assert pbracket(J1, J2) == J3

    def test_chart_mismatch(self):
        """Polynomials on different charts do not bracket."""
        with pytest.raises(ChartMismatch):
            pbracket(PhasePoly.parse("x", FLAT), PhasePoly.parse("ps1", AMBIENT3))

    @pytest.mark.slow
    def test_bracket_identities(self):
        """Antisymmetry, bilinearity, Leibniz and Jacobi hold on seeded random triples."""
        rng = random.Random(settings.seed)
        for _ in range(200):
            f, g, h = (random_phase_poly(rng) for _ in range(3))
            a, b = rng.choice(COEFFICIENTS), rng.choice(COEFFICIENTS)
            fg = pbracket(f, g)
            assert fg == -pbracket(g, f)
            assert pbracket(f * a + g * b, h) == pbracket(f, h) * a + pbracket(g, h) * b
            assert pbracket(f, g * h) == fg * h + g * pbracket(f, h)
            jacobi = pbracket(f, pbracket(g, h)) + pbracket(g, pbracket(h, f)) + pbracket(h, fg)
            assert jacobi.is_zero()


class TestStructureEquations:
    """Abstract brackets generated by a Casimir."""

    def test_equations(self):
        """Right-hand sides are K times derivatives of G."""
        G = AbstractPoly.parse("L1^2+2*H*X^2+X^4")
        equations = structure_equations(G, StructureConstant(FieldElem.from_rational(2)))
        assert equations.x_l1.is_zero()
        assert equations.x_l2 == AbstractPoly.parse("-4*L1")
        assert equations.l1_l2 == AbstractPoly.parse("8*H*X+8*X^3")

    @pytest.mark.parametrize("system", [s.value for s in SystemId])
    def test_casimir_is_central(self, system):
        """Every catalog Casimir brackets to zero with every generator."""
        G = default_catalog().entry(SystemId(system)).polynomial
        equations = structure_equations(G, StructureConstant(ONE))
        for name in ("X", "L1", "L2", "H"):
            assert equations.bracket(G, AbstractPoly.symbol(name)).is_zero()

    def test_degenerate_casimir(self):
        """A Casimir without L1 and L2 defines no algebra."""
        with pytest.raises(DegenerateCasimir):
            structure_equations(AbstractPoly.parse("H^2+X^4"), StructureConstant(ONE))


class TestRealizations:
    """Bundled free realizations."""

    @pytest.mark.parametrize("system,K", [("S3", "1"), ("E3", "1"), ("E5", "-1/2"), ("E14", "-i")])
    def test_bundled_realizations(self, system, K):
        """Each realization closes, satisfies its Casimir and fixes K."""
        check = REALIZATIONS[system].verify()
        assert check.ok, check.diagnostics
        assert check.K == FieldElem.parse(K)

    def test_wrong_casimir(self):
        """A Casimir the generators do not satisfy is reported."""
        gens = REALIZATIONS["E3"].quadruple()
        check = verify_realization(gens, AbstractPoly.parse("L1^2+L2^2+L1*H"))
        assert check.closure_ok
        assert not check.casimir_ok
        assert check.diagnostics

    def test_parameters_rejected(self):
        """Realizations are checked against free Casimirs."""
        gens = REALIZATIONS["E3"].quadruple()
        with pytest.raises(DegenerateCasimir):
            verify_realization(gens, AbstractPoly.parse("L1^2+L2^2-L1*H+a1*X^2"))

    def test_grading_violation(self):
        """X must be linear in the momenta."""
        texts = {"X": "p_x^2", "L1": "p_x^2", "L2": "p_x*p_y", "H": "p_x^2+p_y^2"}
        with pytest.raises(GradingViolation):
            GeneratorQuadruple.parse(texts, FLAT)

    def test_dependent_generators(self):
        """L1, L2 and H must be linearly independent."""
        texts = {"X": "p_y", "L1": "p_x^2", "L2": "p_y^2", "H": "p_x^2+p_y^2"}
        with pytest.raises(GradingViolation):
            GeneratorQuadruple.parse(texts, FLAT)


class TestStackel:
    """Stackel transform of parametrized Casimirs."""

    @pytest.mark.parametrize("system", ["S3", "E3", "E6", "E5", "E14", "E4"])
    def test_class_casimirs(self, system):
        """The symbolic transform yields the recorded class Casimir."""
        record = default_catalog().entry(SystemId(system)).record
        result = stackel_class(AbstractPoly.parse(record.parametrized_casimir), StackelMatrix.symbolic())
        assert result == AbstractPoly.parse(record.class_casimir)

    def test_specialize_identity(self):
        """The identity matrix recovers the free S3 Casimir."""
        record = default_catalog().entry(SystemId.S3).record
        free = specialize(AbstractPoly.parse(record.class_casimir), StackelMatrix.identity())
        assert free == AbstractPoly.parse("L1^2+L2^2-L1*H+L1*X^2")

    def test_singular_matrix(self):
        """A singular transform is rejected."""
        with pytest.raises(SingularStackelMatrix):
            StackelMatrix.numeric(((1, 2), (2, 4)))
