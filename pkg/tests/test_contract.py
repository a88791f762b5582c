"""Unit tests for contraction families, limits, obstructions and the monomial search."""

import pytest

from core.canon import CanonicalFamily, SystemId, default_catalog
from core.errors import HypothesisNotMet, InvalidGroupElement
from core.exactnum import LaurentScalar
from core.contract import (
    CertificateKind,
    ContractionFamily,
    ObstructionCertificate,
    ReducedFamily,
    VerdictStatus,
    compose_families,
    evaluate_family,
    normalize_family,
    rank_obstruction,
    search_contraction,
    valuation_obstruction,
    verify_contraction,
)


@pytest.fixture(scope="module")
def forms():
    """Catalog forms keyed by system name."""
    catalog = default_catalog()
    return {system.value: catalog.entry(system).form for system in SystemId}


def family(rows, z="1"):
    return ContractionFamily(rows, z)


E13_TO_E4 = [["e", "0", "1/2", "0"], ["0", "1", "0", "0"], ["0", "0", "1", "0"], ["0", "0", "0", "1"]]
S6_TO_E18 = [["1", "0", "0", "0"], ["0", "1", "0", "0"], ["0", "0", "e^-1", "0"], ["0", "0", "0", "e"]]
E18_TO_E5 = [["1", "0", "0", "0"], ["0", "e", "0", "1"], ["0", "0", "1", "0"], ["0", "0", "0", "1"]]
S3_TO_E14 = [["1", "0", "e", "-e"], ["0", "e", "e^3", "e^-1"], ["0", "0", "e^2", "0"], ["0", "0", "0", "(1-i)/2*e^-1"]]


class TestVerifyContraction:
    """Exact limits of witness families."""

    def test_strict_witness(self, forms):
        """E13 -> E4 reaches the target matrix exactly."""
        verdict = verify_contraction(family(E13_TO_E4), forms["E13"], forms["E4"])
        assert verdict.status is VerdictStatus.VERIFIED_STRICT
        assert verdict.limit_form == forms["E4"]
        assert verdict.verified

    def test_reversed_witness(self, forms):
        """The same family applied to E4 does not reach E13."""
        verdict = verify_contraction(family(E13_TO_E4), forms["E4"], forms["E13"])
        assert verdict.status is VerdictStatus.WRONG_TARGET
        assert not verdict.verified

    def test_divergent_family(self, forms):
        """Swapping the torus exponents makes the X^4 entry blow up."""
        rows = [["1", "0", "0", "0"], ["0", "1", "0", "0"], ["0", "0", "e", "0"], ["0", "0", "0", "e^-1"]]
        verdict = verify_contraction(family(rows), forms["S6"], forms["E18"])
        assert verdict.status is VerdictStatus.LIMIT_UNDEFINED

    @pytest.mark.parametrize("source,target,rows", [
        ("S6", "E18", S6_TO_E18),
        ("S3", "E14", S3_TO_E14),
        ("S3", "E5", [["1", "0", "0", "0"], ["0", "e", "i", "0"], ["0", "0", "1", "0"], ["0", "0", "0", "(-1-i)/2"]]),
        ("D4bD", "E12", [["1", "0", "0", "0"], ["0", "-e", "1/3*s3", "-e^-1"], ["0", "0", "1/3*s6", "0"],
                         ["0", "0", "0", "1/2*s2*e^-1"]]),
        ("D3E", "E4", [["e", "-i", "0", "1/2*i"], ["0", "1", "0", "1/2"], ["0", "0", "1", "0"], ["0", "0", "0", "e"]]),
    ])
    def test_bundled_witnesses(self, forms, source, target, rows):
        """Witnesses with radicals and phases land exactly on the target."""
        assert verify_contraction(family(rows), forms[source], forms[target]).status is VerdictStatus.VERIFIED_STRICT

    def test_up_to_classification(self, forms):
        """D2D -> E6 lands on a basis change of the E6 Casimir."""
        rows = [["1", "0", "1", "0"], ["0", "e^-1", "0", "0"], ["0", "0", "e", "0"], ["0", "0", "0", "e"]]
        verdict = verify_contraction(family(rows), forms["D2D"], forms["E6"])
        assert verdict.status is VerdictStatus.VERIFIED_UP_TO_CLASSIFICATION
        assert verdict.limit_label.family is CanonicalFamily.B15
        assert not verdict.needs_rescaling


class TestFamilies:
    """Construction and composition of families."""

    def test_invalid_family(self):
        """Rows three and four stay diagonal."""
        rows = [["1", "0", "0", "0"], ["0", "1", "0", "0"], ["e", "0", "1", "0"], ["0", "0", "0", "1"]]
        with pytest.raises(InvalidGroupElement):
            family(rows)

    def test_zero_rescaling(self):
        """z(epsilon) must not vanish."""
        with pytest.raises(InvalidGroupElement):
            family(S6_TO_E18, "0")

    def test_compose_families(self, forms):
        """S6 -> E18 followed by E18 -> E5 contracts S6 to E5."""
        chained = compose_families(family(S6_TO_E18), family(E18_TO_E5))
        assert verify_contraction(chained, forms["S6"], forms["E5"]).status is VerdictStatus.VERIFIED_STRICT
        assert verify_contraction(compose_families(family(S6_TO_E18), family(E18_TO_E5), 2, 1),
                                  forms["S6"], forms["E5"]).verified

    def test_exponents_and_json(self):
        """Exponents and text entries are reported."""
        F = family(S6_TO_E18)
        assert F.exponents() == [-1, 0, 1]
        assert F.to_json()["hat"][2][2] == "e^-1"

    def test_reduced_family_requires_small_beta(self):
        """beta must tend to zero."""
        with pytest.raises(HypothesisNotMet):
            ReducedFamily(beta=1, gamma=0, delta=0, a33=1, a44=1)
        reduced = ReducedFamily(beta=LaurentScalar.epsilon(), gamma=0, delta=0, a33=1, a44=1)
        assert reduced.family().hat[1][1] == -LaurentScalar.epsilon()


class TestNormalizeFamily:
    """Clearing the first row of the image."""

    def test_clears_first_row(self, forms):
        """The normalized family keeps the limit and has an exactly diagonal first row."""
        normalized = normalize_family(family(S3_TO_E14), forms["S3"])
        image = evaluate_family(normalized, forms["S3"])
        assert all(image[0][j].is_zero() for j in (1, 2, 3))
        assert verify_contraction(normalized, forms["S3"], forms["E14"]).status is VerdictStatus.VERIFIED_STRICT

    def test_hypothesis_not_met(self, forms):
        """A limit with vanishing (1,1) entry cannot be normalized."""
        with pytest.raises(HypothesisNotMet):
            normalize_family(family(E13_TO_E4), forms["E13"])


class TestObstructions:
    """Rank and valuation certificates."""

    def test_rank_obstruction(self, forms):
        """Contractions never increase rank B or rank b."""
        assert rank_obstruction(forms["S3"], forms["D1D"]).kind is CertificateKind.RANK_B_INCREASE
        assert rank_obstruction(forms["E13"], forms["S6"]).kind is CertificateKind.RANK_b_INCREASE
        assert rank_obstruction(forms["S6"], forms["E5"]) is None

    @pytest.mark.parametrize("source,target,proved", [
        ("E3", "S3", True),
        ("D1D", "E6", True),
        ("D4bD", "D2D", False),
        ("D4bD", "E6", False),
    ])
    def test_valuation_obstruction(self, forms, source, target, proved):
        """The valuation test proves exactly the expected cells."""
        result, method = valuation_obstruction(forms[source], forms[target])
        assert result is proved
        assert method

    def test_exhaustion_is_not_proof(self):
        """Ansatz exhaustion carries a bound and is evidence only."""
        certificate = ObstructionCertificate(CertificateKind.ANSATZ_EXHAUSTED, "none found", bound=2)
        assert not certificate.is_proof


class TestSearchContraction:
    """The monomial ansatz search."""

    def test_finds_family(self, forms):
        """E14 -> E4 is found at exponent bound 1."""
        found = search_contraction(forms["E14"], forms["E4"], exponent_bound=1)
        assert isinstance(found, ContractionFamily)
        assert verify_contraction(found, forms["E14"], forms["E4"]).verified

    def test_finds_torus_family(self, forms):
        """S6 -> E18 is found at exponent bound 1 and re-verifies."""
        found = search_contraction(forms["S6"], forms["E18"], exponent_bound=1)
        assert isinstance(found, ContractionFamily)
        verdict = verify_contraction(found, forms["S6"], forms["E18"])
        assert verdict.verified
        assert verdict.limit_form == forms["E18"]

    def test_exhaustion_agrees_with_rank_obstruction(self, forms):
        """E4 -> E13 exhausts the ansatz, and the rank increase proves it."""
        result = search_contraction(forms["E4"], forms["E13"], exponent_bound=2)
        assert isinstance(result, ObstructionCertificate)
        assert result.kind is CertificateKind.ANSATZ_EXHAUSTED
        assert not result.is_proof
        certificate = rank_obstruction(forms["E4"], forms["E13"])
        assert certificate.kind is CertificateKind.RANK_B_INCREASE
        assert certificate.is_proof

    @pytest.mark.parametrize("bound", [0, 1, 3])
    def test_self_contraction_is_identity(self, forms, bound):
        """A form contracts to itself through the identity family."""
        found = search_contraction(forms["E13"], forms["E13"], exponent_bound=bound)
        assert found == ContractionFamily.identity()

    def test_bound_limit(self, forms):
        """Bounds beyond the Laurent exponent limit are refused."""
        with pytest.raises(InvalidGroupElement):
            search_contraction(forms["E14"], forms["E4"], exponent_bound=17)
