"""Exception hierarchy shared by the library and the command-line front end."""

from typing import Any, Dict, Optional


class QuadAlgError(Exception):
    """Base error carrying a stable machine-readable code."""

    code = "quadalg_error"

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        """Error object printed by the CLI on exit code 2."""
        return {"error": self.code, "message": self.message, "details": self.details}


class FieldParseError(QuadAlgError):
    code = "field_parse_error"


class DivisionByZero(QuadAlgError, ZeroDivisionError):
    code = "division_by_zero"


class SquareRootOutsideField(QuadAlgError):
    code = "square_root_outside_field"


class DivergentLimit(QuadAlgError):
    code = "divergent_limit"


class ExponentOverflow(QuadAlgError):
    code = "exponent_overflow"


class InvalidGroupElement(QuadAlgError):
    code = "invalid_group_element"


class NotSymmetric(QuadAlgError):
    code = "not_symmetric"


class NotAQuadraticAlgebra(QuadAlgError):
    code = "not_a_quadratic_algebra"


class UnknownLabel(QuadAlgError):
    code = "unknown_label"


class UnknownSystem(QuadAlgError):
    code = "unknown_system"


class HypothesisNotMet(QuadAlgError):
    code = "hypothesis_not_met"


class MissingWitness(QuadAlgError):
    code = "missing_witness"


class ChartMismatch(QuadAlgError):
    code = "chart_mismatch"


class GradingViolation(QuadAlgError):
    code = "grading_violation"


class DegenerateCasimir(QuadAlgError):
    code = "degenerate_casimir"


class SingularStackelMatrix(QuadAlgError):
    code = "singular_stackel_matrix"


class PolynomialParseError(QuadAlgError):
    code = "polynomial_parse_error"


class DataFileError(QuadAlgError):
    code = "data_file_error"


class UsageError(QuadAlgError):
    code = "usage_error"
