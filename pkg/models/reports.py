"""Pydantic models of everything the command line prints."""

from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field


class CellStatus(str, Enum):
    """Outcome of one source -> target cell of the contraction grid."""
    VERIFIED = "verified"
    VERIFIED_UP_TO_CLASSIFICATION = "verified_up_to_classification"
    CERTIFIED = "certified"
    ERRATUM = "erratum"
    FAIL = "fail"

    @property
    def symbol(self) -> str:
        if self in (CellStatus.VERIFIED, CellStatus.VERIFIED_UP_TO_CLASSIFICATION):
            return "+"
        if self is CellStatus.CERTIFIED:
            return "-"
        return "!" if self is CellStatus.FAIL else "e"


class VerdictReport(BaseModel):
    status: str
    limit_form: Optional[List[List[str]]] = None
    limit_label: Optional[str] = None
    needs_rescaling: bool = False
    detail: str = ""


class CertificateReport(BaseModel):
    kind: str
    detail: str
    anchor: Optional[str] = None
    machine_checked: bool = False
    bound: Optional[int] = None


class CellReport(BaseModel):
    source: str
    target: str
    expected: str = Field(description="'+' or '-' in the ground-truth grid")
    status: CellStatus
    provenance: Optional[str] = None
    verdict: Optional[VerdictReport] = None
    printed_verdict: Optional[VerdictReport] = None
    certificate: Optional[CertificateReport] = None
    note: str = ""


class GridReport(BaseModel):
    """The full grid, rows in ground-truth order."""
    order: List[str]
    cells: List[CellReport]
    verified: int = 0
    certified: int = 0
    errata: int = 0
    failures: int = 0
    rescaled_witnesses: List[str] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def cell(self, source: str, target: str) -> CellReport:
        for c in self.cells:
            if c.source == source and c.target == target:
                return c
        raise KeyError(f"{source}->{target}")


class ClassificationReport(BaseModel):
    label: str
    ranks: List[int]
    witness: Optional[Dict[str, Any]] = None
    canonical_form: List[List[str]]
    system: Optional[str] = None


class RanksReport(BaseModel):
    rank_B: int
    rank_b: int
    samples_checked: int = Field(default=0, description="seeded group elements the ranks were re-checked on")


class EquivalenceReport(BaseModel):
    equivalent: bool
    label_a: str
    label_b: str
    connecting: Optional[Dict[str, Any]] = None


class CatalogRow(BaseModel):
    id: str
    casimir: str
    label: str
    ranks: List[int]
    printed_label: str
    printed_ranks: List[int]
    realizability: str
    stackel_class: Optional[str] = None
    discrepancies: List[str] = Field(default_factory=list)


class StructureReport(BaseModel):
    casimir: str
    K: str
    brackets: Dict[str, str]
    central: bool


class RealizationReport(BaseModel):
    system: str
    chart: str
    closure_ok: bool
    casimir_ok: bool
    structure_ok: bool
    K: Optional[str] = None
    expected_K: Optional[str] = None
    diagnostics: List[str] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.closure_ok and self.casimir_ok and self.structure_ok and self.K == self.expected_K


class StackelReport(BaseModel):
    system: str
    stackel_class: Optional[str]
    parametrized_casimir: str
    class_casimir: str
    printed_class_casimir: Optional[str] = None
    matches_printed: Optional[bool] = None


class SearchReport(BaseModel):
    source: str
    target: str
    found: bool
    family: Optional[Dict[str, Any]] = None
    verdict: Optional[VerdictReport] = None
    certificate: Optional[CertificateReport] = None
