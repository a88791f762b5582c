"""Pydantic schemas of the JSON inputs: forms, group elements, families and the bundled data."""

import logging
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Type, TypeVar, Union

from pydantic import BaseModel, Field, ValidationError, field_validator

from core.errors import DataFileError, QuadAlgError
from core.exactnum import FieldElem, LaurentScalar
from core.forms import BASIS, ScaledGroupElem, SymForm

logger = logging.getLogger(__name__)

D = TypeVar("D", bound=BaseModel)

# a Laurent entry is either text ("1/2*i*e^-1") or [[exponent, "coefficient"], ...] pairs
LaurentEntry = Union[str, int, List[Tuple[int, str]]]


def _check_grid(rows: List[list], size: int, what: str) -> List[list]:
    if len(rows) != size or any(len(row) != size for row in rows):
        raise ValueError(f"{what} must be a {size}x{size} grid")
    return rows


class FormDocument(BaseModel):
    """A Casimir form over the ordered basis (L1, L2, H, X2)."""
    basis: List[str] = Field(default_factory=lambda: list(BASIS))
    entries: List[List[Union[str, int]]]

    @field_validator("basis")
    @classmethod
    def _basis_order(cls, v: List[str]) -> List[str]:
        if list(v) != list(BASIS):
            raise ValueError(f"basis must be {list(BASIS)}")
        return v

    @field_validator("entries")
    @classmethod
    def _square(cls, v: List[list]) -> List[list]:
        return _check_grid(v, 4, "entries")

    def to_form(self) -> SymForm:
        return SymForm.from_rows([[FieldElem.coerce(str(x)) for x in row] for row in self.entries])

    @classmethod
    def from_form(cls, form: SymForm) -> "FormDocument":
        return cls(**form.to_json())


class GroupDocument(BaseModel):
    """A 5x5 group element with optional rescaling z."""
    matrix: List[List[Union[str, int]]]
    z: Union[str, int] = "1"

    @field_validator("matrix")
    @classmethod
    def _square(cls, v: List[list]) -> List[list]:
        return _check_grid(v, 5, "matrix")

    def to_group(self) -> ScaledGroupElem:
        return ScaledGroupElem.from_json(
            {"matrix": [[str(x) for x in row] for row in self.matrix], "z": str(self.z)}
        )

    @classmethod
    def from_group(cls, g: ScaledGroupElem) -> "GroupDocument":
        return cls(**g.to_json())


class FamilyDocument(BaseModel):
    """A contraction family: 4x4 hat grid of Laurent entries and optional z."""
    hat: List[List[LaurentEntry]]
    z: Optional[LaurentEntry] = None

    @field_validator("hat")
    @classmethod
    def _square(cls, v: List[list]) -> List[list]:
        return _check_grid(v, 4, "hat")

    def hat_scalars(self) -> List[List[LaurentScalar]]:
        return [[LaurentScalar.parse(x) for x in row] for row in self.hat]

    def z_scalar(self) -> Optional[LaurentScalar]:
        return None if self.z is None else LaurentScalar.parse(self.z)


class SystemRecord(BaseModel):
    """One geometric system of the catalog."""
    id: str
    space: str
    casimir: str
    printed_casimir: Optional[str] = None
    printed_label: str
    printed_ranks: Tuple[int, int]
    potential: Optional[str] = None
    alias_of: Optional[str] = None
    stackel_class: Optional[str] = None
    parametrized_casimir: Optional[str] = None
    printed_parametrized_casimir: Optional[str] = None
    class_casimir: Optional[str] = None
    notes: List[str] = Field(default_factory=list)


class SystemsDocument(BaseModel):
    systems: List[SystemRecord]


class WitnessProvenance(str, Enum):
    """Where a bundled witness family comes from."""
    PRINTED = "printed"
    CORRECTED = "corrected"
    ERRATUM = "erratum"


class WitnessRecord(BaseModel):
    """Explicit contraction family for one source -> target cell."""
    source: str
    target: str
    provenance: WitnessProvenance = WitnessProvenance.PRINTED
    hat: Optional[List[List[LaurentEntry]]] = None
    z: Optional[LaurentEntry] = None
    printed: Optional[List[List[LaurentEntry]]] = None
    note: str = ""

    def family_document(self) -> Optional[FamilyDocument]:
        if self.hat is None:
            return None
        return FamilyDocument(hat=self.hat, z=self.z)

    def printed_document(self) -> Optional[FamilyDocument]:
        grid = self.printed if self.printed is not None else self.hat
        return None if grid is None else FamilyDocument(hat=grid)


class WitnessesDocument(BaseModel):
    witnesses: List[WitnessRecord]


class CitedArgument(BaseModel):
    """A published non-contraction argument covering source -> targets."""
    source: str
    targets: List[str]
    anchor: str
    summary: str
    check: Optional[str] = None  # "valuation" or "reverse" when a machine check applies


class ErratumRecord(BaseModel):
    source: str
    target: str
    reason: str


class GridDocument(BaseModel):
    """Ground-truth contraction grid: one '+'/'-' string per source row, in ``order``."""
    order: List[str]
    rows: Dict[str, str]
    cited: List[CitedArgument] = Field(default_factory=list)
    errata: List[ErratumRecord] = Field(default_factory=list)

    @field_validator("rows")
    @classmethod
    def _row_symbols(cls, v: Dict[str, str]) -> Dict[str, str]:
        for source, row in v.items():
            if set(row) - {"+", "-"}:
                raise ValueError(f"row {source} may only contain '+' and '-'")
        return v

    def expected(self, source: str, target: str) -> bool:
        return self.rows[source][self.order.index(target)] == "+"


def parse_document(text: str, model: Type[D], path: Union[str, Path] = "<input>") -> D:
    """Validate JSON text against a document model; every failure becomes DataFileError."""
    path = Path(path)
    try:
        document = model.model_validate_json(text)
    except ValidationError as e:
        raise DataFileError(
            f"{path.name} does not match {model.__name__}",
            {"path": str(path), "errors": e.errors(include_url=False, include_context=False)},
        ) from e
    except QuadAlgError:
        raise
    except ValueError as e:
        raise DataFileError(f"{path.name}: {e}", {"path": str(path)}) from e
    logger.debug(f"Loaded {model.__name__} from {path}")
    return document


def load_document(path: Union[str, Path], model: Type[D]) -> D:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise DataFileError(f"cannot read {path}: {e}", {"path": str(path)}) from e
    return parse_document(text, model, path)


class CasimirDocument(BaseModel):
    """A Casimir given as polynomial text in L1, L2, H, X."""
    casimir: str
