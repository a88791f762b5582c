"""Canonical forms of Casimir matrices, the catalog of geometric systems and realizability."""

import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from config.settings import get_configuration
from core.errors import NotAQuadraticAlgebra, UnknownLabel, UnknownSystem
from core.exactnum import ONE, ZERO, FieldElem
from core.forms import (
    GroupElem,
    ScaledGroupElem,
    SymForm,
    compose,
    group_act,
    inverse2,
    matrix_rank,
    mat_mul,
    rank_invariants,
)
from core.polynomials import AbstractPoly
from models.documents import SystemRecord, SystemsDocument, load_document

logger = logging.getLogger(__name__)


class CanonicalFamily(str, Enum):
    """Orbit families of Casimir forms, in table order."""
    B21 = "B21"
    B22 = "B22"
    B11 = "B11"
    B15 = "B15"
    B16 = "B16"
    B17 = "B17"
    B05 = "B05"
    B06 = "B06"
    B07 = "B07"
    B08 = "B08"

    @property
    def param_names(self) -> Tuple[str, ...]:
        return _PARAM_NAMES[self]

    @property
    def table_index(self) -> int:
        return list(CanonicalFamily).index(self) + 1

    @property
    def rank_b(self) -> int:
        return int(self.value[1])


_PARAM_NAMES = {
    CanonicalFamily.B21: ("b34", "b44"),
    CanonicalFamily.B22: ("b34", "b44"),
    CanonicalFamily.B11: ("b33", "b34", "b44"),
    CanonicalFamily.B15: ("b34",),
    CanonicalFamily.B16: ("b44",),
    CanonicalFamily.B17: ("b33",),
    CanonicalFamily.B05: ("b34",),
    CanonicalFamily.B06: (),
    CanonicalFamily.B07: ("b33",),
    CanonicalFamily.B08: (),
}

_LABEL_PATTERN = re.compile(r"^\s*(B\d\d)\s*(?:\((.*)\))?\s*$")


def _binary(x: FieldElem) -> bool:
    return x == 0 or x == 1


def _flag(condition: bool) -> FieldElem:
    return ONE if condition else ZERO


@dataclass(frozen=True)
class CanonicalLabel:
    """A family plus its parameters, e.g. ``B21(1,-2)``."""

    family: CanonicalFamily
    params: Tuple[FieldElem, ...] = ()

    def __post_init__(self):
        family = CanonicalFamily(self.family)
        params = tuple(FieldElem.coerce(p) for p in self.params)
        if len(params) != len(family.param_names):
            raise UnknownLabel(
                f"{family.value} takes {len(family.param_names)} parameters, got {len(params)}"
            )
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "params", params)

    @classmethod
    def parse(cls, text: str, strict: bool = True) -> "CanonicalLabel":
        """Parse ``B22(1,1)``; ``strict=False`` admits literal catalog parameters."""
        match = _LABEL_PATTERN.match(text or "")
        if not match:
            raise UnknownLabel(f"cannot parse canonical label {text!r}")
        name, args = match.groups()
        try:
            family = CanonicalFamily(name)
        except ValueError:
            raise UnknownLabel(f"unknown canonical family {name!r}") from None
        params = [FieldElem.parse(a) for a in args.split(",")] if args and args.strip() else []
        label = cls(family, tuple(params))
        if strict and not label.is_strict():
            raise UnknownLabel(f"{label} is outside the normalized parameter ranges")
        return label

    def param(self, name: str) -> FieldElem:
        return self.params[self.family.param_names.index(name)]

    def is_strict(self) -> bool:
        """Parameters lie in the normalized ranges of the canonical form table."""
        f, p = self.family, self.params
        if f is CanonicalFamily.B21:
            return _binary(p[0]) and (p[0] == 1 or _binary(p[1]))
        if f is CanonicalFamily.B11:
            b33, b34, b44 = p
            if not (_binary(b33) and _binary(b34)):
                return False
            if not (b33 == 1 and b34 == 1) and not _binary(b44):
                return False
            return not (b34 == 0 and b44 == 0)
        return all(_binary(x) for x in p)

    def canonical_matrix(self) -> SymForm:
        f, p = self.family, self.params
        if f in (CanonicalFamily.B21, CanonicalFamily.B22):
            corner = ONE if f is CanonicalFamily.B21 else ZERO
            rows = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, corner, p[0]], [0, 0, p[0], p[1]]]
        elif f is CanonicalFamily.B11:
            rows = [[1, 0, 0, 0], [0, 0, 0, 0], [0, 0, p[0], p[1]], [0, 0, p[1], p[2]]]
        elif f is CanonicalFamily.B15:
            rows = [[1, 0, 0, 0], [0, 0, 1, 1], [0, 1, 0, p[0]], [0, 1, p[0], 0]]
        elif f is CanonicalFamily.B16:
            rows = [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, p[0]]]
        elif f is CanonicalFamily.B17:
            rows = [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, p[0], 0], [0, 1, 0, 0]]
        elif f is CanonicalFamily.B05:
            rows = [[0, 0, 0, 0], [0, 0, 1, 1], [0, 1, 0, p[0]], [0, 1, p[0], 0]]
        elif f is CanonicalFamily.B06:
            rows = [[0, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]
        elif f is CanonicalFamily.B07:
            rows = [[0, 0, 0, 0], [0, 0, 0, 1], [0, 0, p[0], 0], [0, 1, 0, 0]]
        else:
            rows = [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]]
        return SymForm.from_rows(rows)

    def __str__(self) -> str:
        if not self.params:
            return self.family.value
        return f"{self.family.value}({','.join(p.to_text() for p in self.params)})"

    def __repr__(self) -> str:
        return f"CanonicalLabel('{self}')"


def strict_labels(continuous: Sequence[FieldElem] = (ZERO, ONE)) -> List[CanonicalLabel]:
    """Every strict label with discrete parameters; continuous ones range over ``continuous``."""
    labels = []
    bits = (ZERO, ONE)
    for b34 in bits:
        for b44 in (continuous if b34 == 1 else bits):
            labels.append(CanonicalLabel(CanonicalFamily.B21, (b34, b44)))
    labels += [CanonicalLabel(CanonicalFamily.B22, (x, y)) for x in bits for y in bits]
    for b33 in bits:
        for b34 in bits:
            for b44 in (continuous if b33 == 1 and b34 == 1 else bits):
                label = CanonicalLabel(CanonicalFamily.B11, (b33, b34, b44))
                if label.is_strict():
                    labels.append(label)
    for family in (CanonicalFamily.B15, CanonicalFamily.B16, CanonicalFamily.B17,
                   CanonicalFamily.B05, CanonicalFamily.B07):
        labels += [CanonicalLabel(family, (x,)) for x in bits]
    labels += [CanonicalLabel(CanonicalFamily.B06), CanonicalLabel(CanonicalFamily.B08)]
    return labels


class _Reducer:
    """Applies normalization steps to a form, tracking the accumulated group element.

    A step that needs a square root outside the field drops the witness; the label is
    computed from data read before any such step.
    """

    def __init__(self, form: SymForm):
        self.form = form
        self.witness: Optional[ScaledGroupElem] = ScaledGroupElem.identity()

    def act(self, r, s=((0, 0), (0, 0)), a33=ONE, a55=ONE, z=ONE) -> None:
        if self.witness is None:
            return
        g = ScaledGroupElem(GroupElem.from_blocks(r, s, a33, a55), z)
        self.form = group_act(g, self.form)
        self.witness = compose(self.witness, g)

    def root(self, value: FieldElem) -> Optional[FieldElem]:
        root = value.try_sqrt()
        if root is None:
            logger.debug(f"sqrt({value}) leaves the field; witness dropped")
            self.witness = None
        return root


def _rank_two(red: _Reducer) -> CanonicalLabel:
    b, c = red.form.b, red.form.c
    b_inv = inverse2(b)
    s = tuple(tuple(-x for x in row) for row in mat_mul(b_inv, c))
    red.act(((1, 0), (0, 1)), s)
    S = red.form.d
    S33, S34, S44 = S[0][0], S[0][1], S[1][1]

    # b -> identity
    b = red.form.b
    if b[0][0].is_zero():
        x = ONE if not (b[0][1] * 2 + b[1][1]).is_zero() else -ONE
        red.act(((1, 0), (x, 1)))
        b = red.form.b
    lam1 = b[0][0]
    m = b[0][1] / lam1
    lam2 = b[1][1] - m * b[0][1]
    root1, root2 = red.root(lam1), red.root(lam2)
    if root1 is not None and root2 is not None:
        red.act(((root1.inverse(), -m / root2), (0, root2.inverse())))

    if not S33.is_zero():
        family = CanonicalFamily.B21
        if not S34.is_zero():
            params = (ONE, S33 * S44 / (S34 * S34))
            root = red.root(S33)
            a, rho = S34 / S33, (None if root is None else S34 / root)
        elif S44.is_zero():
            params = (ZERO, ZERO)
            a, rho = ONE, red.root(S33)
        else:
            params = (ZERO, ONE)
            a, rho = red.root(S44 / S33), red.root(S44)
    else:
        family = CanonicalFamily.B22
        if not S34.is_zero():
            params = (ONE, _flag(not S44.is_zero()))
            if S44.is_zero():
                a, rho = S34.inverse(), ONE
            else:
                a, rho = S44 / S34, red.root(S44)
        elif not S44.is_zero():
            params = (ZERO, ONE)
            a, rho = ONE, red.root(S44)
        else:
            params = (ZERO, ZERO)
            a, rho = ONE, ONE
    if a is not None and rho is not None:
        red.act(((rho, 0), (0, rho)), a33=a, z=(rho * rho).inverse())
    return CanonicalLabel(family, params)


def _rank_one(red: _Reducer) -> CanonicalLabel:
    b = red.form.b
    if not b[0][0].is_zero():
        red.act(((1, -(b[0][1] / b[0][0])), (0, 1)), z=b[0][0].inverse())
    else:
        red.act(((0, 1), (1, 0)), z=b[1][1].inverse())
    c1 = red.form.c[0]
    red.act(((1, 0), (0, 1)), ((-c1[0], -c1[1]), (0, 0)))

    b23, b24 = red.form.c[1]
    D = red.form.d
    D33, D34, D44 = D[0][0], D[0][1], D[1][1]

    if b23.is_zero() and b24.is_zero():
        if not D33.is_zero() and not D34.is_zero():
            label = CanonicalLabel(CanonicalFamily.B11, (ONE, ONE, D33 * D44 / (D34 * D34)))
            root = red.root(D33)
            a, rho = D34 / D33, (None if root is None else D34 / root)
        elif not D33.is_zero():
            if D44.is_zero():
                raise NotAQuadraticAlgebra("the Casimir depends on L1 and H only")
            label = CanonicalLabel(CanonicalFamily.B11, (ONE, ZERO, ONE))
            a, rho = red.root(D44 / D33), red.root(D44)
        else:
            if D34.is_zero() and D44.is_zero():
                raise NotAQuadraticAlgebra("the Casimir depends on L1 only")
            label = CanonicalLabel(
                CanonicalFamily.B11, (ZERO, _flag(not D34.is_zero()), _flag(not D44.is_zero()))
            )
            if D34.is_zero():
                a, rho = ONE, red.root(D44)
            elif D44.is_zero():
                a, rho = D34.inverse(), ONE
            else:
                a, rho = D44 / D34, red.root(D44)
        if a is not None and rho is not None:
            red.act(((rho, 0), (0, 1)), a33=a, z=(rho * rho).inverse())
        return label

    if not b23.is_zero() and not b24.is_zero():
        a = b24 / b23
        delta = D34 - D33 * b24 / (b23 * 2) - D44 * b23 / (b24 * 2)
        label = CanonicalLabel(CanonicalFamily.B15, (_flag(not delta.is_zero()),))
        rho = red.root(b24 * delta / b23) if not delta.is_zero() else ONE
        s = ((0, 0), (-a * D33 / (b23 * 2), -D44 / (b24 * 2)))
        r22 = None if rho is None else rho * rho / b24
    elif not b23.is_zero():
        a = ONE
        label = CanonicalLabel(CanonicalFamily.B16, (_flag(not D44.is_zero()),))
        rho = red.root(D44) if not D44.is_zero() else ONE
        s = ((0, 0), (-D33 / (b23 * 2), -D34 / b23))
        r22 = None if rho is None else rho * rho / b23
    else:
        a = ONE
        label = CanonicalLabel(CanonicalFamily.B17, (_flag(not D33.is_zero()),))
        rho = red.root(D33) if not D33.is_zero() else ONE
        s = ((0, 0), (-D34 / b24, -D44 / (b24 * 2)))
        r22 = None if rho is None else rho * rho / b24
    if rho is not None:
        red.act(((rho, 0), (0, r22)), s, a33=a, z=(rho * rho).inverse())
    return label


def _rank_zero(red: _Reducer) -> CanonicalLabel:
    c = red.form.c
    rank_c = matrix_rank(c)
    if rank_c == 0:
        raise NotAQuadraticAlgebra("the Casimir depends on H and X^2 only")

    if rank_c == 2:
        c_inv_t = tuple(zip(*inverse2(c)))
        half_d = tuple(tuple(x / 2 for x in row) for row in red.form.d)
        s = tuple(tuple(-x for x in row) for row in mat_mul(c_inv_t, half_d))
        red.act(c_inv_t, s)
        return CanonicalLabel(CanonicalFamily.B08)

    # c = u v^t with v a nonzero row of c
    row = 0 if any(not x.is_zero() for x in c[0]) else 1
    v = c[row]
    pivot = 0 if not v[0].is_zero() else 1
    u = tuple(c[k][pivot] / v[pivot] for k in range(2))
    col2 = (u[0].inverse(), ZERO) if not u[0].is_zero() else (ZERO, u[1].inverse())
    red.act(((-u[1], col2[0]), (u[0], col2[1])))

    v3, v4 = red.form.c[1]
    D = red.form.d
    D33, D34, D44 = D[0][0], D[0][1], D[1][1]
    if not v3.is_zero() and not v4.is_zero():
        a = v4 / v3
        delta = D34 - D33 * v4 / (v3 * 2) - D44 * v3 / (v4 * 2)
        s = ((0, 0), (-a * D33 / (v3 * 2), -D44 / (v4 * 2)))
        if delta.is_zero():
            z, r22 = ONE, v4.inverse()
        else:
            z, r22 = v3 / (v4 * delta), delta / v3
        red.act(((1, 0), (0, r22)), s, a33=a, z=z)
        return CanonicalLabel(CanonicalFamily.B05, (_flag(not delta.is_zero()),))
    if not v3.is_zero():
        if D44.is_zero():
            raise NotAQuadraticAlgebra("the Casimir depends on L2 and H only")
        s = ((0, 0), (-D33 / (v3 * 2), -D34 / v3))
        red.act(((1, 0), (0, D44 / v3)), s, z=D44.inverse())
        return CanonicalLabel(CanonicalFamily.B06)
    z = D33.inverse() if not D33.is_zero() else ONE
    s = ((0, 0), (-D34 / v4, -D44 / (v4 * 2)))
    red.act(((1, 0), (0, (z * v4).inverse())), s, z=z)
    return CanonicalLabel(CanonicalFamily.B07, (_flag(not D33.is_zero()),))


def classify(B: SymForm) -> Tuple[CanonicalLabel, Optional[ScaledGroupElem]]:
    """Canonical label of B and, when the field allows it, a group element reaching it."""
    red = _Reducer(B)
    rank_b = matrix_rank(B.b)
    if rank_b == 2:
        label = _rank_two(red)
    elif rank_b == 1:
        label = _rank_one(red)
    else:
        label = _rank_zero(red)

    witness = red.witness
    if witness is not None and group_act(witness, B) != label.canonical_matrix():
        logger.error(f"normalization of {B} did not reach {label}; witness dropped")
        witness = None
    logger.debug(f"classified {B} as {label}")
    return label, witness


class SystemId(str, Enum):
    """Geometric systems on constant curvature and Darboux spaces."""
    S6 = "S6"
    E18 = "E18"
    D3E = "D3E"
    D4bD = "D4bD"
    S3 = "S3"
    E3 = "E3"
    E12 = "E12"
    D1D = "D1D"
    D2D = "D2D"
    E6 = "E6"
    E5 = "E5"
    E14 = "E14"
    S5 = "S5"
    E13 = "E13"
    E4 = "E4"

    @classmethod
    def resolve(cls, name: Union["SystemId", str]) -> "SystemId":
        """Case-insensitive lookup; ``D4(b)D`` is accepted for D4bD."""
        if isinstance(name, cls):
            return name
        key = re.sub(r"[()\s]", "", str(name)).lower()
        for system in cls:
            if system.value.lower() == key:
                return system
        raise UnknownSystem(f"unknown system {name!r}", {"known": [s.value for s in cls]})

    def merged(self) -> "SystemId":
        """S5 shares its quadratic algebra with E14 and is reported as E14."""
        if self is SystemId.S5:
            logger.info("S5 has the same quadratic algebra as E14; using E14")
            return SystemId.E14
        return self


GRID_ORDER: Tuple[SystemId, ...] = (
    SystemId.S6, SystemId.E18, SystemId.D3E, SystemId.D4bD, SystemId.S3, SystemId.E3,
    SystemId.E12, SystemId.D1D, SystemId.D2D, SystemId.E6, SystemId.E5, SystemId.E14,
    SystemId.E13, SystemId.E4,
)


@dataclass(frozen=True)
class CatalogEntry:
    system: SystemId
    polynomial: AbstractPoly
    form: SymForm
    label: CanonicalLabel
    ranks: Tuple[int, int]
    printed_label: CanonicalLabel
    printed_ranks: Tuple[int, int]
    record: SystemRecord

    def discrepancies(self) -> List[str]:
        found = []
        if self.printed_label != self.label:
            if self.printed_label.canonical_matrix() == self.form:
                found.append(f"printed label {self.printed_label} is the literal matrix; strict label is {self.label}")
            else:
                found.append(f"printed label {self.printed_label} does not match the Casimir; it is {self.label}")
        if self.printed_ranks != self.ranks:
            found.append(f"printed ranks {self.printed_ranks} differ from computed {self.ranks}")
        if self.record.printed_casimir:
            found.append(f"printed Casimir {self.record.printed_casimir} replaced by {self.record.casimir}")
        return found


class Catalog:
    """Catalog of geometric systems, built from the bundled systems.json records."""

    def __init__(self, records: Iterable[SystemRecord]):
        self.entries: Dict[SystemId, CatalogEntry] = {}
        for record in records:
            system = SystemId.resolve(record.id)
            polynomial = AbstractPoly.parse(record.casimir)
            form = SymForm.from_polynomial(polynomial)
            label, _ = classify(form)
            self.entries[system] = CatalogEntry(
                system=system,
                polynomial=polynomial,
                form=form,
                label=label,
                ranks=rank_invariants(form),
                printed_label=CanonicalLabel.parse(record.printed_label, strict=False),
                printed_ranks=tuple(record.printed_ranks),
                record=record,
            )
        missing = [s.value for s in SystemId if s not in self.entries]
        if missing:
            logger.warning(f"catalog has no record for {missing}")
        logger.info(f"Catalog built with {len(self.entries)} systems")

    @classmethod
    def load(cls, data_dir: str) -> "Catalog":
        document = load_document(Path(data_dir) / "systems.json", SystemsDocument)
        return cls(document.systems)

    def entry(self, system: SystemId) -> CatalogEntry:
        try:
            return self.entries[system]
        except KeyError:
            raise UnknownSystem(f"{system.value} is not in the catalog") from None

    def systems_with_label(self, label: CanonicalLabel) -> Tuple[SystemId, ...]:
        return tuple(s for s, e in self.entries.items() if e.label == label)

    def errata(self) -> Dict[SystemId, List[str]]:
        found = {s: e.discrepancies() for s, e in self.entries.items()}
        return {s: notes for s, notes in found.items() if notes}


@lru_cache(maxsize=8)
def _cached_catalog(data_dir: str) -> Catalog:
    return Catalog.load(data_dir)


def default_catalog(data_dir: Optional[str] = None) -> Catalog:
    return _cached_catalog(data_dir or get_configuration().data_dir)


def catalog_form(system: SystemId, catalog: Optional[Catalog] = None) -> Tuple[SymForm, AbstractPoly]:
    entry = (catalog or default_catalog()).entry(SystemId.resolve(system))
    return entry.form, entry.polynomial


class Realizability(str, Enum):
    REALIZED = "realized_by_system"
    HEISENBERG_ONLY = "heisenberg_only"
    NOT_REALIZABLE = "not_phase_space_realizable"
    UNMATCHED = "unmatched"


@dataclass(frozen=True)
class RealizabilityStatus:
    status: Realizability
    systems: Tuple[SystemId, ...] = ()
    case: Optional[int] = None
    stackel_class: Optional[str] = None
    reason: str = ""
    catalog_systems: Tuple[SystemId, ...] = field(default=())

    def conflicts_with_catalog(self) -> bool:
        """A catalog system carries a label the matching calls non-realizable."""
        return self.status is not Realizability.REALIZED and bool(self.catalog_systems)


_NOT_REALIZABLE = {
    1: "L1^2+H^2+2HX^2+b44*X^4 with b44 != 0; at b44 = 1 it factors, forcing linearly dependent generators",
    2: "L1^2+2HX^2+X^4 forces L1 = X*Y with Y a first order constant",
    3: "L1^2+H^2+2HX^2 forces H to be a multiple of X^2",
    4: "2L2H+X^4 forces L2 and H to be multiples of X^2",
    5: "L2X^2 forces a generator to vanish",
}


def _matching(label: CanonicalLabel) -> Tuple[Realizability, Optional[int], Optional[str]]:
    f, p = label.family, label.params
    if f in (CanonicalFamily.B21, CanonicalFamily.B22):
        letter = "A" if p[1] == 1 else ("C" if p[1].is_zero() else None)
        return Realizability.REALIZED, None, letter
    if f is CanonicalFamily.B11:
        b33, b34, b44 = p
        if b34 == 0:
            return Realizability.REALIZED, None, "D"
        # b34 = 1: excepted for every b44 once b33 = 1
        if b33 == 1:
            return Realizability.NOT_REALIZABLE, 3 if b44.is_zero() else 1, None
        if b44 == 1:
            return Realizability.NOT_REALIZABLE, 2, None
        return Realizability.HEISENBERG_ONLY, None, None
    if f is CanonicalFamily.B15:
        return Realizability.REALIZED, None, "B"
    if f is CanonicalFamily.B16:
        if p[0] == 0:
            return Realizability.HEISENBERG_ONLY, None, None
        return Realizability.REALIZED, None, "D"
    if f is CanonicalFamily.B17:
        return Realizability.REALIZED, None, "E"
    if f is CanonicalFamily.B05:
        return Realizability.UNMATCHED, None, None
    if f is CanonicalFamily.B06:
        return Realizability.NOT_REALIZABLE, 4, None
    if f is CanonicalFamily.B07:
        if p[0] == 0:
            return Realizability.NOT_REALIZABLE, 5, None
        return Realizability.REALIZED, None, "F"
    return Realizability.REALIZED, None, "F"


def realizability(label: CanonicalLabel, catalog: Optional[Catalog] = None) -> RealizabilityStatus:
    """Matching of a canonical form with geometric systems, phase space obstructions included."""
    if not label.is_strict():
        raise UnknownLabel(f"{label} is not a normalized canonical label")
    status, case, letter = _matching(label)
    catalog = catalog or default_catalog()
    in_catalog = catalog.systems_with_label(label)
    recorded = sorted({c for c in (catalog.entry(s).record.stackel_class for s in in_catalog) if c})
    if len(recorded) == 1:
        letter = recorded[0]
    elif recorded:
        logger.warning(f"{label} is carried by systems of classes {recorded}; keeping {letter}")
    reason = _NOT_REALIZABLE.get(case, "") if case else ""
    if status is Realizability.HEISENBERG_ONLY:
        reason = "only Heisenberg systems carry this form"
    elif status is Realizability.UNMATCHED:
        reason = "no geometric system carries this form"
    result = RealizabilityStatus(
        status=status,
        systems=in_catalog if status is Realizability.REALIZED else (),
        case=case,
        stackel_class=letter,
        reason=reason,
        catalog_systems=in_catalog,
    )
    if result.conflicts_with_catalog():
        logger.warning(
            f"{label} is marked {status.value} but catalog systems "
            f"{[s.value for s in in_catalog]} carry it"
        )
    return result
