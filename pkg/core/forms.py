"""Casimir forms B(G), the symmetry group G_degn and its congruence action."""

import logging
import random
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from core.errors import DegenerateCasimir, InvalidGroupElement, NotSymmetric
from core.exactnum import I, ONE, S2, ZERO, FieldElem, Scalar
from core.polynomials import AbstractPoly

logger = logging.getLogger(__name__)

BASIS = ("L1", "L2", "H", "X2")

Matrix = Tuple[Tuple[FieldElem, ...], ...]

# exponent of (L1, L2, H, X) for each basis element of the form
_BASIS_MONOMIALS = ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 2))


def as_matrix(rows: Sequence[Sequence[Scalar]]) -> Matrix:
    return tuple(tuple(FieldElem.coerce(x) for x in row) for row in rows)


def identity_matrix(n: int) -> Matrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def transpose(m: Sequence[Sequence[Any]]) -> Tuple[Tuple[Any, ...], ...]:
    return tuple(zip(*m))


def _is_zero(x: Any) -> bool:
    return x == 0


def mat_mul(a: Sequence[Sequence[Any]], b: Sequence[Sequence[Any]]) -> Tuple[Tuple[Any, ...], ...]:
    """Matrix product over any ring whose elements support + and * with FieldElem."""
    rows = []
    for row in a:
        out = []
        for col in zip(*b):
            total: Any = 0
            for x, y in zip(row, col):
                if _is_zero(x) or _is_zero(y):
                    continue
                total = x * y if isinstance(total, int) and total == 0 else total + x * y
            out.append(ZERO if isinstance(total, int) else total)
        rows.append(tuple(out))
    return tuple(rows)


def congruence(hat: Sequence[Sequence[Any]], form: Sequence[Sequence[Any]], z: Any = None):
    """z * hat^t * form * hat."""
    product = mat_mul(transpose(hat), mat_mul(form, hat))
    if z is None:
        return product
    return tuple(tuple(z * x if not _is_zero(x) else x for x in row) for row in product)


def matrix_rank(rows: Sequence[Sequence[FieldElem]]) -> int:
    """Rank by fraction-free (Bareiss) elimination, first nonzero pivot in column order."""
    m = [list(row) for row in rows]
    if not m:
        return 0
    n_rows, n_cols = len(m), len(m[0])
    rank = 0
    previous = ONE
    for col in range(n_cols):
        pivot = next((r for r in range(rank, n_rows) if not m[r][col].is_zero()), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        head = m[rank][col]
        for r in range(rank + 1, n_rows):
            factor = m[r][col]
            for c in range(col + 1, n_cols):
                m[r][c] = (head * m[r][c] - factor * m[rank][c]) / previous
            m[r][col] = ZERO
        previous = head
        rank += 1
        if rank == n_rows:
            break
    return rank


def det2(m: Sequence[Sequence[FieldElem]]) -> FieldElem:
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def inverse2(m: Sequence[Sequence[FieldElem]]) -> Matrix:
    det = det2(m)
    inv = det.inverse()
    return ((m[1][1] * inv, -m[0][1] * inv), (-m[1][0] * inv, m[0][0] * inv))


@dataclass(frozen=True)
class SymForm:
    """Symmetric 4x4 matrix over the ordered basis (L1, L2, H, X^2)."""

    entries: Matrix

    def __post_init__(self):
        entries = as_matrix(self.entries)
        if len(entries) != 4 or any(len(row) != 4 for row in entries):
            raise NotSymmetric("a Casimir form must be a 4x4 matrix")
        for i in range(4):
            for j in range(i + 1, 4):
                if entries[i][j] != entries[j][i]:
                    raise NotSymmetric(
                        f"entry ({i + 1},{j + 1}) = {entries[i][j]} differs from "
                        f"({j + 1},{i + 1}) = {entries[j][i]}"
                    )
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Scalar]]) -> "SymForm":
        return cls(as_matrix(rows))

    @classmethod
    def zero(cls) -> "SymForm":
        return cls(((ZERO,) * 4,) * 4)

    @classmethod
    def from_polynomial(cls, casimir: AbstractPoly) -> "SymForm":
        """Read the matrix off a Casimir with cross terms halved."""
        if casimir.uses_parameters():
            raise DegenerateCasimir(f"{casimir} carries parameters; expected a free Casimir")
        entries = [[ZERO] * 4 for _ in range(4)]
        lookup = {}
        for i in range(4):
            for j in range(i, 4):
                lookup[tuple(a + b for a, b in zip(_BASIS_MONOMIALS[i], _BASIS_MONOMIALS[j]))] = (i, j)
        for monomial, coeff in casimir.terms().items():
            key = monomial[:4]
            if key not in lookup:
                raise DegenerateCasimir(
                    f"term with exponents {key} of {casimir} is not quadratic in L1, L2, H, X^2"
                )
            i, j = lookup[key]
            if i == j:
                entries[i][i] = coeff
            else:
                half = coeff / 2
                entries[i][j] = half
                entries[j][i] = half
        return cls(as_matrix(entries))

    def to_polynomial(self) -> AbstractPoly:
        terms: Dict[Tuple[int, ...], FieldElem] = {}
        pad = (0,) * (len(AbstractPoly().variables) - 4)
        for i in range(4):
            for j in range(i, 4):
                value = self.entries[i][j] if i == j else self.entries[i][j] * 2
                if value.is_zero():
                    continue
                key = tuple(a + b for a, b in zip(_BASIS_MONOMIALS[i], _BASIS_MONOMIALS[j])) + pad
                terms[key] = value
        return AbstractPoly(terms)

    def block(self, rows: Tuple[int, int], cols: Tuple[int, int]) -> Matrix:
        return tuple(tuple(self.entries[r][c] for c in cols) for r in rows)

    @property
    def b(self) -> Matrix:
        return self.block((0, 1), (0, 1))

    @property
    def c(self) -> Matrix:
        return self.block((0, 1), (2, 3))

    @property
    def d(self) -> Matrix:
        return self.block((2, 3), (2, 3))

    def __getitem__(self, index: Tuple[int, int]) -> FieldElem:
        i, j = index
        return self.entries[i][j]

    def to_json(self) -> Dict[str, Any]:
        return {"basis": list(BASIS), "entries": [[x.to_text() for x in row] for row in self.entries]}

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "SymForm":
        basis = data.get("basis", list(BASIS))
        if list(basis) != list(BASIS):
            raise NotSymmetric(f"basis must be {list(BASIS)}, got {basis}")
        return cls.from_rows([[FieldElem.coerce(x) for x in row] for row in data["entries"]])

    def __str__(self) -> str:
        return "[" + "; ".join(", ".join(x.to_text() for x in row) for row in self.entries) + "]"


@dataclass(frozen=True)
class GroupElem:
    """5x5 change of basis of (L1, L2, H, X^2, X); the 5x5 matrix is the source of truth."""

    matrix: Matrix

    def __post_init__(self):
        m = as_matrix(self.matrix)
        if len(m) != 5 or any(len(row) != 5 for row in m):
            raise InvalidGroupElement("group elements are 5x5 matrices")
        for i in range(5):
            for j in range(5):
                free = (i < 2 and j < 4) or (i == j)
                if not free and not m[i][j].is_zero():
                    raise InvalidGroupElement(f"entry ({i + 1},{j + 1}) must vanish, got {m[i][j]}")
        if m[3][3] != m[4][4] * m[4][4]:
            raise InvalidGroupElement(f"A44 = {m[3][3]} must equal A55^2 = {m[4][4] * m[4][4]}")
        if det2(((m[0][0], m[0][1]), (m[1][0], m[1][1]))).is_zero():
            raise InvalidGroupElement("the upper-left block r is singular")
        if m[2][2].is_zero() or m[4][4].is_zero():
            raise InvalidGroupElement("A33 and A55 must be nonzero")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_blocks(
        cls,
        r: Sequence[Sequence[Scalar]],
        s: Sequence[Sequence[Scalar]],
        a33: Scalar,
        a55: Scalar,
    ) -> "GroupElem":
        a55 = FieldElem.coerce(a55)
        rows = [
            [r[0][0], r[0][1], s[0][0], s[0][1], 0],
            [r[1][0], r[1][1], s[1][0], s[1][1], 0],
            [0, 0, a33, 0, 0],
            [0, 0, 0, a55 * a55, 0],
            [0, 0, 0, 0, a55],
        ]
        return cls(as_matrix(rows))

    @classmethod
    def identity(cls) -> "GroupElem":
        return cls(identity_matrix(5))

    @classmethod
    def from_hat(cls, hat: Sequence[Sequence[Scalar]], a55: Optional[Scalar] = None) -> "GroupElem":
        """Lift a 4x4 hat matrix; A55 defaults to a square root of A44 inside the field."""
        hat = as_matrix(hat)
        for i in (2, 3):
            for j in range(4):
                if i != j and not hat[i][j].is_zero():
                    raise InvalidGroupElement(f"hat entry ({i + 1},{j + 1}) must vanish")
        root = FieldElem.coerce(a55) if a55 is not None else hat[3][3].sqrt()
        if root * root != hat[3][3]:
            raise InvalidGroupElement(f"A55 = {root} does not square to A44 = {hat[3][3]}")
        return cls.from_blocks(
            (hat[0][:2], hat[1][:2]), (hat[0][2:], hat[1][2:]), hat[2][2], root
        )

    @property
    def hat(self) -> Matrix:
        return tuple(row[:4] for row in self.matrix[:4])

    @property
    def r(self) -> Matrix:
        return tuple(row[:2] for row in self.matrix[:2])

    @property
    def s(self) -> Matrix:
        return tuple(row[2:4] for row in self.matrix[:2])

    @property
    def t(self) -> Tuple[FieldElem, FieldElem]:
        return self.matrix[2][2], self.matrix[3][3]

    @property
    def a55(self) -> FieldElem:
        return self.matrix[4][4]

    def inverse(self) -> "GroupElem":
        r_inv = inverse2(self.r)
        t_inv = (self.t[0].inverse(), self.t[1].inverse())
        s = self.s
        # -r^-1 s t^-1
        s_new = [
            [-(r_inv[i][0] * s[0][j] + r_inv[i][1] * s[1][j]) * t_inv[j] for j in range(2)]
            for i in range(2)
        ]
        return GroupElem.from_blocks(r_inv, s_new, t_inv[0], self.a55.inverse())

    def to_json(self) -> List[List[str]]:
        return [[x.to_text() for x in row] for row in self.matrix]


@dataclass(frozen=True)
class ScaledGroupElem:
    """A pair (A, z) of G_degn."""

    A: GroupElem
    z: FieldElem = ONE

    def __post_init__(self):
        z = FieldElem.coerce(self.z)
        if z.is_zero():
            raise InvalidGroupElement("the rescaling z must be nonzero")
        object.__setattr__(self, "z", z)

    @classmethod
    def identity(cls) -> "ScaledGroupElem":
        return cls(GroupElem.identity(), ONE)

    def is_identity(self) -> bool:
        return self.A.matrix == identity_matrix(5) and self.z == ONE

    def to_json(self) -> Dict[str, Any]:
        return {"matrix": self.A.to_json(), "z": self.z.to_text()}

    @classmethod
    def from_json(cls, data: Union[Dict[str, Any], List[List[str]]]) -> "ScaledGroupElem":
        if isinstance(data, list):
            return cls(GroupElem(as_matrix(data)))
        return cls(GroupElem(as_matrix(data["matrix"])), FieldElem.coerce(data.get("z", "1")))


@dataclass(frozen=True)
class StructureConstant:
    K: FieldElem

    def __post_init__(self):
        K = FieldElem.coerce(self.K)
        if K.is_zero():
            raise InvalidGroupElement("the structure constant K must be nonzero")
        object.__setattr__(self, "K", K)


def group_act(g: ScaledGroupElem, B: SymForm) -> SymForm:
    return SymForm(congruence(g.A.hat, B.entries, g.z))


def k_transform(g: ScaledGroupElem, K: StructureConstant) -> StructureConstant:
    return StructureConstant(K.K / (g.z * det2(g.A.r) * g.A.a55))


def compose(g1: ScaledGroupElem, g2: ScaledGroupElem) -> ScaledGroupElem:
    """Acting with the result equals acting with g1 first, then g2."""
    return ScaledGroupElem(GroupElem(mat_mul(g1.A.matrix, g2.A.matrix)), g1.z * g2.z)


def inverse(g: ScaledGroupElem) -> ScaledGroupElem:
    return ScaledGroupElem(g.A.inverse(), g.z.inverse())


def rank_invariants(B: SymForm) -> Tuple[int, int]:
    return matrix_rank(B.entries), matrix_rank(B.b)


# small entries for seeded sampling of group elements
SAMPLE_ENTRIES = (
    ZERO, ONE, -ONE, FieldElem.from_rational(2), FieldElem.from_rational(-2),
    FieldElem.from_rational(1) / 2, I, ONE + I, ONE - I, S2,
)


def random_group_element(rng: random.Random, entries: Sequence[FieldElem] = SAMPLE_ENTRIES) -> ScaledGroupElem:
    """Seeded draw of a valid (A, z); invalid draws are rejected and redrawn."""
    nonzero = [e for e in entries if not e.is_zero()]
    while True:
        r = [[rng.choice(entries) for _ in range(2)] for _ in range(2)]
        if det2(r).is_zero():
            continue
        s = [[rng.choice(entries) for _ in range(2)] for _ in range(2)]
        a33 = rng.choice(nonzero)
        a55 = rng.choice(nonzero)
        z = rng.choice(nonzero)
        return ScaledGroupElem(GroupElem.from_blocks(r, s, a33, a55), z)
