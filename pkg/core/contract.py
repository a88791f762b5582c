"""Contraction families, their epsilon -> 0 limits, obstruction certificates and the monomial search."""

import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple, Union

from core.canon import CanonicalLabel, classify
from core.errors import (
    DivergentLimit,
    HypothesisNotMet,
    InvalidGroupElement,
    NotAQuadraticAlgebra,
    QuadAlgError,
)
from core.exactnum import EXPONENT_BOUND, ONE, ZERO, FieldElem, LaurentScalar, laurent_limit
from core.forms import (
    ScaledGroupElem,
    SymForm,
    compose,
    congruence,
    inverse,
    mat_mul,
    rank_invariants,
)
from core.polynomials import MatrixPoly

logger = logging.getLogger(__name__)

LaurentMatrix = Tuple[Tuple[LaurentScalar, ...], ...]

EPSILON = LaurentScalar.epsilon()
LAURENT_ONE = LaurentScalar.constant(1)
LAURENT_ZERO = LaurentScalar()


def as_laurent_matrix(rows: Sequence[Sequence[object]]) -> LaurentMatrix:
    return tuple(tuple(LaurentScalar.parse(x) if isinstance(x, (str, list)) else LaurentScalar.coerce(x)
                       for x in row) for row in rows)


@dataclass(frozen=True)
class ContractionFamily:
    """epsilon -> (hat_A(epsilon), z(epsilon)) with Laurent polynomial entries."""

    hat: LaurentMatrix
    z: LaurentScalar = LAURENT_ONE

    def __post_init__(self):
        hat = as_laurent_matrix(self.hat)
        if len(hat) != 4 or any(len(row) != 4 for row in hat):
            raise InvalidGroupElement("a family hat matrix is 4x4")
        for i in (2, 3):
            for j in range(4):
                if i != j and not hat[i][j].is_zero():
                    raise InvalidGroupElement(f"hat entry ({i + 1},{j + 1}) must vanish, got {hat[i][j]}")
        det_r = hat[0][0] * hat[1][1] - hat[0][1] * hat[1][0]
        if det_r.is_zero() or hat[2][2].is_zero() or hat[3][3].is_zero():
            raise InvalidGroupElement("the family is singular for every epsilon")
        z = LaurentScalar.coerce(self.z)
        if z.is_zero():
            raise InvalidGroupElement("the rescaling z(epsilon) must be nonzero")
        object.__setattr__(self, "hat", hat)
        object.__setattr__(self, "z", z)

    @classmethod
    def identity(cls) -> "ContractionFamily":
        return cls(tuple(tuple(LAURENT_ONE if i == j else LAURENT_ZERO for j in range(4)) for i in range(4)))

    @classmethod
    def constant(cls, g: ScaledGroupElem) -> "ContractionFamily":
        return cls(as_laurent_matrix(g.A.hat), LaurentScalar.constant(g.z))

    @classmethod
    def torus(cls, powers: Sequence[int]) -> "ContractionFamily":
        return cls(tuple(
            tuple(LaurentScalar.monomial(1, powers[i]) if i == j else LAURENT_ZERO for j in range(4))
            for i in range(4)
        ))

    def then(self, other: "ContractionFamily") -> "ContractionFamily":
        """Act with self first, then with other."""
        return ContractionFamily(mat_mul(self.hat, other.hat), self.z * other.z)

    def substitute_power(self, power: int) -> "ContractionFamily":
        return ContractionFamily(
            tuple(tuple(x.substitute_power(power) for x in row) for row in self.hat),
            self.z.substitute_power(power),
        )

    def at(self, point: FieldElem) -> Tuple[Tuple[FieldElem, ...], ...]:
        return tuple(tuple(x.evaluate(point) for x in row) for row in self.hat)

    def exponents(self) -> List[int]:
        return sorted({k for row in self.hat for x in row for k, _ in x.terms()})

    def to_json(self) -> Dict[str, object]:
        return {
            "hat": [[x.to_text() for x in row] for row in self.hat],
            "z": self.z.to_text(),
        }


def evaluate_family(F: ContractionFamily, B: SymForm) -> LaurentMatrix:
    """z(e) * hat(e)^t * B * hat(e), exactly."""
    image = congruence(F.hat, B.entries, F.z)
    return tuple(tuple(LaurentScalar.coerce(x) for x in row) for row in image)


class VerdictStatus(str, Enum):
    VERIFIED_STRICT = "verified_strict"
    VERIFIED_UP_TO_CLASSIFICATION = "verified_up_to_classification"
    LIMIT_UNDEFINED = "limit_undefined"
    WRONG_TARGET = "wrong_target"


@dataclass(frozen=True)
class ContractionVerdict:
    status: VerdictStatus
    limit_form: Optional[SymForm] = None
    limit_label: Optional[CanonicalLabel] = None
    needs_rescaling: bool = False
    detail: str = ""

    @property
    def verified(self) -> bool:
        return self.status in (VerdictStatus.VERIFIED_STRICT, VerdictStatus.VERIFIED_UP_TO_CLASSIFICATION)


def limit_matrix(image: LaurentMatrix) -> SymForm:
    return SymForm(tuple(tuple(laurent_limit(x) for x in row) for row in image))


def _scalar_multiple(a: SymForm, b: SymForm) -> Optional[FieldElem]:
    """lam with a = lam * b, if any."""
    lam = None
    for i in range(4):
        for j in range(4):
            x, y = a[i, j], b[i, j]
            if y.is_zero():
                if not x.is_zero():
                    return None
                continue
            ratio = x / y
            if lam is None:
                lam = ratio
            elif ratio != lam:
                return None
    return lam


def verify_contraction(F: ContractionFamily, source: SymForm, target: SymForm) -> ContractionVerdict:
    image = evaluate_family(F, source)
    try:
        limit = limit_matrix(image)
    except DivergentLimit as e:
        return ContractionVerdict(VerdictStatus.LIMIT_UNDEFINED, detail=e.message)

    try:
        limit_label, _ = classify(limit)
    except NotAQuadraticAlgebra as e:
        return ContractionVerdict(VerdictStatus.WRONG_TARGET, limit_form=limit, detail=e.message)
    target_label, _ = classify(target)

    if limit == target:
        return ContractionVerdict(VerdictStatus.VERIFIED_STRICT, limit, limit_label)
    if limit_label == target_label:
        lam = _scalar_multiple(limit, target)
        rescale = lam is not None and lam != ONE
        detail = f"limit is {lam} times the target" if rescale else "limit differs from the target by a basis change"
        logger.warning(f"contraction matches {target_label} only up to classification: {detail}")
        return ContractionVerdict(
            VerdictStatus.VERIFIED_UP_TO_CLASSIFICATION, limit, limit_label, rescale, detail
        )
    return ContractionVerdict(
        VerdictStatus.WRONG_TARGET, limit, limit_label,
        detail=f"limit classifies as {limit_label}, target as {target_label}",
    )


class CertificateKind(str, Enum):
    RANK_B_INCREASE = "rank_B_increase"
    RANK_b_INCREASE = "rank_b_increase"
    CITED = "cited"
    ANSATZ_EXHAUSTED = "ansatz_exhausted"


@dataclass(frozen=True)
class ObstructionCertificate:
    kind: CertificateKind
    detail: str
    anchor: Optional[str] = None
    machine_checked: bool = False
    bound: Optional[int] = None

    @property
    def is_proof(self) -> bool:
        return self.kind is not CertificateKind.ANSATZ_EXHAUSTED


def rank_obstruction(source: SymForm, target: SymForm) -> Optional[ObstructionCertificate]:
    """Contractions never raise rank B or rank b; None when the ranks decide nothing."""
    big_s, small_s = rank_invariants(source)
    big_t, small_t = rank_invariants(target)
    if big_t > big_s:
        return ObstructionCertificate(
            CertificateKind.RANK_B_INCREASE, f"rank B grows from {big_s} to {big_t}", machine_checked=True
        )
    if small_t > small_s:
        return ObstructionCertificate(
            CertificateKind.RANK_b_INCREASE, f"rank b grows from {small_s} to {small_t}", machine_checked=True
        )
    return None


def normalize_family(F: ContractionFamily, source: SymForm) -> ContractionFamily:
    """Clear the off-diagonal first (and, when possible, second) row of the image, keeping the limit."""
    image = evaluate_family(F, source)
    try:
        limit = limit_matrix(image)
    except DivergentLimit as e:
        raise HypothesisNotMet(f"the family has no limit on this form: {e.message}") from e

    def clearable(k: int) -> bool:
        return limit[k, k] == ONE and all(limit[k, j].is_zero() for j in range(4) if j != k)

    if not clearable(0):
        raise HypothesisNotMet(
            "the limit must have (1,1) entry 1 and vanishing off-diagonal first row",
            {"limit": limit.to_json()},
        )
    family = F
    for k in (0, 1):
        if k == 1 and not clearable(1):
            break
        current = evaluate_family(family, source)
        pivot = current[k][k]
        rows = [[LAURENT_ZERO] * 4 for _ in range(4)]
        for j in range(4):
            rows[j][j] = LAURENT_ONE if j == k else pivot
            if j != k:
                rows[k][j] = -current[k][j]
        family = family.then(ContractionFamily(tuple(tuple(r) for r in rows)))
        logger.debug(f"cleared row {k + 1} of the image")
    return family


@dataclass(frozen=True)
class ReducedFamily:
    """Family hat [[1,0,0,0],[0,-beta,-gamma,-delta],[0,0,a33,0],[0,0,0,a44]] from a rank two form."""

    beta: LaurentScalar
    gamma: LaurentScalar
    delta: LaurentScalar
    a33: LaurentScalar
    a44: LaurentScalar

    def __post_init__(self):
        for name in ("beta", "gamma", "delta", "a33", "a44"):
            object.__setattr__(self, name, LaurentScalar.coerce(getattr(self, name)))
        if not self.beta.is_zero() and self.beta.valuation() <= 0:
            raise HypothesisNotMet(f"beta = {self.beta} must tend to 0")

    def family(self) -> ContractionFamily:
        return ContractionFamily((
            (LAURENT_ONE, LAURENT_ZERO, LAURENT_ZERO, LAURENT_ZERO),
            (LAURENT_ZERO, -self.beta, -self.gamma, -self.delta),
            (LAURENT_ZERO, LAURENT_ZERO, self.a33, LAURENT_ZERO),
            (LAURENT_ZERO, LAURENT_ZERO, LAURENT_ZERO, self.a44),
        ))

    def image(self, source: SymForm) -> LaurentMatrix:
        if source.b != ((ONE, ZERO), (ZERO, ONE)) or any(not x.is_zero() for row in source.c for x in row):
            raise HypothesisNotMet("the reduced parametrization needs b = identity and c = 0")
        return evaluate_family(self.family(), source)


# valuation test


def _eliminate(equalities: List[List[Fraction]], stricts: List[List[Fraction]]) -> bool:
    """Feasibility of {E v = 0, S v > 0} over the rationals (homogeneous)."""
    equalities = [row[:] for row in equalities]
    stricts = [row[:] for row in stricts]
    while equalities:
        row = equalities.pop()
        pivot = next((k for k, a in enumerate(row) if a), None)
        if pivot is None:
            continue
        for target in equalities + stricts:
            factor = target[pivot] / row[pivot]
            if factor:
                for k in range(len(row)):
                    target[k] -= factor * row[k]
    n = len(stricts[0]) if stricts else 0
    for var in range(n):
        pos = [r for r in stricts if r[var] > 0]
        neg = [r for r in stricts if r[var] < 0]
        rest = [r for r in stricts if r[var] == 0]
        for p in pos:
            for q in neg:
                rest.append([p[k] * -q[var] + q[k] * p[var] for k in range(n)])
        stricts = rest
        if any(not any(r) for r in stricts):
            return False
    return not any(not any(r) for r in stricts)


def valuation_feasible(
    image: Sequence[Sequence[MatrixPoly]],
    target: SymForm,
    always_finite: Set[str],
) -> bool:
    """Necessary condition for image -> target using the entries that are single monomials.

    Each unknown is a function of epsilon with valuation v; a monomial entry tends to a
    nonzero limit iff its valuation vanishes and to zero iff it is positive.
    """
    names = image[0][0].variables
    equalities: List[List[Fraction]] = []
    stricts: List[Tuple[List[Fraction], Set[str]]] = []
    for i in range(4):
        for j in range(i, 4):
            entry, wanted = image[i][j], target[i, j]
            if entry.is_zero():
                if not wanted.is_zero():
                    return False
                continue
            if len(entry) != 1:
                continue
            (monomial, _), = entry.terms().items()
            row = [Fraction(e) for e in monomial]
            used = {names[k] for k, e in enumerate(monomial) if e}
            if wanted.is_zero():
                stricts.append((row, used))
            else:
                equalities.append(row)
    finite = set(always_finite)
    for row in equalities:
        finite.update(names[k] for k, e in enumerate(row) if e)
    # an unknown that may vanish identically satisfies every strict condition it enters
    kept = [row for row, used in stricts if used <= finite]
    return _eliminate(equalities, kept)


def _symbolic_image(source: SymForm, hat_spec: Sequence[Sequence[Union[str, int, None]]],
                    ring: MatrixPoly) -> Tuple[Tuple[MatrixPoly, ...], ...]:
    """z * hat^t * source * hat with hat entries given as unknown names, "-name", constants or None."""

    def entry(spec: Union[str, int, None]) -> MatrixPoly:
        if spec is None:
            return ring.zero()
        if isinstance(spec, int):
            return ring.constant(spec)
        if spec.startswith("-"):
            return -ring.var(spec[1:])
        return ring.var(spec)

    hat = tuple(tuple(entry(x) for x in row) for row in hat_spec)
    form = tuple(tuple(ring.constant(x) for x in row) for row in source.entries)
    image = congruence(hat, form, ring.var("z"))
    return tuple(tuple(ring.constant(x) if isinstance(x, FieldElem) else x for x in row) for row in image)


_GENERIC_HAT = (
    ("A11", "A12", "A13", "A14"),
    ("A21", "A22", "A23", "A24"),
    (None, None, "A33", None),
    (None, None, None, "A44"),
)
_REDUCED_HAT = (
    (1, None, None, None),
    (None, "-beta", "-gamma", "-delta"),
    (None, None, "A33", None),
    (None, None, None, "A44"),
)
_TORUS_HAT = (
    ("r1", None, None, None),
    (None, "r2", None, None),
    (None, None, "A33", None),
    (None, None, None, "A44"),
)


def _cross_ratio(d: Sequence[Sequence[FieldElem]]) -> Optional[FieldElem]:
    if d[0][1].is_zero():
        return None
    return d[0][0] * d[1][1] / (d[0][1] * d[0][1])


def valuation_obstruction(source: SymForm, target: SymForm) -> Tuple[bool, str]:
    """Machine check of a non-contraction between canonical forms; (proved, method)."""
    source_label, _ = classify(source)
    target_label, _ = classify(target)
    source_c = source_label.canonical_matrix()
    target_c = target_label.canonical_matrix()
    rank_s, rank_t = source_label.family.rank_b, target_label.family.rank_b

    if rank_s == 2 and rank_t == 2:
        method = "torus with cross-ratio"
        lam = _cross_ratio(source_c.d)
        if lam is not None:
            t = target_c.d
            if t[0][0] * t[1][1] != lam * t[0][1] * t[0][1]:
                return True, method
        ring = MatrixPoly.ring(("r1", "r2", "A33", "A44", "z"))
        image = _symbolic_image(source_c, _TORUS_HAT, ring)
        finite = {"A33", "A44", "z"}
    elif rank_s == 2 and rank_t == 1:
        method = "reduced rank two parametrization"
        ring = MatrixPoly.ring(("beta", "gamma", "delta", "A33", "A44", "z"))
        image = _symbolic_image(source_c, _REDUCED_HAT, ring)
        finite = {"A33", "A44", "z"}
    else:
        method = "generic group element"
        ring = MatrixPoly.ring(("A11", "A12", "A13", "A14", "A21", "A22", "A23", "A24", "A33", "A44", "z"))
        image = _symbolic_image(source_c, _GENERIC_HAT, ring)
        finite = {"A33", "A44", "z"}
    proved = not valuation_feasible(image, target_c, finite)
    logger.debug(f"valuation test {source_label} -> {target_label} by {method}: proved={proved}")
    return proved, method


# monomial ansatz search


def _exponent_vectors(bound: int) -> Iterator[Tuple[int, ...]]:
    vectors = itertools.product(range(-bound, bound + 1), repeat=4)
    yield from sorted(vectors, key=lambda p: (sum(abs(x) for x in p), p))


def _candidates(
    source: SymForm, target: SymForm, p: Sequence[int], max_free: int
) -> Iterator[SymForm]:
    """Forms C with diag(e^p) C diag(e^p) -> target; the source itself is tried first."""
    positions = [(i, j) for i in range(4) for j in range(i, 4)]
    fixed: Dict[Tuple[int, int], FieldElem] = {}
    free: List[Tuple[int, int]] = []
    for i, j in positions:
        weight = p[i] + p[j]
        if weight == 0:
            fixed[(i, j)] = target[i, j]
        elif weight < 0:
            fixed[(i, j)] = ZERO
        else:
            free.append((i, j))
        if weight != 0 and not target[i, j].is_zero():
            return

    def build(values: Dict[Tuple[int, int], FieldElem]) -> SymForm:
        rows = [[ZERO] * 4 for _ in range(4)]
        for (i, j), x in values.items():
            rows[i][j] = rows[j][i] = x
        return SymForm.from_rows(rows)

    if all(source[i, j] == x for (i, j), x in fixed.items()):
        yield source
    for size in range(0, min(max_free, len(free)) + 1):
        for chosen in itertools.combinations(free, size):
            values = dict(fixed)
            values.update({pos: ONE for pos in chosen})
            yield build(values)


def search_contraction(
    source: SymForm,
    target: SymForm,
    exponent_bound: int = 3,
    max_free_entries: int = 3,
) -> Union[ContractionFamily, ObstructionCertificate]:
    """Search families W * diag(e^p) with W constant; exhaustion is evidence, not proof."""
    if exponent_bound > EXPONENT_BOUND:
        raise InvalidGroupElement(f"exponent bound {exponent_bound} exceeds {EXPONENT_BOUND}")
    source_label, g_source = classify(source)
    source_ranks = rank_invariants(source)
    if g_source is None:
        logger.warning(f"{source_label}: normalization leaves the field, search skipped")
        return ObstructionCertificate(
            CertificateKind.ANSATZ_EXHAUSTED, "source normalization leaves the field", bound=exponent_bound
        )
    tried = 0
    for p in _exponent_vectors(exponent_bound):
        for C in _candidates(source, target, p, max_free_entries):
            tried += 1
            if C is not source and rank_invariants(C) != source_ranks:
                continue
            if C is source:
                W = ScaledGroupElem.identity()
            else:
                try:
                    label, g_c = classify(C)
                except QuadAlgError:
                    continue
                if label != source_label or g_c is None:
                    continue
                W = compose(g_source, inverse(g_c))
            family = ContractionFamily.constant(W).then(ContractionFamily.torus(p))
            try:
                verdict = verify_contraction(family, source, target)
            except QuadAlgError as e:
                logger.debug(f"candidate p={p} rejected: {e.message}")
                continue
            if verdict.verified:
                logger.info(f"found contraction with exponents {p} after {tried} candidates")
                return family
    logger.info(f"monomial ansatz exhausted at bound {exponent_bound} ({tried} candidates)")
    return ObstructionCertificate(
        CertificateKind.ANSATZ_EXHAUSTED,
        f"no W * diag(e^p) family with |p| <= {exponent_bound}",
        bound=exponent_bound,
    )


def compose_families(
    first: ContractionFamily, second: ContractionFamily, p1: int = 1, p2: int = 1
) -> ContractionFamily:
    """Chain A -> B and B -> C with independent powers e^p1 and e^p2."""
    return first.substitute_power(p1).then(second.substitute_power(p2))
