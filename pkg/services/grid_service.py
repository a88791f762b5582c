"""Reproduction of the contraction grid: witnesses for '+' cells, certificates for '-' cells."""

import asyncio
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Tuple

from config.settings import Configuration, get_configuration
from core.canon import Catalog, SystemId, classify
from core.contract import (
    CertificateKind,
    ContractionFamily,
    ContractionVerdict,
    ObstructionCertificate,
    VerdictStatus,
    rank_obstruction,
    search_contraction,
    valuation_obstruction,
    verify_contraction,
)
from core.errors import MissingWitness, QuadAlgError
from core.forms import SymForm
from models.documents import (
    CitedArgument,
    ErratumRecord,
    FamilyDocument,
    GridDocument,
    WitnessProvenance,
    WitnessRecord,
)
from models.reports import CellReport, CellStatus, CertificateReport, GridReport, VerdictReport
from services.catalog_service import CatalogService, WitnessBundle

logger = logging.getLogger(__name__)


def family_from_document(document: FamilyDocument) -> ContractionFamily:
    z = document.z_scalar()
    hat = document.hat_scalars()
    return ContractionFamily(hat) if z is None else ContractionFamily(hat, z)


def verdict_report(verdict: ContractionVerdict) -> VerdictReport:
    return VerdictReport(
        status=verdict.status.value,
        limit_form=None if verdict.limit_form is None else verdict.limit_form.to_json()["entries"],
        limit_label=None if verdict.limit_label is None else str(verdict.limit_label),
        needs_rescaling=verdict.needs_rescaling,
        detail=verdict.detail,
    )


def certificate_report(certificate: ObstructionCertificate) -> CertificateReport:
    return CertificateReport(
        kind=certificate.kind.value,
        detail=certificate.detail,
        anchor=certificate.anchor,
        machine_checked=certificate.machine_checked,
        bound=certificate.bound,
    )


class GridService:
    """Verifies every cell of the ground-truth grid; cells fan out over a thread pool."""

    def __init__(self, config: Optional[Configuration] = None, catalogs: Optional[CatalogService] = None):
        self.config = config or get_configuration()
        self.catalogs = catalogs or CatalogService(self.config)
        self.catalog: Optional[Catalog] = None
        self.witnesses: Optional[WitnessBundle] = None
        self.grid: Optional[GridDocument] = None

    async def initialize(self) -> None:
        self.catalog = await self.catalogs.get_catalog()
        self.witnesses = await self.catalogs.get_witnesses()
        self.grid = await self.catalogs.get_grid()

    def _forms(self, source: SystemId, target: SystemId) -> Tuple[SymForm, SymForm]:
        return self.catalog.entry(source).form, self.catalog.entry(target).form

    def _cited(self, source: SystemId, target: SystemId) -> Optional[CitedArgument]:
        for argument in self.grid.cited:
            if SystemId.resolve(argument.source).merged() != source:
                continue
            if any(SystemId.resolve(t).merged() == target for t in argument.targets):
                return argument
        return None

    def _erratum(self, source: SystemId, target: SystemId) -> Optional[ErratumRecord]:
        for record in self.grid.errata:
            if SystemId.resolve(record.source) == source and SystemId.resolve(record.target) == target:
                return record
        return None

    def _check_reverse(self, source: SystemId, target: SystemId) -> bool:
        """target -> source is a verified contraction between non-isomorphic algebras."""
        record = self.witnesses.get(target, source)
        if record is None or record.family_document() is None:
            return False
        source_form, target_form = self._forms(source, target)
        verdict = verify_contraction(family_from_document(record.family_document()), target_form, source_form)
        return verdict.verified and classify(source_form)[0] != classify(target_form)[0]

    def _printed_verdict(self, record: WitnessRecord, source_form: SymForm, target_form: SymForm) -> VerdictReport:
        document = record.printed_document()
        try:
            verdict = verify_contraction(family_from_document(document), source_form, target_form)
        except QuadAlgError as e:
            return VerdictReport(status=e.code, detail=e.message)
        return verdict_report(verdict)

    def _plus_cell(self, source: SystemId, target: SystemId) -> CellReport:
        source_form, target_form = self._forms(source, target)
        if source == target:
            verdict = verify_contraction(ContractionFamily.identity(), source_form, target_form)
            status = CellStatus.VERIFIED if verdict.verified else CellStatus.FAIL
            return CellReport(source=source.value, target=target.value, expected="+", status=status,
                              provenance="identity", verdict=verdict_report(verdict))

        record = self.witnesses.get(source, target)
        if record is None:
            raise MissingWitness(f"no bundled witness for {source.value}->{target.value}")

        if record.provenance is WitnessProvenance.ERRATUM:
            erratum = self._erratum(source, target)
            certificate = rank_obstruction(source_form, target_form)
            status = CellStatus.ERRATUM if erratum is not None and certificate is not None else CellStatus.FAIL
            if status is CellStatus.FAIL:
                logger.error(f"{source.value}->{target.value}: erratum record is not backed by an obstruction")
            return CellReport(
                source=source.value, target=target.value, expected="+", status=status,
                provenance=record.provenance.value,
                printed_verdict=self._printed_verdict(record, source_form, target_form),
                certificate=None if certificate is None else certificate_report(certificate),
                note=erratum.reason if erratum else record.note,
            )

        verdict = verify_contraction(family_from_document(record.family_document()), source_form, target_form)
        if verdict.status is VerdictStatus.VERIFIED_STRICT:
            status = CellStatus.VERIFIED
        elif verdict.status is VerdictStatus.VERIFIED_UP_TO_CLASSIFICATION:
            status = CellStatus.VERIFIED_UP_TO_CLASSIFICATION
        else:
            status = CellStatus.FAIL
            logger.error(f"{source.value}->{target.value}: witness gives {verdict.status.value} ({verdict.detail})")
        printed = None
        if record.provenance is WitnessProvenance.CORRECTED:
            printed = self._printed_verdict(record, source_form, target_form)
        return CellReport(
            source=source.value, target=target.value, expected="+", status=status,
            provenance=record.provenance.value, verdict=verdict_report(verdict),
            printed_verdict=printed, note=record.note,
        )

    def certify(self, source: SystemId, target: SystemId) -> Optional[ObstructionCertificate]:
        """Strongest available certificate: rank, then cited argument, then ansatz exhaustion.

        None means the search found a contraction.
        """
        source_form, target_form = self._forms(source, target)
        certificate = rank_obstruction(source_form, target_form)
        if certificate is not None:
            return certificate
        argument = self._cited(source, target)
        if argument is not None:
            checked = False
            if argument.check == "valuation":
                checked, method = valuation_obstruction(source_form, target_form)
                logger.debug(f"{source.value}->{target.value}: {method} check gives {checked}")
            elif argument.check == "reverse":
                checked = self._check_reverse(source, target)
            return ObstructionCertificate(
                CertificateKind.CITED, argument.summary, anchor=argument.anchor, machine_checked=checked
            )
        result = search_contraction(
            source_form, target_form, self.config.default_bound, self.config.max_free_entries
        )
        if isinstance(result, ContractionFamily):
            logger.error(f"search found a contraction {source.value}->{target.value} in a '-' cell")
            return None
        return result

    def _minus_cell(self, source: SystemId, target: SystemId) -> CellReport:
        certificate = self.certify(source, target)
        if certificate is None:
            return CellReport(source=source.value, target=target.value, expected="-", status=CellStatus.FAIL,
                              note="the monomial search found a contraction")
        return CellReport(source=source.value, target=target.value, expected="-", status=CellStatus.CERTIFIED,
                          certificate=certificate_report(certificate))

    def verify_cell(self, source: SystemId, target: SystemId) -> CellReport:
        expected = self.grid.expected(source.value, target.value)
        cell = self._plus_cell(source, target) if expected else self._minus_cell(source, target)
        logger.debug(f"cell {source.value}->{target.value}: {cell.status.value}")
        return cell

    async def reproduce_table6(self, certificates: bool = True) -> GridReport:
        if self.grid is None:
            await self.initialize()
        order = [SystemId.resolve(name) for name in self.grid.order]
        pairs = [(s, t) for s in order for t in order]
        loop = asyncio.get_running_loop()
        with ThreadPoolExecutor(max_workers=self.config.max_workers) as executor:
            tasks = [loop.run_in_executor(executor, self.verify_cell, s, t) for s, t in pairs]
            cells: List[CellReport] = list(await asyncio.gather(*tasks))

        report = GridReport(order=[s.value for s in order], cells=cells)
        for cell in cells:
            if cell.status is CellStatus.FAIL:
                report.failures += 1
            elif cell.status is CellStatus.ERRATUM:
                report.errata += 1
            elif cell.status is CellStatus.CERTIFIED:
                report.certified += 1
            elif cell.source != cell.target:
                report.verified += 1
            if cell.verdict is not None and cell.verdict.needs_rescaling:
                report.rescaled_witnesses.append(f"{cell.source}->{cell.target}")
            if not certificates:
                cell.certificate = None
        logger.info(
            f"Grid reproduced: {report.verified} verified, {report.certified} certified, "
            f"{report.errata} errata, {report.failures} failures"
        )
        return report


# Global grid service instance
grid_service = GridService()
