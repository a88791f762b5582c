"""Command-line front end: quadratic algebra classification, contractions and Poisson checks."""

import argparse
import asyncio
import json
import logging
import random
import sys
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

from pydantic import ValidationError

from config.settings import Configuration
from core.canon import Catalog, CatalogEntry, SystemId, classify, realizability
from core.contract import (
    ContractionFamily,
    rank_obstruction,
    search_contraction,
    verify_contraction,
)
from core.errors import (
    DataFileError,
    ExponentOverflow,
    MissingWitness,
    QuadAlgError,
    UnknownSystem,
    UsageError,
)
from core.exactnum import FieldElem
from core.forms import (
    StructureConstant,
    SymForm,
    compose,
    group_act,
    inverse,
    random_group_element,
    rank_invariants,
)
from core.poisson import REALIZATIONS, StackelMatrix, stackel_class, structure_equations
from core.polynomials import AbstractPoly
from models.command import CommandConfig, Subcommand
from models.documents import CasimirDocument, FamilyDocument, FormDocument, load_document, parse_document
from models.reports import (
    CatalogRow,
    ClassificationReport,
    EquivalenceReport,
    RanksReport,
    RealizationReport,
    SearchReport,
    StackelReport,
    StructureReport,
)
from services.catalog_service import CatalogService
from services.grid_service import GridService, certificate_report, family_from_document, verdict_report
from services.report_service import OutputFormat, Report, render

logger = logging.getLogger(__name__)

RANK_SAMPLES = 10


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message, {"usage": self.format_usage().strip()})


def _parse_args(argv: Optional[Sequence[str]] = None) -> CommandConfig:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--form", help="form JSON file, system id or Casimir polynomial")
    common.add_argument("--source", help="source system, form file or Casimir")
    common.add_argument("--target", help="target system, form file or Casimir")
    common.add_argument("--witness", help="contraction family JSON file")
    common.add_argument("--bound", type=int, help="exponent bound for contract-search")
    common.add_argument("--seed", type=int, help="seed for sampled group elements")
    common.add_argument("--k", default="1", help="structure constant K (structure subcommand)")
    common.add_argument("--format", default="json", choices=[f.value for f in OutputFormat])
    common.add_argument("--certificates", action="store_true", help="include obstruction provenance per cell")
    common.add_argument("--verbose", action="store_true", help="log at DEBUG level on stderr")

    parser = _Parser(prog="quadalg", description="Degenerate quadratic algebras of 2D superintegrable systems.")
    subparsers = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    for subcommand in Subcommand:
        subparsers.add_parser(subcommand.value, parents=[common])

    args = parser.parse_args(argv)
    try:
        return CommandConfig(**vars(args))
    except ValidationError as e:
        raise UsageError("invalid arguments", {"errors": e.errors(include_url=False, include_context=False)}) from e


def _configure_logging(config: Configuration, verbose: bool) -> None:
    level = logging.DEBUG if verbose else getattr(logging, config.log_level.upper(), logging.WARNING)
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        force=True,
    )


def _require(value: Optional[str], flag: str, command: CommandConfig) -> str:
    if not value:
        raise UsageError(f"{command.subcommand.value} needs {flag}")
    return value


def _system_or_none(spec: str) -> Optional[SystemId]:
    try:
        return SystemId.resolve(spec).merged()
    except UnknownSystem:
        return None


def _read_form_file(path: Path) -> Tuple[SymForm, AbstractPoly]:
    try:
        text = path.read_text(encoding="utf-8")
        data = json.loads(text)
    except (OSError, json.JSONDecodeError) as e:
        raise DataFileError(f"cannot read form file {path}: {e}", {"path": str(path)}) from e
    if isinstance(data, dict) and "casimir" in data:
        polynomial = AbstractPoly.parse(parse_document(text, CasimirDocument, path).casimir)
        return SymForm.from_polynomial(polynomial), polynomial
    form = parse_document(text, FormDocument, path).to_form()
    return form, form.to_polynomial()


def _load_casimir(spec: str, catalog: Catalog) -> Tuple[AbstractPoly, Optional[SymForm], Optional[SystemId]]:
    """A Casimir given as a JSON file, a catalog system id or polynomial text."""
    path = Path(spec)
    if path.is_file():
        form, polynomial = _read_form_file(path)
        return polynomial, form, None
    system = _system_or_none(spec)
    if system is not None:
        entry = catalog.entry(system)
        return entry.polynomial, entry.form, system
    return AbstractPoly.parse(spec), None, None


def _load_form(spec: str, catalog: Catalog) -> Tuple[SymForm, AbstractPoly, Optional[SystemId]]:
    polynomial, form, system = _load_casimir(spec, catalog)
    return (form or SymForm.from_polynomial(polynomial)), polynomial, system


def _entry(spec: str, catalog: Catalog) -> CatalogEntry:
    system = _system_or_none(spec)
    if system is None:
        raise UnknownSystem(f"unknown system {spec!r}")
    return catalog.entry(system)


def _classify(command: CommandConfig, catalog: Catalog, config: Configuration) -> Tuple[Report, int]:
    form, _, system = _load_form(_require(command.form, "--form", command), catalog)
    label, witness = classify(form)
    if system is None:
        matches = catalog.systems_with_label(label)
        system = matches[0] if matches else None
    report = ClassificationReport(
        label=str(label),
        ranks=list(rank_invariants(form)),
        witness=None if witness is None else witness.to_json(),
        canonical_form=label.canonical_matrix().to_json()["entries"],
        system=None if system is None else system.value,
    )
    return report, 0


def _ranks(command: CommandConfig, catalog: Catalog, config: Configuration) -> Tuple[Report, int]:
    form, _, _ = _load_form(_require(command.form, "--form", command), catalog)
    ranks = rank_invariants(form)
    rng = random.Random(config.seed)
    for _ in range(RANK_SAMPLES):
        g = random_group_element(rng)
        if rank_invariants(group_act(g, form)) != ranks:
            logger.error(f"rank pair of {form} changed under {g.to_json()}")
            return RanksReport(rank_B=ranks[0], rank_b=ranks[1]), 1
    return RanksReport(rank_B=ranks[0], rank_b=ranks[1], samples_checked=RANK_SAMPLES), 0


def _equiv(command: CommandConfig, catalog: Catalog, config: Configuration) -> Tuple[Report, int]:
    form_a, _, _ = _load_form(_require(command.source, "--source", command), catalog)
    form_b, _, _ = _load_form(_require(command.target, "--target", command), catalog)
    label_a, g_a = classify(form_a)
    label_b, g_b = classify(form_b)
    equivalent = label_a == label_b
    connecting = None
    if equivalent and g_a is not None and g_b is not None:
        connecting = compose(g_a, inverse(g_b)).to_json()
    report = EquivalenceReport(equivalent=equivalent, label_a=str(label_a), label_b=str(label_b), connecting=connecting)
    return report, 0 if equivalent else 1


async def _witness_family(command: CommandConfig, catalogs: CatalogService) -> ContractionFamily:
    if command.witness:
        return family_from_document(load_document(command.witness, FamilyDocument))
    source = _system_or_none(command.source or "")
    target = _system_or_none(command.target or "")
    if source is None or target is None:
        raise UsageError("contract-verify needs --witness unless --source and --target are system ids")
    record = (await catalogs.get_witnesses()).get(source, target)
    if record is None or record.family_document() is None:
        raise MissingWitness(f"no bundled witness for {source.value}->{target.value}")
    return family_from_document(record.family_document())


async def _contract_verify(command: CommandConfig, catalog: Catalog, catalogs: CatalogService) -> Tuple[Report, int]:
    source, _, _ = _load_form(_require(command.source, "--source", command), catalog)
    target, _, _ = _load_form(_require(command.target, "--target", command), catalog)
    family = await _witness_family(command, catalogs)
    verdict = verify_contraction(family, source, target)
    return verdict_report(verdict), 0 if verdict.verified else 1


def _contract_search(command: CommandConfig, catalog: Catalog, config: Configuration) -> Tuple[Report, int]:
    source_spec = _require(command.source, "--source", command)
    target_spec = _require(command.target, "--target", command)
    source, _, _ = _load_form(source_spec, catalog)
    target, _, _ = _load_form(target_spec, catalog)
    report = SearchReport(source=source_spec, target=target_spec, found=False)
    certificate = rank_obstruction(source, target)
    if certificate is None:
        result = search_contraction(source, target, config.default_bound, config.max_free_entries)
        if isinstance(result, ContractionFamily):
            report.found = True
            report.family = result.to_json()
            report.verdict = verdict_report(verify_contraction(result, source, target))
            return report, 0
        certificate = result
    report.certificate = certificate_report(certificate)
    return report, 1


def _catalog(command: CommandConfig, catalog: Catalog, config: Configuration) -> Tuple[Report, int]:
    rows: List[CatalogRow] = []
    for system, entry in catalog.entries.items():
        status = realizability(entry.label, catalog)
        discrepancies = entry.discrepancies()
        if status.conflicts_with_catalog():
            discrepancies.append(f"catalog system carries a {status.status.value} label: {status.reason}")
        rows.append(CatalogRow(
            id=system.value,
            casimir=entry.polynomial.to_text(),
            label=str(entry.label),
            ranks=list(entry.ranks),
            printed_label=str(entry.printed_label),
            printed_ranks=list(entry.printed_ranks),
            realizability=status.status.value,
            stackel_class=entry.record.stackel_class,
            discrepancies=discrepancies,
        ))
    return rows, 0


def _structure(command: CommandConfig, catalog: Catalog, config: Configuration) -> Tuple[Report, int]:
    G, _, _ = _load_casimir(_require(command.form, "--form", command), catalog)
    K = StructureConstant(FieldElem.parse(command.k))
    equations = structure_equations(G, K)
    central = all(equations.bracket(G, AbstractPoly.symbol(name)).is_zero() for name in ("X", "L1", "L2"))
    report = StructureReport(casimir=G.to_text(), K=K.K.to_text(), brackets=equations.as_dict(), central=central)
    return report, 0 if central else 1


def _realize(command: CommandConfig, catalog: Catalog, config: Configuration) -> Tuple[Report, int]:
    entry = _entry(_require(command.source, "--source", command), catalog)
    realization = REALIZATIONS.get(entry.system.value)
    if realization is None:
        raise MissingWitness(f"no bundled realization for {entry.system.value}", {"known": sorted(REALIZATIONS)})
    check = realization.verify()
    report = RealizationReport(
        system=entry.system.value,
        chart=realization.chart.name,
        closure_ok=check.closure_ok,
        casimir_ok=check.casimir_ok,
        structure_ok=check.structure_ok,
        K=None if check.K is None else check.K.to_text(),
        expected_K=FieldElem.parse(realization.K).to_text(),
        diagnostics=check.diagnostics,
    )
    return report, 0 if report.ok else 1


def _stackel(command: CommandConfig, catalog: Catalog, config: Configuration) -> Tuple[Report, int]:
    entry = _entry(_require(command.source, "--source", command), catalog)
    record = entry.record
    if not record.parametrized_casimir:
        raise UnknownSystem(f"{entry.system.value} carries no parametrized Casimir")
    computed = stackel_class(AbstractPoly.parse(record.parametrized_casimir), StackelMatrix.symbolic())
    matches = None
    if record.class_casimir:
        matches = computed == AbstractPoly.parse(record.class_casimir)
    report = StackelReport(
        system=entry.system.value,
        stackel_class=record.stackel_class,
        parametrized_casimir=record.parametrized_casimir,
        class_casimir=computed.to_text(),
        printed_class_casimir=record.class_casimir,
        matches_printed=matches,
    )
    return report, 1 if matches is False else 0


_SYNC_HANDLERS = {
    Subcommand.CLASSIFY: _classify,
    Subcommand.RANKS: _ranks,
    Subcommand.EQUIV: _equiv,
    Subcommand.CONTRACT_SEARCH: _contract_search,
    Subcommand.CATALOG: _catalog,
    Subcommand.STRUCTURE: _structure,
    Subcommand.REALIZE: _realize,
    Subcommand.STACKEL: _stackel,
}


async def _dispatch(command: CommandConfig, config: Configuration) -> Tuple[Report, int]:
    catalogs = CatalogService(config)
    if command.subcommand is Subcommand.TABLE6:
        report = await GridService(config, catalogs).reproduce_table6(command.certificates)
        return report, 0 if report.ok else 1
    catalog = await catalogs.get_catalog()
    if command.subcommand is Subcommand.CONTRACT_VERIFY:
        return await _contract_verify(command, catalog, catalogs)
    return _SYNC_HANDLERS[command.subcommand](command, catalog, config)


def run(command: Union[CommandConfig, Sequence[str], None] = None) -> int:
    """Execute one invocation; 0 success, 1 refuted or mismatch, 2 input or validation error."""
    try:
        if not isinstance(command, CommandConfig):
            command = _parse_args(command)
        config = Configuration.from_overrides({"default_bound": command.bound, "seed": command.seed})
        _configure_logging(config, command.verbose)
        if config.default_bound > config.laurent_bound:
            raise ExponentOverflow(
                f"--bound {config.default_bound} exceeds the Laurent exponent bound {config.laurent_bound}"
            )
        logger.info(f"Running {command.subcommand.value} with data from {config.data_dir}")
        report, code = asyncio.run(_dispatch(command, config))
    except QuadAlgError as e:
        logger.error(f"{e.code}: {e.message}")
        sys.stdout.write(json.dumps(e.to_dict(), indent=2, default=str) + "\n")
        return 2
    except Exception as e:
        logger.exception(f"Unexpected error: {e}")
        sys.stdout.write(json.dumps({"error": "internal_error", "message": str(e), "details": {}}, indent=2) + "\n")
        return 2
    sys.stdout.write(render(report, command.format))
    return code


if __name__ == "__main__":
    sys.exit(run())
