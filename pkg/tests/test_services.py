"""Tests for the data services and the grid reproduction."""

import json

import pytest

from config.settings import Configuration
from core.canon import GRID_ORDER, SystemId
from core.errors import DataFileError, UnknownSystem
from models.documents import WitnessProvenance
from models.reports import CellStatus
from services.catalog_service import CatalogService, catalog_service
from services.grid_service import GridService, grid_service


@pytest.fixture
def broken_data(tmp_path):
    """Data directory with a malformed grid."""
    grid = {"order": ["S6"], "rows": {"S6": "+x"}}
    (tmp_path / "grid.json").write_text(json.dumps(grid), encoding="utf-8")
    return Configuration(data_dir=str(tmp_path))


class TestCatalogService:
    """Loading the bundled documents."""

    @pytest.mark.asyncio
    async def test_catalog(self):
        """All fifteen systems are loaded."""
        catalog = await catalog_service.get_catalog()
        assert len(catalog.entries) == 15
        assert await catalog_service.get_catalog() is catalog

    @pytest.mark.asyncio
    async def test_witnesses(self):
        """Witness records are keyed by cell, with errata kept as printed only."""
        witnesses = await catalog_service.get_witnesses()
        assert len(witnesses) == 52
        erratum = witnesses.get(SystemId.S3, SystemId.D1D)
        assert erratum.provenance is WitnessProvenance.ERRATUM
        assert erratum.family_document() is None
        assert erratum.printed_document() is not None
        corrected = witnesses.get(SystemId.D3E, SystemId.E4)
        assert corrected.provenance is WitnessProvenance.CORRECTED

    @pytest.mark.asyncio
    async def test_grid(self):
        """The ground-truth grid follows the fixed system order."""
        grid = await catalog_service.get_grid()
        assert grid.order == [s.value for s in GRID_ORDER]
        assert grid.expected("S6", "E18")
        assert not grid.expected("E18", "S6")
        assert len(grid.errata) == 2

    @pytest.mark.asyncio
    async def test_resolve(self):
        """S5 resolves to E14 and unknown names are refused."""
        assert await catalog_service.resolve("S5") is SystemId.E14
        with pytest.raises(UnknownSystem):
            await catalog_service.resolve("X9")

    @pytest.mark.asyncio
    async def test_missing_file(self, tmp_path):
        """A data directory without systems.json is a data error."""
        service = CatalogService(Configuration(data_dir=str(tmp_path)))
        with pytest.raises(DataFileError):
            await service.get_catalog()

    @pytest.mark.asyncio
    async def test_malformed_grid(self, broken_data):
        """Cells other than '+' and '-' are rejected."""
        with pytest.raises(DataFileError):
            await CatalogService(broken_data).get_grid()


class TestGridService:
    """Per-cell verification."""

    @pytest.fixture
    async def service(self):
        """Initialized global grid service."""
        await grid_service.initialize()
        return grid_service

    @pytest.mark.asyncio
    async def test_verified_cell(self, service):
        """A bundled witness verifies its '+' cell."""
        cell = service.verify_cell(SystemId.S6, SystemId.E18)
        assert cell.status is CellStatus.VERIFIED
        assert cell.provenance == "printed"

    @pytest.mark.asyncio
    async def test_corrected_cell(self, service):
        """A corrected witness verifies and the printed one is reported alongside."""
        cell = service.verify_cell(SystemId.D3E, SystemId.E4)
        assert cell.status is CellStatus.VERIFIED
        assert cell.printed_verdict is not None
        assert cell.printed_verdict.status != "verified_strict"

    @pytest.mark.asyncio
    async def test_up_to_classification_cell(self, service):
        """D2D -> E6 reaches E6 up to a basis change."""
        cell = service.verify_cell(SystemId.D2D, SystemId.E6)
        assert cell.status is CellStatus.VERIFIED_UP_TO_CLASSIFICATION
        assert cell.status.symbol == "+"

    @pytest.mark.asyncio
    async def test_erratum_cell(self, service):
        """S3 -> D1D is an erratum backed by the rank B obstruction."""
        cell = service.verify_cell(SystemId.S3, SystemId.D1D)
        assert cell.status is CellStatus.ERRATUM
        assert cell.certificate.kind == "rank_B_increase"

    @pytest.mark.asyncio
    async def test_rank_certificate(self, service):
        """E4 -> S6 is refuted by rank."""
        cell = service.verify_cell(SystemId.E4, SystemId.S6)
        assert cell.status is CellStatus.CERTIFIED
        assert cell.certificate.machine_checked

    @pytest.mark.asyncio
    async def test_valuation_certificate(self, service):
        """E3 -> S3 is a cited argument confirmed by the valuation check."""
        cell = service.verify_cell(SystemId.E3, SystemId.S3)
        assert cell.status is CellStatus.CERTIFIED
        assert cell.certificate.kind == "cited"
        assert cell.certificate.anchor == "rank-two-to-rank-two/E3"
        assert cell.certificate.machine_checked

    @pytest.mark.asyncio
    async def test_reverse_certificate(self, service):
        """E14 -> E6 is confirmed by the verified reverse contraction."""
        cell = service.verify_cell(SystemId.E14, SystemId.E6)
        assert cell.certificate.anchor == "one-directionality/E14"
        assert cell.certificate.machine_checked


@pytest.mark.slow
@pytest.mark.integration
class TestReproduceGrid:
    """The full grid."""

    @pytest.mark.asyncio
    async def test_reproduce_table6(self):
        """Every cell is verified, certified or a documented erratum."""
        report = await GridService().reproduce_table6()
        assert len(report.cells) == 196
        assert report.verified == 50
        assert report.errata == 2
        assert report.certified == 130
        assert report.failures == 0
        assert report.ok
        assert report.cell("S3", "E13").status is CellStatus.ERRATUM

    @pytest.mark.asyncio
    async def test_without_certificates(self):
        """Certificates can be left out of the report."""
        report = await GridService().reproduce_table6(certificates=False)
        assert all(cell.certificate is None for cell in report.cells)
