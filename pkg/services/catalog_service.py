"""Async loading of the bundled data documents: systems, witnesses and the ground-truth grid."""

import logging
from pathlib import Path
from typing import Dict, Optional, Tuple, Type, TypeVar

import aiofiles
from pydantic import BaseModel

from config.settings import Configuration, get_configuration
from core.canon import Catalog, SystemId
from core.errors import DataFileError, UnknownSystem
from models.documents import (
    GridDocument,
    SystemsDocument,
    WitnessesDocument,
    WitnessRecord,
    parse_document,
)

logger = logging.getLogger(__name__)

D = TypeVar("D", bound=BaseModel)


class WitnessBundle:
    """Bundled witness records keyed by (source, target)."""

    def __init__(self, document: WitnessesDocument):
        self.records: Dict[Tuple[SystemId, SystemId], WitnessRecord] = {}
        for record in document.witnesses:
            key = (SystemId.resolve(record.source).merged(), SystemId.resolve(record.target).merged())
            if key in self.records:
                raise DataFileError(f"duplicate witness for {key[0].value}->{key[1].value}")
            self.records[key] = record

    def get(self, source: SystemId, target: SystemId) -> Optional[WitnessRecord]:
        return self.records.get((source, target))

    def __len__(self) -> int:
        return len(self.records)


class CatalogService:
    """Reads the JSON documents of a data directory, caching each one."""

    def __init__(self, config: Optional[Configuration] = None):
        self.config = config or get_configuration()
        self.data_dir = Path(self.config.data_dir)
        self._catalog: Optional[Catalog] = None
        self._witnesses: Optional[WitnessBundle] = None
        self._grid: Optional[GridDocument] = None

    async def _read(self, name: str, model: Type[D]) -> D:
        path = self.data_dir / name
        try:
            async with aiofiles.open(path, "r", encoding="utf-8") as f:
                text = await f.read()
        except OSError as e:
            logger.error(f"Cannot read {path}: {e}")
            raise DataFileError(f"cannot read {path}: {e}", {"path": str(path)}) from e
        return parse_document(text, model, path)

    async def get_catalog(self) -> Catalog:
        if self._catalog is None:
            document = await self._read("systems.json", SystemsDocument)
            self._catalog = Catalog(document.systems)
            for system, notes in self._catalog.errata().items():
                for note in notes:
                    logger.warning(f"{system.value}: {note}")
        return self._catalog

    async def get_witnesses(self) -> WitnessBundle:
        if self._witnesses is None:
            self._witnesses = WitnessBundle(await self._read("witnesses.json", WitnessesDocument))
            logger.info(f"Loaded {len(self._witnesses)} witness records")
        return self._witnesses

    async def get_grid(self) -> GridDocument:
        if self._grid is None:
            grid = await self._read("grid.json", GridDocument)
            for name in grid.order:
                SystemId.resolve(name)
            if set(grid.rows) != set(grid.order):
                raise DataFileError("grid rows must match the grid order", {"order": grid.order})
            for source, row in grid.rows.items():
                if len(row) != len(grid.order):
                    raise DataFileError(f"grid row {source} has {len(row)} cells, expected {len(grid.order)}")
            self._grid = grid
        return self._grid

    async def resolve(self, name: str) -> SystemId:
        system = SystemId.resolve(name).merged()
        catalog = await self.get_catalog()
        if system not in catalog.entries:
            raise UnknownSystem(f"{system.value} is not in the catalog at {self.data_dir}")
        return system


# Global catalog service instance
catalog_service = CatalogService()
