"""Rendering of report models as JSON, Markdown or CSV."""

import csv
import io
import json
import logging
from enum import Enum
from typing import Any, Dict, List, Sequence, Union

from pydantic import BaseModel

from models.reports import GridReport

logger = logging.getLogger(__name__)

Report = Union[BaseModel, Sequence[BaseModel]]


class OutputFormat(str, Enum):
    JSON = "json"
    MARKDOWN = "markdown"
    CSV = "csv"


def _cell_text(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (dict, list)):
        return json.dumps(value, separators=(",", ":"), ensure_ascii=False)
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _markdown_table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    for row in rows:
        lines.append("| " + " | ".join(cell.replace("|", "\\|") for cell in row) + " |")
    return "\n".join(lines) + "\n"


def _csv_table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def _table(fmt: OutputFormat, header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    return _markdown_table(header, rows) if fmt is OutputFormat.MARKDOWN else _csv_table(header, rows)


def _grid_cells(report: GridReport) -> List[List[str]]:
    rows = []
    for cell in report.cells:
        certificate = cell.certificate
        rows.append([
            cell.source, cell.target, cell.expected, cell.status.value, cell.provenance or "",
            certificate.kind if certificate else "",
            (certificate.anchor or "") if certificate else "",
            _cell_text(certificate.machine_checked) if certificate else "",
            cell.note,
        ])
    return rows


_GRID_HEADER = ("source", "target", "expected", "status", "provenance",
                "certificate", "anchor", "machine_checked", "note")


def _render_grid(report: GridReport, fmt: OutputFormat) -> str:
    if fmt is OutputFormat.CSV:
        return _csv_table(_GRID_HEADER, _grid_cells(report))
    symbols = {(c.source, c.target): c.status.symbol for c in report.cells}
    grid = [[source] + [symbols[(source, target)] for target in report.order] for source in report.order]
    summary = [
        ["verified", str(report.verified)],
        ["certified", str(report.certified)],
        ["errata", str(report.errata)],
        ["failures", str(report.failures)],
        ["rescaled witnesses", ", ".join(report.rescaled_witnesses)],
    ]
    return "\n".join([
        _markdown_table(["source \\ target"] + report.order, grid),
        _markdown_table(["count", "value"], summary),
        _markdown_table(_GRID_HEADER, _grid_cells(report)),
    ])


def _render_rows(rows: Sequence[BaseModel], fmt: OutputFormat) -> str:
    if not rows:
        return ""
    header = list(type(rows[0]).model_fields)
    body = [[_cell_text(row.model_dump(mode="json")[name]) for name in header] for row in rows]
    return _table(fmt, header, body)


def _render_fields(report: BaseModel, fmt: OutputFormat) -> str:
    data: Dict[str, Any] = report.model_dump(mode="json")
    return _table(fmt, ["field", "value"], [[name, _cell_text(value)] for name, value in data.items()])


def render(report: Report, fmt: Union[OutputFormat, str] = OutputFormat.JSON) -> str:
    """Serialize one report (or a list of rows) in the requested format.

    JSON output re-parses into the same models; Markdown and CSV flatten nested values
    into compact JSON cells.
    """
    fmt = OutputFormat(fmt)
    logger.debug(f"rendering {type(report).__name__} as {fmt.value}")
    if fmt is OutputFormat.JSON:
        if isinstance(report, BaseModel):
            return report.model_dump_json(indent=2) + "\n"
        return json.dumps([r.model_dump(mode="json") for r in report], indent=2, ensure_ascii=False) + "\n"
    if isinstance(report, GridReport):
        return _render_grid(report, fmt)
    if isinstance(report, BaseModel):
        return _render_fields(report, fmt)
    return _render_rows(list(report), fmt)
