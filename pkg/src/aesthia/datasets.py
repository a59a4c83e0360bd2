"""Corpus manifests and measure-result persistence.

A dataset is described by a manifest CSV with header ``id,path,score,category``
(score and category optional per row); image paths are resolved against the
manifest's directory. Measure output is written with a fixed column order
and 9 significant digits so repeated runs are byte-identical.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import ParameterError
from .measures import MEASURE_NAMES
from .stats import ResultsTable

MANIFEST_HEADER = ["id", "path", "score", "category"]
RESULT_COLUMNS = list(MEASURE_NAMES) + ["score"]  # id column comes first
RESULT_HEADER = ["id"] + RESULT_COLUMNS


@dataclass(frozen=True)
class ManifestEntry:
    image_id: str
    path: Path
    score: float | None = None
    category: str | None = None


@dataclass(frozen=True)
class DatasetManifest:
    name: str
    entries: tuple[ManifestEntry, ...]

    def __len__(self) -> int:
        return len(self.entries)

    def ids(self) -> list[str]:
        return [e.image_id for e in self.entries]

    def entry(self, image_id: str) -> ManifestEntry:
        for e in self.entries:
            if e.image_id == image_id:
                return e
        raise KeyError(image_id)


def load_manifest(path, name: str | None = None, check_paths: bool = True) -> DatasetManifest:
    """Read and validate a manifest CSV; errors carry the 1-based row number."""
    p = Path(path)
    base = p.parent
    entries: list[ManifestEntry] = []
    seen: set[str] = set()
    with open(p, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != MANIFEST_HEADER:
            raise ParameterError(f"{p}: manifest header must be {','.join(MANIFEST_HEADER)}")
        for row_num, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) < 2:
                raise ParameterError(f"{p} row {row_num}: need at least id and path")
            image_id = row[0].strip()
            if not image_id:
                raise ParameterError(f"{p} row {row_num}: empty id")
            if image_id in seen:
                raise ParameterError(f"{p} row {row_num}: duplicate id {image_id!r}")
            seen.add(image_id)
            image_path = (base / row[1].strip()).resolve()
            if check_paths and not image_path.is_file():
                raise ParameterError(f"{p} row {row_num}: unreadable image path {image_path}")
            score = None
            if len(row) > 2 and row[2].strip():
                try:
                    score = float(row[2])
                except ValueError:
                    raise ParameterError(
                        f"{p} row {row_num}: non-numeric score {row[2]!r}"
                    ) from None
                if not math.isfinite(score):
                    raise ParameterError(f"{p} row {row_num}: score must be finite")
            category = row[3].strip() if len(row) > 3 and row[3].strip() else None
            entries.append(ManifestEntry(image_id, image_path, score, category))
    return DatasetManifest(name=name or p.stem, entries=tuple(entries))


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float) and math.isnan(value):
        return ""
    return f"{value:.9g}"


def write_results(table: ResultsTable, path, columns: list[str] | None = None) -> None:
    """Write a results CSV with the fixed measure column order.

    Missing cells stay empty (a failed measure is absent, not zero);
    output is deterministic byte-for-byte for a given table. A columns
    subset keeps the canonical ordering.
    """
    if not table.rows:
        raise ParameterError("refusing to write an empty results table")
    cols = RESULT_COLUMNS if columns is None else [c for c in RESULT_COLUMNS if c in columns]
    with open(Path(path), "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id"] + cols)
        for row_id, row in table.rows.items():
            writer.writerow([row_id] + [_format_cell(row.get(col)) for col in cols])


def read_results(path) -> ResultsTable:
    """Read a results CSV produced by write_results (extra columns kept)."""
    p = Path(path)
    with open(p, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[0] != "id":
            raise ParameterError(f"{p}: first column must be 'id'")
        columns = header[1:]
        table = ResultsTable(columns=list(columns))
        for row_num, row in enumerate(reader, start=2):
            if not row:
                continue
            values: dict[str, float | None] = {}
            for name, cell in zip(columns, row[1:]):
                cell = cell.strip()
                if not cell:
                    continue
                try:
                    values[name] = float(cell)
                except ValueError:
                    raise ParameterError(
                        f"{p} row {row_num}: non-numeric cell {cell!r} in {name}"
                    ) from None
            table.add_row(row[0], values)
    return table
