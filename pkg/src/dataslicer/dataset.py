"""Datasets: schema description, typed CSV loading, and result tables.

CSV input is RFC-4180, UTF-8, header row required. Empty cells are nulls;
nulls are excluded from aggregates downstream. Column storage is columnar
(one list per column) and immutable after load.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from datetime import datetime
from enum import Enum
from typing import Any, Iterable, Optional

from .errors import DatasetTypeError, FormatError, InvalidSpec, SchemaMismatch

__all__ = [
    "ColumnType",
    "ColumnRole",
    "Column",
    "DatasetSchema",
    "Dataset",
    "ResultTable",
    "load_dataset",
    "schema_to_document",
    "schema_from_document",
    "result_table_to_document",
]


class ColumnType(str, Enum):
    INT = "int"
    FLOAT = "float"
    STRING = "string"
    DATETIME = "datetime"
    BOOL = "bool"


class ColumnRole(str, Enum):
    MEASURE = "measure"
    DIMENSION = "dimension"
    LATITUDE = "latitude"
    LONGITUDE = "longitude"
    NONE = "none"


@dataclass(frozen=True)
class Column:
    name: str
    type: ColumnType
    role: ColumnRole = ColumnRole.NONE


@dataclass(frozen=True)
class DatasetSchema:
    name: str
    columns: tuple[Column, ...]

    def __post_init__(self):
        names = [c.name for c in self.columns]
        if len(set(names)) != len(names):
            raise InvalidSpec("duplicate column names in schema")
        for role in (ColumnRole.LATITUDE, ColumnRole.LONGITUDE):
            if sum(1 for c in self.columns if c.role is role) > 1:
                raise InvalidSpec(f"more than one {role.value} column")

    def column(self, name: str) -> Optional[Column]:
        for c in self.columns:
            if c.name == name:
                return c
        return None

    def role_column(self, role: ColumnRole) -> Optional[Column]:
        for c in self.columns:
            if c.role is role:
                return c
        return None


@dataclass(frozen=True)
class Dataset:
    """Typed columnar data bound to its schema. Immutable after load."""

    schema: DatasetSchema
    columns: dict[str, list]
    row_count: int


@dataclass(frozen=True)
class ResultTable:
    """Evaluation output: labelled columns and row-major tuples."""

    columns: tuple[tuple[str, ColumnType], ...]
    rows: tuple[tuple, ...]


_TRUE = {"true", "1", "yes"}
_FALSE = {"false", "0", "no"}


def parse_cell(text: str, column_type: ColumnType) -> Any:
    """Convert one CSV cell; empty text is null. Raises ValueError on junk."""
    if text == "":
        return None
    if column_type is ColumnType.INT:
        return int(text)
    if column_type is ColumnType.FLOAT:
        return float(text)
    if column_type is ColumnType.DATETIME:
        return datetime.fromisoformat(text)
    if column_type is ColumnType.BOOL:
        low = text.strip().lower()
        if low in _TRUE:
            return True
        if low in _FALSE:
            return False
        raise ValueError(f"not a boolean: {text!r}")
    return text


def load_dataset(csv_source: str | io.TextIOBase, schema: DatasetSchema) -> Dataset:
    """Load a CSV into typed columnar storage.

    The header must carry exactly the schema's column names, in any order.
    """
    if isinstance(csv_source, str):
        csv_source = io.StringIO(csv_source)
    reader = csv.reader(csv_source)
    try:
        header = next(reader)
    except StopIteration:
        raise SchemaMismatch("empty input: missing header row") from None
    declared = {c.name for c in schema.columns}
    seen = set(header)
    if seen != declared or len(header) != len(schema.columns):
        missing = sorted(declared - seen)
        extra = sorted(seen - declared)
        raise SchemaMismatch(f"header mismatch: missing {missing}, unexpected {extra}")
    order = [schema.column(name) for name in header]
    columns: dict[str, list] = {c.name: [] for c in schema.columns}
    count = 0
    for line_no, row in enumerate(reader, start=2):
        if len(row) != len(header):
            raise SchemaMismatch(f"row {line_no}: expected {len(header)} cells, got {len(row)}")
        for col, text in zip(order, row):
            assert col is not None
            try:
                value = parse_cell(text, col.type)
            except ValueError:
                raise DatasetTypeError(line_no, col.name, text) from None
            columns[col.name].append(value)
        count += 1
    return Dataset(schema=schema, columns=columns, row_count=count)


# --- document (JSON) forms ---------------------------------------------------

def schema_to_document(schema: DatasetSchema) -> dict:
    return {
        "name": schema.name,
        "columns": [
            {"name": c.name, "type": c.type.value, "role": c.role.value}
            for c in schema.columns
        ],
    }


def schema_from_document(doc: Any, where: str = "schema") -> DatasetSchema:
    if not isinstance(doc, dict) or "name" not in doc or "columns" not in doc:
        raise FormatError("schema must be an object with 'name' and 'columns'", where)
    try:
        return DatasetSchema(
            name=str(doc["name"]),
            columns=tuple(
                Column(
                    name=str(c["name"]),
                    type=ColumnType(c["type"]),
                    role=ColumnRole(c.get("role", "none")),
                )
                for c in doc["columns"]
            ),
        )
    except (KeyError, ValueError, TypeError, InvalidSpec) as exc:
        raise FormatError(str(exc), where) from exc


def _json_value(value: Any) -> Any:
    if isinstance(value, datetime):
        return value.isoformat()
    return value


def result_table_to_document(table: ResultTable) -> dict:
    return {
        "columns": [{"label": label, "type": t.value} for label, t in table.columns],
        "rows": [[_json_value(v) for v in row] for row in table.rows],
    }


def rows_iter(dataset: Dataset) -> Iterable[dict[str, Any]]:
    names = [c.name for c in dataset.schema.columns]
    for i in range(dataset.row_count):
        yield {n: dataset.columns[n][i] for n in names}
