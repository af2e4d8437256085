"""Schema catalog and the in-process relational store.

Schema sidecar (one JSON per table):
    {"table": "emissions", "remarks": "...",
     "columns": [{"name": "co2_tonnes", "type": "real", "unit": "t", "comment": "..."}]}

Data is CSV with a header row, UTF-8; empty cells load as NULL.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path

from carbonlens.errors import ConfigError

COLUMN_TYPES = ("int", "real", "text", "date")


@dataclass(frozen=True)
class ColumnSchema:
    name: str
    type: str
    unit: str | None = None
    comment: str = ""

    def __post_init__(self):
        if self.type not in COLUMN_TYPES:
            raise ConfigError(f"column {self.name}: unknown type {self.type!r}")


@dataclass
class TableSchema:
    name: str
    columns: list[ColumnSchema]
    remarks: str = ""

    def __post_init__(self):
        names = [c.name for c in self.columns]
        if len(names) != len(set(names)):
            raise ConfigError(f"table {self.name}: duplicate column names")

    def column(self, name: str) -> ColumnSchema | None:
        return next((c for c in self.columns if c.name == name), None)

    def date_columns(self) -> list[str]:
        return [c.name for c in self.columns if c.type == "date"]

    def describe(self) -> str:
        cols = ", ".join(
            f"{c.name} {c.type}" + (f" ({c.unit})" if c.unit else "") + (f" -- {c.comment}" if c.comment else "")
            for c in self.columns
        )
        return f"table {self.name}: {cols}"


@dataclass
class SchemaCatalog:
    tables: dict[str, TableSchema] = field(default_factory=dict)
    remarks: str = ""

    def __post_init__(self):
        if not self.tables:
            return
        for name, schema in self.tables.items():
            if name != schema.name:
                raise ConfigError(f"catalog key {name!r} != table name {schema.name!r}")

    def table(self, name: str) -> TableSchema | None:
        return self.tables.get(name)

    def describe(self, names: list[str] | None = None) -> str:
        picked = names if names is not None else sorted(self.tables)
        return "\n".join(self.tables[n].describe() for n in picked if n in self.tables)


def load_catalog(directory: str | Path) -> SchemaCatalog:
    directory = Path(directory)
    tables: dict[str, TableSchema] = {}
    remarks: list[str] = []
    for path in sorted(directory.glob("*.json")):
        obj = json.loads(path.read_text("utf-8"))
        schema = TableSchema(
            name=obj["table"],
            columns=[
                ColumnSchema(
                    name=c["name"],
                    type=c["type"],
                    unit=c.get("unit"),
                    comment=c.get("comment", ""),
                )
                for c in obj["columns"]
            ],
            remarks=obj.get("remarks", ""),
        )
        if schema.name in tables:
            raise ConfigError(f"duplicate table {schema.name!r}")
        tables[schema.name] = schema
        if schema.remarks:
            remarks.append(f"{schema.name}: {schema.remarks}")
    if not tables:
        raise ConfigError(f"no schema sidecars in {directory}")
    return SchemaCatalog(tables=tables, remarks="\n".join(remarks))


Value = int | float | str | date | None


def _parse_value(raw: str, col_type: str) -> Value:
    if raw == "":
        return None
    if col_type == "int":
        return int(raw)
    if col_type == "real":
        return float(raw)
    if col_type == "date":
        return date.fromisoformat(raw)
    return raw


@dataclass
class DataStore:
    """Tables as row dicts, read-only during query execution."""

    rows: dict[str, list[dict[str, Value]]] = field(default_factory=dict)
    catalog: SchemaCatalog | None = None

    def table_rows(self, name: str) -> list[dict[str, Value]]:
        if name not in self.rows:
            raise ConfigError(f"table {name!r} not loaded")
        return self.rows[name]

    def max_date(self, table: str, column: str) -> date | None:
        values = [r[column] for r in self.table_rows(table) if r.get(column) is not None]
        return max(values) if values else None


def load_data_store(directory: str | Path, catalog: SchemaCatalog) -> DataStore:
    directory = Path(directory)
    store = DataStore(catalog=catalog)
    for name, schema in catalog.tables.items():
        path = directory / f"{name}.csv"
        if not path.exists():
            raise ConfigError(f"missing data file {path}")
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None:
                raise ConfigError(f"{path}: missing header row")
            missing = [c.name for c in schema.columns if c.name not in reader.fieldnames]
            if missing:
                raise ConfigError(f"{path}: missing columns {missing}")
            rows = []
            for raw in reader:
                rows.append(
                    {c.name: _parse_value(raw[c.name], c.type) for c in schema.columns}
                )
        store.rows[name] = rows
    return store
