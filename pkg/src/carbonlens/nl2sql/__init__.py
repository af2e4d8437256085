from carbonlens.nl2sql.timewin import TimeWindow, extract_time, resolve_time_phrases
from carbonlens.nl2sql.catalog import (
    ColumnSchema,
    DataStore,
    SchemaCatalog,
    TableSchema,
    load_catalog,
    load_data_store,
)
from carbonlens.nl2sql.parser import SqlAst, format_sql, parse_sql
from carbonlens.nl2sql.validate import ValidationReport, Violation, validate_sql
from carbonlens.nl2sql.executor import QueryResult, execute_sql
from carbonlens.nl2sql.fewshot import FewShotExample, FewShotStore
from carbonlens.nl2sql.service import (
    SqlRunResult,
    TableLocation,
    generate_sql,
    locate_tables,
    repair_sql,
    respond_no_match,
    run,
)

__all__ = [
    "TimeWindow",
    "extract_time",
    "resolve_time_phrases",
    "ColumnSchema",
    "DataStore",
    "SchemaCatalog",
    "TableSchema",
    "load_catalog",
    "load_data_store",
    "SqlAst",
    "format_sql",
    "parse_sql",
    "ValidationReport",
    "Violation",
    "validate_sql",
    "QueryResult",
    "execute_sql",
    "FewShotExample",
    "FewShotStore",
    "SqlRunResult",
    "TableLocation",
    "generate_sql",
    "locate_tables",
    "repair_sql",
    "respond_no_match",
    "run",
]
