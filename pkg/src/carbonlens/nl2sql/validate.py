"""AST validation against the schema catalog: the read-only gate.

Everything that is not a SELECT over known tables/columns with sound types
and complete join conditions becomes a violation; execution is only ever
reached by a report with verdict "pass".
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from carbonlens.nl2sql.catalog import SchemaCatalog
from carbonlens.nl2sql.parser import (
    Aggregate,
    And,
    Arith,
    Between,
    Column,
    Comparison,
    Expr,
    InList,
    Literal,
    Not,
    Or,
    Predicate,
    SqlAst,
    Star,
)

_ISO_DATE_RE = re.compile(r"^\d{4}-\d{2}-\d{2}$")

CODES = (
    "ForbiddenStatement",
    "UnknownTable",
    "UnknownColumn",
    "MissingJoinCondition",
    "TypeMismatch",
    "UnsupportedSyntax",
)


@dataclass(frozen=True)
class Violation:
    code: str
    detail: str

    def to_dict(self) -> dict:
        return {"code": self.code, "detail": self.detail}


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return "pass" if not self.violations else "fail"

    @property
    def passed(self) -> bool:
        return not self.violations

    def add(self, code: str, detail: str) -> None:
        assert code in CODES
        self.violations.append(Violation(code, detail))

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "violations": [v.to_dict() for v in self.violations]}


class _Scope:
    """Column resolution over the tables in a statement's FROM/JOIN clauses."""

    def __init__(self, ast: SqlAst, catalog: SchemaCatalog, report: ValidationReport):
        self.catalog = catalog
        self.report = report
        self.tables: dict[str, str] = {}  # scope name (alias or table) -> table name
        for table, alias in ast.tables():
            if catalog.table(table) is None:
                report.add("UnknownTable", table)
                continue
            self.tables[alias or table] = table

    def resolve(self, col: Column) -> str | None:
        """Returns the column type, or None (violation recorded)."""
        if col.table is not None:
            table = self.tables.get(col.table)
            if table is None:
                self.report.add("UnknownTable", col.table)
                return None
            schema = self.catalog.table(table)
            c = schema.column(col.name) if schema else None
            if c is None:
                self.report.add("UnknownColumn", col.sql())
                return None
            return c.type
        hits = []
        for scope_name, table in self.tables.items():
            schema = self.catalog.table(table)
            c = schema.column(col.name) if schema else None
            if c is not None:
                hits.append(c.type)
        if not hits:
            self.report.add("UnknownColumn", col.name)
            return None
        if len(set(hits)) > 1 or len(hits) > 1:
            self.report.add("UnknownColumn", f"{col.name} is ambiguous")
            return None
        return hits[0]


def _literal_type(lit: Literal) -> str:
    if isinstance(lit.value, (int, float)):
        return "numeric"
    if _ISO_DATE_RE.match(lit.value):
        return "date_or_text"
    return "text"


def _type_class(col_type: str) -> str:
    return "numeric" if col_type in ("int", "real") else col_type


def _expr_type(expr: Expr, scope: _Scope) -> str | None:
    """Type class of an expression: numeric | date | text | date_or_text."""
    if isinstance(expr, Literal):
        return _literal_type(expr)
    if isinstance(expr, Column):
        t = scope.resolve(expr)
        return _type_class(t) if t else None
    if isinstance(expr, Star):
        scope.report.add("UnsupportedSyntax", "* outside count()")
        return None
    if isinstance(expr, Aggregate):
        if isinstance(expr.arg, Star):
            if expr.fn != "count":
                scope.report.add("UnsupportedSyntax", f"{expr.fn}(*)")
                return None
            return "numeric"
        arg_type = scope.resolve(expr.arg)
        if arg_type is None:
            return None
        if expr.fn in ("avg", "sum") and _type_class(arg_type) != "numeric":
            scope.report.add("TypeMismatch", f"{expr.fn}({expr.arg.sql()}) needs a numeric column")
            return None
        if expr.fn == "count":
            return "numeric"
        if expr.fn in ("min", "max"):
            return _type_class(arg_type)
        return "numeric"
    if isinstance(expr, Arith):
        lt = _expr_type(expr.left, scope)
        rt = _expr_type(expr.right, scope)
        for side in (lt, rt):
            if side is not None and side not in ("numeric",):
                scope.report.add("TypeMismatch", f"arithmetic on non-numeric operand in {expr.sql()}")
                return None
        return "numeric" if lt and rt else None
    scope.report.add("UnsupportedSyntax", repr(expr))
    return None


_COMPATIBLE = {
    ("numeric", "numeric"),
    ("text", "text"),
    ("date", "date"),
    ("date", "date_or_text"),
    ("date_or_text", "date"),
    ("text", "date_or_text"),
    ("date_or_text", "text"),
    ("date_or_text", "date_or_text"),
}


def _check_comparison(op_sql: str, lt: str | None, rt: str | None, report: ValidationReport) -> None:
    if lt is None or rt is None:
        return
    if (lt, rt) not in _COMPATIBLE:
        report.add("TypeMismatch", f"{op_sql}: {lt} vs {rt}")


def _walk_predicate(pred: Predicate, scope: _Scope) -> None:
    if isinstance(pred, Comparison):
        lt = _expr_type(pred.left, scope)
        rt = _expr_type(pred.right, scope)
        _check_comparison(pred.sql(), lt, rt, scope.report)
    elif isinstance(pred, Between):
        et = _expr_type(pred.expr, scope)
        for bound in (pred.low, pred.high):
            _check_comparison(pred.sql(), et, _expr_type(bound, scope), scope.report)
    elif isinstance(pred, InList):
        et = _expr_type(pred.expr, scope)
        for item in pred.items:
            _check_comparison(pred.sql(), et, _expr_type(item, scope), scope.report)
    elif isinstance(pred, Not):
        _walk_predicate(pred.operand, scope)
    elif isinstance(pred, (And, Or)):
        for p in pred.operands:
            _walk_predicate(p, scope)


def _bare_columns(expr: Expr) -> list[Column]:
    if isinstance(expr, Column):
        return [expr]
    if isinstance(expr, Arith):
        return _bare_columns(expr.left) + _bare_columns(expr.right)
    return []


def _has_aggregate(expr: Expr) -> bool:
    if isinstance(expr, Aggregate):
        return True
    if isinstance(expr, Arith):
        return _has_aggregate(expr.left) or _has_aggregate(expr.right)
    return False


def validate_sql(ast: SqlAst, catalog: SchemaCatalog) -> ValidationReport:
    report = ValidationReport()
    if ast.kind != "select":
        report.add("ForbiddenStatement", f"{ast.kind.upper()} statements are not allowed")
        return report
    if not ast.from_table:
        report.add("UnsupportedSyntax", "SELECT without FROM")
        return report

    scope = _Scope(ast, catalog, report)

    for join in ast.joins:
        if join.on is None:
            report.add("MissingJoinCondition", f"join on {join.table} lacks an ON predicate")
        else:
            lt = _expr_type(join.on.left, scope)
            rt = _expr_type(join.on.right, scope)
            _check_comparison(join.on.sql(), lt, rt, report)

    any_aggregate = any(_has_aggregate(item.expr) for item in ast.select_items)
    group_names = set()
    for col in ast.group_by:
        scope.resolve(col)
        group_names.add((col.table, col.name))

    for item in ast.select_items:
        _expr_type(item.expr, scope)
        if any_aggregate or ast.group_by:
            for col in _bare_columns(item.expr):
                if (col.table, col.name) not in group_names and (None, col.name) not in group_names:
                    report.add(
                        "UnsupportedSyntax",
                        f"column {col.sql()} must appear in GROUP BY alongside aggregates",
                    )

    if ast.where is not None:
        _walk_predicate(ast.where, scope)

    aliases = {item.alias for item in ast.select_items if item.alias}
    for expr, _dir in ast.order_by:
        if isinstance(expr, Column) and expr.table is None and expr.name in aliases:
            continue
        if any_aggregate or ast.group_by:
            if _has_aggregate(expr):
                continue
            for col in _bare_columns(expr):
                if (col.table, col.name) not in group_names and (None, col.name) not in group_names:
                    report.add("UnsupportedSyntax", f"ORDER BY {col.sql()} not in GROUP BY")
        else:
            _expr_type(expr, scope)

    return report
