"""SQL evaluation: clause-level exact match and execution accuracy.

Exact match decomposes each clause into component sets (select aggregates
grouped per column, so avg(col1), max(col2), min(col1) becomes
{(avg,min),col1} and {(max,),col2}; plain columns; normalized predicates)
and compares them as unordered sets. Aliases and literal formatting are
excluded. Execution accuracy executes both statements and compares results
column-order-insensitively as row multisets.
"""

from __future__ import annotations

from collections import Counter, defaultdict

from carbonlens.errors import CarbonLensError
from carbonlens.nl2sql.catalog import DataStore, SchemaCatalog
from carbonlens.nl2sql.executor import ExecutionCounter, execute_sql
from carbonlens.nl2sql.parser import (
    Aggregate,
    And,
    Arith,
    Between,
    Column,
    Comparison,
    InList,
    Literal,
    Not,
    Or,
    SqlAst,
    Star,
    parse_sql,
)
from carbonlens.nl2sql.validate import validate_sql


def _norm_literal(value) -> str:
    if isinstance(value, float) and value.is_integer():
        return repr(int(value))
    return repr(value)


def _expr_key(expr) -> str:
    """Canonical alias-free form of an expression."""
    if isinstance(expr, Column):
        return expr.name  # table qualifiers excluded: single-source fixtures
    if isinstance(expr, Literal):
        return _norm_literal(expr.value)
    if isinstance(expr, Star):
        return "*"
    if isinstance(expr, Aggregate):
        return f"{expr.fn}({_expr_key(expr.arg)})"
    if isinstance(expr, Arith):
        return f"({_expr_key(expr.left)}{expr.op}{_expr_key(expr.right)})"
    return repr(expr)


_SYMMETRIC = {"=", "!="}
_FLIP = {"<": ">", "<=": ">=", ">": "<", ">=": "<="}


def _pred_key(pred) -> str:
    if isinstance(pred, Comparison):
        left, right = _expr_key(pred.left), _expr_key(pred.right)
        if pred.op in _SYMMETRIC:
            lo, hi = sorted((left, right))
            return f"{lo}{pred.op}{hi}"
        if left > right:
            return f"{right}{_FLIP[pred.op]}{left}"
        return f"{left}{pred.op}{right}"
    if isinstance(pred, Between):
        neg = "!" if pred.negated else ""
        return f"{neg}between({_expr_key(pred.expr)},{_expr_key(pred.low)},{_expr_key(pred.high)})"
    if isinstance(pred, InList):
        neg = "!" if pred.negated else ""
        items = ",".join(sorted(_expr_key(i) for i in pred.items))
        return f"{neg}in({_expr_key(pred.expr)},[{items}])"
    if isinstance(pred, Not):
        return f"not({_pred_key(pred.operand)})"
    if isinstance(pred, And):
        return "and(" + ",".join(sorted(_pred_key(p) for p in pred.operands)) + ")"
    if isinstance(pred, Or):
        return "or(" + ",".join(sorted(_pred_key(p) for p in pred.operands)) + ")"
    return repr(pred)


def _select_components(ast: SqlAst) -> frozenset:
    """Aggregates grouped per argument column; bare items keyed alias-free."""
    agg_by_arg: dict[str, set[str]] = defaultdict(set)
    plain: list[str] = []
    for item in ast.select_items:
        expr = item.expr
        if isinstance(expr, Aggregate):
            agg_by_arg[_expr_key(expr.arg)].add(expr.fn)
        else:
            plain.append(_expr_key(expr))
    components = {("agg", frozenset(fns), arg) for arg, fns in agg_by_arg.items()}
    components.update(("col", key) for key in plain)
    return frozenset(components)


def decompose(ast: SqlAst) -> dict:
    """Clause-by-clause component sets used for exact match."""
    return {
        "select": _select_components(ast),
        "from": frozenset(t for t, _ in ast.tables()),
        "joins": frozenset(
            (j.kind, j.table, _pred_key(j.on) if j.on else None) for j in ast.joins
        ),
        "where": _pred_key(ast.where) if ast.where is not None else None,
        "group_by": frozenset(c.name for c in ast.group_by),
        "order_by": tuple((_expr_key(e), d) for e, d in ast.order_by),
        "limit": ast.limit,
    }


def sql_exact_match(pred_sql: str, gold_sql: str) -> bool:
    pred = parse_sql(pred_sql)
    gold = parse_sql(gold_sql)
    if pred.kind != "select" or gold.kind != "select":
        return False
    return decompose(pred) == decompose(gold)


def _result_multiset(result) -> tuple:
    order = sorted(range(len(result.columns)), key=lambda i: result.columns[i]["alias"])
    aliases = tuple(result.columns[i]["alias"] for i in order)
    rows = Counter(tuple(_norm_cell(row[i]) for i in order) for row in result.rows)
    return aliases, rows


def _norm_cell(v):
    if isinstance(v, float) and v.is_integer():
        return int(v)
    from datetime import date

    if isinstance(v, date):
        return v.isoformat()
    return v


def sql_execution_accuracy(
    pred_sql: str,
    gold_sql: str,
    catalog: SchemaCatalog,
    store: DataStore,
    counter: ExecutionCounter | None = None,
    compare_aliases: bool = False,
) -> bool:
    """Execute both; equal row multisets (column order normalized) pass.

    A prediction that fails parsing or validation scores False. Aliases are
    ignored by default (only the value multisets must agree) since alias
    wording is presentation.
    """
    try:
        pred_ast = parse_sql(pred_sql)
        if not validate_sql(pred_ast, catalog).passed:
            return False
    except CarbonLensError:
        return False
    gold_ast = parse_sql(gold_sql)
    if not validate_sql(gold_ast, catalog).passed:
        raise CarbonLensError(f"gold SQL does not validate: {gold_sql}")
    try:
        pred_result = execute_sql(pred_ast, store, counter)
        gold_result = execute_sql(gold_ast, store, counter)
    except CarbonLensError:
        return False
    pred_aliases, pred_rows = _result_multiset(pred_result)
    gold_aliases, gold_rows = _result_multiset(gold_result)
    if compare_aliases and pred_aliases != gold_aliases:
        return False
    return pred_rows == gold_rows
