"""In-process relational execution of validated SELECT ASTs.

Semantics: WHERE filter, inner/left joins on equality, GROUP BY with
avg/sum/min/max/count (NULL excluded except count(*)), projection with
aliases, ORDER BY, LIMIT. Output order is ORDER BY when present, insertion
order otherwise.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import date

from carbonlens.errors import QueryExecutionError
from carbonlens.nl2sql.catalog import DataStore, Value
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


@dataclass
class QueryResult:
    columns: list[dict]  # {"name": ..., "alias": ...}
    rows: list[list[Value]]
    row_count: int

    def to_dict(self) -> dict:
        return {
            "columns": self.columns,
            "rows": [[_jsonable(v) for v in row] for row in self.rows],
            "row_count": self.row_count,
        }


def _jsonable(v: Value):
    return v.isoformat() if isinstance(v, date) else v


# -- row environment -------------------------------------------------------


class _Env:
    """One logical row: values keyed by (scope_name, column) and column."""

    __slots__ = ("values",)

    def __init__(self):
        self.values: dict[tuple[str | None, str], Value] = {}

    def put(self, scope_name: str, row: dict[str, Value]) -> None:
        for col, v in row.items():
            self.values[(scope_name, col)] = v
            self.values[(None, col)] = v

    def get(self, col: Column) -> Value:
        key = (col.table, col.name)
        if key in self.values:
            return self.values[key]
        raise QueryExecutionError(f"unknown column at runtime: {col.sql()}")

    def clone(self) -> "_Env":
        env = _Env()
        env.values = dict(self.values)
        return env


def _coerce_pair(a: Value, b: Value) -> tuple[Value, Value]:
    """Align a date with its ISO string form for comparisons."""
    if isinstance(a, date) and isinstance(b, str) and _ISO_DATE_RE.match(b):
        return a, date.fromisoformat(b)
    if isinstance(b, date) and isinstance(a, str) and _ISO_DATE_RE.match(a):
        return date.fromisoformat(a), b
    return a, b


def _compare(op: str, a: Value, b: Value) -> bool:
    if a is None or b is None:
        return False  # SQL three-valued logic collapses to not-matched
    a, b = _coerce_pair(a, b)
    if op == "=":
        return a == b
    if op == "!=":
        return a != b
    if op == "<":
        return a < b
    if op == "<=":
        return a <= b
    if op == ">":
        return a > b
    if op == ">=":
        return a >= b
    raise QueryExecutionError(f"unknown operator {op}")


def _eval_scalar(expr: Expr, env: _Env) -> Value:
    if isinstance(expr, Column):
        return env.get(expr)
    if isinstance(expr, Literal):
        return expr.value
    if isinstance(expr, Arith):
        left = _eval_scalar(expr.left, env)
        right = _eval_scalar(expr.right, env)
        if left is None or right is None:
            return None
        try:
            if expr.op == "+":
                return left + right
            if expr.op == "-":
                return left - right
            if expr.op == "*":
                return left * right
            return left / right
        except ZeroDivisionError as exc:
            raise QueryExecutionError(
                "division by zero", row_context={k[1]: v for k, v in env.values.items() if k[0] is None}
            ) from exc
    if isinstance(expr, Aggregate):
        raise QueryExecutionError(f"aggregate {expr.sql()} outside a grouped projection")
    raise QueryExecutionError(f"cannot evaluate {expr!r}")


def _eval_predicate(pred: Predicate, env: _Env) -> bool:
    if isinstance(pred, Comparison):
        return _compare(pred.op, _eval_scalar(pred.left, env), _eval_scalar(pred.right, env))
    if isinstance(pred, Between):
        v = _eval_scalar(pred.expr, env)
        lo = _eval_scalar(pred.low, env)
        hi = _eval_scalar(pred.high, env)
        if v is None or lo is None or hi is None:
            return False
        v, lo = _coerce_pair(v, lo)
        v, hi = _coerce_pair(v, hi)
        result = lo <= v <= hi
        return not result if pred.negated else result
    if isinstance(pred, InList):
        v = _eval_scalar(pred.expr, env)
        if v is None:
            return False
        hit = False
        for item in pred.items:
            iv = _eval_scalar(item, env)
            a, b = _coerce_pair(v, iv)
            if a == b:
                hit = True
                break
        return not hit if pred.negated else hit
    if isinstance(pred, Not):
        return not _eval_predicate(pred.operand, env)
    if isinstance(pred, And):
        return all(_eval_predicate(p, env) for p in pred.operands)
    if isinstance(pred, Or):
        return any(_eval_predicate(p, env) for p in pred.operands)
    raise QueryExecutionError(f"cannot evaluate predicate {pred!r}")


# -- aggregates -------------------------------------------------------------


def _aggregate_value(agg: Aggregate, group: list[_Env]) -> Value:
    if isinstance(agg.arg, Star):
        if agg.fn != "count":
            raise QueryExecutionError(f"{agg.fn}(*) is not defined")
        return len(group)
    values = [env.get(agg.arg) for env in group]
    values = [v for v in values if v is not None]  # NULL excluded from aggregates
    if agg.fn == "count":
        return len(values)
    if not values:
        return None
    if agg.fn == "sum":
        return sum(values)
    if agg.fn == "avg":
        return sum(values) / len(values)
    if agg.fn == "min":
        return min(values)
    if agg.fn == "max":
        return max(values)
    raise QueryExecutionError(f"unknown aggregate {agg.fn}")


def _eval_projection(expr: Expr, env_or_group: _Env | list[_Env], grouped: bool) -> Value:
    if grouped:
        group: list[_Env] = env_or_group  # type: ignore[assignment]
        if isinstance(expr, Aggregate):
            return _aggregate_value(expr, group)
        if isinstance(expr, Column):
            return group[0].get(expr)  # group key, identical across the group
        if isinstance(expr, Arith):
            left = _eval_projection(expr.left, group, True)
            right = _eval_projection(expr.right, group, True)
            if left is None or right is None:
                return None
            try:
                if expr.op == "+":
                    return left + right
                if expr.op == "-":
                    return left - right
                if expr.op == "*":
                    return left * right
                return left / right
            except ZeroDivisionError as exc:
                raise QueryExecutionError("division by zero in grouped projection") from exc
        if isinstance(expr, Literal):
            return expr.value
        raise QueryExecutionError(f"cannot evaluate grouped expression {expr!r}")
    return _eval_scalar(expr, env_or_group)  # type: ignore[arg-type]


# -- main -------------------------------------------------------------------


@dataclass
class ExecutionCounter:
    """Shared instrumentation: how many statements reached the executor."""

    executions: int = 0
    by_kind: dict = field(default_factory=dict)


def execute_sql(ast: SqlAst, store: DataStore, counter: ExecutionCounter | None = None) -> QueryResult:
    if ast.kind != "select":
        raise QueryExecutionError(f"refusing to execute kind={ast.kind}")
    if counter is not None:
        counter.executions += 1
        counter.by_kind[ast.kind] = counter.by_kind.get(ast.kind, 0) + 1

    # FROM and JOINs
    envs: list[_Env] = []
    base_scope = ast.from_alias or ast.from_table
    for row in store.table_rows(ast.from_table):
        env = _Env()
        env.put(base_scope, row)
        envs.append(env)

    for join in ast.joins:
        scope_name = join.alias or join.table
        right_rows = store.table_rows(join.table)
        joined: list[_Env] = []
        for env in envs:
            matched = False
            for row in right_rows:
                candidate = env.clone()
                candidate.put(scope_name, row)
                if join.on is None or _eval_predicate(join.on, candidate):
                    joined.append(candidate)
                    matched = True
            if not matched and join.kind == "left":
                candidate = env.clone()
                empty = {c.name: None for c in store.catalog.table(join.table).columns}
                candidate.put(scope_name, empty)
                joined.append(candidate)
        envs = joined

    if ast.where is not None:
        envs = [env for env in envs if _eval_predicate(ast.where, env)]

    grouped = bool(ast.group_by) or any(
        _contains_aggregate(item.expr) for item in ast.select_items
    )

    columns = [
        {"name": item.expr.sql(), "alias": item.alias or item.expr.sql()}
        for item in ast.select_items
    ]
    alias_to_expr = {item.alias: item.expr for item in ast.select_items if item.alias}

    if grouped:
        groups: dict[tuple, list[_Env]] = {}
        order: list[tuple] = []
        for env in envs:
            key = tuple(_eval_scalar(col, env) for col in ast.group_by)
            if key not in groups:
                groups[key] = []
                order.append(key)
            groups[key].append(env)
        if not ast.group_by:
            # aggregate over everything, even when empty
            groups = {(): envs}
            order = [()]
        out_rows = []
        sort_keys = []
        for key in order:
            group = groups[key]
            if not group and ast.group_by:
                continue
            row = [_eval_projection(item.expr, group, True) for item in ast.select_items]
            out_rows.append(row)
            if ast.order_by:
                sort_keys.append(
                    _order_key(ast.order_by, alias_to_expr, group, True, row, columns)
                )
    else:
        out_rows = []
        sort_keys = []
        for env in envs:
            row = [_eval_scalar(item.expr, env) for item in ast.select_items]
            out_rows.append(row)
            if ast.order_by:
                sort_keys.append(
                    _order_key(ast.order_by, alias_to_expr, env, False, row, columns)
                )

    if ast.order_by:
        paired = sorted(zip(sort_keys, range(len(out_rows))), key=lambda p: p[0])
        out_rows = [out_rows[i] for _, i in paired]

    if ast.limit is not None:
        out_rows = out_rows[: ast.limit]

    return QueryResult(columns=columns, rows=out_rows, row_count=len(out_rows))


def _contains_aggregate(expr: Expr) -> bool:
    if isinstance(expr, Aggregate):
        return True
    if isinstance(expr, Arith):
        return _contains_aggregate(expr.left) or _contains_aggregate(expr.right)
    return False


def _order_key(order_by, alias_to_expr, env_or_group, grouped, row, columns):
    key = []
    for expr, direction in order_by:
        if isinstance(expr, Column) and expr.table is None and expr.name in alias_to_expr:
            target = alias_to_expr[expr.name]
            value = _eval_projection(target, env_or_group, grouped)
        else:
            value = _eval_projection(expr, env_or_group, grouped)
        if isinstance(value, date):
            value = value.toordinal()
        sort_value = (0, 0) if value is None else (1, value)  # NULLs first
        key.append(_Desc(sort_value) if direction == "desc" else sort_value)
    return tuple(key)


class _Desc:
    """Inverts comparison order for DESC sort keys."""

    __slots__ = ("value",)

    def __init__(self, value):
        self.value = value

    def __lt__(self, other):
        return other.value < self.value

    def __eq__(self, other):
        return self.value == other.value
