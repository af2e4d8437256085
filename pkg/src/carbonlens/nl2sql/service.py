"""Question-to-result orchestration: time extraction and table localization
run concurrently, then generate, parse, validate, repair, rewrite for the
latest-date rule, and execute: with full provenance of every step.
"""

from __future__ import annotations

import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import date

from carbonlens.errors import ConfigError, GenerationError, RepairExhausted, UnsupportedSyntax
from carbonlens.llm.provider import ChatRequest, LlmProvider
from carbonlens.llm.templates import get_template
from carbonlens.nl2sql.catalog import DataStore, SchemaCatalog
from carbonlens.nl2sql.executor import ExecutionCounter, QueryResult, execute_sql
from carbonlens.nl2sql.fewshot import FewShotStore
from carbonlens.nl2sql.parser import And, Column, Comparison, Literal, SqlAst, format_sql, parse_sql
from carbonlens.nl2sql.timewin import TimeWindow, extract_time, format_time_info
from carbonlens.nl2sql.validate import ValidationReport, validate_sql
from carbonlens.retrieval.lexical import LexicalIndex


@dataclass
class TableLocation:
    names: list[str]
    low_confidence: bool = False


def locate_tables(question: str, catalog: SchemaCatalog, k: int = 3) -> TableLocation:
    """Rank tables by lexical overlap of the question with names, columns,
    and comments; zero overlap returns everything flagged low-confidence."""
    if not catalog.tables:
        raise ConfigError("catalog is empty")
    docs = {}
    for name, schema in sorted(catalog.tables.items()):
        parts = [name, name.replace("_", " ")]
        for col in schema.columns:
            parts.extend([col.name, col.name.replace("_", " "), col.comment or ""])
            if col.unit:
                parts.append(col.unit)
        if schema.remarks:
            parts.append(schema.remarks)
        docs[name] = " ".join(p for p in parts if p)
    index = LexicalIndex.build(docs)
    scores = index.scores_for(question)
    by_name = dict(zip(index.chunk_ids, scores))
    if all(s == 0.0 for s in by_name.values()):
        return TableLocation(names=sorted(catalog.tables), low_confidence=True)
    ranked = sorted(by_name, key=lambda n: (-by_name[n], n))
    return TableLocation(names=ranked[:k], low_confidence=False)


_FENCE_RE = re.compile(r"^```[a-zA-Z]*\s*|\s*```$")


def strip_fences(text: str) -> str:
    return _FENCE_RE.sub("", text.strip()).strip()


def generate_sql(
    question: str,
    time_info: dict[str, TimeWindow],
    tables: list[str],
    catalog: SchemaCatalog,
    samples: str,
    provider: LlmProvider,
) -> str:
    prompt = get_template("P6").render(
        {
            "query": question,
            "time_info": format_time_info(time_info),
            "table_info": catalog.describe(tables),
            "remarks": catalog.remarks or "none",
            "sample": samples,
        }
    )
    raw = provider.complete(ChatRequest(rendered_prompt=prompt))
    sql = strip_fences(raw)
    if not sql:
        raise GenerationError("provider returned no SQL")
    return sql


_REPAIR_ADDENDUM = (
    "\nSQL script: {sql}\nValidation problems: {problems}\n"
    "Return only the corrected MySQL statement."
)


def repair_sql(
    sql_text: str,
    violations,
    provider: LlmProvider,
    catalog: SchemaCatalog,
    max_rounds: int = 2,
) -> tuple[str, SqlAst, ValidationReport, list[dict]]:
    """Iterate provider repairs until validation passes or rounds run out.

    Returns (sql, ast, report, repair_log); raises RepairExhausted with the
    last report when every round fails.
    """
    repair_log: list[dict] = []
    current_sql = sql_text
    current_violations = violations
    last_report: ValidationReport | None = None
    for round_no in range(1, max_rounds + 1):
        problems = "; ".join(f"{v.code}: {v.detail}" for v in current_violations)
        prompt = get_template("P9").body + _REPAIR_ADDENDUM.format(
            sql=current_sql, problems=problems
        )
        raw = provider.complete(ChatRequest(rendered_prompt=prompt))
        candidate = strip_fences(raw)
        repair_log.append({"round": round_no, "sql": candidate, "problems": problems})
        if not candidate:
            continue
        current_sql = candidate
        try:
            ast = parse_sql(candidate)
        except UnsupportedSyntax as exc:
            report = ValidationReport()
            report.add("UnsupportedSyntax", str(exc))
            last_report = report
            current_violations = report.violations
            continue
        report = validate_sql(ast, catalog)
        last_report = report
        if report.passed:
            return candidate, ast, report, repair_log
        current_violations = report.violations
    raise RepairExhausted(last_report if last_report is not None else violations)


def respond_no_match() -> str:
    """The fixed no-data guidance text."""
    return get_template("P8").body


def _predicate_mentions(pred, names: set[str]) -> bool:
    if pred is None:
        return False
    if isinstance(pred, Comparison):
        return any(isinstance(s, Column) and s.name in names for s in (pred.left, pred.right))
    if isinstance(pred, (And,)):
        return any(_predicate_mentions(p, names) for p in pred.operands)
    for attr in ("operand", "operands"):
        inner = getattr(pred, attr, None)
        if inner is None:
            continue
        if isinstance(inner, tuple):
            return any(_predicate_mentions(p, names) for p in inner)
        return _predicate_mentions(inner, names)
    expr = getattr(pred, "expr", None)
    return isinstance(expr, Column) and expr.name in names


def apply_latest_date_rule(
    ast: SqlAst,
    catalog: SchemaCatalog,
    store: DataStore,
    time_info: dict[str, TimeWindow],
) -> tuple[SqlAst, bool]:
    """When no window was extracted and the query has no date predicate but
    its primary table has a date column, pin the query to the latest date."""
    if ast.kind != "select" or time_info or not ast.from_table:
        return ast, False
    schema = catalog.table(ast.from_table)
    if schema is None:
        return ast, False
    date_cols = schema.date_columns()
    if not date_cols:
        return ast, False
    if _predicate_mentions(ast.where, set(date_cols)):
        return ast, False
    column = date_cols[0]
    latest = store.max_date(ast.from_table, column)
    if latest is None:
        return ast, False
    pin = Comparison(op="=", left=Column(name=column), right=Literal(latest.isoformat()))
    ast.where = pin if ast.where is None else And((ast.where, pin))
    return ast, True


@dataclass
class SqlRunResult:
    question: str
    sql: str | None
    validation: ValidationReport | None
    result: QueryResult | None
    time_info: dict[str, TimeWindow] = field(default_factory=dict)
    tables: list[str] = field(default_factory=list)
    repairs: list[dict] = field(default_factory=list)
    flags: list[str] = field(default_factory=list)
    message: str | None = None

    def to_dict(self) -> dict:
        return {
            "question": self.question,
            "sql": self.sql,
            "validation": self.validation.to_dict() if self.validation else None,
            "result": self.result.to_dict() if self.result else None,
            "time_info": {k: w.format() for k, w in self.time_info.items()},
            "tables": self.tables,
            "repairs": self.repairs,
            "flags": self.flags,
            "message": self.message,
        }


@dataclass
class SqlDeps:
    catalog: SchemaCatalog
    store: DataStore
    provider: LlmProvider
    fewshot: FewShotStore | None = None
    now: date = date(2024, 3, 2)
    max_repair_rounds: int = 2
    counter: ExecutionCounter = field(default_factory=ExecutionCounter)


def run(question: str, deps: SqlDeps, execute: bool = True) -> SqlRunResult:
    """execute=False stops after validation: the human-approval flow."""
    out = SqlRunResult(question=question, sql=None, validation=None, result=None)

    with ThreadPoolExecutor(max_workers=2) as pool:
        time_future = pool.submit(extract_time, question, deps.now, deps.provider)
        tables_future = pool.submit(locate_tables, question, deps.catalog)
        try:
            out.time_info = time_future.result()
        except Exception as exc:
            out.flags.append(f"time_extraction_failed: {exc}")
            out.time_info = {}
        location = tables_future.result()
    out.tables = location.names
    if location.low_confidence:
        out.flags.append("table_localization_low_confidence")

    samples = deps.fewshot.render_samples(question) if deps.fewshot else "none"
    sql = generate_sql(question, out.time_info, out.tables, deps.catalog, samples, deps.provider)
    out.sql = sql

    try:
        ast = parse_sql(sql)
        report = validate_sql(ast, deps.catalog)
    except UnsupportedSyntax as exc:
        report = ValidationReport()
        report.add("UnsupportedSyntax", str(exc))
        ast = None

    if not report.passed:
        try:
            sql, ast, report, out.repairs = repair_sql(
                sql, report.violations, deps.provider, deps.catalog, deps.max_repair_rounds
            )
            out.sql = sql
        except RepairExhausted as exc:
            out.validation = exc.report if isinstance(exc.report, ValidationReport) else report
            out.flags.append("repair_exhausted")
            raise

    ast, pinned = apply_latest_date_rule(ast, deps.catalog, deps.store, out.time_info)
    if pinned:
        out.sql = format_sql(ast)
        out.flags.append("latest_date_applied")
        report = validate_sql(ast, deps.catalog)

    # final syntax check before touching the store
    final_ast = parse_sql(format_sql(ast))
    final_report = validate_sql(final_ast, deps.catalog)
    out.validation = final_report
    if not final_report.passed:
        out.flags.append("final_check_failed")
        return out

    if not execute:
        out.flags.append("execution_skipped")
        return out

    out.result = execute_sql(final_ast, deps.store, deps.counter)
    if out.result.row_count == 0:
        out.message = respond_no_match()
    if location.low_confidence and out.message is None:
        out.message = respond_no_match()
    return out
