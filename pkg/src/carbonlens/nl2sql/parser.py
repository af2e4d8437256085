"""Recursive-descent parser for the read-only SQL subset.

Supported: SELECT list (columns, avg/sum/min/max/count aggregates,
arithmetic, aliases), FROM, INNER/LEFT JOIN ... ON, WHERE with AND/OR/NOT,
comparisons, BETWEEN, IN, GROUP BY, ORDER BY ASC/DESC, LIMIT. Non-SELECT
statement heads are parsed only far enough to classify the statement kind.

Anything outside the subset raises UnsupportedSyntax with the token and its
1-based character offset.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from carbonlens.errors import UnsupportedSyntax

AGGREGATES = ("avg", "sum", "min", "max", "count")
_KIND_BY_HEAD = {
    "select": "select",
    "insert": "insert",
    "update": "update",
    "delete": "delete",
    "create": "ddl",
    "drop": "ddl",
    "alter": "ddl",
    "truncate": "ddl",
    "replace": "insert",
}


# -- AST -----------------------------------------------------------------


@dataclass(frozen=True)
class Column:
    name: str
    table: str | None = None

    def sql(self) -> str:
        return f"{self.table}.{self.name}" if self.table else self.name


@dataclass(frozen=True)
class Literal:
    value: int | float | str

    def sql(self) -> str:
        if isinstance(self.value, str):
            return "'" + self.value.replace("'", "''") + "'"
        return repr(self.value)


@dataclass(frozen=True)
class Star:
    def sql(self) -> str:
        return "*"


@dataclass(frozen=True)
class Aggregate:
    fn: str
    arg: Column | Star

    def sql(self) -> str:
        return f"{self.fn}({self.arg.sql()})"


@dataclass(frozen=True)
class Arith:
    op: str
    left: "Expr"
    right: "Expr"

    def sql(self) -> str:
        return f"({self.left.sql()} {self.op} {self.right.sql()})"


Expr = Column | Literal | Star | Aggregate | Arith


@dataclass(frozen=True)
class Comparison:
    op: str
    left: Expr
    right: Expr

    def sql(self) -> str:
        return f"{self.left.sql()} {self.op} {self.right.sql()}"


@dataclass(frozen=True)
class Between:
    expr: Expr
    low: Expr
    high: Expr
    negated: bool = False

    def sql(self) -> str:
        neg = "NOT " if self.negated else ""
        return f"{self.expr.sql()} {neg}BETWEEN {self.low.sql()} AND {self.high.sql()}"


@dataclass(frozen=True)
class InList:
    expr: Expr
    items: tuple[Expr, ...]
    negated: bool = False

    def sql(self) -> str:
        neg = "NOT " if self.negated else ""
        return f"{self.expr.sql()} {neg}IN ({', '.join(i.sql() for i in self.items)})"


@dataclass(frozen=True)
class Not:
    operand: "Predicate"

    def sql(self) -> str:
        return f"NOT ({self.operand.sql()})"


@dataclass(frozen=True)
class And:
    operands: tuple["Predicate", ...]

    def sql(self) -> str:
        return " AND ".join(
            f"({o.sql()})" if isinstance(o, Or) else o.sql() for o in self.operands
        )


@dataclass(frozen=True)
class Or:
    operands: tuple["Predicate", ...]

    def sql(self) -> str:
        return " OR ".join(o.sql() for o in self.operands)


Predicate = Comparison | Between | InList | Not | And | Or


@dataclass(frozen=True)
class SelectItem:
    expr: Expr
    alias: str | None = None

    def sql(self) -> str:
        return f"{self.expr.sql()} AS {self.alias}" if self.alias else self.expr.sql()


@dataclass(frozen=True)
class Join:
    kind: str  # "inner" | "left"
    table: str
    alias: str | None = None
    on: Comparison | None = None

    def sql(self) -> str:
        head = "LEFT JOIN" if self.kind == "left" else "INNER JOIN"
        alias = f" {self.alias}" if self.alias else ""
        on = f" ON {self.on.sql()}" if self.on else ""
        return f"{head} {self.table}{alias}{on}"


@dataclass
class SqlAst:
    kind: str
    select_items: list[SelectItem] = field(default_factory=list)
    from_table: str | None = None
    from_alias: str | None = None
    joins: list[Join] = field(default_factory=list)
    where: Predicate | None = None
    group_by: list[Column] = field(default_factory=list)
    order_by: list[tuple[Expr, str]] = field(default_factory=list)
    limit: int | None = None
    raw: str = ""

    def tables(self) -> list[tuple[str, str | None]]:
        """(table, alias) pairs in scope."""
        out = []
        if self.from_table:
            out.append((self.from_table, self.from_alias))
        out.extend((j.table, j.alias) for j in self.joins)
        return out


def format_sql(ast: SqlAst) -> str:
    """Canonical text of a SELECT AST; reparses to a structurally equal AST."""
    if ast.kind != "select":
        return ast.raw
    parts = ["SELECT " + ", ".join(item.sql() for item in ast.select_items)]
    if ast.from_table:
        alias = f" {ast.from_alias}" if ast.from_alias else ""
        parts.append(f"FROM {ast.from_table}{alias}")
    for join in ast.joins:
        parts.append(join.sql())
    if ast.where is not None:
        parts.append("WHERE " + ast.where.sql())
    if ast.group_by:
        parts.append("GROUP BY " + ", ".join(c.sql() for c in ast.group_by))
    if ast.order_by:
        parts.append(
            "ORDER BY " + ", ".join(f"{e.sql()} {d.upper()}" for e, d in ast.order_by)
        )
    if ast.limit is not None:
        parts.append(f"LIMIT {ast.limit}")
    return " ".join(parts)


# -- tokenizer -----------------------------------------------------------


@dataclass(frozen=True)
class _Token:
    kind: str  # ident | number | string | symbol | eof
    value: str
    pos: int  # 1-based char offset


_TOKEN_RE = re.compile(
    r"\s+"
    r"|(?P<number>\d+(?:\.\d+)?)"
    r"|(?P<string>'(?:[^']|'')*')"
    r"|(?P<dquoted>\"(?:[^\"]|\"\")*\")"
    r"|(?P<ident>[^\W\d]\w*)"
    r"|(?P<symbol><=|>=|<>|!=|=|<|>|\(|\)|,|\.|\*|\+|-|/|;)",
    re.UNICODE,
)


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise UnsupportedSyntax(pos + 1, text[pos], "unrecognized character")
        if m.lastgroup == "number":
            tokens.append(_Token("number", m.group(), pos + 1))
        elif m.lastgroup == "string":
            tokens.append(_Token("string", m.group()[1:-1].replace("''", "'"), pos + 1))
        elif m.lastgroup == "dquoted":
            tokens.append(_Token("ident", m.group()[1:-1].replace('""', '"'), pos + 1))
        elif m.lastgroup == "ident":
            tokens.append(_Token("ident", m.group(), pos + 1))
        elif m.lastgroup == "symbol":
            tokens.append(_Token("symbol", m.group(), pos + 1))
        pos = m.end()
    tokens.append(_Token("eof", "", len(text) + 1))
    return tokens


# -- parser ----------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, tok: _Token, detail: str = "") -> UnsupportedSyntax:
        return UnsupportedSyntax(tok.pos, tok.value or "<end>", detail)

    def at_keyword(self, *words: str) -> bool:
        tok = self.peek()
        return tok.kind == "ident" and tok.value.lower() in words

    def take_keyword(self, *words: str) -> str | None:
        if self.at_keyword(*words):
            return self.advance().value.lower()
        return None

    def expect_keyword(self, word: str) -> None:
        if not self.take_keyword(word):
            raise self.error(self.peek(), f"expected {word.upper()}")

    def expect_symbol(self, sym: str) -> None:
        tok = self.peek()
        if tok.kind == "symbol" and tok.value == sym:
            self.advance()
            return
        raise self.error(tok, f"expected {sym!r}")

    def at_symbol(self, sym: str) -> bool:
        tok = self.peek()
        return tok.kind == "symbol" and tok.value == sym

    # -- grammar -----------------------------------------------------------

    def parse_statement(self) -> SqlAst:
        tok = self.peek()
        if tok.kind != "ident":
            raise self.error(tok, "expected a statement keyword")
        head = tok.value.lower()
        kind = _KIND_BY_HEAD.get(head, "other")
        if kind != "select":
            return SqlAst(kind=kind, raw=self.text)
        self.advance()
        ast = SqlAst(kind="select", raw=self.text)
        ast.select_items = self.parse_select_list()
        if self.take_keyword("from"):
            ast.from_table, ast.from_alias = self.parse_table_ref()
            while True:
                join = self.parse_join()
                if join is None:
                    break
                ast.joins.append(join)
        if self.take_keyword("where"):
            ast.where = self.parse_or()
        if self.at_keyword("group"):
            self.advance()
            self.expect_keyword("by")
            ast.group_by = [self.parse_column_ref()]
            while self.at_symbol(","):
                self.advance()
                ast.group_by.append(self.parse_column_ref())
        if self.at_keyword("order"):
            self.advance()
            self.expect_keyword("by")
            ast.order_by = [self.parse_order_item()]
            while self.at_symbol(","):
                self.advance()
                ast.order_by.append(self.parse_order_item())
        if self.take_keyword("limit"):
            tok = self.peek()
            if tok.kind != "number" or "." in tok.value:
                raise self.error(tok, "LIMIT takes an integer")
            ast.limit = int(self.advance().value)
        if self.at_symbol(";"):
            self.advance()
        tok = self.peek()
        if tok.kind != "eof":
            raise self.error(tok, "trailing input")
        return ast

    def parse_select_list(self) -> list[SelectItem]:
        if self.at_keyword("from") or self.peek().kind == "eof":
            raise self.error(self.peek(), "empty select list")
        items = [self.parse_select_item()]
        while self.at_symbol(","):
            self.advance()
            items.append(self.parse_select_item())
        return items

    def parse_select_item(self) -> SelectItem:
        expr = self.parse_expr()
        alias = None
        if self.take_keyword("as"):
            tok = self.peek()
            if tok.kind == "ident":
                alias = self.advance().value
            elif tok.kind == "string":
                alias = self.advance().value
            else:
                raise self.error(tok, "expected alias")
        elif self.peek().kind == "ident" and not self.at_keyword(
            "from", "where", "group", "order", "limit", "inner", "left", "join", "on", "and",
            "or", "not", "between", "in", "asc", "desc", "as",
        ):
            alias = self.advance().value
        return SelectItem(expr=expr, alias=alias)

    def parse_table_ref(self) -> tuple[str, str | None]:
        tok = self.peek()
        if tok.kind != "ident":
            raise self.error(tok, "expected table name")
        name = self.advance().value
        alias = None
        if self.peek().kind == "ident" and not self.at_keyword(
            "inner", "left", "join", "where", "group", "order", "limit", "on",
        ):
            alias = self.advance().value
        return name, alias

    def parse_join(self) -> Join | None:
        kind = None
        if self.at_keyword("inner"):
            self.advance()
            self.expect_keyword("join")
            kind = "inner"
        elif self.at_keyword("left"):
            self.advance()
            self.take_keyword("outer")
            self.expect_keyword("join")
            kind = "left"
        elif self.at_keyword("join"):
            self.advance()
            kind = "inner"
        else:
            return None
        table, alias = self.parse_table_ref()
        on = None
        if self.take_keyword("on"):
            left = self.parse_expr()
            tok = self.peek()
            if not (tok.kind == "symbol" and tok.value in ("=", "!=", "<>", "<", "<=", ">", ">=")):
                raise self.error(tok, "expected comparison in ON")
            op = self.advance().value
            right = self.parse_expr()
            on = Comparison(op="!=" if op == "<>" else op, left=left, right=right)
        return Join(kind=kind, table=table, alias=alias, on=on)

    def parse_order_item(self) -> tuple[Expr, str]:
        expr = self.parse_expr()
        direction = self.take_keyword("asc", "desc") or "asc"
        return expr, direction

    # predicates

    def parse_or(self) -> Predicate:
        parts = [self.parse_and()]
        while self.take_keyword("or"):
            parts.append(self.parse_and())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def parse_and(self) -> Predicate:
        parts = [self.parse_not()]
        while self.take_keyword("and"):
            parts.append(self.parse_not())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def parse_not(self) -> Predicate:
        if self.take_keyword("not"):
            return Not(self.parse_not())
        return self.parse_predicate_atom()

    def parse_predicate_atom(self) -> Predicate:
        if self.at_symbol("("):
            # could be a parenthesized predicate or an arithmetic group;
            # try predicate first, fall back to expression comparison
            save = self.i
            try:
                self.advance()
                inner = self.parse_or()
                self.expect_symbol(")")
                return inner
            except UnsupportedSyntax:
                self.i = save
        expr = self.parse_expr()
        negated = bool(self.take_keyword("not"))
        if self.take_keyword("between"):
            low = self.parse_expr()
            self.expect_keyword("and")
            high = self.parse_expr()
            return Between(expr=expr, low=low, high=high, negated=negated)
        if self.take_keyword("in"):
            self.expect_symbol("(")
            items = [self.parse_expr()]
            while self.at_symbol(","):
                self.advance()
                items.append(self.parse_expr())
            self.expect_symbol(")")
            return InList(expr=expr, items=tuple(items), negated=negated)
        if negated:
            raise self.error(self.peek(), "expected BETWEEN or IN after NOT")
        tok = self.peek()
        if tok.kind == "symbol" and tok.value in ("=", "!=", "<>", "<", "<=", ">", ">="):
            op = self.advance().value
            right = self.parse_expr()
            return Comparison(op="!=" if op == "<>" else op, left=expr, right=right)
        raise self.error(tok, "expected a comparison operator")

    # expressions

    def parse_expr(self) -> Expr:
        left = self.parse_term()
        while self.peek().kind == "symbol" and self.peek().value in ("+", "-"):
            op = self.advance().value
            left = Arith(op=op, left=left, right=self.parse_term())
        return left

    def parse_term(self) -> Expr:
        left = self.parse_factor()
        while self.peek().kind == "symbol" and self.peek().value in ("*", "/"):
            op = self.advance().value
            left = Arith(op=op, left=left, right=self.parse_factor())
        return left

    def parse_factor(self) -> Expr:
        tok = self.peek()
        if tok.kind == "symbol" and tok.value == "(":
            self.advance()
            inner = self.parse_expr()
            self.expect_symbol(")")
            return inner
        if tok.kind == "number":
            self.advance()
            return Literal(float(tok.value) if "." in tok.value else int(tok.value))
        if tok.kind == "string":
            self.advance()
            return Literal(tok.value)
        if tok.kind == "symbol" and tok.value == "-":
            self.advance()
            operand = self.parse_factor()
            if isinstance(operand, Literal) and isinstance(operand.value, (int, float)):
                return Literal(-operand.value)
            return Arith(op="-", left=Literal(0), right=operand)
        if tok.kind == "ident":
            name = tok.value
            if name.lower() in AGGREGATES and self.tokens[self.i + 1].value == "(":
                self.advance()
                self.advance()  # (
                if self.at_symbol("*"):
                    self.advance()
                    arg: Column | Star = Star()
                else:
                    arg = self.parse_column_ref()
                self.expect_symbol(")")
                return Aggregate(fn=name.lower(), arg=arg)
            if self._is_reserved(name):
                raise self.error(tok, "expected an expression")
            return self.parse_column_ref()
        raise self.error(tok, "expected an expression")

    _RESERVED = {
        "from", "where", "group", "order", "limit", "join", "inner", "left", "on",
        "and", "or", "not", "between", "in", "by", "asc", "desc", "as", "select",
    }

    def _is_reserved(self, word: str) -> bool:
        return word.lower() in self._RESERVED

    def parse_column_ref(self) -> Column:
        tok = self.peek()
        if tok.kind != "ident" or self._is_reserved(tok.value):
            raise self.error(tok, "expected column name")
        first = self.advance().value
        if self.at_symbol("."):
            self.advance()
            tok = self.peek()
            if tok.kind != "ident":
                raise self.error(tok, "expected column after '.'")
            return Column(name=self.advance().value, table=first)
        return Column(name=first)


def parse_sql(text: str) -> SqlAst:
    """Parse one statement; non-SELECT heads only classify the kind."""
    if not text or not text.strip():
        raise UnsupportedSyntax(1, "<empty>", "empty statement")
    return _Parser(text).parse_statement()
