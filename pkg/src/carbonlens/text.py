"""Deterministic text rules shared by every stage.

Two distinct rules, both fixed and documented:

* ``tokens``: matching tokens used wherever terms are compared (lexical
  index, ROUGE, overlap screens): lowercased alphanumeric runs, numbers
  kept whole (with decimal point / percent), CJK codepoints as single
  tokens.

* ``budget_units``: counting units used wherever tokens are *counted*
  (context budgets, window/overlap arithmetic, answer-length targets):
  each CJK codepoint is one unit; each non-CJK run splits into 4-char
  pieces, so a whitespace-delimited word of length L costs
  max(1, ceil(L/4)) units.
"""

from __future__ import annotations

import re

_CJK = "぀-ヿ㐀-䶿一-鿿가-힯"
_TOKEN_RE = re.compile(rf"[{_CJK}]|\d+(?:\.\d+)?%?|[^\W\d_]+")
_CJK_RE = re.compile(rf"[{_CJK}]")
_SENT_BOUNDARY_RE = re.compile(r"[.!?;。！？；\n]+")


def tokens(text: str) -> list[str]:
    """Matching tokens: lowercased words/numbers plus single CJK codepoints."""
    return [t.lower() for t in _TOKEN_RE.findall(text)]


def budget_spans(text: str) -> list[tuple[int, int]]:
    """Character spans of budget units.

    Span i runs from the unit's first character to the start of unit i+1
    (the last unit extends to the end of the text), so slicing between
    unit boundaries reconstructs the source exactly.
    """
    starts: list[int] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if _CJK_RE.match(ch):
            starts.append(i)
            i += 1
            continue
        # maximal non-CJK, non-space run, cut into 4-char pieces
        j = i
        while j < n and not text[j].isspace() and not _CJK_RE.match(text[j]):
            j += 1
        for k in range(i, j, 4):
            starts.append(k)
        i = j
    spans = []
    for idx, s in enumerate(starts):
        e = starts[idx + 1] if idx + 1 < len(starts) else n
        spans.append((s, e))
    return spans


def count_tokens(text: str) -> int:
    """Budget-unit count of *text* (see module docstring)."""
    return len(budget_spans(text))


def truncate_to_budget(text: str, limit: int) -> str:
    """Cut *text* at the budget-unit boundary that fits within *limit*."""
    if limit <= 0:
        return ""
    spans = budget_spans(text)
    if len(spans) <= limit:
        return text
    return text[: spans[limit - 1][1]].rstrip()


def sentence_spans(text: str) -> list[tuple[int, int]]:
    """Character spans of sentences, split on terminal punctuation/newlines.

    Spans include the trailing punctuation but not surrounding whitespace.
    """
    spans = []
    pos = 0
    for m in _SENT_BOUNDARY_RE.finditer(text):
        end = m.end()
        seg = text[pos:end]
        stripped = seg.strip()
        if stripped:
            start = pos + len(seg) - len(seg.lstrip())
            spans.append((start, start + len(stripped)))
        pos = end
    tail = text[pos:].strip()
    if tail:
        start = pos + len(text[pos:]) - len(text[pos:].lstrip())
        spans.append((start, start + len(tail)))
    return spans


def sentences(text: str) -> list[str]:
    return [text[s:e] for s, e in sentence_spans(text)]


def normalize_ws(text: str) -> str:
    """Collapse runs of whitespace to single spaces and strip the ends."""
    return re.sub(r"\s+", " ", text).strip()


def overlap_f1(a: str, b: str) -> float:
    """Token-set overlap F1 between two texts; 0.0 when either is empty."""
    ta, tb = set(tokens(a)), set(tokens(b))
    if not ta or not tb:
        return 0.0
    inter = len(ta & tb)
    if inter == 0:
        return 0.0
    p = inter / len(ta)
    r = inter / len(tb)
    return 2 * p * r / (p + r)


_NUMBER_RE = re.compile(r"\d+(?:[.,]\d+)*%?")


def number_tokens(text: str) -> list[str]:
    """Numeric literals appearing in *text*, normalized (commas stripped)."""
    return [m.group().replace(",", "") for m in _NUMBER_RE.finditer(text)]
