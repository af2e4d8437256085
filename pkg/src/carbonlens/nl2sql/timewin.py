"""Natural-language time-window resolution.

A deterministic rule layer handles the attested phrasings (yesterday, last
week, beginning of last month, this/last year, explicit dates, and the
recently/currently empty-map rule); anything else that still looks
time-related falls through to the provider's JSON extraction.
"""

from __future__ import annotations

import calendar
import json
import re
from dataclasses import dataclass
from datetime import date, timedelta

from carbonlens.errors import TimeParseError
from carbonlens.llm.provider import ChatRequest, LlmProvider
from carbonlens.llm.templates import get_template


@dataclass(frozen=True)
class TimeWindow:
    label: str
    start: date
    end: date

    def __post_init__(self):
        if self.start > self.end:
            raise TimeParseError(f"{self.label}: start {self.start} after end {self.end}")

    def format(self) -> str:
        return f"{self.start.isoformat()}~{self.end.isoformat()}"


_VAGUE_RE = re.compile(r"\b(recently|currently)\b", re.IGNORECASE)
_ISO_RANGE_RE = re.compile(r"(\d{4}-\d{2}-\d{2})\s*(?:~|to)\s*(\d{4}-\d{2}-\d{2})")
_ISO_DATE_RE = re.compile(r"\d{4}-\d{2}-\d{2}")
_TIME_CUE_RE = re.compile(
    r"\b(year|month|week|day|today|tomorrow|quarter|ago|since|until|"
    r"january|february|march|april|may|june|july|august|september|october|"
    r"november|december|q[1-4]|\d{4})\b",
    re.IGNORECASE,
)


def _prev_month(now: date) -> tuple[int, int]:
    if now.month == 1:
        return now.year - 1, 12
    return now.year, now.month - 1


def resolve_time_phrases(question: str, now: date) -> dict[str, TimeWindow] | None:
    """Rule layer. Returns None when nothing matched (provider should decide);
    returns {} when the question is vague (recently/currently) by contract."""
    if _VAGUE_RE.search(question):
        return {}

    q = question.lower()
    windows: dict[str, TimeWindow] = {}

    for m in _ISO_RANGE_RE.finditer(question):
        start = date.fromisoformat(m.group(1))
        end = date.fromisoformat(m.group(2))
        label = f"{m.group(1)}~{m.group(2)}"
        windows[label] = TimeWindow(label, start, end)
    if not windows:
        for m in _ISO_DATE_RE.finditer(question):
            d = date.fromisoformat(m.group())
            windows[m.group()] = TimeWindow(m.group(), d, d)

    if "yesterday" in q:
        d = now - timedelta(days=1)
        windows["Yesterday"] = TimeWindow("Yesterday", d, d)
    if "beginning of last month" in q:
        y, mth = _prev_month(now)
        windows["Beginning of last month"] = TimeWindow(
            "Beginning of last month", date(y, mth, 1), date(y, mth, 10)
        )
    elif "last month" in q:
        y, mth = _prev_month(now)
        last_day = calendar.monthrange(y, mth)[1]
        windows["Last month"] = TimeWindow("Last month", date(y, mth, 1), date(y, mth, last_day))
    if "last week" in q:
        monday_this = now - timedelta(days=now.weekday())
        start = monday_this - timedelta(days=7)
        windows["Last week"] = TimeWindow("Last week", start, start + timedelta(days=6))
    if "this year" in q:
        windows["This year"] = TimeWindow("This year", date(now.year, 1, 1), date(now.year, 12, 31))
    if "last year" in q:
        y = now.year - 1
        windows["Last year"] = TimeWindow("Last year", date(y, 1, 1), date(y, 12, 31))

    return windows or None


def _parse_provider_windows(raw: str) -> dict[str, TimeWindow]:
    raw = raw.strip()
    if raw.startswith("```"):
        raw = re.sub(r"^```[a-zA-Z]*\n?|```$", "", raw).strip()
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise TimeParseError(f"provider output is not JSON: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise TimeParseError("provider output must be a JSON object")
    windows = {}
    for label, value in obj.items():
        if not isinstance(value, str):
            raise TimeParseError(f"{label}: window must be a string")
        m = _ISO_RANGE_RE.fullmatch(value.strip())
        if not m:
            raise TimeParseError(f"{label}: {value!r} is not yyyy-MM-dd~yyyy-MM-dd")
        windows[label] = TimeWindow(label, date.fromisoformat(m.group(1)), date.fromisoformat(m.group(2)))
    return windows


def extract_time(
    question: str, now: date, provider: LlmProvider | None = None
) -> dict[str, TimeWindow]:
    """Resolve time windows; rules first, provider fallback for leftovers.

    A malformed provider response raises TimeParseError: callers proceed
    with an empty map plus the latest-date rule.
    """
    resolved = resolve_time_phrases(question, now)
    if resolved is not None:
        return resolved
    if provider is None or not _TIME_CUE_RE.search(question):
        return {}
    prompt = get_template("P7").render(
        {"query": question, "now_date_info": now.isoformat()}
    )
    raw = provider.complete(ChatRequest(rendered_prompt=prompt))
    return _parse_provider_windows(raw)


def format_time_info(windows: dict[str, TimeWindow]) -> str:
    """Render windows the way the SQL-generation prompt expects them."""
    if not windows:
        return "time information: none specified"
    parts = [f"{label}: {w.format()}" for label, w in windows.items()]
    return "time information: {" + ", ".join(parts) + "}"
