"""Self-prompting pipeline stages: intent, query plan, pre-answer, key sentences.

Each stage renders its operating prompt, parses the provider's reply into a
typed result, and degrades explicitly (never silently) when the reply does
not parse.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field

from carbonlens import text as T
from carbonlens.errors import IntentParseError, PreconditionError
from carbonlens.llm.provider import ChatRequest, LlmProvider
from carbonlens.llm.templates import get_template

MAX_KEY_SENTENCES = 8
DEFAULT_VARIANTS = 2


class IntentLabel(enum.Enum):
    NO_RETRIEVAL = "Does not require"
    POLICY_RELATED = "Related to policy"
    REQUIRES_QUERY = "Requires query"
    POLICY_AND_QUERY = "Related to policy and requires query"


def parse_intent(raw: str) -> IntentLabel:
    """Strict parse of the four classifier output strings."""
    cleaned = raw.strip().strip(".。").strip()
    for label in IntentLabel:
        if cleaned.lower() == label.value.lower():
            return label
    raise IntentParseError(f"not an intent label: {raw!r}")


def format_intent(label: IntentLabel) -> str:
    return label.value


def classify_intent(question: str, provider: LlmProvider) -> IntentLabel:
    if not question.strip():
        raise PreconditionError("question must be non-empty")
    prompt = get_template("P4").render({"query": question})
    return parse_intent(provider.complete(ChatRequest(rendered_prompt=prompt)))


@dataclass
class QueryPlan:
    original: str
    sub_queries: list[str]
    resolved_ambiguities: list[str] = field(default_factory=list)
    core_intent: str = ""
    abstract_form: str = ""
    variants: list[str] = field(default_factory=list)
    degraded: bool = False


_PART_RE = re.compile(r"^\s*(\d)\s*[.)::]\s*(.*)$")
_BULLET_RE = re.compile(r"^\s*(?:[-*•]|\d+\s*[.)::])\s*")


def _split_numbered_parts(raw: str) -> dict[int, list[str]]:
    parts: dict[int, list[str]] = {}
    current: int | None = None
    for line in raw.splitlines():
        if not line.strip():
            continue
        m = _PART_RE.match(line)
        if m and 1 <= int(m.group(1)) <= 5:
            current = int(m.group(1))
            parts.setdefault(current, [])
            rest = m.group(2).strip()
            if rest:
                parts[current].append(rest)
        elif current is not None:
            parts[current].append(_BULLET_RE.sub("", line).strip())
    return parts


def _split_items(lines: list[str]) -> list[str]:
    items = []
    for line in lines:
        for piece in re.split(r"\s*;\s*", line):
            piece = _BULLET_RE.sub("", piece).strip()
            if piece:
                items.append(piece)
    return items


_VARIANT_ADDENDUM = (
    "\n5.Provide {n} diverse alternative expressions of the query, one per line."
)


def rewrite_query(
    question: str, provider: LlmProvider, n_variants: int = DEFAULT_VARIANTS
) -> QueryPlan:
    """Decompose the question via the four-part rewrite prompt (plus a variants
    request); a reply missing part 1 degrades to the original as sole sub-query."""
    if not question.strip():
        raise PreconditionError("question must be non-empty")
    prompt = get_template("P5").render({"query": question}) + _VARIANT_ADDENDUM.format(
        n=n_variants
    )
    raw = provider.complete(ChatRequest(rendered_prompt=prompt))
    parts = _split_numbered_parts(raw)

    sub_queries = _split_items(parts.get(1, []))
    degraded = not sub_queries
    if degraded:
        sub_queries = [question]
    else:
        deduped = list(dict.fromkeys(sub_queries))
        sub_queries = deduped

    variants = _split_items(parts.get(5, []))
    variants = [v for v in dict.fromkeys(variants) if v != question][:n_variants]

    return QueryPlan(
        original=question,
        sub_queries=sub_queries,
        resolved_ambiguities=_split_items(parts.get(2, [])),
        core_intent=" ".join(parts.get(3, [])).strip(),
        abstract_form=" ".join(parts.get(4, [])).strip(),
        variants=variants,
        degraded=degraded,
    )


@dataclass
class CotPreAnswer:
    background: str
    key_factors: list[str]
    challenges: str
    full_text: str
    over_length: bool = False


_COT_SECTION_RE = re.compile(
    r"(?im)^\s*(background|key factors|key elements|challenges|considerations)\s*[::]\s*"
)


def pre_answer_cot(question: str, provider: LlmProvider) -> CotPreAnswer:
    """Reasoned pre-answer in three labeled sections; 100-word limit is soft."""
    if not question.strip():
        raise PreconditionError("question must be non-empty")
    prompt = get_template("P2").render({"query": question})
    raw = provider.complete(ChatRequest(rendered_prompt=prompt)).strip()

    background, challenges = "", ""
    key_factors: list[str] = []
    pieces = _COT_SECTION_RE.split(raw)
    if len(pieces) >= 3:
        for i in range(1, len(pieces) - 1, 2):
            label = pieces[i].lower()
            content = pieces[i + 1].strip()
            if label == "background":
                background = content
            elif label in ("key factors", "key elements"):
                key_factors = _split_items(content.splitlines())
            else:
                challenges = content

    words = len(raw.split())
    return CotPreAnswer(
        background=background,
        key_factors=key_factors,
        challenges=challenges,
        full_text=raw,
        over_length=words > 100,
    )


@dataclass
class KeySentences:
    sentences: list[str]
    truncated: bool = False
    non_extractive: list[int] = field(default_factory=list)


def extract_key_sentences(source_text: str, provider: LlmProvider) -> KeySentences:
    """At most 8 key sentences; extras are cut and flagged. Sentences that are
    not substrings of the source (after whitespace normalization) are flagged
    non-extractive but kept."""
    if not source_text.strip():
        raise PreconditionError("text must be non-empty")
    prompt = get_template("P3").render({"text": source_text})
    raw = provider.complete(ChatRequest(rendered_prompt=prompt))
    lines = [_BULLET_RE.sub("", ln).strip() for ln in raw.splitlines()]
    sentences = [ln for ln in lines if ln]
    truncated = len(sentences) > MAX_KEY_SENTENCES
    sentences = sentences[:MAX_KEY_SENTENCES]
    normalized_source = T.normalize_ws(source_text).lower()
    non_extractive = [
        i
        for i, s in enumerate(sentences)
        if T.normalize_ws(s).lower() not in normalized_source
    ]
    return KeySentences(sentences=sentences, truncated=truncated, non_extractive=non_extractive)
