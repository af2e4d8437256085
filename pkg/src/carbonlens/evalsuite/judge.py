"""Provider-scored relevance between an analysis dimension and an answer."""

from __future__ import annotations

import re

from carbonlens.errors import JudgeParseError
from carbonlens.llm.provider import ChatRequest, LlmProvider
from carbonlens.llm.templates import get_template

_INT_RE = re.compile(r"-?\d+")


def relevance_judge(dimension_text: str, answer: str, provider: LlmProvider) -> int:
    if not dimension_text.strip() or not answer.strip():
        raise ValueError("dimension text and answer must be non-empty")
    prompt = get_template("P10").render({"Dimension": dimension_text, "answer": answer})
    raw = provider.complete(ChatRequest(rendered_prompt=prompt))
    m = _INT_RE.search(raw)
    if not m:
        raise JudgeParseError(f"no integer score in {raw!r}")
    return min(100, max(0, int(m.group())))
