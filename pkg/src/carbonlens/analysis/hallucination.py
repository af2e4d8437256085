"""Two-layer hallucination screening.

Layer (a) is deterministic: every answer sentence needs either a supporting
evidence sentence (token-overlap F1 at or above the threshold) or it becomes
a candidate mark; numbers that appear nowhere in the evidence or SQL result
are always marked. Layer (b) asks the provider to adjudicate and rewrite via
the verification prompt; if its sectioned output cannot be parsed, the
deterministic marks stand alone and the failure is flagged.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from carbonlens import text as T
from carbonlens.llm.provider import ChatRequest, LlmProvider
from carbonlens.llm.templates import get_template

SUPPORT_THRESHOLD = 0.35


@dataclass
class HallucinationMark:
    span: tuple[int, int]
    quoted_text: str
    reason: str
    corrected_text: str | None = None

    def to_dict(self) -> dict:
        return {
            "span": list(self.span),
            "quoted_text": self.quoted_text,
            "reason": self.reason,
            "corrected_text": self.corrected_text,
        }


def sentence_support(sentence: str, evidence_sentences: list[str]) -> float:
    """Best token-overlap F1 of *sentence* against any evidence sentence."""
    if not evidence_sentences:
        return 0.0
    return max(T.overlap_f1(sentence, ev) for ev in evidence_sentences)


def _number_key(token: str):
    """Value-based key so 325, 325.0, and 35% vs 35 percent ground each other."""
    bare = token.rstrip("%")
    try:
        return float(bare)
    except ValueError:
        return token


def screen_answer(
    answer: str,
    evidence_texts: list[str],
    sql_result_text: str = "",
    threshold: float = SUPPORT_THRESHOLD,
) -> list[HallucinationMark]:
    """Layer (a): deterministic support screen over answer sentences."""
    evidence_sentences = []
    for text in evidence_texts:
        evidence_sentences.extend(T.sentences(text))
    if sql_result_text:
        evidence_sentences.extend(T.sentences(sql_result_text))
    evidence_numbers = set()
    for text in evidence_texts:
        evidence_numbers.update(map(_number_key, T.number_tokens(text)))
    evidence_numbers.update(map(_number_key, T.number_tokens(sql_result_text)))

    marks = []
    for start, end in T.sentence_spans(answer):
        sentence = answer[start:end]
        support = sentence_support(sentence, evidence_sentences)
        novel_numbers = [
            n for n in T.number_tokens(sentence) if _number_key(n) not in evidence_numbers
        ]
        if novel_numbers:
            marks.append(
                HallucinationMark(
                    span=(start, end),
                    quoted_text=sentence,
                    reason=f"numbers {novel_numbers} appear in no evidence",
                )
            )
        elif support < threshold:
            marks.append(
                HallucinationMark(
                    span=(start, end),
                    quoted_text=sentence,
                    reason=f"support {support:.2f} below threshold {threshold}",
                )
            )
    return marks


_SECTION_RE = re.compile(
    r"\[(Hallucination Mark|Corrected Response|Reason Explanation)\]\s*[::]?\s*",
)


def _parse_adjudication(raw: str) -> dict[str, str] | None:
    pieces = _SECTION_RE.split(raw)
    if len(pieces) < 3:
        return None
    out: dict[str, str] = {}
    for i in range(1, len(pieces) - 1, 2):
        out[pieces[i]] = pieces[i + 1].strip()
    if "Corrected Response" not in out:
        return None
    return out


@dataclass
class DetectionOutcome:
    marks: list[HallucinationMark]
    corrected_answer: str
    flags: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "marks": [m.to_dict() for m in self.marks],
            "corrected_answer": self.corrected_answer,
            "flags": self.flags,
        }


def _strip_marked(answer: str, marks: list[HallucinationMark]) -> str:
    """Deterministic correction: drop marked sentences, keep the rest."""
    if not marks:
        return answer
    marked = {m.span for m in marks}
    kept = [answer[s:e] for s, e in T.sentence_spans(answer) if (s, e) not in marked]
    return " ".join(kept)


def detect_hallucinations(
    answer: str,
    evidence_texts: list[str],
    sql_result_text: str = "",
    provider: LlmProvider | None = None,
    threshold: float = SUPPORT_THRESHOLD,
) -> DetectionOutcome:
    """Screen (layer a) then adjudicate via the provider (layer b)."""
    if not answer.strip():
        raise ValueError("answer must be non-empty")
    marks = screen_answer(answer, evidence_texts, sql_result_text, threshold)
    corrected = _strip_marked(answer, marks)
    flags: list[str] = []

    if provider is not None and marks:
        prompt = get_template("P11").render(
            {
                "report_content": "\n".join(evidence_texts),
                "SQL_result": sql_result_text or "none",
                "generated_answer": answer,
            }
        )
        try:
            raw = provider.complete(ChatRequest(rendered_prompt=prompt))
            sections = _parse_adjudication(raw)
        except Exception as exc:
            sections = None
            flags.append(f"adjudication_failed: {exc}")
        if sections is None:
            if not flags:
                flags.append("adjudication_unparseable")
        else:
            corrected = sections["Corrected Response"]
            reason = sections.get("Reason Explanation", "")
            noted = sections.get("Hallucination Mark", "")
            for mark in marks:
                if reason:
                    mark.reason = f"{mark.reason}; adjudicated: {reason}"
                mark.corrected_text = corrected
            if noted:
                flags.append("adjudicated")
    return DetectionOutcome(marks=marks, corrected_answer=corrected, flags=flags)
