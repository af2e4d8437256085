"""The 14-dimension report analysis pipeline: summaries, compliance scores,
customized questions, company profile, and report assembly."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Callable

from carbonlens import text as T
from carbonlens.analysis.dimensions import AnalysisDimension, load_dimensions
from carbonlens.analysis.hallucination import detect_hallucinations
from carbonlens.errors import ProfileParseError
from carbonlens.llm.budget import TokenBudget, trim_context
from carbonlens.llm.provider import ChatRequest, LlmProvider
from carbonlens.llm.templates import get_template
from carbonlens.rag.pipeline import PipelineDeps, run_pipeline
from carbonlens.retrieval.fusion import FusionConfig, SearchIndexes, rerank_final
from carbonlens.retrieval.reranker import JaccardReranker, Reranker

INSUFFICIENT_DISCLOSURE = (
    "The report provides insufficient disclosure for this dimension; no relevant "
    "content was retrieved."
)
DEFAULT_ANSWER_LENGTH = 150


@dataclass
class CompanyProfile:
    name: str | None = None
    sector: str | None = None
    report_year: int | None = None
    scopes_reported: list[str] = field(default_factory=list)
    flags: list[str] = field(default_factory=list)

    def describe(self) -> str:
        scopes = ", ".join(self.scopes_reported) if self.scopes_reported else "unstated"
        return (
            f"name: {self.name or 'unknown'}; sector: {self.sector or 'unknown'}; "
            f"report year: {self.report_year or 'unknown'}; scopes reported: {scopes}"
        )

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "sector": self.sector,
            "report_year": self.report_year,
            "scopes_reported": self.scopes_reported,
            "flags": self.flags,
        }


@dataclass
class DimensionAnswer:
    dimension_id: str
    analysis: str
    evidence: list[dict] = field(default_factory=list)
    hallucination_marks: list[dict] = field(default_factory=list)
    answer_length_target: int = DEFAULT_ANSWER_LENGTH
    flags: list[str] = field(default_factory=list)
    sql: dict | None = None  # populated for custom questions routed to SQL

    def to_dict(self) -> dict:
        return {
            "dimension_id": self.dimension_id,
            "analysis": self.analysis,
            "evidence": self.evidence,
            "hallucination_marks": self.hallucination_marks,
            "answer_length_target": self.answer_length_target,
            "flags": self.flags,
            "sql": self.sql,
        }


@dataclass
class ComplianceAssessment:
    dimension_id: str
    analysis: str
    score: int | None
    flags: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.score is not None and not (0 <= self.score <= 100):
            raise ValueError("score must be within [0, 100]")

    def to_dict(self) -> dict:
        return {
            "dimension_id": self.dimension_id,
            "analysis": self.analysis,
            "score": self.score,
            "flags": self.flags,
        }


@dataclass
class AnalysisDeps:
    indexes: SearchIndexes
    provider: LlmProvider
    dimensions: list[AnalysisDimension] = field(default_factory=load_dimensions)
    reranker: Reranker = field(default_factory=JaccardReranker)
    fusion: FusionConfig = field(default_factory=FusionConfig)
    budget: TokenBudget = field(default_factory=TokenBudget)
    doc_titles: dict[str, str] = field(default_factory=dict)
    answer_length: int = DEFAULT_ANSWER_LENGTH
    adjudicate: bool = True
    clock: Callable[[], str] = lambda: "1970-01-01T00:00:00Z"


def _citation(chunk, doc_titles) -> dict:
    return {
        "chunk_id": chunk.chunk_id,
        "doc_id": chunk.doc_id,
        "doc_title": doc_titles.get(chunk.doc_id, chunk.doc_id),
        "title_path": list(chunk.title_path),
        "page_start": chunk.page_start,
        "page_end": chunk.page_end,
    }


# fused scores are rank-based and always positive, so relevance gating uses
# the reranker: below this floor a hit shares essentially no tokens with the
# dimension's seed queries
MIN_RERANK_RELEVANCE = 0.01


def _retrieve_dimension_context(dim: AnalysisDimension, deps: AnalysisDeps):
    hits = rerank_final(list(dim.seed_queries), [], deps.indexes, deps.reranker, deps.fusion)
    relevant = [h for h in hits if (h.rerank_score or 0.0) >= MIN_RERANK_RELEVANCE]
    scored = [
        (deps.indexes.chunks[h.chunk_id], h.rerank_score if h.rerank_score is not None else h.fused_score)
        for h in relevant
    ]
    return trim_context(scored, deps.budget)


def summarize_report(deps: AnalysisDeps) -> list[DimensionAnswer]:
    """One summary per dimension, grounded in retrieved report content."""
    profile = get_company_profile(deps)
    answers = []
    for dim in deps.dimensions:
        trimmed = _retrieve_dimension_context(dim, deps)
        if not trimmed:
            answers.append(
                DimensionAnswer(
                    dimension_id=dim.id,
                    analysis=INSUFFICIENT_DISCLOSURE,
                    evidence=[],
                    answer_length_target=deps.answer_length,
                    flags=["no_retrieval_hits"],
                )
            )
            continue
        context = "\n".join(c.body for c in trimmed)
        prompt = get_template("S2").render(
            {
                "guideline": dim.guideline_text,
                "profile": profile.describe(),
                "context": context,
                "answer_length": str(deps.answer_length),
            }
        )
        analysis = deps.provider.complete(ChatRequest(rendered_prompt=prompt)).strip()
        flags = []
        if T.count_tokens(analysis) > 2 * deps.answer_length:
            analysis = T.truncate_to_budget(analysis, 2 * deps.answer_length)
            flags.append("truncated_to_length_target")
        outcome = detect_hallucinations(
            analysis,
            [c.body for c in trimmed],
            provider=deps.provider if deps.adjudicate else None,
        )
        answers.append(
            DimensionAnswer(
                dimension_id=dim.id,
                analysis=analysis,
                evidence=[_citation(c, deps.doc_titles) for c in trimmed],
                hallucination_marks=[m.to_dict() for m in outcome.marks],
                answer_length_target=deps.answer_length,
                flags=flags + outcome.flags,
            )
        )
    return answers


_SCORE_RE = re.compile(r"Score\s*(\d+)?\s*[::]\s*(-?\d+)")


def parse_score(raw: str) -> tuple[int | None, list[str]]:
    """Parse the trailing "ScoreN: X" (or "Score: X") integer; clamp to [0, 100]."""
    matches = _SCORE_RE.findall(raw)
    if not matches:
        return None, ["ScoreParseError"]
    value = int(matches[-1][1])
    flags = []
    if value < 0 or value > 100:
        flags.append("score_clamped")
        value = min(100, max(0, value))
    return value, flags


def evaluate_compliance(deps: AnalysisDeps) -> list[ComplianceAssessment]:
    """One compliance assessment (analysis + 0-100 score) per dimension."""
    assessments = []
    for dim in deps.dimensions:
        trimmed = _retrieve_dimension_context(dim, deps)
        if not trimmed:
            assessments.append(
                ComplianceAssessment(
                    dimension_id=dim.id,
                    analysis=INSUFFICIENT_DISCLOSURE,
                    score=0,
                    flags=["no_retrieval_hits"],
                )
            )
            continue
        context = "\n".join(c.body for c in trimmed)
        prompt = get_template("S3").render(
            {
                "guideline": dim.guideline_text,
                "context": context,
                "dimension_number": str(dim.number),
            }
        )
        raw = deps.provider.complete(ChatRequest(rendered_prompt=prompt)).strip()
        score, flags = parse_score(raw)
        analysis = _SCORE_RE.sub("", raw).strip()
        assessments.append(
            ComplianceAssessment(
                dimension_id=dim.id, analysis=analysis or raw, score=score, flags=flags
            )
        )
    return assessments


def answer_custom_question(
    question: str, pipeline_deps: PipelineDeps, answer_length: int = DEFAULT_ANSWER_LENGTH
) -> DimensionAnswer:
    """Customized question over the report's own index via the full pipeline.

    An empty grounded answer (nothing retrievable on-report) becomes the
    explicit insufficient-disclosure text; SQL results ride along when the
    question routed through the database path.
    """
    bundle = run_pipeline(question, pipeline_deps)
    flags = []
    if not bundle.answer:
        flags.append("no_retrieval_hits")
    return DimensionAnswer(
        dimension_id="custom",
        analysis=bundle.answer or INSUFFICIENT_DISCLOSURE,
        evidence=bundle.citations,
        hallucination_marks=bundle.hallucination_marks,
        answer_length_target=answer_length,
        flags=flags,
        sql=bundle.sql,
    )


def get_company_profile(deps: AnalysisDeps) -> CompanyProfile:
    """Extract {name, sector, report_year, scopes_reported} via the profile prompt."""
    chunks = sorted(deps.indexes.chunks.values(), key=lambda c: (c.doc_id, c.chunk_id))
    scored = [(c, 1.0) for c in chunks[:10]]
    trimmed = trim_context(scored, deps.budget)
    context = "\n".join(c.body for c in trimmed)
    prompt = get_template("S1").render({"context": context})
    raw = deps.provider.complete(ChatRequest(rendered_prompt=prompt)).strip()
    raw = re.sub(r"^```[a-zA-Z]*\s*|\s*```$", "", raw)
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ProfileParseError(f"profile output is not JSON: {exc.msg}") from exc
    flags = []
    year = obj.get("report_year")
    if year is not None:
        try:
            year = int(year)
            if not (1990 <= year <= 2100):
                flags.append("implausible_year_dropped")
                year = None
        except (TypeError, ValueError):
            flags.append("bad_year_dropped")
            year = None
    else:
        flags.append("missing_year")
    scopes = [s for s in (obj.get("scopes_reported") or []) if s in ("Scope1", "Scope2", "Scope3")]
    return CompanyProfile(
        name=obj.get("name"),
        sector=obj.get("sector"),
        report_year=year,
        scopes_reported=scopes,
        flags=flags,
    )


@dataclass
class AnalysisReportDocument:
    doc_id: str
    profile: CompanyProfile
    entries: list[dict]  # per dimension: answer + assessment merged
    metadata: dict

    def to_dict(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "profile": self.profile.to_dict(),
            "entries": self.entries,
            "metadata": self.metadata,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True, ensure_ascii=False)

    def to_markdown(self) -> str:
        lines = [f"# Carbon disclosure analysis: {self.profile.name or self.doc_id}", ""]
        lines.append(f"- Report year: {self.profile.report_year or 'unknown'}")
        lines.append(f"- Scopes reported: {', '.join(self.profile.scopes_reported) or 'unstated'}")
        lines.append("")
        for entry in self.entries:
            score = entry.get("score")
            shown = f"{score}/100" if score is not None else "unscored"
            lines.append(f"## {entry['dimension_id']}: {entry['title']} ({shown})")
            lines.append("")
            lines.append(entry.get("analysis") or "(no analysis)")
            if entry.get("assessment"):
                lines.append("")
                lines.append(f"**Compliance assessment.** {entry['assessment']}")
            if entry.get("hallucination_marks"):
                lines.append("")
                lines.append(f"_Flagged statements: {len(entry['hallucination_marks'])}_")
            lines.append("")
        return "\n".join(lines)


def assemble_report(
    doc_id: str,
    answers: list[DimensionAnswer],
    assessments: list[ComplianceAssessment],
    profile: CompanyProfile,
    dimensions: list[AnalysisDimension],
    metadata: dict | None = None,
) -> AnalysisReportDocument:
    """Merge answers and assessments into one ordered document; a missing
    assessment becomes a noted gap rather than an error."""
    by_answer = {a.dimension_id: a for a in answers}
    by_assessment = {a.dimension_id: a for a in assessments}
    entries = []
    for dim in dimensions:
        answer = by_answer.get(dim.id)
        assessment = by_assessment.get(dim.id)
        entry = {
            "dimension_id": dim.id,
            "title": dim.title,
            "analysis": answer.analysis if answer else None,
            "evidence": answer.evidence if answer else [],
            "hallucination_marks": answer.hallucination_marks if answer else [],
            "assessment": assessment.analysis if assessment else None,
            "score": assessment.score if assessment else None,
            "flags": sorted(
                set((answer.flags if answer else []) + (assessment.flags if assessment else []))
            ),
        }
        if answer is None:
            entry["flags"] = sorted(set(entry["flags"] + ["missing_answer"]))
        if assessment is None:
            entry["flags"] = sorted(set(entry["flags"] + ["missing_assessment"]))
        entries.append(entry)
    return AnalysisReportDocument(
        doc_id=doc_id,
        profile=profile,
        entries=entries,
        metadata=metadata or {},
    )
