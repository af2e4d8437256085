"""The question-answering pipeline.

Stage order: intent classification routes the question; unless the intent
needs no retrieval, the query is rewritten and diversified, a reasoned
pre-answer supplies key sentences, rewrites and key sentences retrieve
jointly through fusion + rerank, the context is trimmed to the token
budget, and the grounded-answer prompt produces the reply (quoting source
text, or nothing when no content fits). Query-intent questions additionally
run the SQL path, and every answer passes the hallucination screen.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from carbonlens.errors import CarbonLensError, EmptyQuery, IntentParseError, PreconditionError
from carbonlens.ingest.chunks import Chunk
from carbonlens.llm.budget import TokenBudget, trim_context
from carbonlens.llm.provider import ChatRequest, LlmProvider
from carbonlens.llm.templates import get_template
from carbonlens.nl2sql.service import SqlDeps
from carbonlens.nl2sql.service import run as sql_run
from carbonlens.rag.stages import (
    IntentLabel,
    classify_intent,
    extract_key_sentences,
    pre_answer_cot,
    rewrite_query,
)
from carbonlens.retrieval.fusion import FusionConfig, RetrievalHit, SearchIndexes, rerank_final
from carbonlens.retrieval.reranker import JaccardReranker, Reranker


class StageFailure(CarbonLensError):
    """A pipeline stage raised; carries the stage name for error surfaces."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"{stage}: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class PipelineOptions:
    use_cot: bool = True
    hybrid_retrieval: bool = True
    n_variants: int = 2
    adjudicate_hallucinations: bool = True


@dataclass
class PipelineDeps:
    indexes: SearchIndexes
    provider: LlmProvider
    reranker: Reranker = field(default_factory=JaccardReranker)
    fusion: FusionConfig = field(default_factory=FusionConfig)
    budget: TokenBudget = field(default_factory=TokenBudget)
    doc_titles: dict[str, str] = field(default_factory=dict)
    sql: SqlDeps | None = None
    options: PipelineOptions = field(default_factory=PipelineOptions)
    on_stage: object = None  # callable(stage_dict) for streaming surfaces


@dataclass
class AnswerBundle:
    question: str
    answer: str
    intent: str
    citations: list[dict] = field(default_factory=list)
    sql: dict | None = None
    hallucination_marks: list[dict] = field(default_factory=list)
    corrected_answer: str | None = None
    stages: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "question": self.question,
            "answer": self.answer,
            "intent": self.intent,
            "citations": self.citations,
            "sql": self.sql,
            "hallucination_marks": self.hallucination_marks,
            "corrected_answer": self.corrected_answer,
            "stages": self.stages,
        }


def _stage(
    bundle: AnswerBundle,
    name: str,
    status: str = "ok",
    flags: list[str] | None = None,
    on_stage=None,
):
    entry = {"stage": name, "status": status, "flags": flags or []}
    bundle.stages.append(entry)
    if on_stage is not None:
        on_stage(entry)


def _citation(chunk: Chunk, doc_titles: dict[str, str]) -> dict:
    return {
        "chunk_id": chunk.chunk_id,
        "doc_id": chunk.doc_id,
        "doc_title": doc_titles.get(chunk.doc_id, chunk.doc_id),
        "title_path": list(chunk.title_path),
        "page_start": chunk.page_start,
        "page_end": chunk.page_end,
    }


def retrieve_hits(
    sub_queries: list[str],
    key_sentences: list[str],
    deps: PipelineDeps,
) -> list[RetrievalHit]:
    """Fused retrieval (or lexical-only when hybrid is toggled off), reranked."""
    if deps.options.hybrid_retrieval:
        return rerank_final(sub_queries, key_sentences, deps.indexes, deps.reranker, deps.fusion)
    queries = [q for q in list(sub_queries) + list(key_sentences) if q and q.strip()]
    if not queries:
        raise EmptyQuery("no non-empty sub-queries")
    best: dict[str, RetrievalHit] = {}
    lex = deps.indexes.lexical
    for q in queries:
        scores = lex.scores_for(q)
        for ordinal, cid in enumerate(lex.chunk_ids):
            score = float(scores[ordinal])
            hit = best.get(cid)
            if hit is None or score > hit.fused_score:
                best[cid] = RetrievalHit(
                    chunk_id=cid, bm25_rank=None, embed_rank=None, fused_score=score
                )
    candidates = sorted(best.values(), key=lambda h: (-h.fused_score, h.chunk_id))
    candidates = candidates[: deps.fusion.top_n]
    for hit in candidates:
        body = deps.indexes.body(hit.chunk_id)
        hit.rerank_score = max(deps.reranker.score(q, body) for q in queries)
    candidates.sort(key=lambda h: (-(h.rerank_score or 0.0), -h.fused_score, h.chunk_id))
    return candidates[: deps.fusion.final_k]


def run_pipeline(question: str, deps: PipelineDeps) -> AnswerBundle:
    if not question.strip():
        raise PreconditionError("question must be non-empty")
    try:
        return _run_pipeline(question, deps)
    except StageFailure:
        raise
    except CarbonLensError:
        raise
    except Exception as exc:  # provider/library failure inside a stage
        raise StageFailure("pipeline", exc) from exc


def _provider_call(stage: str, fn):
    from carbonlens.errors import NoScript, TransportError

    try:
        return fn()
    except (NoScript, TransportError) as exc:
        raise StageFailure(stage, exc) from exc


def _run_pipeline(question: str, deps: PipelineDeps) -> AnswerBundle:
    bundle = AnswerBundle(question=question, answer="", intent="")
    provider = deps.provider

    def stage(name, status="ok", flags=None):
        _stage(bundle, name, status, flags, deps.on_stage)

    # intent
    try:
        intent = _provider_call("classify_intent", lambda: classify_intent(question, provider))
        stage("classify_intent")
    except IntentParseError as exc:
        intent = IntentLabel.POLICY_AND_QUERY
        stage("classify_intent", "degraded", [f"fallback: {exc}"])
    bundle.intent = intent.name

    if intent is IntentLabel.NO_RETRIEVAL:
        prompt = get_template("P2").render({"query": question})
        bundle.answer = _provider_call(
            "direct_answer", lambda: provider.complete(ChatRequest(rendered_prompt=prompt))
        ).strip()
        stage("direct_answer")
        return bundle

    # query plan + key sentences
    sub_queries = [question]
    key_sentences: list[str] = []
    if deps.options.use_cot:
        plan = _provider_call(
            "rewrite_query", lambda: rewrite_query(question, provider, deps.options.n_variants)
        )
        stage(
            "rewrite_query",
            "degraded" if plan.degraded else "ok",
            ["original_only"] if plan.degraded else [],
        )
        sub_queries = list(dict.fromkeys(plan.sub_queries + plan.variants))

        cot = _provider_call("pre_answer_cot", lambda: pre_answer_cot(question, provider))
        cot_flags = ["over_length"] if cot.over_length else []
        stage("pre_answer_cot", "degraded" if not cot.full_text else "ok", cot_flags)

        ks_source = cot.full_text or question
        ks = _provider_call(
            "extract_key_sentences", lambda: extract_key_sentences(ks_source, provider)
        )
        ks_flags = (["truncated_to_8"] if ks.truncated else []) + (
            [f"non_extractive:{i}" for i in ks.non_extractive]
        )
        stage("extract_key_sentences", "ok", ks_flags)
        key_sentences = ks.sentences

    # retrieval + rerank
    hits = retrieve_hits(sub_queries, key_sentences, deps)
    stage("retrieve", "ok", [f"candidates:{len(hits)}"])

    scored_chunks = [
        (deps.indexes.chunks[h.chunk_id], h.rerank_score if h.rerank_score is not None else h.fused_score)
        for h in hits
    ]
    pre_trim = len(scored_chunks)
    trimmed = trim_context(scored_chunks, deps.budget)
    trim_flags = []
    if len(trimmed) < pre_trim:
        trim_flags.append(f"dropped:{pre_trim - len(trimmed)}")
    if any("truncated_to_budget" in c.flags for c in trimmed):
        trim_flags.append("truncated_last")
    stage("trim_context", "ok", trim_flags)

    # grounded answer
    answer = ""
    if trimmed:
        context = "\n".join(c.body for c in trimmed)
        prompt = get_template("P1").render({"context": context, "query": question})
        answer = _provider_call(
            "generate_answer", lambda: provider.complete(ChatRequest(rendered_prompt=prompt))
        ).strip()
    bundle.answer = answer
    if answer:
        bundle.citations = [_citation(c, deps.doc_titles) for c in trimmed]
        stage("generate_answer")
    else:
        bundle.citations = []
        stage("generate_answer", "ok", ["refusal_empty"])

    # SQL path for query intents
    if intent in (IntentLabel.REQUIRES_QUERY, IntentLabel.POLICY_AND_QUERY) and deps.sql:
        try:
            sql_result = sql_run(question, deps.sql)
            bundle.sql = sql_result.to_dict()
            stage("text2sql", "ok", sql_result.flags)
        except CarbonLensError as exc:
            bundle.sql = {"error": str(exc)}
            stage("text2sql", "error", [str(exc)])

    # hallucination screen
    if bundle.answer:
        from carbonlens.analysis.hallucination import detect_hallucinations

        evidence = [c.body for c in trimmed]
        sql_text = ""
        if bundle.sql and bundle.sql.get("result"):
            sql_text = str(bundle.sql["result"]["rows"])
        outcome = detect_hallucinations(
            bundle.answer,
            evidence,
            sql_text,
            provider if deps.options.adjudicate_hallucinations else None,
        )
        bundle.hallucination_marks = [m.to_dict() for m in outcome.marks]
        bundle.corrected_answer = outcome.corrected_answer
        stage("detect_hallucinations", "ok", outcome.flags)

    return bundle
