"""Ablation harness: run the pipeline under staged configurations and score
answers against references.

Five configurations ladder up from plain retrieval-and-generate to the full
pipeline: structured reasoning (rewrite/pre-answer/key sentences), diversified
indexing (structure-aware chunking vs naive fixed windows), and hybrid
retrieval (fusion vs lexical-only) toggle independently; the full config
enables everything.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path

from carbonlens.errors import EmptyDataset
from carbonlens.evalsuite.bertscore import bertscore
from carbonlens.evalsuite.rouge import rouge_l, rouge_n
from carbonlens.ingest.blocks import SourceDocument
from carbonlens.ingest.chunkers import ChunkingPolicy, chunk_document
from carbonlens.llm.provider import LlmProvider
from carbonlens.rag.pipeline import PipelineDeps, PipelineOptions, run_pipeline
from carbonlens.retrieval.embedder import Embedder, HashingEmbedder
from carbonlens.retrieval.fusion import FusionConfig, index_chunks


@dataclass(frozen=True)
class AblationConfig:
    name: str
    use_cot: bool
    diversified_index: bool
    hybrid_retrieval: bool

    @property
    def toggles(self) -> frozenset:
        out = set()
        if self.use_cot:
            out.add("cot")
        if self.diversified_index:
            out.add("diversified")
        if self.hybrid_retrieval:
            out.add("hybrid")
        return frozenset(out)


ABLATION_CONFIGS: tuple[AblationConfig, ...] = (
    AblationConfig("standard_rag", use_cot=False, diversified_index=False, hybrid_retrieval=False),
    AblationConfig("structured_cot", use_cot=True, diversified_index=False, hybrid_retrieval=False),
    AblationConfig("diversified_indexing", use_cot=False, diversified_index=True, hybrid_retrieval=False),
    AblationConfig("hybrid_retrieval", use_cot=False, diversified_index=False, hybrid_retrieval=True),
    AblationConfig("self_prompting_rag", use_cot=True, diversified_index=True, hybrid_retrieval=True),
)


@dataclass
class EvalScores:
    rouge1: float
    rouge2: float
    rougeL: float
    bert_precision: float
    bert_recall: float
    bert_f1: float

    def as_row(self) -> list[float]:
        return [
            self.rouge1,
            self.rouge2,
            self.rougeL,
            self.bert_precision,
            self.bert_recall,
            self.bert_f1,
        ]


METRIC_COLUMNS = ("ROUGE-1", "ROUGE-2", "ROUGE-L", "BERT-P", "BERT-R", "BERT-F1")


def score_pair(reference: str, candidate: str) -> EvalScores:
    p, r, f1 = bertscore(reference, candidate)
    return EvalScores(
        rouge1=rouge_n(reference, candidate, 1),
        rouge2=rouge_n(reference, candidate, 2),
        rougeL=rouge_l(reference, candidate),
        bert_precision=p,
        bert_recall=r,
        bert_f1=f1,
    )


def _mean(scores: list[EvalScores]) -> EvalScores:
    n = len(scores)
    cols = [s.as_row() for s in scores]
    sums = [sum(c[i] for c in cols) / n for i in range(6)]
    return EvalScores(*sums)


def load_dataset(path: str | Path) -> list[dict]:
    entries = []
    for line in Path(path).read_text("utf-8").splitlines():
        line = line.strip()
        if line:
            entries.append(json.loads(line))
    return entries


@dataclass
class AblationDeps:
    documents: list[SourceDocument]
    provider: LlmProvider
    embedder: Embedder = field(default_factory=HashingEmbedder)
    fusion: FusionConfig = field(default_factory=FusionConfig)
    # small enough that fixed windows cut across section boundaries, which is
    # exactly what structure-aware chunking is being compared against
    naive_window: int = 64


def _build_indexes(deps: AblationDeps, diversified: bool):
    chunks = []
    if diversified:
        for doc in deps.documents:
            chunks.extend(chunk_document(doc, ChunkingPolicy(strategy="document_tree")))
    else:
        policy = ChunkingPolicy(
            strategy="paragraph_sliding", window_tokens=deps.naive_window, overlap_tokens=0
        )
        for doc in deps.documents:
            chunks.extend(chunk_document(doc, policy))
    return index_chunks(chunks, deps.embedder)


def run_ablation(
    dataset: list[dict],
    configs: tuple[AblationConfig, ...],
    deps: AblationDeps,
) -> dict[str, EvalScores]:
    """Mean metric table {config name -> scores} over the QA dataset."""
    if not dataset:
        raise EmptyDataset("no QA pairs")
    results: dict[str, EvalScores] = {}
    indexes_cache: dict[bool, object] = {}
    for config in configs:
        if config.diversified_index not in indexes_cache:
            indexes_cache[config.diversified_index] = _build_indexes(deps, config.diversified_index)
        indexes = indexes_cache[config.diversified_index]
        pipeline_deps = PipelineDeps(
            indexes=indexes,
            provider=deps.provider,
            fusion=deps.fusion,
            options=PipelineOptions(
                use_cot=config.use_cot,
                hybrid_retrieval=config.hybrid_retrieval,
                adjudicate_hallucinations=False,
            ),
        )
        per_pair = []
        for entry in dataset:
            bundle = run_pipeline(entry["question"], pipeline_deps)
            answer = bundle.answer or ""
            per_pair.append(score_pair(entry["reference"], answer))
        results[config.name] = _mean(per_pair)
    return results


def render_markdown(results: dict[str, EvalScores]) -> str:
    lines = ["| Method | " + " | ".join(METRIC_COLUMNS) + " |"]
    lines.append("|" + "---|" * (len(METRIC_COLUMNS) + 1))
    for name, scores in results.items():
        cells = " | ".join(f"{v:.3f}" for v in scores.as_row())
        lines.append(f"| {name} | {cells} |")
    return "\n".join(lines) + "\n"


def render_csv(results: dict[str, EvalScores]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(("method",) + METRIC_COLUMNS)
    for name, scores in results.items():
        writer.writerow([name] + [f"{v:.6f}" for v in scores.as_row()])
    return buf.getvalue()
