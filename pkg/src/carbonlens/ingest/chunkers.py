"""Rule-based, semantic, and sliding-window chunking strategies.

All strategies are pure functions of (document, policy). Title paths for
provenance come from the same shallower-title stack rule the document tree
uses, so citations stay consistent across strategies.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Protocol

from carbonlens import text as T
from carbonlens.errors import ConfigError
from carbonlens.ingest.blocks import Block, SourceDocument
from carbonlens.ingest.chunks import Chunk
from carbonlens.ingest.doctree import build_document_tree

STRATEGIES = ("document_tree", "rule_based", "semantic", "paragraph_sliding")


@dataclass
class ChunkingPolicy:
    strategy: str = "document_tree"
    window_tokens: int = 200
    overlap_tokens: int = 30
    rule_patterns: list[str] = field(default_factory=list)
    boundary_threshold: float = 0.6

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ConfigError(f"unknown strategy {self.strategy!r}")
        if not (0 <= self.overlap_tokens < self.window_tokens):
            raise ConfigError("require 0 <= overlap_tokens < window_tokens")
        if self.strategy == "rule_based" and not self.rule_patterns:
            raise ConfigError("rule_based strategy needs at least one pattern")
        if not (0.0 <= self.boundary_threshold <= 1.0):
            raise ConfigError("boundary_threshold must be in [0, 1]")


class BoundaryScorer(Protocol):
    """Scores the gap between two adjacent sentences; higher = more likely a boundary."""

    def score(self, prev: str, nxt: str) -> float: ...


class CosineGapScorer:
    """Default deterministic scorer: 1 - cosine of adjacent sentence vectors."""

    def __init__(self, embedder):
        self._embedder = embedder

    def score(self, prev: str, nxt: str) -> float:
        a = self._embedder.embed(prev)
        b = self._embedder.embed(nxt)
        cos = float(sum(x * y for x, y in zip(a, b)))
        return min(1.0, max(0.0, 1.0 - cos))


def _title_paths_by_block(doc: SourceDocument) -> list[tuple[str, ...]]:
    tree = build_document_tree(doc)
    return [node.title_path for node in tree.nodes]


def _text_blocks(doc: SourceDocument) -> list[tuple[int, Block, str]]:
    """(index, block, chunkable text) for non-title, non-table blocks."""
    out = []
    for i, b in enumerate(doc.blocks):
        if b.is_title or b.modality == "table":
            continue
        body = b.text
        if b.modality in ("formula", "image") and b.payload:
            body = b.payload.get("latex") or b.payload.get("caption") or b.text
        if body:
            out.append((i, b, body))
    return out


def chunk_rule_based(doc: SourceDocument, policy: ChunkingPolicy) -> list[Chunk]:
    """Split exactly at blocks matching any rule pattern.

    Every block lands in exactly one chunk; a document with no matching
    block becomes a single whole-document chunk flagged as a fallback.
    Chunk bodies join block texts with newlines, so joining chunk bodies
    with newlines reconstructs the block text stream.
    """
    if policy.strategy != "rule_based":
        raise ConfigError("policy.strategy must be rule_based")
    if not doc.blocks:
        return []
    patterns = [re.compile(p) for p in policy.rule_patterns]
    paths = _title_paths_by_block(doc)

    groups: list[list[int]] = []
    current: list[int] = []
    matched_any = False
    for i, block in enumerate(doc.blocks):
        if any(p.search(block.text) for p in patterns):
            matched_any = True
            if current:
                groups.append(current)
            current = [i]
        else:
            current.append(i)
    if current:
        groups.append(current)

    flags = () if matched_any else ("rule_fallback",)
    chunks = []
    for group in groups:
        blocks = [doc.blocks[i] for i in group]
        body = "\n".join(b.text for b in blocks)
        if not body.strip():
            continue
        chunks.append(
            Chunk.build(
                doc_id=doc.doc_id,
                title_path=paths[group[0]],
                body=body,
                pages=(min(b.page for b in blocks), max(b.page for b in blocks)),
                paragraph_indices=tuple(b.paragraph_index for b in blocks),
                timestamp=doc.timestamp,
                version=doc.version,
                flags=flags,
            )
        )
    return chunks


def chunk_semantic(
    doc: SourceDocument,
    scorer: BoundaryScorer,
    policy: ChunkingPolicy | None = None,
) -> list[Chunk]:
    """Place boundaries at sentence gaps whose score reaches the threshold."""
    threshold = (policy or ChunkingPolicy(strategy="semantic")).boundary_threshold
    items = _text_blocks(doc)
    if not items:
        return []

    sents: list[tuple[str, Block]] = []
    for _, block, body in items:
        for s in T.sentences(body):
            sents.append((s, block))

    if len(sents) < 2:
        body = " ".join(s for s, _ in sents) or items[0][2]
        block = items[0][1]
        return [
            Chunk.build(
                doc_id=doc.doc_id,
                title_path=_title_paths_by_block(doc)[items[0][0]],
                body=body,
                pages=(block.page, block.page),
                paragraph_indices=(block.paragraph_index,),
                timestamp=doc.timestamp,
                version=doc.version,
            )
        ]

    paths = _title_paths_by_block(doc)
    block_index = {id(b): i for i, b, _ in items}
    boundaries = [
        i + 1
        for i in range(len(sents) - 1)
        if scorer.score(sents[i][0], sents[i + 1][0]) >= threshold
    ]
    starts = [0] + boundaries
    ends = boundaries + [len(sents)]

    chunks = []
    for s, e in zip(starts, ends):
        part = sents[s:e]
        blocks = [b for _, b in part]
        body = " ".join(t for t, _ in part)
        chunks.append(
            Chunk.build(
                doc_id=doc.doc_id,
                title_path=paths[block_index[id(blocks[0])]],
                body=body,
                pages=(min(b.page for b in blocks), max(b.page for b in blocks)),
                paragraph_indices=tuple(dict.fromkeys(b.paragraph_index for b in blocks)),
                timestamp=doc.timestamp,
                version=doc.version,
            )
        )
    return chunks


def chunk_sliding(doc: SourceDocument, policy: ChunkingPolicy) -> list[Chunk]:
    """Keep paragraphs whole up to the window; slide over longer ones.

    Windows advance by (window - overlap) budget units; consecutive windows
    share exactly overlap_tokens units. Window bodies are exact source
    slices, so dropping each successor's leading overlap and concatenating
    reconstructs the paragraph byte-for-byte.
    """
    if policy.strategy != "paragraph_sliding":
        raise ConfigError("policy.strategy must be paragraph_sliding")
    window, overlap = policy.window_tokens, policy.overlap_tokens
    paths = _title_paths_by_block(doc)

    chunks = []
    for i, block, body_text in _text_blocks(doc):
        spans = T.budget_spans(body_text)
        n = len(spans)
        path = paths[i]
        if n <= window:
            chunks.append(_block_chunk(doc, block, path, body_text))
            continue
        stride = window - overlap
        start = 0
        while start < n:
            end = min(start + window, n)
            body = body_text[spans[start][0] : spans[end - 1][1]]
            chunks.append(_block_chunk(doc, block, path, body))
            if end == n:
                break
            start += stride
    return chunks


def _block_chunk(doc, block, path, body) -> Chunk:
    return Chunk.build(
        doc_id=doc.doc_id,
        title_path=path,
        body=body,
        pages=(block.page, block.page),
        paragraph_indices=(block.paragraph_index,),
        modality=block.modality,
        timestamp=doc.timestamp,
        version=doc.version,
    )


_SUMMARY_PROMPT = (
    "Summarize the following content in about {target} words, keeping the core "
    "keywords and any figures. Reply with the summary only.\nContent: {body}"
)


def summarize_long_chunk(
    chunk: Chunk,
    provider,
    *,
    window_tokens: int = 200,
    summary_target_words: int = 60,
    warnings: list[str] | None = None,
) -> Chunk:
    """Attach a provider-written summary to chunks longer than the window.

    On provider failure the chunk is returned untouched and a warning is
    recorded; short chunks pass through unchanged.
    """
    from carbonlens.llm.provider import ChatRequest

    if T.count_tokens(chunk.body) <= window_tokens:
        return chunk
    prompt = _SUMMARY_PROMPT.format(target=summary_target_words, body=chunk.body)
    try:
        summary = provider.complete(ChatRequest(rendered_prompt=prompt)).strip()
    except Exception as exc:
        if warnings is not None:
            warnings.append(f"summary failed for {chunk.chunk_id}: {exc}")
        return chunk
    if not summary:
        if warnings is not None:
            warnings.append(f"summary empty for {chunk.chunk_id}")
        return chunk
    return chunk.with_summary(summary)


def chunk_document(
    doc: SourceDocument,
    policy: ChunkingPolicy,
    *,
    scorer: BoundaryScorer | None = None,
    summarizer: Callable[[Chunk], Chunk] | None = None,
) -> list[Chunk]:
    """Dispatch to the policy's strategy; optionally summarize long chunks."""
    if policy.strategy == "document_tree":
        from carbonlens.ingest.doctree import merge_tree_chunks

        chunks = merge_tree_chunks(build_document_tree(doc))
    elif policy.strategy == "rule_based":
        chunks = chunk_rule_based(doc, policy)
    elif policy.strategy == "semantic":
        if scorer is None:
            from carbonlens.retrieval.embedder import HashingEmbedder

            scorer = CosineGapScorer(HashingEmbedder())
        chunks = chunk_semantic(doc, scorer, policy)
    else:
        chunks = chunk_sliding(doc, policy)
    if summarizer is not None:
        chunks = [summarizer(c) for c in chunks]
    return chunks
