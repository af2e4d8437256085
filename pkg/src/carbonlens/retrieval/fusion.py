"""Reciprocal-rank fusion of lexical and vector rankings, and the final rerank.

Fused score of a document with 1-based ranks r_lex and r_vec:

    score = lambda/(r_lex + c) + (1 - lambda)/(r_vec + c)

A document absent from one ranking contributes that term with the worst
rank, corpus size + 1, so the term stays smooth instead of vanishing.
The final rerank unions fused candidates over every query rewrite and key
sentence (keeping each chunk's maximum fused score), truncates to top_n,
and reorders by the reranker.
"""

from __future__ import annotations

from dataclasses import dataclass

from carbonlens.errors import ConfigError, EmptyQuery
from carbonlens.ingest.chunks import Chunk
from carbonlens.retrieval.embedder import Embedder
from carbonlens.retrieval.lexical import LexicalIndex
from carbonlens.retrieval.reranker import Reranker
from carbonlens.retrieval.vector import VectorIndex


@dataclass
class FusionConfig:
    lambda_: float = 0.5
    c: float = 60.0
    top_n: int = 20
    final_k: int = 5

    def __post_init__(self):
        if not (0.0 <= self.lambda_ <= 1.0):
            raise ConfigError("lambda must be in [0, 1]")
        if self.c <= 0:
            raise ConfigError("c must be positive")
        if self.top_n < 1 or self.final_k < 1:
            raise ConfigError("top_n and final_k must be >= 1")
        if self.final_k > self.top_n:
            raise ConfigError("final_k must be <= top_n")


@dataclass
class RetrievalHit:
    chunk_id: str
    bm25_rank: int | None
    embed_rank: int | None
    fused_score: float
    rerank_score: float | None = None

    def to_dict(self) -> dict:
        return {
            "chunk_id": self.chunk_id,
            "bm25_rank": self.bm25_rank,
            "embed_rank": self.embed_rank,
            "fused_score": self.fused_score,
            "rerank_score": self.rerank_score,
        }


def fused_score(bm25_rank: int, embed_rank: int, lambda_: float, c: float) -> float:
    return lambda_ / (bm25_rank + c) + (1.0 - lambda_) / (embed_rank + c)


def fuse_ranks(
    lex_ranking: list[str],
    vec_ranking: list[str],
    cfg: FusionConfig,
    corpus_size: int | None = None,
) -> list[RetrievalHit]:
    """Fuse two rankings; returns top_n hits, descending, ties by chunk_id."""
    if corpus_size is None:
        corpus_size = max(len(lex_ranking), len(vec_ranking))
    worst = corpus_size + 1
    lex_rank = {cid: r for r, cid in enumerate(lex_ranking, start=1)}
    vec_rank = {cid: r for r, cid in enumerate(vec_ranking, start=1)}
    hits = []
    for cid in sorted(set(lex_rank) | set(vec_rank)):
        rl = lex_rank.get(cid)
        rv = vec_rank.get(cid)
        score = fused_score(rl if rl else worst, rv if rv else worst, cfg.lambda_, cfg.c)
        hits.append(RetrievalHit(chunk_id=cid, bm25_rank=rl, embed_rank=rv, fused_score=score))
    hits.sort(key=lambda h: (-h.fused_score, h.chunk_id))
    return hits[: cfg.top_n]


@dataclass
class SearchIndexes:
    """The read-only bundle a retrieval pass needs."""

    lexical: LexicalIndex
    vector: VectorIndex
    embedder: Embedder
    chunks: dict[str, Chunk]

    def body(self, chunk_id: str) -> str:
        return self.chunks[chunk_id].body


def index_chunks(
    chunks: list[Chunk], embedder: Embedder, k1: float = 1.2, b: float = 0.75
) -> SearchIndexes:
    """Build both indexes; vectors use the summary when one is present."""
    if not chunks:
        raise ConfigError("cannot index an empty chunk list")
    if getattr(embedder, "dimension", 0) <= 0:
        raise ConfigError("embedder has zero dimension")
    bodies = {c.chunk_id: c.body for c in chunks}
    if len(bodies) != len(chunks):
        raise ConfigError("duplicate chunk ids")
    vectors = {}
    for c in chunks:
        vec = embedder.embed(c.summary if c.summary else c.body)
        vectors[c.chunk_id] = vec
        c.vector = [float(x) for x in vec]
    lexical = LexicalIndex.build(bodies, k1=k1, b=b)
    vector = VectorIndex.build(vectors, embedder.dimension)
    return SearchIndexes(
        lexical=lexical, vector=vector, embedder=embedder, chunks={c.chunk_id: c for c in chunks}
    )


def fused_scores_for_query(indexes: SearchIndexes, query: str, cfg: FusionConfig) -> dict[str, RetrievalHit]:
    """Fused scores over the whole corpus for one sub-query (no truncation)."""
    lex = indexes.lexical.full_ranking(query)
    vec = indexes.vector.full_ranking(indexes.embedder.embed(query))
    worst = indexes.lexical.size + 1
    lex_rank = {cid: r for r, cid in enumerate(lex, start=1)}
    vec_rank = {cid: r for r, cid in enumerate(vec, start=1)}
    out = {}
    for cid in indexes.lexical.chunk_ids:
        rl = lex_rank.get(cid, worst)
        rv = vec_rank.get(cid, worst)
        out[cid] = RetrievalHit(
            chunk_id=cid,
            bm25_rank=lex_rank.get(cid),
            embed_rank=vec_rank.get(cid),
            fused_score=fused_score(rl, rv, cfg.lambda_, cfg.c),
        )
    return out


def rerank_final(
    query_rewrites: list[str],
    key_sentences: list[str],
    indexes: SearchIndexes,
    reranker: Reranker,
    cfg: FusionConfig,
) -> list[RetrievalHit]:
    """Union fused candidates over all sub-queries, truncate, rerank.

    Each chunk keeps its maximum fused score across sub-queries; the
    reranker score is the maximum over sub-queries as well. Final order:
    rerank score desc, fused score desc, chunk_id asc; final_k returned.
    """
    sub_queries = [q for q in list(query_rewrites) + list(key_sentences) if q and q.strip()]
    if not sub_queries:
        raise EmptyQuery("no non-empty sub-queries")

    best: dict[str, RetrievalHit] = {}
    for q in sub_queries:
        for cid, hit in fused_scores_for_query(indexes, q, cfg).items():
            cur = best.get(cid)
            if cur is None or hit.fused_score > cur.fused_score:
                best[cid] = hit

    candidates = sorted(best.values(), key=lambda h: (-h.fused_score, h.chunk_id))[: cfg.top_n]
    for hit in candidates:
        body = indexes.body(hit.chunk_id)
        hit.rerank_score = max(reranker.score(q, body) for q in sub_queries)
    candidates.sort(key=lambda h: (-(h.rerank_score or 0.0), -h.fused_score, h.chunk_id))
    return candidates[: cfg.final_k]
