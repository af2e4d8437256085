from carbonlens.retrieval.embedder import Embedder, HashingEmbedder
from carbonlens.retrieval.lexical import LexicalIndex
from carbonlens.retrieval.vector import VectorIndex
from carbonlens.retrieval.fusion import (
    FusionConfig,
    RetrievalHit,
    SearchIndexes,
    fuse_ranks,
    index_chunks,
    rerank_final,
)
from carbonlens.retrieval.reranker import JaccardReranker, Reranker
from carbonlens.retrieval.snapshot import load_indexes, save_indexes

__all__ = [
    "Embedder",
    "HashingEmbedder",
    "LexicalIndex",
    "VectorIndex",
    "FusionConfig",
    "RetrievalHit",
    "SearchIndexes",
    "fuse_ranks",
    "index_chunks",
    "rerank_final",
    "Reranker",
    "JaccardReranker",
    "load_indexes",
    "save_indexes",
]
