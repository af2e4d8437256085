from carbonlens.ingest.blocks import Block, SourceDocument, read_blocks_jsonl
from carbonlens.ingest.chunks import Chunk, chunk_id_for
from carbonlens.ingest.doctree import DocumentTree, build_document_tree, merge_tree_chunks
from carbonlens.ingest.chunkers import (
    BoundaryScorer,
    ChunkingPolicy,
    chunk_document,
    chunk_rule_based,
    chunk_semantic,
    chunk_sliding,
    summarize_long_chunk,
)
from carbonlens.ingest.tables import TableRecord, extract_tables
from carbonlens.ingest.store import ChangeSet, ChunkStore

__all__ = [
    "Block",
    "SourceDocument",
    "read_blocks_jsonl",
    "Chunk",
    "chunk_id_for",
    "DocumentTree",
    "build_document_tree",
    "merge_tree_chunks",
    "BoundaryScorer",
    "ChunkingPolicy",
    "chunk_document",
    "chunk_rule_based",
    "chunk_semantic",
    "chunk_sliding",
    "summarize_long_chunk",
    "TableRecord",
    "extract_tables",
    "ChangeSet",
    "ChunkStore",
]
