"""Normalized input blocks and source documents.

Input is JSON-lines, one block per line:
    {"para_type": "...", "text": "...", "page": n, "idx": n,
     "modality": "text|table|formula|image", "payload": {...}}

An optional first line of the form {"doc": {...}} carries document metadata
(doc_id, title, doc_kind, timestamp, version); without it the document id is
derived from a content hash.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from carbonlens.errors import BlockParseError

MODALITIES = ("text", "table", "formula", "image")
DOC_KINDS = ("structured", "regulatory", "narrative")


@dataclass(frozen=True)
class Block:
    para_type: str
    text: str
    page: int
    paragraph_index: int
    modality: str = "text"
    payload: dict | None = None

    def __post_init__(self):
        if not self.para_type:
            raise ValueError("para_type must be non-empty")
        if self.page < 1:
            raise ValueError("page must be >= 1")
        if self.paragraph_index < 0:
            raise ValueError("paragraph_index must be >= 0")
        if self.modality not in MODALITIES:
            raise ValueError(f"unknown modality {self.modality!r}")
        has_grid = bool(self.payload and "grid" in self.payload)
        if (self.modality == "table") != has_grid:
            raise ValueError("modality=table iff payload carries a grid")

    @property
    def is_title(self) -> bool:
        return self.para_type[:5] == "title"

    @property
    def title_level(self) -> int | None:
        """Depth encoded in para_type: "title" is 1, "titleN" is N."""
        if not self.is_title:
            return None
        suffix = self.para_type[5:]
        if not suffix:
            return 1
        try:
            return max(1, int(suffix))
        except ValueError:
            return 1


@dataclass
class SourceDocument:
    doc_id: str
    title: str
    source_path: str
    doc_kind: str
    timestamp: str  # UTC instant, ISO-8601
    version: int
    blocks: list[Block] = field(default_factory=list)

    def __post_init__(self):
        if self.version < 1:
            raise ValueError("version must be >= 1")
        if self.doc_kind not in DOC_KINDS:
            raise ValueError(f"unknown doc_kind {self.doc_kind!r}")

    def content_hash(self) -> str:
        payload = json.dumps(
            [
                [b.para_type, b.text, b.page, b.paragraph_index, b.modality, b.payload]
                for b in self.blocks
            ],
            sort_keys=True,
            ensure_ascii=False,
        )
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def _parse_block(obj: dict, line_no: int) -> Block:
    try:
        return Block(
            para_type=obj["para_type"],
            text=obj.get("text", ""),
            page=int(obj.get("page", 1)),
            paragraph_index=int(obj.get("idx", obj.get("paragraph_index", 0))),
            modality=obj.get("modality", "text"),
            payload=obj.get("payload"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise BlockParseError(line_no, str(exc)) from exc


def read_blocks_jsonl(
    data: str,
    *,
    source_path: str = "<memory>",
    default_timestamp: str = "1970-01-01T00:00:00Z",
) -> SourceDocument:
    """Parse a JSON-lines block stream into a SourceDocument.

    Malformed lines raise BlockParseError with the 1-based line number.
    """
    meta: dict = {}
    blocks: list[Block] = []
    for line_no, line in enumerate(data.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise BlockParseError(line_no, f"invalid JSON: {exc.msg}") from exc
        if not isinstance(obj, dict):
            raise BlockParseError(line_no, "expected a JSON object")
        if "doc" in obj and "para_type" not in obj:
            if blocks or meta:
                raise BlockParseError(line_no, "document meta line must come first")
            meta = obj["doc"] or {}
            continue
        blocks.append(_parse_block(obj, line_no))

    first_title = next((b.text for b in blocks if b.is_title), "")
    doc = SourceDocument(
        doc_id=meta.get("doc_id") or "",
        title=meta.get("title") or first_title or "untitled",
        source_path=meta.get("source_path", source_path),
        doc_kind=meta.get("doc_kind", "narrative"),
        timestamp=meta.get("timestamp", default_timestamp),
        version=int(meta.get("version", 1)),
        blocks=blocks,
    )
    if not doc.doc_id:
        doc.doc_id = "doc_" + doc.content_hash()[:12]
    return doc
