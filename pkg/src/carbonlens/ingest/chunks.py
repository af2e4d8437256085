"""The retrievable unit: a chunk with title path and provenance."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace


def chunk_id_for(doc_id: str, title_path: tuple[str, ...], body: str, version: int) -> str:
    """Stable content-derived id so citations survive reruns."""
    payload = json.dumps([doc_id, list(title_path), body, version], ensure_ascii=False)
    return "ck_" + hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


@dataclass
class Chunk:
    chunk_id: str
    doc_id: str
    title_path: tuple[str, ...]
    body: str
    page_start: int
    page_end: int
    paragraph_indices: tuple[int, ...]
    modality: str = "text"
    summary: str | None = None
    vector: list[float] | None = None
    timestamp: str = "1970-01-01T00:00:00Z"
    version: int = 1
    flags: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not self.body:
            raise ValueError("chunk body must be non-empty")
        if self.page_start > self.page_end:
            raise ValueError("page_start must be <= page_end")

    @classmethod
    def build(
        cls,
        *,
        doc_id: str,
        title_path: tuple[str, ...],
        body: str,
        pages: tuple[int, int],
        paragraph_indices: tuple[int, ...],
        modality: str = "text",
        timestamp: str = "1970-01-01T00:00:00Z",
        version: int = 1,
        flags: tuple[str, ...] = (),
    ) -> "Chunk":
        return cls(
            chunk_id=chunk_id_for(doc_id, title_path, body, version),
            doc_id=doc_id,
            title_path=title_path,
            body=body,
            page_start=pages[0],
            page_end=pages[1],
            paragraph_indices=paragraph_indices,
            modality=modality,
            timestamp=timestamp,
            version=version,
            flags=flags,
        )

    def with_summary(self, summary: str) -> "Chunk":
        return replace(self, summary=summary)

    def to_dict(self) -> dict:
        return {
            "chunk_id": self.chunk_id,
            "doc_id": self.doc_id,
            "title_path": list(self.title_path),
            "body": self.body,
            "provenance": {
                "page_start": self.page_start,
                "page_end": self.page_end,
                "paragraph_indices": list(self.paragraph_indices),
            },
            "modality": self.modality,
            "summary": self.summary,
            "vector": self.vector,
            "timestamp": self.timestamp,
            "version": self.version,
            "flags": list(self.flags),
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "Chunk":
        prov = obj.get("provenance", {})
        return cls(
            chunk_id=obj["chunk_id"],
            doc_id=obj["doc_id"],
            title_path=tuple(obj.get("title_path", [])),
            body=obj["body"],
            page_start=prov.get("page_start", 1),
            page_end=prov.get("page_end", 1),
            paragraph_indices=tuple(prov.get("paragraph_indices", [])),
            modality=obj.get("modality", "text"),
            summary=obj.get("summary"),
            vector=obj.get("vector"),
            timestamp=obj.get("timestamp", "1970-01-01T00:00:00Z"),
            version=obj.get("version", 1),
            flags=tuple(obj.get("flags", [])),
        )
