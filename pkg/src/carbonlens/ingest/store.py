"""File-backed chunk store with per-document versions and change sets.

Layout:
    <root>/manifest.json                      doc_id -> versions + hashes
    <root>/chunks/<doc_id>/v<N>/<chunk_id>.json
    <root>/tables/<doc_id>/v<N>/<table_id>.json

Writes are serialized per doc_id; chunk payloads are plain JSON so cited
chunk ids resolve to inspectable files.
"""

from __future__ import annotations

import json
import threading
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path

from carbonlens.errors import DuplicateVersion, PreconditionError, VersionNotFound
from carbonlens.ingest.blocks import SourceDocument
from carbonlens.ingest.chunks import Chunk
from carbonlens.ingest.tables import TableRecord


@dataclass
class ChangeSet:
    doc_id: str
    from_version: int
    to_version: int
    added_chunks: list[str] = field(default_factory=list)
    removed_chunks: list[str] = field(default_factory=list)
    modified_chunks: list[tuple[str, str]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "from_version": self.from_version,
            "to_version": self.to_version,
            "added_chunks": self.added_chunks,
            "removed_chunks": self.removed_chunks,
            "modified_chunks": [list(p) for p in self.modified_chunks],
        }


class ChunkStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._manifest_path = self.root / "manifest.json"
        self._locks: dict[str, threading.Lock] = defaultdict(threading.Lock)
        self._manifest_lock = threading.Lock()

    # -- manifest ---------------------------------------------------------

    def _load_manifest(self) -> dict:
        if self._manifest_path.exists():
            return json.loads(self._manifest_path.read_text("utf-8"))
        return {"docs": {}}

    def _save_manifest(self, manifest: dict) -> None:
        tmp = self._manifest_path.with_suffix(".tmp")
        tmp.write_text(json.dumps(manifest, indent=1, sort_keys=True, ensure_ascii=False), "utf-8")
        tmp.replace(self._manifest_path)

    def manifest(self) -> dict:
        return self._load_manifest()

    def doc_ids(self) -> list[str]:
        return sorted(self._load_manifest()["docs"])

    def versions(self, doc_id: str) -> list[int]:
        docs = self._load_manifest()["docs"]
        if doc_id not in docs:
            raise VersionNotFound(f"{doc_id}: unknown document")
        return sorted(int(v) for v in docs[doc_id]["versions"])

    def doc_title(self, doc_id: str) -> str:
        entry = self._load_manifest()["docs"].get(doc_id)
        return entry["title"] if entry else doc_id

    # -- writes -----------------------------------------------------------

    def put_document(
        self,
        doc: SourceDocument,
        chunks: list[Chunk],
        tables: list[TableRecord] | None = None,
    ) -> int:
        """Store one document version; returns the assigned version number.

        Re-posting content byte-identical to the latest stored version
        raises DuplicateVersion. Writes for the same doc_id serialize on the
        per-document lock; the manifest update re-reads under the global
        lock so concurrent writers of different documents merge cleanly.
        """
        with self._locks[doc.doc_id]:
            with self._manifest_lock:
                manifest = self._load_manifest()
            entry = manifest["docs"].get(doc.doc_id, {"versions": [], "hashes": {}})
            content_hash = doc.content_hash()
            versions = sorted(int(v) for v in entry["versions"])
            if versions:
                latest = versions[-1]
                if entry["hashes"].get(str(latest)) == content_hash:
                    raise DuplicateVersion(f"{doc.doc_id} v{latest} has identical content")
                version = latest + 1
            else:
                version = doc.version if doc.version >= 1 else 1
            doc.version = version

            vdir = self.root / "chunks" / doc.doc_id / f"v{version}"
            vdir.mkdir(parents=True, exist_ok=True)
            for chunk in chunks:
                chunk.version = version
                (vdir / f"{chunk.chunk_id}.json").write_text(
                    json.dumps(chunk.to_dict(), indent=1, sort_keys=True, ensure_ascii=False),
                    "utf-8",
                )
            if tables:
                tdir = self.root / "tables" / doc.doc_id / f"v{version}"
                tdir.mkdir(parents=True, exist_ok=True)
                for table in tables:
                    (tdir / f"{table.table_id}.json").write_text(
                        json.dumps(table.to_dict(), indent=1, sort_keys=True, ensure_ascii=False),
                        "utf-8",
                    )

            with self._manifest_lock:
                # re-read: writers of other documents may have saved meanwhile
                manifest = self._load_manifest()
                entry = manifest["docs"].get(doc.doc_id, {"versions": [], "hashes": {}})
                entry["versions"] = sorted(set(int(v) for v in entry["versions"]) | {version})
                entry.setdefault("hashes", {})[str(version)] = content_hash
                entry["title"] = doc.title
                entry["timestamp"] = doc.timestamp
                manifest["docs"][doc.doc_id] = entry
                self._save_manifest(manifest)
            return version

    # -- reads ------------------------------------------------------------

    def get_chunks(self, doc_id: str, version: int | None = None) -> list[Chunk]:
        version = version if version is not None else self.versions(doc_id)[-1]
        vdir = self.root / "chunks" / doc_id / f"v{version}"
        if not vdir.exists():
            raise VersionNotFound(f"{doc_id} v{version}")
        chunks = [
            Chunk.from_dict(json.loads(p.read_text("utf-8"))) for p in sorted(vdir.glob("*.json"))
        ]
        chunks.sort(key=lambda c: (c.paragraph_indices or (0,), c.chunk_id))
        return chunks

    def get_chunk(self, chunk_id: str) -> Chunk | None:
        for path in self.root.glob(f"chunks/*/*/{chunk_id}.json"):
            return Chunk.from_dict(json.loads(path.read_text("utf-8")))
        return None

    def all_latest_chunks(self) -> list[Chunk]:
        out = []
        for doc_id in self.doc_ids():
            out.extend(self.get_chunks(doc_id))
        return out

    def get_tables(self, doc_id: str, version: int | None = None) -> list[dict]:
        version = version if version is not None else self.versions(doc_id)[-1]
        tdir = self.root / "tables" / doc_id / f"v{version}"
        if not tdir.exists():
            return []
        return [json.loads(p.read_text("utf-8")) for p in sorted(tdir.glob("*.json"))]

    # -- diff -------------------------------------------------------------

    def diff_versions(self, doc_id: str, v_old: int, v_new: int) -> ChangeSet:
        """Match chunks by title path; compare bodies positionally within a path."""
        if v_old >= v_new:
            raise PreconditionError("from_version must be < to_version")
        old = self.get_chunks(doc_id, v_old)
        new = self.get_chunks(doc_id, v_new)
        by_path_old: dict[tuple[str, ...], list[Chunk]] = defaultdict(list)
        by_path_new: dict[tuple[str, ...], list[Chunk]] = defaultdict(list)
        for c in old:
            by_path_old[c.title_path].append(c)
        for c in new:
            by_path_new[c.title_path].append(c)

        cs = ChangeSet(doc_id=doc_id, from_version=v_old, to_version=v_new)
        for path in sorted(set(by_path_old) | set(by_path_new)):
            olds = by_path_old.get(path, [])
            news = by_path_new.get(path, [])
            for o, n in zip(olds, news):
                if o.body != n.body:
                    cs.modified_chunks.append((o.chunk_id, n.chunk_id))
            cs.removed_chunks.extend(c.chunk_id for c in olds[len(news):])
            cs.added_chunks.extend(c.chunk_id for c in news[len(olds):])
        return cs
