"""Index persistence: length-prefixed binary postings, f32 vectors, meta JSON.

Terms are written sorted, so identical input produces identical bytes.
"""

from __future__ import annotations

import json
import struct
from array import array
from pathlib import Path

import numpy as np

from carbonlens.ingest.chunks import Chunk
from carbonlens.retrieval.embedder import Embedder
from carbonlens.retrieval.fusion import SearchIndexes
from carbonlens.retrieval.lexical import LexicalIndex
from carbonlens.retrieval.vector import VectorIndex

_MAGIC = b"CLIX1\n"


def save_indexes(indexes: SearchIndexes, directory: str | Path) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    lex = indexes.lexical

    ordinals = {cid: i for i, cid in enumerate(lex.chunk_ids)}
    with open(directory / "postings.bin", "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<I", lex.size))
        fh.write(struct.pack("<I", len(lex.terms())))
        doc_len = array("i", [lex.doc_len(cid) for cid in lex.chunk_ids])
        fh.write(struct.pack(f"<{lex.size}i", *doc_len) if lex.size else b"")
        for term in lex.terms():
            raw = term.encode("utf-8")
            fh.write(struct.pack("<H", len(raw)))
            fh.write(raw)
            postings = lex.postings(term)
            fh.write(struct.pack("<I", len(postings)))
            for cid, tf in postings:
                fh.write(struct.pack("<II", ordinals[cid], tf))

    matrix = indexes.vector.matrix().astype("<f4")
    (directory / "vectors.f32").write_bytes(matrix.tobytes())
    (directory / "ids.json").write_text(
        json.dumps({"lexical": lex.chunk_ids, "vector": indexes.vector.chunk_ids}, indent=0),
        "utf-8",
    )
    meta = {
        "k1": lex.k1,
        "b": lex.b,
        "embedder": indexes.embedder.name,
        "dimension": indexes.vector.dimension,
        "corpus_size": lex.size,
    }
    (directory / "meta.json").write_text(json.dumps(meta, indent=1, sort_keys=True), "utf-8")


def load_indexes(
    directory: str | Path, embedder: Embedder, chunks: dict[str, Chunk]
) -> SearchIndexes:
    directory = Path(directory)
    meta = json.loads((directory / "meta.json").read_text("utf-8"))
    ids = json.loads((directory / "ids.json").read_text("utf-8"))

    lex = LexicalIndex(k1=meta["k1"], b=meta["b"])
    with open(directory / "postings.bin", "rb") as fh:
        if fh.read(len(_MAGIC)) != _MAGIC:
            raise ValueError("bad postings file magic")
        (size,) = struct.unpack("<I", fh.read(4))
        (n_terms,) = struct.unpack("<I", fh.read(4))
        doc_len = array("i")
        if size:
            doc_len.frombytes(fh.read(4 * size))
        lex._chunk_ids = list(ids["lexical"])
        lex._ordinals = {cid: i for i, cid in enumerate(lex._chunk_ids)}
        lex._doc_len = doc_len
        for _ in range(n_terms):
            (tlen,) = struct.unpack("<H", fh.read(2))
            term = fh.read(tlen).decode("utf-8")
            (count,) = struct.unpack("<I", fh.read(4))
            ords = array("i")
            tfs = array("i")
            for _ in range(count):
                o, tf = struct.unpack("<II", fh.read(8))
                ords.append(o)
                tfs.append(tf)
            lex._postings[term] = (ords, tfs)
    lex.avg_doc_len = (sum(doc_len) / len(doc_len)) if len(doc_len) else 0.0

    dim = meta["dimension"]
    raw = (directory / "vectors.f32").read_bytes()
    matrix = np.frombuffer(raw, dtype="<f4").reshape(-1, dim).copy()
    vec = VectorIndex(dim)
    vec._chunk_ids = list(ids["vector"])
    vec._matrix = matrix

    return SearchIndexes(lexical=lex, vector=vec, embedder=embedder, chunks=chunks)


def snapshot_digest(indexes: SearchIndexes) -> str:
    """Stable digest of index state; used to assert query-time immutability."""
    import hashlib

    h = hashlib.sha256()
    lex = indexes.lexical
    h.update(repr((lex.k1, lex.b, lex.avg_doc_len, lex.chunk_ids)).encode())
    for term in lex.terms():
        h.update(term.encode("utf-8"))
        h.update(repr(lex.postings(term)).encode())
    h.update(indexes.vector.matrix().tobytes())
    return h.hexdigest()
