"""Text embedding interface with a deterministic default.

The default embedder feature-hashes character trigrams into 256 dimensions
and L2-normalizes. It is stable across processes (blake2b, not the salted
builtin hash), language-agnostic, and cheap: a stand-in with the same
interface a served embedding model would implement.
"""

from __future__ import annotations

import hashlib
from typing import Protocol

import numpy as np

from carbonlens import text as T


class Embedder(Protocol):
    name: str
    dimension: int

    def embed(self, text: str) -> np.ndarray: ...


def _stable_hash(s: str) -> int:
    return int.from_bytes(hashlib.blake2b(s.encode("utf-8"), digest_size=8).digest(), "little")


class HashingEmbedder:
    """256-dim signed feature hashing of character trigrams, unit-normalized."""

    def __init__(self, dimension: int = 256):
        self.dimension = dimension
        self.name = f"hashing-trigram-{dimension}"

    def embed(self, text: str) -> np.ndarray:
        vec = np.zeros(self.dimension, dtype=np.float32)
        normalized = " ".join(T.tokens(text))
        padded = f"##{normalized}##"
        for i in range(len(padded) - 2):
            h = _stable_hash(padded[i : i + 3])
            idx = h % self.dimension
            sign = 1.0 if (h >> 63) & 1 == 0 else -1.0
            vec[idx] += sign
        norm = float(np.linalg.norm(vec))
        if norm > 0:
            vec /= norm
        return vec


class TokenEmbedder:
    """Per-token vectors for greedy-matching metrics, backed by any embedder."""

    def __init__(self, base: Embedder | None = None):
        self.base = base or HashingEmbedder()
        self.name = f"token:{self.base.name}"
        self.dimension = self.base.dimension
        self._cache: dict[str, np.ndarray] = {}

    def embed_tokens(self, text: str) -> np.ndarray:
        toks = T.tokens(text)
        if not toks:
            return np.zeros((0, self.dimension), dtype=np.float32)
        rows = []
        for t in toks:
            if t not in self._cache:
                self._cache[t] = self.base.embed(t)
            rows.append(self._cache[t])
        return np.stack(rows)
