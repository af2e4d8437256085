"""Dense vector index with cosine ranking (vectors unit-normalized at insert)."""

from __future__ import annotations

import numpy as np

from carbonlens.errors import ConfigError, EmptyQuery


class VectorIndex:
    def __init__(self, dimension: int):
        if dimension <= 0:
            raise ConfigError("vector dimension must be positive")
        self.dimension = dimension
        self._chunk_ids: list[str] = []
        self._matrix = np.zeros((0, dimension), dtype=np.float32)

    @classmethod
    def build(cls, vectors: dict[str, np.ndarray], dimension: int) -> "VectorIndex":
        idx = cls(dimension)
        ids = sorted(vectors)
        rows = []
        for chunk_id in ids:
            v = np.asarray(vectors[chunk_id], dtype=np.float32)
            if v.shape != (dimension,):
                raise ConfigError(f"vector for {chunk_id} has shape {v.shape}, want ({dimension},)")
            norm = float(np.linalg.norm(v))
            rows.append(v / norm if norm > 0 else v)
        idx._chunk_ids = ids
        idx._matrix = np.stack(rows) if rows else np.zeros((0, dimension), dtype=np.float32)
        return idx

    @property
    def size(self) -> int:
        return len(self._chunk_ids)

    @property
    def chunk_ids(self) -> list[str]:
        return list(self._chunk_ids)

    def vector(self, chunk_id: str) -> np.ndarray:
        return self._matrix[self._chunk_ids.index(chunk_id)]

    def matrix(self) -> np.ndarray:
        return self._matrix

    def rank(self, query_vector: np.ndarray, k: int) -> list[str]:
        """Top-k by cosine, descending; ties broken by ascending chunk_id.

        A zero query vector (text with no hashable features) is valid and
        ranks everything as a tie; only a dimensionless vector is an error.
        """
        q = np.asarray(query_vector, dtype=np.float32)
        if q.size == 0:
            raise EmptyQuery("query vector is empty")
        norm = float(np.linalg.norm(q))
        if norm > 0:
            q = q / norm
        scores = self._matrix @ q
        order = sorted(range(self.size), key=lambda i: (-float(scores[i]), self._chunk_ids[i]))
        return [self._chunk_ids[i] for i in order[:k]]

    def full_ranking(self, query_vector: np.ndarray) -> list[str]:
        return self.rank(query_vector, self.size)
