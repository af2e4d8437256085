"""Second-stage reranking interface with a deterministic default."""

from __future__ import annotations

from typing import Protocol

from carbonlens import text as T


class Reranker(Protocol):
    def score(self, query: str, chunk_body: str) -> float: ...


class JaccardReranker:
    """Token-set Jaccard overlap plus a tiny 1/length prior to break ties."""

    TIE_EPS = 1e-6

    def score(self, query: str, chunk_body: str) -> float:
        q = set(T.tokens(query))
        b = set(T.tokens(chunk_body))
        if not q or not b:
            return 0.0
        jaccard = len(q & b) / len(q | b)
        return jaccard + self.TIE_EPS / (len(b) + 1)
