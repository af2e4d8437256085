"""Okapi BM25 inverted index over chunks.

Postings are parallel int arrays (chunk ordinal, term frequency) so the
scoring loop can run through the compiled kernel. The index is build-once:
queries never mutate state.
"""

from __future__ import annotations

import math
from array import array
from collections import Counter

from carbonlens import text as T
from carbonlens.errors import EmptyQuery
from carbonlens.kernels import bm25_accumulate


class LexicalIndex:
    def __init__(self, k1: float = 1.2, b: float = 0.75):
        self.k1 = k1
        self.b = b
        self._postings: dict[str, tuple[array, array]] = {}
        self._doc_len = array("i")
        self._chunk_ids: list[str] = []
        self._ordinals: dict[str, int] = {}
        self.avg_doc_len = 0.0

    # -- construction -------------------------------------------------------

    @classmethod
    def build(cls, bodies: dict[str, str], k1: float = 1.2, b: float = 0.75) -> "LexicalIndex":
        """Index chunk_id -> body text. Iteration order is sorted for determinism."""
        idx = cls(k1=k1, b=b)
        staging: dict[str, list[tuple[int, int]]] = {}
        for chunk_id in sorted(bodies):
            ordinal = len(idx._chunk_ids)
            idx._chunk_ids.append(chunk_id)
            idx._ordinals[chunk_id] = ordinal
            toks = T.tokens(bodies[chunk_id])
            idx._doc_len.append(len(toks))
            for term, tf in sorted(Counter(toks).items()):
                staging.setdefault(term, []).append((ordinal, tf))
        for term in sorted(staging):
            pairs = staging[term]
            idx._postings[term] = (
                array("i", [p[0] for p in pairs]),
                array("i", [p[1] for p in pairs]),
            )
        idx.avg_doc_len = (sum(idx._doc_len) / len(idx._doc_len)) if idx._doc_len else 0.0
        return idx

    # -- introspection -------------------------------------------------------

    @property
    def size(self) -> int:
        return len(self._chunk_ids)

    @property
    def chunk_ids(self) -> list[str]:
        return list(self._chunk_ids)

    def __contains__(self, chunk_id: str) -> bool:
        return chunk_id in self._ordinals

    def doc_freq(self, term: str) -> int:
        post = self._postings.get(term)
        return len(post[0]) if post else 0

    def doc_len(self, chunk_id: str) -> int:
        return self._doc_len[self._ordinals[chunk_id]]

    def idf(self, term: str) -> float:
        df = self.doc_freq(term)
        return math.log(1.0 + (self.size - df + 0.5) / (df + 0.5))

    def terms(self) -> list[str]:
        return sorted(self._postings)

    def postings(self, term: str) -> list[tuple[str, int]]:
        post = self._postings.get(term)
        if not post:
            return []
        return [(self._chunk_ids[o], tf) for o, tf in zip(post[0], post[1])]

    # -- scoring --------------------------------------------------------------

    def score(self, query_terms: list[str], chunk_id: str) -> float:
        """Okapi BM25 of one chunk for the given query terms."""
        if chunk_id not in self._ordinals:
            raise KeyError(chunk_id)
        ordinal = self._ordinals[chunk_id]
        dl = self._doc_len[ordinal]
        length_ratio = dl / self.avg_doc_len if self.avg_doc_len > 0 else 0.0
        total = 0.0
        for term in query_terms:
            post = self._postings.get(term)
            if not post:
                continue
            try:
                i = list(post[0]).index(ordinal)
            except ValueError:
                continue
            tf = post[1][i]
            denom = tf + self.k1 * (1 - self.b + self.b * length_ratio)
            total += self.idf(term) * tf * (self.k1 + 1) / denom
        return total

    def scores_for(self, query: str) -> array:
        """BM25 scores for every chunk (dense array over ordinals)."""
        scores = array("d", [0.0] * self.size)
        for term in T.tokens(query):
            post = self._postings.get(term)
            if not post:
                continue
            bm25_accumulate(
                post[0], post[1], self._doc_len, scores, self.idf(term), self.k1, self.b, self.avg_doc_len
            )
        return scores

    def rank(self, query: str, k: int) -> list[str]:
        """Top-k chunk ids, descending score, ties by ascending chunk_id."""
        if not query.strip():
            raise EmptyQuery("query must be non-empty")
        scores = self.scores_for(query)
        order = sorted(range(self.size), key=lambda o: (-scores[o], self._chunk_ids[o]))
        return [self._chunk_ids[o] for o in order[:k]]

    def full_ranking(self, query: str) -> list[str]:
        return self.rank(query, self.size)
