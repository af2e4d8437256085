"""N-gram overlap and LCS metrics over the shared token rule.

rouge_n = clipped count of shared n-grams / reference n-gram count.
rouge_l = 2 * LCS / (len_ref + len_sys), token-level LCS by dynamic
programming (compiled kernel when available).
"""

from __future__ import annotations

from collections import Counter

from carbonlens import text as T
from carbonlens.kernels import lcs_length


def _ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def rouge_n(ref: str, sys: str, n: int) -> float:
    if n < 1:
        raise ValueError("n must be >= 1")
    ref_grams = _ngrams(T.tokens(ref), n)
    sys_grams = _ngrams(T.tokens(sys), n)
    total = sum(ref_grams.values())
    if total == 0:
        return 0.0
    clipped = sum(min(count, sys_grams[g]) for g, count in ref_grams.items())
    return clipped / total


def _token_ids(ref_tokens: list[str], sys_tokens: list[str]) -> tuple[list[int], list[int]]:
    vocab: dict[str, int] = {}
    def ids(tokens):
        out = []
        for t in tokens:
            if t not in vocab:
                vocab[t] = len(vocab)
            out.append(vocab[t])
        return out
    return ids(ref_tokens), ids(sys_tokens)


def rouge_l(ref: str, sys: str) -> float:
    ref_tokens = T.tokens(ref)
    sys_tokens = T.tokens(sys)
    if not ref_tokens or not sys_tokens:
        return 0.0
    a, b = _token_ids(ref_tokens, sys_tokens)
    lcs = lcs_length(a, b)
    return 2.0 * lcs / (len(ref_tokens) + len(sys_tokens))
