"""Pure-Python twins of the compiled kernels.

Same signatures and results as carbonlens._speedups; selected at import by
carbonlens.kernels when the extension is unavailable.
"""

from __future__ import annotations


def lcs_length(a, b) -> int:
    """Token-level longest-common-subsequence length via rolling 1-D DP."""
    n, m = len(a), len(b)
    if n == 0 or m == 0:
        return 0
    if m > n:  # keep the rolling row short
        a, b, n, m = b, a, m, n
    prev = [0] * (m + 1)
    cur = [0] * (m + 1)
    for i in range(1, n + 1):
        ai = a[i - 1]
        for j in range(1, m + 1):
            if ai == b[j - 1]:
                cur[j] = prev[j - 1] + 1
            else:
                pj = prev[j]
                cj = cur[j - 1]
                cur[j] = pj if pj >= cj else cj
        prev, cur = cur, prev
    return prev[m]


def bm25_accumulate(ordinals, tfs, doc_lens, scores, idf, k1, b, avgdl) -> None:
    """Add one query term's BM25 contributions into *scores* in place.

    ordinals/tfs are the term's postings (chunk ordinal, term frequency);
    doc_lens is indexed by ordinal; scores is a float array over all chunks.
    """
    k1_plus1 = k1 + 1.0
    norm = k1 * (1.0 - b)
    slope = k1 * b / avgdl if avgdl > 0 else 0.0
    for i in range(len(ordinals)):
        o = ordinals[i]
        tf = tfs[i]
        denom = tf + norm + slope * doc_lens[o]
        if denom > 0:
            scores[o] += idf * tf * k1_plus1 / denom
