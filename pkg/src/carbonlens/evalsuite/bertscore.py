"""Greedy maximum-similarity token matching (precision/recall/F1).

Recall averages, over reference tokens, each token's best cosine against
the candidate's tokens; precision is symmetric over candidate tokens; F1
is their harmonic mean. The default per-token embedder is the deterministic
hashing embedder: the metric math is unchanged if a contextual embedding
provider is plugged in, but absolute values differ.
"""

from __future__ import annotations

import numpy as np

from carbonlens.retrieval.embedder import TokenEmbedder

_default = TokenEmbedder()


def bertscore(ref: str, sys: str, embedder: TokenEmbedder | None = None) -> tuple[float, float, float]:
    emb = embedder or _default
    ref_m = emb.embed_tokens(ref)
    sys_m = emb.embed_tokens(sys)
    if ref_m.shape[0] == 0 or sys_m.shape[0] == 0:
        return 0.0, 0.0, 0.0
    sim = (ref_m @ sys_m.T).astype(np.float64)  # rows: ref tokens, cols: sys tokens
    recall = float(np.mean(np.max(sim, axis=1)))
    precision = float(np.mean(np.max(sim, axis=0)))
    if precision + recall == 0.0:
        return precision, recall, 0.0
    f1 = 2.0 * precision * recall / (precision + recall)
    return precision, recall, f1
