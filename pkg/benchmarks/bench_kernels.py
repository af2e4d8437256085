"""Compares the compiled scoring kernels against the pure-Python twins.

Usage: python3 benchmarks/bench_kernels.py [--docs N] [--lcs-len N]
"""

from __future__ import annotations

import argparse
import random
import time
from array import array

import carbonlens._kernels_py as py_kernels

try:
    import carbonlens._speedups as c_kernels
except ImportError:
    c_kernels = None


def bench_bm25(mod, n_docs: int, n_terms: int, repeats: int) -> float:
    rng = random.Random(1)
    doc_lens = array("i", [rng.randint(20, 400) for _ in range(n_docs)])
    avgdl = sum(doc_lens) / n_docs
    postings = []
    for _ in range(n_terms):
        size = rng.randint(n_docs // 4, n_docs)
        ordinals = array("i", sorted(rng.sample(range(n_docs), size)))
        tfs = array("i", [rng.randint(1, 8) for _ in range(size)])
        postings.append((ordinals, tfs, rng.uniform(0.2, 3.0)))
    start = time.perf_counter()
    for _ in range(repeats):
        scores = array("d", [0.0] * n_docs)
        for ordinals, tfs, idf in postings:
            mod.bm25_accumulate(ordinals, tfs, doc_lens, scores, idf, 1.2, 0.75, avgdl)
    return (time.perf_counter() - start) / repeats


def bench_lcs(mod, length: int, repeats: int) -> float:
    rng = random.Random(2)
    a = [rng.randint(0, 50) for _ in range(length)]
    b = [rng.randint(0, 50) for _ in range(length)]
    start = time.perf_counter()
    for _ in range(repeats):
        mod.lcs_length(a, b)
    return (time.perf_counter() - start) / repeats


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--docs", type=int, default=20_000)
    parser.add_argument("--terms", type=int, default=12)
    parser.add_argument("--lcs-len", type=int, default=1200)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    rows = []
    py_bm25 = bench_bm25(py_kernels, args.docs, args.terms, args.repeats)
    py_lcs = bench_lcs(py_kernels, args.lcs_len, args.repeats)
    rows.append(("python", py_bm25, py_lcs))
    if c_kernels is not None:
        c_bm25 = bench_bm25(c_kernels, args.docs, args.terms, args.repeats)
        c_lcs = bench_lcs(c_kernels, args.lcs_len, args.repeats)
        rows.append(("compiled", c_bm25, c_lcs))

    print(f"{'backend':<10} {'bm25 accumulate':>18} {'lcs length':>14}")
    for name, bm25_s, lcs_s in rows:
        print(f"{name:<10} {bm25_s * 1e3:>15.2f} ms {lcs_s * 1e3:>11.2f} ms")
    if c_kernels is not None:
        print(
            f"{'speedup':<10} {py_bm25 / c_bm25:>16.1f}x {py_lcs / c_lcs:>12.1f}x"
        )
    else:
        print("compiled kernels not built; showing pure Python only")


if __name__ == "__main__":
    main()
