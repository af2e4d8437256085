"""Kernel selection: compiled extension when built, pure Python otherwise.

``BACKEND`` reports which implementation is active; benchmarks/bench_kernels.py
compares the two.
"""

from __future__ import annotations

try:
    from carbonlens._speedups import bm25_accumulate, lcs_length

    BACKEND = "compiled"
except ImportError:  # extension not built on this install
    from carbonlens._kernels_py import bm25_accumulate, lcs_length

    BACKEND = "python"

__all__ = ["BACKEND", "bm25_accumulate", "lcs_length"]
