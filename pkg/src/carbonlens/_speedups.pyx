# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the scoring hot loops.

Signatures match carbonlens._kernels_py exactly; carbonlens.kernels picks
whichever import succeeds.
"""

from cpython cimport array
import array


def lcs_length(a, b):
    """Token-level longest-common-subsequence length via rolling 1-D DP."""
    cdef Py_ssize_t n = len(a)
    cdef Py_ssize_t m = len(b)
    if n == 0 or m == 0:
        return 0
    if m > n:
        a, b = b, a
        n, m = m, n
    cdef array.array a_arr = array.array('l', a)
    cdef array.array b_arr = array.array('l', b)
    cdef long[:] av = a_arr
    cdef long[:] bv = b_arr
    cdef array.array prev_arr = array.array('l', [0] * (m + 1))
    cdef array.array cur_arr = array.array('l', [0] * (m + 1))
    cdef long[:] prev = prev_arr
    cdef long[:] cur = cur_arr
    cdef long[:] tmp
    cdef Py_ssize_t i, j
    cdef long ai, pj, cj
    for i in range(1, n + 1):
        ai = av[i - 1]
        for j in range(1, m + 1):
            if ai == bv[j - 1]:
                cur[j] = prev[j - 1] + 1
            else:
                pj = prev[j]
                cj = cur[j - 1]
                cur[j] = pj if pj >= cj else cj
        tmp = prev
        prev = cur
        cur = tmp
    return prev[m]


def bm25_accumulate(ordinals, tfs, doc_lens, scores, double idf,
                    double k1, double b, double avgdl):
    """Add one query term's BM25 contributions into *scores* in place."""
    cdef int[:] ov = ordinals
    cdef int[:] tv = tfs
    cdef int[:] dl = doc_lens
    cdef double[:] sc = scores
    cdef double k1_plus1 = k1 + 1.0
    cdef double norm = k1 * (1.0 - b)
    cdef double slope = k1 * b / avgdl if avgdl > 0 else 0.0
    cdef Py_ssize_t i
    cdef int o, tf
    cdef double denom
    for i in range(ov.shape[0]):
        o = ov[i]
        tf = tv[i]
        denom = tf + norm + slope * dl[o]
        if denom > 0:
            sc[o] += idf * tf * k1_plus1 / denom
