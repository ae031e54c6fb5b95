# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: hot loops for rule induction and perceptron scoring.

Mirror image of _pykernels; results are bit-identical (all sums run over
integer-valued float64 values).
"""

import numpy as np

BACKEND = "cython"


def lcs(a: str, b: str):
    """Longest common contiguous substring of two strings.

    Returns (length, start_a, start_b) with ties broken by the smallest
    start offset in `a`, then in `b`. Offsets count Unicode scalar values.
    """
    cdef Py_ssize_t n = len(a)
    cdef Py_ssize_t m = len(b)
    if n == 0 or m == 0:
        return 0, 0, 0
    a_arr = np.frombuffer(a.encode("utf-32-le"), dtype=np.uint32)
    b_arr = np.frombuffer(b.encode("utf-32-le"), dtype=np.uint32)
    cdef const unsigned int[::1] av = a_arr
    cdef const unsigned int[::1] bv = b_arr
    prev_arr = np.zeros(m + 1, dtype=np.int64)
    cur_arr = np.zeros(m + 1, dtype=np.int64)
    cdef long long[::1] prev = prev_arr
    cdef long long[::1] cur = cur_arr
    cdef long long[::1] tmp
    cdef Py_ssize_t i, j
    cdef long long length, best_len = 0, best_a = 0, best_b = 0, sa, sb
    cdef unsigned int ai
    for i in range(n):
        ai = av[i]
        for j in range(m):
            if ai == bv[j]:
                length = prev[j] + 1
                cur[j + 1] = length
                sa = i - length + 1
                sb = j - length + 1
                if length > best_len or (
                    length == best_len
                    and (sa < best_a or (sa == best_a and sb < best_b))
                ):
                    best_len = length
                    best_a = sa
                    best_b = sb
            else:
                cur[j + 1] = 0
        tmp = prev
        prev = cur
        cur = tmp
        cur[:] = 0
    return int(best_len), int(best_a), int(best_b)


def score_rows(const double[:, ::1] matrix, const int[::1] idxs):
    """Sum the matrix rows selected by idxs into one score vector."""
    cdef Py_ssize_t n_cls = matrix.shape[1]
    out_arr = np.zeros(n_cls, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t k, c, row
    for k in range(idxs.shape[0]):
        row = idxs[k]
        for c in range(n_cls):
            out[c] += matrix[row, c]
    return out_arr


def perceptron_update(
    double[:, ::1] weights,
    double[:, ::1] totals,
    long long[:, ::1] stamps,
    const int[::1] idxs,
    Py_ssize_t good,
    Py_ssize_t bad,
    long long step,
):
    """Lazily averaged perceptron update: +1 on `good`, -1 on `bad`."""
    cdef Py_ssize_t k, row
    for k in range(idxs.shape[0]):
        row = idxs[k]
        totals[row, good] += (step - stamps[row, good]) * weights[row, good]
        stamps[row, good] = step
        weights[row, good] += 1.0
        totals[row, bad] += (step - stamps[row, bad]) * weights[row, bad]
        stamps[row, bad] = step
        weights[row, bad] -= 1.0


def finalize_totals(
    double[:, ::1] weights,
    double[:, ::1] totals,
    long long[:, ::1] stamps,
    long long step,
):
    """Flush all pending weight mass into totals at the end of training."""
    cdef Py_ssize_t r, c
    for r in range(weights.shape[0]):
        for c in range(weights.shape[1]):
            totals[r, c] += (step - stamps[r, c]) * weights[r, c]
            stamps[r, c] = step
