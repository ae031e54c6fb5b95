"""Pure-Python/numpy kernels.

Fallback twin of the compiled Cython kernels. Both backends must produce
bit-identical results: all accumulations happen over integer-valued float64
arrays, where summation order cannot change the outcome.
"""

import numpy as np

BACKEND = "pure"


def lcs(a: str, b: str) -> tuple[int, int, int]:
    """Longest common contiguous substring of two strings.

    Returns (length, start_a, start_b). Ties are broken by the smallest
    start offset in `a`, then the smallest start offset in `b`. Offsets
    count Unicode scalar values.
    """
    n, m = len(a), len(b)
    if n == 0 or m == 0:
        return 0, 0, 0
    best_len, best_a, best_b = 0, 0, 0
    prev = [0] * (m + 1)
    for i in range(n):
        cur = [0] * (m + 1)
        ai = a[i]
        for j in range(m):
            if ai == b[j]:
                length = prev[j] + 1
                cur[j + 1] = length
                sa = i - length + 1
                sb = j - length + 1
                if length > best_len or (
                    length == best_len
                    and (sa < best_a or (sa == best_a and sb < best_b))
                ):
                    best_len, best_a, best_b = length, sa, sb
        prev = cur
    return best_len, best_a, best_b


def score_rows(matrix: np.ndarray, idxs: np.ndarray) -> np.ndarray:
    """Sum the matrix rows selected by idxs into one score vector."""
    if len(idxs) == 0:
        return np.zeros(matrix.shape[1], dtype=np.float64)
    return matrix[idxs].sum(axis=0)


def perceptron_update(weights, totals, stamps, idxs, good, bad, step):
    """Lazily averaged perceptron update: +1 on `good`, -1 on `bad`.

    Pending weight mass (steps since last touch) is flushed into `totals`
    before the weight changes; `stamps` records the touch time.
    """
    for cls, delta in ((good, 1.0), (bad, -1.0)):
        totals[idxs, cls] += (step - stamps[idxs, cls]) * weights[idxs, cls]
        stamps[idxs, cls] = step
        weights[idxs, cls] += delta


def finalize_totals(weights, totals, stamps, step):
    """Flush all pending weight mass into totals at the end of training."""
    totals += (step - stamps) * weights
    stamps.fill(step)
