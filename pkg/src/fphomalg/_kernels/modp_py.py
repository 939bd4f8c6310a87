"""Pure-Python (numpy) mod-p row reduction.

Same contract as the compiled kernel in ``_modp``: ``rref_core`` reduces a
C-contiguous int64 matrix in place to reduced row echelon form and returns
the list of pivot columns.  Entries must already lie in ``[0, p)``.
"""

from __future__ import annotations

import numpy as np


def rref_core(a: np.ndarray, p: int) -> list[int]:
    m, n = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        pivot = int(a[r, c])
        if pivot != 1:
            a[r] = (a[r] * pow(pivot, p - 2, p)) % p
        col = a[:, c].copy()
        col[r] = 0
        rows = np.nonzero(col)[0]
        if rows.size:
            a[rows] = (a[rows] - np.outer(col[rows], a[r])) % p
        pivots.append(c)
        r += 1
    return pivots
