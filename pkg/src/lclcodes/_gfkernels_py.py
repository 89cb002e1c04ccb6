"""Pure-Python twin of the compiled elimination kernels.

Same signatures and in-place semantics as ``_gfkernels``; used when the
extension is unavailable or when LCLCODES_PURE_PYTHON=1 is set.
"""

from __future__ import annotations

import numpy as np


def rref_table(m: np.ndarray, sub: np.ndarray, mul: np.ndarray, inv: np.ndarray):
    rows_n, cols = m.shape
    work = m.tolist()
    sub_t = sub.tolist()
    mul_t = mul.tolist()
    inv_t = inv.tolist()
    piv_r = 0
    pivots = []
    for c in range(cols):
        sel = -1
        for r in range(piv_r, rows_n):
            if work[r][c]:
                sel = r
                break
        if sel < 0:
            continue
        if sel != piv_r:
            work[sel], work[piv_r] = work[piv_r], work[sel]
        prow = work[piv_r]
        pv = prow[c]
        if pv != 1:
            mrow = mul_t[inv_t[pv]]
            for cc in range(c, cols):
                prow[cc] = mrow[prow[cc]]
        for r in range(rows_n):
            if r == piv_r:
                continue
            row = work[r]
            f = row[c]
            if f == 0:
                continue
            mrow = mul_t[f]
            for cc in range(c, cols):
                row[cc] = sub_t[row[cc]][mrow[prow[cc]]]
        pivots.append(c)
        piv_r += 1
        if piv_r == rows_n:
            break
    m[...] = np.asarray(work, dtype=m.dtype).reshape(m.shape)
    return piv_r, pivots


def rref_prime(m: np.ndarray, p: int):
    rows_n, cols = m.shape
    work = m.tolist()
    piv_r = 0
    pivots = []
    for c in range(cols):
        sel = -1
        for r in range(piv_r, rows_n):
            if work[r][c]:
                sel = r
                break
        if sel < 0:
            continue
        if sel != piv_r:
            work[sel], work[piv_r] = work[piv_r], work[sel]
        prow = work[piv_r]
        pv = prow[c]
        if pv != 1:
            pinv = pow(pv, p - 2, p)
            for cc in range(c, cols):
                prow[cc] = (prow[cc] * pinv) % p
        for r in range(rows_n):
            if r == piv_r:
                continue
            row = work[r]
            f = row[c]
            if f == 0:
                continue
            for cc in range(c, cols):
                row[cc] = (row[cc] - f * prow[cc]) % p
        pivots.append(c)
        piv_r += 1
        if piv_r == rows_n:
            break
    m[...] = np.asarray(work, dtype=m.dtype).reshape(m.shape)
    return piv_r, pivots
