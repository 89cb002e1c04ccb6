# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled elimination kernels over F_q.

Two code paths: table-backed fields (q <= 256, uint8 entries plus full
sub/mul tables and an inverse table) and prime fields of any supported size
(int64 entries, arithmetic mod p).  Both reduce the matrix to reduced row
echelon form in place and return (rank, pivot column list).
"""


def rref_table(unsigned char[:, ::1] m,
               unsigned char[:, ::1] sub,
               unsigned char[:, ::1] mul,
               unsigned char[::1] inv):
    cdef Py_ssize_t rows = m.shape[0]
    cdef Py_ssize_t cols = m.shape[1]
    cdef Py_ssize_t piv_r = 0, c, r, cc, sel
    cdef unsigned char pv, f, tmp
    pivots = []
    for c in range(cols):
        sel = -1
        for r in range(piv_r, rows):
            if m[r, c] != 0:
                sel = r
                break
        if sel < 0:
            continue
        if sel != piv_r:
            for cc in range(cols):
                tmp = m[sel, cc]
                m[sel, cc] = m[piv_r, cc]
                m[piv_r, cc] = tmp
        pv = m[piv_r, c]
        if pv != 1:
            pv = inv[pv]
            for cc in range(c, cols):
                m[piv_r, cc] = mul[m[piv_r, cc], pv]
        for r in range(rows):
            if r == piv_r:
                continue
            f = m[r, c]
            if f == 0:
                continue
            for cc in range(c, cols):
                m[r, cc] = sub[m[r, cc], mul[f, m[piv_r, cc]]]
        pivots.append(c)
        piv_r += 1
        if piv_r == rows:
            break
    return piv_r, pivots


cdef long long _modpow(long long b, long long e, long long p):
    cdef long long out = 1
    b %= p
    while e:
        if e & 1:
            out = (out * b) % p
        b = (b * b) % p
        e >>= 1
    return out


def rref_prime(long long[:, ::1] m, long long p):
    cdef Py_ssize_t rows = m.shape[0]
    cdef Py_ssize_t cols = m.shape[1]
    cdef Py_ssize_t piv_r = 0, c, r, cc, sel
    cdef long long pv, f, tmp, v
    pivots = []
    for c in range(cols):
        sel = -1
        for r in range(piv_r, rows):
            if m[r, c] != 0:
                sel = r
                break
        if sel < 0:
            continue
        if sel != piv_r:
            for cc in range(cols):
                tmp = m[sel, cc]
                m[sel, cc] = m[piv_r, cc]
                m[piv_r, cc] = tmp
        pv = m[piv_r, c]
        if pv != 1:
            pv = _modpow(pv, p - 2, p)
            for cc in range(c, cols):
                m[piv_r, cc] = (m[piv_r, cc] * pv) % p
        for r in range(rows):
            if r == piv_r:
                continue
            f = m[r, c]
            if f == 0:
                continue
            for cc in range(c, cols):
                v = (m[r, cc] - f * m[piv_r, cc]) % p
                if v < 0:
                    v += p
                m[r, cc] = v
        pivots.append(c)
        piv_r += 1
        if piv_r == rows:
            break
    return piv_r, pivots
