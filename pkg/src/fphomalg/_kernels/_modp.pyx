# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled mod-p row reduction on C-contiguous int64 matrices.

Same contract as ``modp_py.rref_core``: reduce in place to reduced row
echelon form, return the pivot columns.  Entries must lie in [0, p).
"""


cdef long long _modinv(long long a, long long p):
    # Fermat: a^(p-2) mod p for prime p
    cdef long long result = 1
    cdef long long base = a % p
    cdef long long e = p - 2
    while e > 0:
        if e & 1:
            result = (result * base) % p
        base = (base * base) % p
        e >>= 1
    return result


def rref_core(long long[:, ::1] a, long long p):
    cdef Py_ssize_t m = a.shape[0]
    cdef Py_ssize_t n = a.shape[1]
    cdef Py_ssize_t r = 0
    cdef Py_ssize_t c, i, j, pr
    cdef long long pivot, inv, factor, tmp
    pivots = []
    for c in range(n):
        if r == m:
            break
        pr = -1
        for i in range(r, m):
            if a[i, c] != 0:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            for j in range(n):
                tmp = a[r, j]
                a[r, j] = a[pr, j]
                a[pr, j] = tmp
        pivot = a[r, c]
        if pivot != 1:
            inv = _modinv(pivot, p)
            for j in range(c, n):
                a[r, j] = (a[r, j] * inv) % p
        for i in range(m):
            if i == r:
                continue
            factor = a[i, c]
            if factor != 0:
                for j in range(c, n):
                    a[i, j] = (a[i, j] - factor * a[r, j]) % p
                    if a[i, j] < 0:
                        a[i, j] += p
        pivots.append(c)
        r += 1
    return pivots
