# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Fixed-width multi-limb kernels for the two coefficient recurrences.

Numbers are stored as little-endian rows of 32-bit limbs in a 2-D uint32
array; row n holds p(n) and ``widths[n]`` its limb count.  The caller
supplies a limb budget ``W`` that provably bounds every p(n).
"""

from libc.stdint cimport uint32_t, uint64_t, int64_t
from libc.string cimport memset

import numpy as np

cdef uint64_t MASK = 0xFFFFFFFFu


cdef Py_ssize_t _normalize(uint64_t* a, Py_ssize_t top, Py_ssize_t cap) except -1:
    cdef uint64_t carry = 0, s
    cdef Py_ssize_t i
    for i in range(top):
        s = a[i] + carry
        a[i] = s & MASK
        carry = s >> 32
    while carry:
        if top >= cap:
            raise OverflowError("limb budget exceeded")
        a[top] = carry & MASK
        carry >>= 32
        top += 1
    while top > 0 and a[top - 1] == 0:
        top -= 1
    return top


def convolution(const uint32_t[::1] c, Py_ssize_t N, Py_ssize_t W):
    """p(0..N) from n p(n) = sum_k c(k) p(n-k), with c(k) < 2**32."""
    P = np.zeros((N + 1, W), dtype=np.uint32)
    widths = np.zeros(N + 1, dtype=np.intp)
    acc = np.zeros(W + 4, dtype=np.uint64)
    cdef uint32_t[:, ::1] Pv = P
    cdef Py_ssize_t[::1] wv = widths
    cdef uint64_t[::1] av = acc
    cdef uint64_t* a = &av[0]
    cdef Py_ssize_t n, k, m, i, w, top, cap = W + 4
    cdef uint64_t ck, t, cur, q, rem
    cdef const uint32_t* row
    Pv[0, 0] = 1
    wv[0] = 1
    for n in range(1, N + 1):
        memset(a, 0, cap * sizeof(uint64_t))
        top = 0
        for k in range(1, n + 1):
            ck = c[k]
            if ck == 0:
                continue
            m = n - k
            w = wv[m]
            row = &Pv[m, 0]
            for i in range(w):
                t = ck * row[i]
                a[i] += t & MASK
                a[i + 1] += t >> 32
            if w + 1 > top:
                top = w + 1
        top = _normalize(a, top, cap)
        rem = 0
        for i in range(top - 1, -1, -1):
            cur = (rem << 32) | a[i]
            q = cur // <uint64_t>n
            rem = cur - q * <uint64_t>n
            a[i] = q
        if rem != 0:
            raise ArithmeticError(f"inexact division at n={n}")
        while top > 0 and a[top - 1] == 0:
            top -= 1
        if top > W:
            raise OverflowError("limb budget exceeded")
        for i in range(top):
            Pv[n, i] = <uint32_t>a[i]
        wv[n] = top
    return P, widths


def pentagonal(Py_ssize_t N, Py_ssize_t W):
    """Partition numbers p(0..N) by Euler's pentagonal recurrence."""
    P = np.zeros((N + 1, W), dtype=np.uint32)
    widths = np.zeros(N + 1, dtype=np.intp)
    pos_arr = np.zeros(W + 4, dtype=np.uint64)
    neg_arr = np.zeros(W + 4, dtype=np.uint64)
    cdef uint32_t[:, ::1] Pv = P
    cdef Py_ssize_t[::1] wv = widths
    cdef uint64_t[::1] pv = pos_arr
    cdef uint64_t[::1] nv = neg_arr
    cdef uint64_t* pos = &pv[0]
    cdef uint64_t* neg = &nv[0]
    cdef uint64_t* dst
    cdef Py_ssize_t n, j, g, m, i, w, tp, tn, top, side, cap = W + 4
    cdef int64_t d, borrow
    Pv[0, 0] = 1
    wv[0] = 1
    for n in range(1, N + 1):
        memset(pos, 0, cap * sizeof(uint64_t))
        memset(neg, 0, cap * sizeof(uint64_t))
        tp = 0
        tn = 0
        j = 1
        while True:
            g = j * (3 * j - 1) // 2
            if g > n:
                break
            dst = pos if (j & 1) else neg
            for side in range(2):
                m = n - g - side * j
                if m < 0:
                    continue
                w = wv[m]
                for i in range(w):
                    dst[i] += Pv[m, i]
                if j & 1:
                    if w > tp:
                        tp = w
                elif w > tn:
                    tn = w
            j += 1
        tp = _normalize(pos, tp, cap)
        tn = _normalize(neg, tn, cap)
        borrow = 0
        for i in range(tp):
            d = <int64_t>pos[i] - <int64_t>(neg[i] if i < tn else 0) - borrow
            if d < 0:
                d += <int64_t>1 << 32
                borrow = 1
            else:
                borrow = 0
            pos[i] = <uint64_t>d
        if borrow or tn > tp:
            raise ArithmeticError(f"negative partition count at n={n}")
        top = tp
        while top > 0 and pos[top - 1] == 0:
            top -= 1
        if top > W:
            raise OverflowError("limb budget exceeded")
        for i in range(top):
            Pv[n, i] = <uint32_t>pos[i]
        wv[n] = top
    return P, widths
