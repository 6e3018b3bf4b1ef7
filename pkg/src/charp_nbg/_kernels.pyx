# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled coefficient kernels; signatures mirror ``_kernels_py``."""

from libc.stdlib cimport malloc, free


def mul_prime(const unsigned char[:] a, const unsigned char[:] b, Py_ssize_t nout, long p):
    cdef Py_ssize_t la = a.shape[0], lb = b.shape[0], i, j, top
    cdef long ai
    cdef long long *acc
    if la == 0 or lb == 0:
        return b""
    if nout > la + lb - 1:
        nout = la + lb - 1
    if nout <= 0:
        return b""
    acc = <long long *> malloc(nout * sizeof(long long))
    if acc == NULL:
        raise MemoryError()
    for i in range(nout):
        acc[i] = 0
    for i in range(la if la < nout else nout):
        ai = a[i]
        if ai == 0:
            continue
        top = nout - i
        if top > lb:
            top = lb
        for j in range(top):
            acc[i + j] += ai * b[j]
    out = bytearray(nout)
    cdef unsigned char[:] ov = out
    for i in range(nout):
        ov[i] = <unsigned char> (acc[i] % p)
    free(acc)
    return bytes(out)


def mul_table(const unsigned char[:] a, const unsigned char[:] b, Py_ssize_t nout,
              const unsigned char[:] add_tab, const unsigned char[:] mul_tab, long q):
    cdef Py_ssize_t la = a.shape[0], lb = b.shape[0], i, j, top
    cdef long row
    if la == 0 or lb == 0:
        return b""
    if nout > la + lb - 1:
        nout = la + lb - 1
    if nout <= 0:
        return b""
    out = bytearray(nout)
    cdef unsigned char[:] ov = out
    for i in range(la if la < nout else nout):
        if a[i] == 0:
            continue
        row = a[i] * q
        top = nout - i
        if top > lb:
            top = lb
        for j in range(top):
            ov[i + j] = add_tab[ov[i + j] * q + mul_tab[row + b[j]]]
    return bytes(out)


def axpy_prime(const unsigned char[:] a, Py_ssize_t sa, const unsigned char[:] b, Py_ssize_t sb,
               long c, Py_ssize_t nout, long p):
    cdef Py_ssize_t i, k
    out = bytearray(nout)
    cdef unsigned char[:] ov = out
    for i in range(a.shape[0]):
        k = i + sa
        if 0 <= k < nout:
            ov[k] = a[i]
    if c:
        for i in range(b.shape[0]):
            k = i + sb
            if 0 <= k < nout:
                ov[k] = <unsigned char> ((ov[k] + c * b[i]) % p)
    return bytes(out)


def axpy_table(const unsigned char[:] a, Py_ssize_t sa, const unsigned char[:] b, Py_ssize_t sb,
               long c, Py_ssize_t nout, const unsigned char[:] add_tab,
               const unsigned char[:] mul_tab, long q):
    cdef Py_ssize_t i, k
    cdef long row = c * q
    out = bytearray(nout)
    cdef unsigned char[:] ov = out
    for i in range(a.shape[0]):
        k = i + sa
        if 0 <= k < nout:
            ov[k] = a[i]
    if c:
        for i in range(b.shape[0]):
            k = i + sb
            if 0 <= k < nout:
                ov[k] = add_tab[ov[k] * q + mul_tab[row + b[i]]]
    return bytes(out)


def inv_prime(const unsigned char[:] a, Py_ssize_t nout, long p, long inv_a0):
    cdef Py_ssize_t la = a.shape[0], k, i, top
    cdef long long s
    if nout <= 0:
        return b""
    out = bytearray(nout)
    cdef unsigned char[:] ov = out
    ov[0] = <unsigned char> inv_a0
    for k in range(1, nout):
        s = 0
        top = k if k < la - 1 else la - 1
        for i in range(1, top + 1):
            s += a[i] * ov[k - i]
        s = (-inv_a0 * (s % p)) % p
        if s < 0:
            s += p
        ov[k] = <unsigned char> s
    return bytes(out)


def inv_table(const unsigned char[:] a, Py_ssize_t nout, const unsigned char[:] add_tab,
              const unsigned char[:] mul_tab, const unsigned char[:] neg_tab, long q, long inv_a0):
    cdef Py_ssize_t la = a.shape[0], k, i, top
    cdef long s, scale
    if nout <= 0:
        return b""
    out = bytearray(nout)
    cdef unsigned char[:] ov = out
    ov[0] = <unsigned char> inv_a0
    scale = neg_tab[inv_a0] * q
    for k in range(1, nout):
        s = 0
        top = k if k < la - 1 else la - 1
        for i in range(1, top + 1):
            s = add_tab[s * q + mul_tab[a[i] * q + ov[k - i]]]
        ov[k] = mul_tab[scale + s]
    return bytes(out)
