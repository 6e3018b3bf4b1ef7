"""Pure-Python reference versions of the coefficient kernels.

Every buffer is a ``bytes`` object holding finite-field elements in the
integer encoding of :class:`charp_nbg.basefield.FqField`.  ``*_prime``
variants assume a prime field (encoding = residue mod p); ``*_table``
variants take flattened q*q addition and multiplication tables.
"""


def mul_prime(a, b, nout, p):
    la, lb = len(a), len(b)
    nout = min(nout, la + lb - 1) if la and lb else 0
    out = [0] * nout
    for i in range(min(la, nout)):
        ai = a[i]
        if not ai:
            continue
        top = min(lb, nout - i)
        for j in range(top):
            out[i + j] += ai * b[j]
    return bytes(x % p for x in out)


def mul_table(a, b, nout, add_tab, mul_tab, q):
    la, lb = len(a), len(b)
    nout = min(nout, la + lb - 1) if la and lb else 0
    out = [0] * nout
    for i in range(min(la, nout)):
        ai = a[i]
        if not ai:
            continue
        row = ai * q
        top = min(lb, nout - i)
        for j in range(top):
            out[i + j] = add_tab[out[i + j] * q + mul_tab[row + b[j]]]
    return bytes(out)


def axpy_prime(a, sa, b, sb, c, nout, p):
    out = [0] * nout
    for i in range(len(a)):
        k = i + sa
        if 0 <= k < nout:
            out[k] = a[i]
    if c:
        for i in range(len(b)):
            k = i + sb
            if 0 <= k < nout:
                out[k] = (out[k] + c * b[i]) % p
    return bytes(out)


def axpy_table(a, sa, b, sb, c, nout, add_tab, mul_tab, q):
    out = [0] * nout
    for i in range(len(a)):
        k = i + sa
        if 0 <= k < nout:
            out[k] = a[i]
    if c:
        row = c * q
        for i in range(len(b)):
            k = i + sb
            if 0 <= k < nout:
                out[k] = add_tab[out[k] * q + mul_tab[row + b[i]]]
    return bytes(out)


def inv_prime(a, nout, p, inv_a0):
    # b_k = -a0^{-1} * sum_{i=1..k} a_i b_{k-i}
    out = [0] * nout
    if nout == 0:
        return b""
    out[0] = inv_a0
    la = len(a)
    for k in range(1, nout):
        s = 0
        for i in range(1, min(k, la - 1) + 1):
            s += a[i] * out[k - i]
        out[k] = (-inv_a0 * s) % p
    return bytes(out)


def inv_table(a, nout, add_tab, mul_tab, neg_tab, q, inv_a0):
    out = [0] * nout
    if nout == 0:
        return b""
    out[0] = inv_a0
    la = len(a)
    scale = neg_tab[inv_a0] * q
    for k in range(1, nout):
        s = 0
        for i in range(1, min(k, la - 1) + 1):
            s = add_tab[s * q + mul_tab[a[i] * q + out[k - i]]]
        out[k] = mul_tab[scale + s]
    return bytes(out)
