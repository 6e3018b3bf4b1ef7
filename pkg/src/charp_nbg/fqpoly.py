"""Dense univariate polynomials over a finite field.

Polynomials are lists of integer-encoded coefficients of an
:class:`~charp_nbg.basefield.FqField`, lowest degree first, with no trailing
zeros (the zero polynomial is ``[]``).
"""

from __future__ import annotations

from itertools import product

from .basefield import FqField


def trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def add(F: FqField, a, b):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return trim(F.add(x, y) for x, y in zip(a, b))


def sub(F: FqField, a, b):
    return add(F, a, [F.neg(y) for y in b])


def mul(F: FqField, a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = F.add(out[i + j], F.mul(x, y))
    return trim(out)


def scale(F: FqField, a, c):
    return trim(F.mul(c, x) for x in a)


def divmod_(F: FqField, a, b):
    b = trim(b)
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    a = trim(a)
    inv = F.inv(b[-1])
    db = len(b) - 1
    quot = [0] * max(len(a) - db, 0)
    while len(a) - 1 >= db and a:
        c = F.mul(a[-1], inv)
        shift = len(a) - 1 - db
        quot[shift] = c
        for i, y in enumerate(b):
            a[shift + i] = F.sub(a[shift + i], F.mul(c, y))
        a = trim(a)
    return trim(quot), a


def mod(F: FqField, a, b):
    return divmod_(F, a, b)[1]


def monic(F: FqField, a):
    a = trim(a)
    if not a:
        return a
    return scale(F, a, F.inv(a[-1]))


def gcd(F: FqField, a, b):
    a, b = trim(a), trim(b)
    while b:
        a, b = b, mod(F, a, b)
    return monic(F, a)


def gcdext(F: FqField, a, b):
    """(g, s, t) with s*a + t*b == g monic."""
    r0, r1 = trim(a), trim(b)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = divmod_(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(F, s0, mul(F, q, s1))
        t0, t1 = t1, sub(F, t0, mul(F, q, t1))
    if not r0:
        return [], [], []
    inv = F.inv(r0[-1])
    return scale(F, r0, inv), scale(F, s0, inv), scale(F, t0, inv)


def monic_polys(F: FqField, d: int):
    """All monic polynomials of degree d, in a fixed lexicographic order."""
    for tail in product(range(F.q), repeat=d):
        yield list(tail) + [1]


def is_irreducible(F: FqField, a) -> bool:
    a = trim(a)
    d = len(a) - 1
    if d < 1:
        return False
    for k in range(1, d // 2 + 1):
        for cand in monic_polys(F, k):
            if not mod(F, a, cand):
                return False
    return True


def first_irreducible(F: FqField, d: int):
    return next(m for m in monic_polys(F, d) if is_irreducible(F, m))


def factor_squarefree(F: FqField, a):
    """Monic irreducible factors of a squarefree polynomial by trial division."""
    a = monic(F, a)
    factors = []
    k = 1
    while len(a) - 1 >= 2 * k:
        for cand in monic_polys(F, k):
            q, r = divmod_(F, a, cand)
            if not r:
                factors.append(cand)
                a = q
                if len(a) - 1 < 2 * k:
                    break
        k += 1
    if len(a) > 1:
        factors.append(a)
    factors.sort(key=lambda f: (len(f), f))
    return factors


def evaluate(F: FqField, a, x: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc
