"""Finite fields F_{p^f} and truncated Laurent series over them.

Field elements are encoded as integers ``0 <= v < p**f`` whose base-p digits
are the coefficients of the residue polynomial (lowest degree first).  The
encoding fits in one byte because fields are limited to at most 256
elements, which lets series store their coefficients as ``bytes``.

Laurent series carry an absolute precision ``prec``: every coefficient of
``T**j`` with ``j < prec`` is known.  Exact values (Laurent polynomials)
have ``prec == math.inf``.  An empty coefficient vector therefore means
either an exact zero or a zero-at-precision, and the two are never
confused.
"""

from __future__ import annotations

import contextlib
import contextvars
import math
import os
from functools import lru_cache

from . import kernels
from .errors import (DegenerateInput, DivisionByZero, FieldMismatch,
                     NotIrreducible, PrecisionExhausted)

INF = math.inf

MAX_FIELD_ORDER = 256

# Conway polynomials, coefficients lowest degree first.
CONWAY = {
    (2, 1): (1, 1), (2, 2): (1, 1, 1), (2, 3): (1, 1, 0, 1), (2, 4): (1, 1, 0, 0, 1),
    (3, 1): (1, 1), (3, 2): (2, 2, 1), (3, 3): (1, 2, 0, 1), (3, 4): (2, 0, 0, 2, 1),
    (5, 1): (3, 1), (5, 2): (2, 4, 1), (5, 3): (3, 3, 0, 1),
    (7, 1): (4, 1), (7, 2): (3, 6, 1),
}

_PREC = contextvars.ContextVar("charp_nbg_precision", default=None)


def default_precision() -> int:
    """Relative precision used when an exact non-monomial series is inverted."""
    value = _PREC.get()
    if value is None:
        value = int(os.environ.get("CHARP_NBG_PREC", "64"))
    return value


@contextlib.contextmanager
def working_precision(prec: int):
    """Temporarily set the relative precision used by :meth:`LaurentSeries.inverse`."""
    if prec < 1:
        raise ValueError("precision must be positive")
    token = _PREC.set(int(prec))
    try:
        yield prec
    finally:
        _PREC.reset(token)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


# ---------------------------------------------------------------------------
# polynomials over F_p given as coefficient lists (lowest first)

def _ptrim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, m, p):
    a = _ptrim(a)
    inv_lead = pow(m[-1], p - 2, p)
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        a = _ptrim(a)
    return a


def _monic_polys(p, d):
    for idx in range(p ** d):
        coeffs = []
        for _ in range(d):
            coeffs.append(idx % p)
            idx //= p
        yield coeffs + [1]


def is_irreducible_mod_p(poly, p) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    poly = _ptrim(poly)
    d = len(poly) - 1
    if d < 1:
        return False
    for k in range(1, d // 2 + 1):
        for cand in _monic_polys(p, k):
            if not _pmod(poly, cand, p):
                return False
    return True


class FqField:
    """The finite field F_p[x]/(modulus) with precomputed operation tables."""

    def __init__(self, p: int, f0: int = 1, modulus=None):
        if not is_prime(p):
            raise DegenerateInput(f"{p} is not prime")
        if f0 < 1:
            raise DegenerateInput("extension degree must be positive")
        q = p ** f0
        if q > MAX_FIELD_ORDER:
            raise DegenerateInput(f"field order {q} exceeds {MAX_FIELD_ORDER}")
        if modulus is None:
            modulus = CONWAY.get((p, f0))
            if modulus is None:
                modulus = next(m for m in _monic_polys(p, f0) if is_irreducible_mod_p(m, p))
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != f0 + 1 or modulus[-1] != 1:
            raise DegenerateInput("modulus must be monic of degree f0")
        if not is_irreducible_mod_p(modulus, p):
            raise NotIrreducible(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.f0 = f0
        self.q = q
        self.modulus = modulus
        self._build_tables()

    def _build_tables(self):
        p, q, f0 = self.p, self.q, self.f0
        digits = [self._digits(v) for v in range(q)]
        add = bytearray(q * q)
        mul = bytearray(q * q)
        for a in range(q):
            da = digits[a]
            for b in range(q):
                db = digits[b]
                add[a * q + b] = self._encode([(x + y) % p for x, y in zip(da, db)])
                if f0 == 1:
                    mul[a * q + b] = a * b % p
                else:
                    prod = [0] * (2 * f0 - 1)
                    for i, x in enumerate(da):
                        if x:
                            for j, y in enumerate(db):
                                prod[i + j] += x * y
                    red = _pmod([c % p for c in prod], self.modulus, p)
                    mul[a * q + b] = self._encode(red + [0] * (f0 - len(red)))
        self.add_tab = bytes(add)
        self.mul_tab = bytes(mul)
        neg = bytearray(q)
        inv = bytearray(q)
        for a in range(q):
            neg[a] = self._encode([(-x) % p for x in digits[a]])
            if a:
                for b in range(1, q):
                    if mul[a * q + b] == 1:
                        inv[a] = b
                        break
        self.neg_tab = bytes(neg)
        self.inv_tab = bytes(inv)

    def _digits(self, v):
        out = []
        for _ in range(self.f0):
            out.append(v % self.p)
            v //= self.p
        return out

    def _encode(self, digits):
        v = 0
        for d in reversed(list(digits)):
            v = v * self.p + d
        return v

    # raw integer-encoded arithmetic ------------------------------------
    def add(self, a: int, b: int) -> int:
        return self.add_tab[a * self.q + b]

    def sub(self, a: int, b: int) -> int:
        return self.add_tab[a * self.q + self.neg_tab[b]]

    def mul(self, a: int, b: int) -> int:
        return self.mul_tab[a * self.q + b]

    def neg(self, a: int) -> int:
        return self.neg_tab[a]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero in F_%d" % self.q)
        return self.inv_tab[a]

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def from_int(self, n: int) -> int:
        return n % self.p

    # public element API --------------------------------------------------
    def __call__(self, value) -> FqElement:
        """Element from an int (reduced mod p), a digit list, or an element."""
        if isinstance(value, FqElement):
            if value.field != self:
                raise FieldMismatch("element of another field")
            return value
        if isinstance(value, int):
            return FqElement(self, value % self.p)
        digits = [int(d) % self.p for d in value]
        if len(digits) > self.f0:
            raise DegenerateInput("too many digits")
        return FqElement(self, self._encode(digits + [0] * (self.f0 - len(digits))))

    def element(self, code: int) -> FqElement:
        """Element from its integer encoding."""
        if not 0 <= code < self.q:
            raise ValueError("encoding out of range")
        return FqElement(self, code)

    def gen(self) -> FqElement:
        """The class of x in F_p[x]/(modulus)."""
        return FqElement(self, self.p if self.f0 > 1 else (-self.modulus[0]) % self.p)

    def elements(self):
        return [FqElement(self, v) for v in range(self.q)]

    def zero(self) -> FqElement:
        return FqElement(self, 0)

    def one(self) -> FqElement:
        return FqElement(self, 1)

    def __eq__(self, other):
        return (isinstance(other, FqField) and self.p == other.p
                and self.f0 == other.f0 and self.modulus == other.modulus)

    def __hash__(self):
        return hash((self.p, self.f0, self.modulus))

    def __repr__(self):
        return f"FqField(p={self.p}, f0={self.f0})"


@lru_cache(maxsize=None)
def get_field(p: int, f0: int = 1, modulus=None) -> FqField:
    """Cached :class:`FqField` constructor."""
    return FqField(p, f0, modulus)


class FqElement:
    """An immutable element of an :class:`FqField`."""

    __slots__ = ("field", "value")

    def __init__(self, field: FqField, value: int):
        self.field = field
        self.value = value

    def _coerce(self, other):
        if isinstance(other, FqElement):
            if other.field != self.field:
                raise FieldMismatch("operands in different finite fields")
            return other.value
        if isinstance(other, int):
            return other % self.field.p
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FqElement(self.field, self.field.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FqElement(self.field, self.field.sub(self.value, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FqElement(self.field, self.field.sub(o, self.value))

    def __neg__(self):
        return FqElement(self.field, self.field.neg(self.value))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FqElement(self.field, self.field.mul(self.value, o))

    __rmul__ = __mul__

    def inverse(self) -> FqElement:
        return FqElement(self.field, self.field.inv(self.value))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FqElement(self.field, self.field.mul(self.value, self.field.inv(o)))

    def __pow__(self, e: int):
        return FqElement(self.field, self.field.pow(self.value, e))

    def frobenius(self, times: int = 1) -> FqElement:
        v = self.value
        for _ in range(times):
            v = self.field.pow(v, self.field.p)
        return FqElement(self.field, v)

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        if isinstance(other, FqElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.field.p
        return NotImplemented

    def __hash__(self):
        return hash((self.field.q, self.value))

    @property
    def coeffs(self):
        """Coordinates over F_p in the power basis of the modulus."""
        return tuple(self.field._digits(self.value))

    def __repr__(self):
        if self.field.f0 == 1:
            return str(self.value)
        terms = []
        for i, d in enumerate(self.coeffs):
            if not d:
                continue
            mono = "" if i == 0 else "x" if i == 1 else f"x^{i}"
            if not mono:
                terms.append(str(d))
            else:
                terms.append(mono if d == 1 else f"{d}*{mono}")
        return " + ".join(reversed(terms)) or "0"


# ---------------------------------------------------------------------------

def _strip(v0, coeffs: bytes):
    """Normal form of a coefficient window: no leading or trailing zeros."""
    stripped = coeffs.lstrip(b"\x00")
    v0 += len(coeffs) - len(stripped)
    return v0, stripped.rstrip(b"\x00")


class LaurentSeries:
    """Element of F_q((T)) known modulo T**prec.

    ``v0`` is the exponent of ``coeffs[0]``; in normal form ``coeffs`` is
    either empty or starts and ends with a nonzero byte.
    """

    __slots__ = ("field", "v0", "coeffs", "prec")

    def __init__(self, field: FqField, v0: int, coeffs=b"", prec=INF):
        if not isinstance(coeffs, (bytes, bytearray)):
            # ints are raw encodings (residues mod p over a prime field)
            coeffs = bytes(c.value if isinstance(c, FqElement) else c % field.q for c in coeffs)
        coeffs = bytes(coeffs)
        if prec != INF:
            prec = int(prec)
            keep = prec - v0
            if keep < len(coeffs):
                coeffs = coeffs[:max(keep, 0)]
        v0, coeffs = _strip(v0, coeffs)
        if not coeffs:
            v0 = prec if prec != INF else 0
        self.field = field
        self.v0 = v0
        self.coeffs = coeffs
        self.prec = prec

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls, field, prec=INF):
        return cls(field, 0, b"", prec)

    @classmethod
    def one(cls, field):
        return cls(field, 0, b"\x01")

    @classmethod
    def monomial(cls, field, k: int, c=1, prec=INF):
        code = c.value if isinstance(c, FqElement) else field.from_int(c)
        return cls(field, k, bytes([code]), prec)

    @classmethod
    def T(cls, field):
        return cls.monomial(field, 1)

    @classmethod
    def from_terms(cls, field, terms, prec=INF):
        """Series from a mapping exponent -> coefficient (int or FqElement)."""
        if not terms:
            return cls.zero(field, prec)
        lo, hi = min(terms), max(terms)
        buf = bytearray(hi - lo + 1)
        for k, c in terms.items():
            code = c.value if isinstance(c, FqElement) else field.from_int(c)
            buf[k - lo] = field.add(buf[k - lo], code)
        return cls(field, lo, bytes(buf), prec)

    # predicates -----------------------------------------------------------
    @property
    def is_exact(self) -> bool:
        return self.prec == INF

    def is_zero(self) -> bool:
        """No known nonzero coefficient (exact zero or zero-at-precision)."""
        return not self.coeffs

    def is_exact_zero(self) -> bool:
        return not self.coeffs and self.prec == INF

    def is_zero_at_precision(self) -> bool:
        return not self.coeffs and self.prec != INF

    def is_one(self) -> bool:
        return self.prec == INF and self.v0 == 0 and self.coeffs == b"\x01"

    def is_monomial(self) -> bool:
        return len(self.coeffs) == 1

    def is_constant(self) -> bool:
        """Exact and free of T: zero or a single T^0 term."""
        return self.prec == INF and (not self.coeffs or (self.v0 == 0 and len(self.coeffs) == 1))

    def valuation(self):
        if self.coeffs:
            return self.v0
        if self.prec == INF:
            return INF
        raise PrecisionExhausted(f"series is zero modulo T^{self.prec}")

    def valuation_bound(self):
        """Valuation if known, else the guaranteed lower bound ``prec``."""
        return self.v0 if self.coeffs else self.prec

    def lead(self) -> FqElement:
        if not self.coeffs:
            raise PrecisionExhausted("no known nonzero coefficient")
        return FqElement(self.field, self.coeffs[0])

    def coefficient(self, j: int) -> FqElement:
        if j >= self.prec:
            raise PrecisionExhausted(f"coefficient of T^{j} unknown (prec {self.prec})")
        i = j - self.v0
        if self.coeffs and 0 <= i < len(self.coeffs):
            return FqElement(self.field, self.coeffs[i])
        return FqElement(self.field, 0)

    def terms(self):
        """(exponent, FqElement) pairs of the nonzero known coefficients."""
        return [(self.v0 + i, FqElement(self.field, c)) for i, c in enumerate(self.coeffs) if c]

    def degree(self):
        if not self.coeffs:
            return -INF
        return self.v0 + len(self.coeffs) - 1

    # arithmetic ------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, LaurentSeries):
            if other.field != self.field:
                raise FieldMismatch("series over different fields")
            return other
        if isinstance(other, int):
            return LaurentSeries.monomial(self.field, 0, other)
        if isinstance(other, FqElement):
            if other.field != self.field:
                raise FieldMismatch("scalar from another field")
            return LaurentSeries.monomial(self.field, 0, other)
        return None

    def _axpy(self, other, c):
        prec = min(self.prec, other.prec)
        if not self.coeffs and not other.coeffs:
            return LaurentSeries(self.field, 0, b"", prec)
        starts = [x.v0 for x in (self, other) if x.coeffs]
        ends = [x.v0 + len(x.coeffs) for x in (self, other) if x.coeffs]
        lo = min(starts)
        hi = min(prec, max(ends))
        if hi <= lo:
            return LaurentSeries(self.field, 0, b"", prec)
        f = self.field
        nout = int(hi - lo)
        if f.f0 == 1:
            buf = kernels.axpy_prime(self.coeffs, self.v0 - lo, other.coeffs, other.v0 - lo, c, nout, f.p)
        else:
            buf = kernels.axpy_table(self.coeffs, self.v0 - lo, other.coeffs, other.v0 - lo, c, nout,
                                     f.add_tab, f.mul_tab, f.q)
        return LaurentSeries(f, lo, buf, prec)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._axpy(o, 1)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._axpy(o, self.field.neg(1))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o._axpy(self, self.field.neg(1))

    def __neg__(self):
        return LaurentSeries.zero(self.field)._axpy(self, self.field.neg(1))

    def scale(self, c) -> LaurentSeries:
        """Multiply by a constant of the coefficient field."""
        code = c.value if isinstance(c, FqElement) else self.field.from_int(c)
        if code == 0:
            return LaurentSeries.zero(self.field)
        if code == 1:
            return self
        f = self.field
        buf = bytes(f.mul_tab[code * f.q + x] for x in self.coeffs)
        return LaurentSeries(f, self.v0, buf, self.prec)

    def __mul__(self, other):
        if isinstance(other, (int, FqElement)):
            if isinstance(other, FqElement) and other.field != self.field:
                raise FieldMismatch("scalar from another field")
            return self.scale(other)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.is_exact_zero() or o.is_exact_zero():
            return LaurentSeries.zero(self.field)
        va, vb = self.valuation_bound(), o.valuation_bound()
        prec = min(self.prec + vb, o.prec + va)
        if not self.coeffs or not o.coeffs:
            return LaurentSeries(self.field, 0, b"", prec)
        v = self.v0 + o.v0
        full = len(self.coeffs) + len(o.coeffs) - 1
        nout = full if prec == INF else int(min(full, prec - v))
        if nout <= 0:
            return LaurentSeries(self.field, 0, b"", prec)
        f = self.field
        if f.f0 == 1:
            buf = kernels.mul_prime(self.coeffs, o.coeffs, nout, f.p)
        else:
            buf = kernels.mul_table(self.coeffs, o.coeffs, nout, f.add_tab, f.mul_tab, f.q)
        return LaurentSeries(f, v, buf, prec)

    __rmul__ = __mul__

    def shift(self, k: int) -> LaurentSeries:
        """Multiply by T**k."""
        if not self.coeffs:
            return LaurentSeries(self.field, 0, b"", self.prec + k)
        return LaurentSeries(self.field, self.v0 + k, self.coeffs, self.prec + k)

    def inverse(self) -> LaurentSeries:
        """Multiplicative inverse; relative precision is preserved.

        An exact monomial inverts exactly; any other exact series is
        inverted to the current :func:`default_precision`.
        """
        if not self.coeffs:
            if self.prec == INF:
                raise DivisionByZero("inverse of exact zero")
            raise PrecisionExhausted("inverse of a series that is zero at precision")
        f = self.field
        a0inv = f.inv(self.coeffs[0])
        if self.prec == INF:
            if len(self.coeffs) == 1:
                return LaurentSeries(f, -self.v0, bytes([a0inv]))
            rel = default_precision()
        else:
            rel = int(self.prec - self.v0)
        if f.f0 == 1:
            buf = kernels.inv_prime(self.coeffs, rel, f.p, a0inv)
        else:
            buf = kernels.inv_table(self.coeffs, rel, f.add_tab, f.mul_tab, f.neg_tab, f.q, a0inv)
        return LaurentSeries(f, -self.v0, buf, -self.v0 + rel)

    def __truediv__(self, other):
        if isinstance(other, (int, FqElement)):
            code = other.value if isinstance(other, FqElement) else self.field.from_int(other)
            return self.scale(FqElement(self.field, self.field.inv(code)))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = LaurentSeries.one(self.field)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def truncate(self, prec) -> LaurentSeries:
        """Forget every coefficient of T**j for j >= prec."""
        return LaurentSeries(self.field, self.v0, self.coeffs, min(prec, self.prec))

    def agrees_with(self, other: LaurentSeries) -> bool:
        """Equality on the window where both operands are known."""
        prec = min(self.prec, other.prec)
        return self.truncate(prec) == other.truncate(prec)

    def __eq__(self, other):
        if isinstance(other, LaurentSeries):
            return (self.field == other.field and self.v0 == other.v0
                    and self.coeffs == other.coeffs and self.prec == other.prec)
        if isinstance(other, int):
            return self == LaurentSeries.monomial(self.field, 0, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.v0, self.coeffs, self.prec))

    def __repr__(self):
        parts = []
        for k, c in self.terms():
            coef = repr(c)
            if k == 0:
                parts.append(coef)
            else:
                mono = "T" if k == 1 else f"T^{k}"
                parts.append(mono if coef == "1" else f"{coef}*{mono}" if self.field.f0 == 1 else f"({coef})*{mono}")
        if self.prec != INF:
            parts.append(f"O(T^{self.prec})")
        return " + ".join(parts) or "0"

    # serialization -------------------------------------------------------
    def to_json(self) -> dict:
        f = self.field
        return {
            "p": f.p,
            "f0": f.f0,
            "v0": self.v0,
            "prec": None if self.prec == INF else self.prec,
            "coeffs": [f._digits(c) for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, data: dict, field: FqField | None = None) -> LaurentSeries:
        if field is None:
            field = get_field(data["p"], data["f0"])
        elif field.p != data["p"] or field.f0 != data["f0"]:
            raise FieldMismatch("serialized series belongs to another field")
        coeffs = bytes(field._encode(d) for d in data["coeffs"])
        prec = INF if data.get("prec") is None else data["prec"]
        return cls(field, data["v0"], coeffs, prec)
