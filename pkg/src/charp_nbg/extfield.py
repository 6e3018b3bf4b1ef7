"""Towers of extensions over K = F_q((T)) and arithmetic in them.

A tower is a chain K = L_0 < L_1 < ... < L_k where each step adjoins a root
of a monic polynomial over the previous level:

* Artin-Schreier steps ``X^q - X - alpha`` (totally ramified, wild),
* unramified steps ``m(X)`` with ``m`` irreducible over the constants,
* radical steps ``X^r - beta`` with ``p`` not dividing ``r`` (tamely,
  totally ramified).

An element of level ``k`` is a tuple of level ``k-1`` coefficients, the
level 0 coefficients being :class:`LaurentSeries`.  Arithmetic reduces
modulo the step polynomial.  The flattened K-basis consists of the
monomials ``theta_1^j1 ... theta_k^jk`` ordered lexicographically in
``(j1, ..., jk)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

from . import fqpoly
from .basefield import INF, FqElement, FqField, LaurentSeries, get_field
from .errors import (DegenerateInput, DivisionByZero, FieldMismatch,
                     InconsistentValuation, NotAGenerator, NotIrreducible,
                     PrecisionExhausted)
from .linalg import berkowitz

MAX_DEGREE = 16
MAX_STEPS = 3


# ---------------------------------------------------------------------------
# step descriptions (unresolved: coefficients may still be expressions)

@dataclass(frozen=True)
class ArtinSchreier:
    """Adjoin a root of X^q - X - alpha."""
    alpha: object
    q: int
    name: str | None = None
    kind = "artin-schreier"


@dataclass(frozen=True)
class Unramified:
    """Adjoin a root of a monic irreducible polynomial with constant coefficients.

    ``modulus`` lists integer codes of the base field, lowest degree first.
    """
    d: int
    modulus: tuple | None = None
    name: str | None = None
    kind = "unramified"


@dataclass(frozen=True)
class Radical:
    """Adjoin a root of X^r - beta with p not dividing r."""
    r: int
    beta: object
    name: str | None = None
    kind = "radical"


class _Step:
    """A resolved step: polynomial, reduction rule and ramification data."""

    def __init__(self, kind, degree, name, poly, e, f, v_gen, params):
        self.kind = kind
        self.degree = degree
        self.name = name
        self.poly = poly              # monic, lowest first, level k-1 elements
        self.e = e
        self.f = f
        self.v_gen = v_gen            # valuation of the generator at its own level
        self.params = params          # JSON-ready description
        # X^d = sum_i red_i X^i  with red_i = -poly_i
        self.reduction = [(i, -c) for i, c in enumerate(poly[:-1]) if not c.is_exact_zero()]

    @property
    def b(self):
        """For Artin-Schreier steps, -v(alpha) in the lower normalization."""
        return -self.v_gen


def _is_prime_power_of(q, p):
    if q < p:
        return False
    while q % p == 0:
        q //= p
    return q == 1


def _is_zero(x):
    return x.is_exact_zero()


class Tower:
    """An immutable tower of extensions over F_q((T))."""

    def __init__(self, base: FqField, steps=()):
        self.base = base
        self.steps = tuple(steps)
        self.degrees = [1]
        self.e_levels = [1]
        self.f_levels = [1]
        for s in self.steps:
            self.degrees.append(self.degrees[-1] * s.degree)
            self.e_levels.append(self.e_levels[-1] * s.e)
            self.f_levels.append(self.f_levels[-1] * s.f)

    # construction -----------------------------------------------------------
    @classmethod
    def over(cls, p: int, f0: int = 1, modulus=None) -> Tower:
        return cls(get_field(p, f0, tuple(modulus) if modulus is not None else None))

    def extend(self, step) -> Tower:
        """New tower with one more step on top of the current top level."""
        if len(self.steps) >= MAX_STEPS:
            raise DegenerateInput(f"towers are limited to {MAX_STEPS} steps")
        p = self.base.p
        k = self.height
        taken = {s.name for s in self.steps}
        kind = step.kind
        default = {"artin-schreier": "theta", "unramified": "zeta", "radical": "eta"}[kind]
        name = step.name or default
        if name in taken or name in ("T", "x"):
            name = f"{default}{k + 1}"
        one = self.one(k)
        if kind == "artin-schreier":
            q = int(step.q)
            if not _is_prime_power_of(q, p):
                raise DegenerateInput(f"q = {q} is not a power of p = {p}")
            alpha = self._resolve(step.alpha)
            if not self._exact(alpha):
                raise DegenerateInput("alpha must be exact")
            v = self.valuation(alpha)
            if v >= 0 or v % p == 0:
                raise DegenerateInput(f"v(alpha) = {v}: need -b with b > 0 and p not dividing b")
            poly = [-alpha, -one] + [self.zero(k)] * (q - 2) + [one]
            new = _Step(kind, q, name, tuple(poly), q, 1, v,
                        {"q": q, "alpha": self.format(alpha)})
        elif kind == "radical":
            r = int(step.r)
            if r < 2 or r % p == 0:
                raise DegenerateInput(f"radical degree {r} must be >= 2 and prime to p")
            beta = self._resolve(step.beta)
            if not self._exact(beta):
                raise DegenerateInput("beta must be exact")
            v = self.valuation(beta)
            if v == INF or math.gcd(v, r) != 1:
                raise DegenerateInput(f"v(beta) = {v} must be prime to r = {r}")
            poly = [-beta] + [self.zero(k)] * (r - 1) + [one]
            new = _Step(kind, r, name, tuple(poly), r, 1, v,
                        {"r": r, "beta": self.format(beta)})
        elif kind == "unramified":
            d = int(step.d)
            if d < 2:
                raise DegenerateInput("unramified degree must be >= 2")
            F = self.base
            modulus = step.modulus
            if modulus is None:
                if F.f0 == 1 and (p, d) in _conway_keys():
                    modulus = get_field(p, d).modulus
                else:
                    modulus = tuple(fqpoly.first_irreducible(F, d))
            modulus = tuple(int(c) for c in modulus)
            if len(modulus) != d + 1 or modulus[-1] != 1:
                raise DegenerateInput("modulus must be monic of degree d")
            if not fqpoly.is_irreducible(F, list(modulus)):
                raise NotIrreducible(f"modulus {modulus} is reducible over F_{F.q}")
            if math.gcd(d, self.constant_degree) != 1:
                raise NotIrreducible("modulus does not stay irreducible over the current constants")
            if F.q ** (self.constant_degree * d) > 256:
                raise DegenerateInput("constant field would exceed 256 elements")
            poly = tuple(self.embed(LaurentSeries.monomial(F, 0, FqElement(F, c)) if c else
                                    LaurentSeries.zero(F), k) for c in modulus)
            new = _Step(kind, d, name, poly, 1, d, 0, {"d": d, "modulus": list(modulus)})
        else:
            raise DegenerateInput(f"unknown step kind {kind!r}")
        if self.degree * new.degree > MAX_DEGREE:
            raise DegenerateInput(f"total degree limited to {MAX_DEGREE}")
        tower = Tower(self.base, tuple(_copy_step(s) for s in self.steps) + (new,))
        tower._rehome_steps()
        return tower

    def _rehome_steps(self):
        # step polynomials must reference this tower so that arithmetic never mixes towers
        for s in self.steps:
            s.poly = tuple(self.rehome(c) for c in s.poly)
            s.reduction = [(i, -c) for i, c in enumerate(s.poly[:-1]) if not c.is_exact_zero()]

    def rehome(self, x):
        """Rebuild an element of a prefix tower as an element of this tower."""
        if isinstance(x, LaurentSeries):
            return x
        return TowerElement(self, x.level, tuple(self.rehome(c) for c in x.rep))

    def _resolve(self, value):
        if isinstance(value, str):
            from .expr import parse_element
            return parse_element(self, value, self.height)
        if isinstance(value, int):
            return self.embed(value, self.height)
        x = self.rehome(value) if isinstance(value, TowerElement) else value
        return self.embed(x, self.height)

    # structure ------------------------------------------------------------
    @property
    def height(self) -> int:
        return len(self.steps)

    @property
    def degree(self) -> int:
        return self.degrees[-1]

    n = degree

    @property
    def e(self) -> int:
        return self.e_levels[-1]

    @property
    def f(self) -> int:
        return self.f_levels[-1]

    @property
    def p(self) -> int:
        return self.base.p

    @property
    def constant_degree(self) -> int:
        """[constants of the top level : base field]."""
        return math.prod(s.degree for s in self.steps if s.kind == "unramified")

    @cached_property
    def key(self):
        return (self.base.p, self.base.f0, self.base.modulus,
                tuple((s.kind, tuple(sorted((k, str(v)) for k, v in s.params.items()))) for s in self.steps))

    def compatible(self, other: Tower, level: int) -> bool:
        return self is other or (self.base == other.base and self.key[3][:level] == other.key[3][:level])

    def prefix(self, level: int) -> Tower:
        """The tower of the first ``level`` steps (elements must be re-homed)."""
        t = Tower(self.base, self.steps[:level])
        t.steps = tuple(_copy_step(s) for s in self.steps[:level])
        t._rehome_steps()
        return t

    def names(self):
        return [s.name for s in self.steps]

    def describe(self) -> dict:
        return {"p": self.base.p, "f0": self.base.f0,
                "steps": [{"kind": s.kind, "params": dict(s.params)} for s in self.steps]}

    def __repr__(self):
        parts = [f"F_{self.base.q}((T))"]
        for s in self.steps:
            parts.append(f"{s.kind}({s.params})")
        return " < ".join(parts)

    # elements -----------------------------------------------------------------
    def zero(self, level=None):
        level = self.height if level is None else level
        if level == 0:
            return LaurentSeries.zero(self.base)
        d = self.steps[level - 1].degree
        z = self.zero(level - 1)
        return TowerElement(self, level, (z,) * d)

    def one(self, level=None):
        level = self.height if level is None else level
        if level == 0:
            return LaurentSeries.one(self.base)
        return self.embed(self.one(level - 1), level)

    def gen(self, level=None):
        """Generator adjoined by step ``level`` (default: the top step)."""
        level = self.height if level is None else level
        if level < 1:
            raise ValueError("level 0 has no generator; use T()")
        d = self.steps[level - 1].degree
        z, o = self.zero(level - 1), self.one(level - 1)
        return TowerElement(self, level, (z, o) + (z,) * (d - 2))

    def T(self, level=None):
        level = self.height if level is None else level
        return self.embed(LaurentSeries.T(self.base), level)

    def constant(self, c, level=None):
        """Base constant (int or FqElement) at ``level``."""
        level = self.height if level is None else level
        return self.embed(LaurentSeries.monomial(self.base, 0, c), level)

    def embed(self, x, level=None):
        """Embed an element of a lower level (or an int/FqElement) at ``level``."""
        level = self.height if level is None else level
        if isinstance(x, (int, FqElement)):
            x = LaurentSeries.monomial(self.base, 0, x)
        if isinstance(x, LaurentSeries):
            if x.field != self.base:
                raise FieldMismatch("series over another field")
            cur = 0
        elif isinstance(x, TowerElement):
            cur = x.level
            if cur > level:
                raise ValueError("cannot embed downwards")
            if x.tower is not self:
                if not self.compatible(x.tower, cur):
                    raise FieldMismatch("element of an unrelated tower")
                x = self.rehome(x)
        else:
            raise TypeError(f"cannot embed {type(x).__name__}")
        while cur < level:
            cur += 1
            d = self.steps[cur - 1].degree
            x = TowerElement(self, cur, (x,) + (self.zero(cur - 1),) * (d - 1))
        return x

    def level_of(self, x) -> int:
        return 0 if isinstance(x, LaurentSeries) else x.level

    def _exact(self, x) -> bool:
        if isinstance(x, LaurentSeries):
            return x.is_exact
        return all(self._exact(c) for c in x.rep)

    # flattened coordinates -------------------------------------------------
    def to_vector(self, x, level=None):
        """Coordinates of ``x`` in the flattened K-basis of ``level``."""
        level = self.level_of(x) if level is None else level
        x = self.embed(x, level)
        if level == 0:
            return [x]
        d = self.steps[level - 1].degree
        subs = [self.to_vector(c, level - 1) for c in x.rep]
        return [subs[j][m] for m in range(self.degrees[level - 1]) for j in range(d)]

    def from_vector(self, vec, level=None):
        level = self.height if level is None else level
        if level == 0:
            (x,) = vec
            return x
        d = self.steps[level - 1].degree
        m = self.degrees[level - 1]
        if len(vec) != m * d:
            raise ValueError("coordinate vector has the wrong length")
        rep = tuple(self.from_vector([vec[i * d + j] for i in range(m)], level - 1) for j in range(d))
        return TowerElement(self, level, rep)

    def basis_exponents(self, level=None):
        level = self.height if level is None else level
        exps = [()]
        for s in self.steps[:level]:
            exps = [e + (j,) for e in exps for j in range(s.degree)]
        return exps

    def basis(self, level=None):
        """The flattened K-basis as elements."""
        level = self.height if level is None else level
        n = self.degrees[level]
        out = []
        zero, one = LaurentSeries.zero(self.base), LaurentSeries.one(self.base)
        for i in range(n):
            out.append(self.from_vector([one if j == i else zero for j in range(n)], level))
        return out

    def basis_valuations(self, level=None):
        """Valuations of the flattened basis monomials at ``level``."""
        level = self.height if level is None else level
        vals = []
        for exps in self.basis_exponents(level):
            v = 0
            for k, j in enumerate(exps, start=1):
                v += j * self.steps[k - 1].v_gen * (self.e_levels[level] // self.e_levels[k])
            vals.append(v)
        return vals

    def constant_indices(self, level=None):
        """Flattened indices of the monomials built from unramified generators only."""
        level = self.height if level is None else level
        out = []
        for i, exps in enumerate(self.basis_exponents(level)):
            if all(j == 0 or self.steps[k].kind == "unramified" for k, j in enumerate(exps)):
                out.append(i)
        return out

    def constants(self, level=None):
        """Every element of the constant field of ``level`` (exhaustive)."""
        level = self.height if level is None else level
        idx = self.constant_indices(level)
        F = self.base
        n = self.degrees[level]
        out = []
        count = F.q ** len(idx)
        for code in range(count):
            vec = [LaurentSeries.zero(F)] * n
            c = code
            for i in idx:
                vec[i] = LaurentSeries.monomial(F, 0, FqElement(F, c % F.q)) if c % F.q else LaurentSeries.zero(F)
                c //= F.q
            out.append(self.from_vector(vec, level))
        return out

    def is_constant(self, x) -> bool:
        level = self.level_of(x)
        vec = self.to_vector(x, level)
        allowed = set(self.constant_indices(level))
        return all(c.is_constant() and (c.is_exact_zero() or i in allowed) for i, c in enumerate(vec))

    # valuation ------------------------------------------------------------------
    def _val(self, x):
        """(valuation or lower bound, determined?) in the normalization of x's level."""
        if isinstance(x, LaurentSeries):
            if x.coeffs:
                return x.v0, True
            return x.prec, x.prec == INF
        step = self.steps[x.level - 1]
        known, bound = INF, INF
        for j, c in enumerate(x.rep):
            v, det = self._val(c)
            t = step.e * v + j * step.v_gen if v != INF else INF
            if det:
                known = min(known, t)
            else:
                bound = min(bound, t)
        if known < bound:
            return known, True
        if bound == INF:
            return INF, True
        return min(known, bound), False

    def valuation(self, x):
        """Normalized valuation of ``x`` at its own level (``inf`` for exact zero).

        Computed directly from the representation: within a ramified step the
        terms ``c_j theta^j`` have pairwise distinct valuations, within an
        unramified step the residues of the powers of the generator are
        independent, so no cancellation can occur.
        """
        v, det = self._val(x)
        if not det:
            raise PrecisionExhausted("valuation not determined at this precision")
        return v

    # trace and norm ------------------------------------------------------------
    @cached_property
    def _power_sums(self):
        """Relative traces Tr(theta_k^j), j < d_k, for every step."""
        sums = []
        for k, s in enumerate(self.steps, start=1):
            g = self.gen(k)
            row = []
            power = self.one(k)
            for j in range(s.degree):
                tr = self.zero(k - 1)
                basis_elt = self.one(k)
                for i in range(s.degree):
                    tr = tr + (power * basis_elt).rep[i]
                    basis_elt = basis_elt * g
                row.append(tr)
                power = power * g
            sums.append(row)
        return sums

    def relative_trace(self, x):
        """Trace from level x.level down to level x.level - 1."""
        sums = self._power_sums[x.level - 1]
        acc = self.zero(x.level - 1)
        for c, s in zip(x.rep, sums):
            if not c.is_exact_zero():
                acc = acc + c * s
        return acc

    def relative_matrix(self, x):
        """Matrix of multiplication by x over level x.level - 1 (basis 1, theta, ...)."""
        g = self.gen(x.level)
        cols = []
        cur = x
        for _ in range(self.steps[x.level - 1].degree):
            cols.append(cur.rep)
            cur = cur * g
        d = len(cols)
        return [[cols[j][i] for j in range(d)] for i in range(d)]

    def relative_charpoly(self, x):
        """Characteristic polynomial of x over the level below, lowest degree first."""
        k = x.level
        coeffs = berkowitz(self.relative_matrix(x), self.one(k - 1), self.zero(k - 1))
        return list(reversed(coeffs))

    def relative_norm(self, x):
        cp = self.relative_charpoly(x)
        d = len(cp) - 1
        return cp[0] if d % 2 == 0 else -cp[0]

    def trace(self, x):
        """Tr_{L/K}(x) as a LaurentSeries (composite of relative traces)."""
        while not isinstance(x, LaurentSeries):
            x = self.relative_trace(x)
        return x

    def norm(self, x):
        """N_{L/K}(x) as a LaurentSeries (composite of relative norms)."""
        while not isinstance(x, LaurentSeries):
            x = self.relative_norm(x)
        return x

    def mult_matrix(self, x):
        """Matrix over K of y -> x*y in the flattened basis of x's level (columns = images)."""
        level = self.level_of(x)
        cols = [self.to_vector(x * b, level) for b in self.basis(level)]
        n = len(cols)
        return [[cols[j][i] for j in range(n)] for i in range(n)]

    def matrix_trace(self, x):
        m = self.mult_matrix(x)
        acc = LaurentSeries.zero(self.base)
        for i in range(len(m)):
            acc = acc + m[i][i]
        return acc

    def matrix_norm(self, x):
        from .linalg import det
        return det(self.mult_matrix(x), LaurentSeries.one(self.base), LaurentSeries.zero(self.base))

    def charpoly(self, x):
        """Characteristic polynomial over K of the top-level element x, lowest first."""
        m = self.mult_matrix(x)
        return list(reversed(berkowitz(m, LaurentSeries.one(self.base), LaurentSeries.zero(self.base))))

    def valuation_ext(self, x):
        """v_L(x) = v_K(N(x)) / f, via the norm."""
        level = self.level_of(x)
        N = x if level == 0 else self.norm(x)
        vk = N.valuation()
        if vk == INF:
            return INF
        f = self.f_levels[level]
        if vk % f:
            raise InconsistentValuation(f"v_K(N(x)) = {vk} not divisible by f = {f}")
        return vk // f

    def minimal_polynomial(self, x):
        """Minimal polynomial over K of a generator x of the top level, lowest first.

        The characteristic polynomial chi of x is m^k for the minimal
        polynomial m; since the extension is separable, chi is squarefree
        (k = 1) exactly when chi'(x) != 0, which is the test applied.
        """
        chi = self.charpoly(x)
        value = evaluate_poly(derivative(chi), x, self)
        if value.is_zero():
            if value.is_exact_zero():
                raise NotAGenerator("characteristic polynomial is not squarefree")
            raise PrecisionExhausted("squarefree test undecided at this precision")
        return chi

    # formatting --------------------------------------------------------------
    def format(self, x) -> str:
        from .expr import format_element
        return format_element(self, x)

    def parse(self, text: str, level=None):
        from .expr import parse_element
        return parse_element(self, text, self.height if level is None else level)


def _conway_keys():
    from .basefield import CONWAY
    return CONWAY.keys()


def _copy_step(s):
    c = _Step.__new__(_Step)
    c.__dict__.update(s.__dict__)
    return c


def derivative(coeffs):
    """Formal derivative of a coefficient list (lowest first)."""
    return [c * i for i, c in enumerate(coeffs)][1:]


def evaluate_poly(coeffs, x, tower: Tower):
    """Horner evaluation of a polynomial with lower-level coefficients at x."""
    level = tower.level_of(x)
    acc = tower.zero(level)
    for c in reversed(coeffs):
        acc = acc * x + tower.embed(c, level) if not isinstance(c, int) else acc * x + c
    return acc


class TowerElement:
    """Element of level ``level`` of a tower: sum of rep[j] * theta^j."""

    __slots__ = ("tower", "level", "rep")

    def __init__(self, tower: Tower, level: int, rep):
        self.tower = tower
        self.level = level
        self.rep = tuple(rep)

    # predicates ------------------------------------------------------------
    def is_exact_zero(self) -> bool:
        return all(c.is_exact_zero() for c in self.rep)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.rep)

    def is_zero_at_precision(self) -> bool:
        return self.is_zero() and not self.is_exact_zero()

    def is_one(self) -> bool:
        return self.rep[0].is_one() and all(c.is_exact_zero() for c in self.rep[1:])

    @property
    def step(self):
        return self.tower.steps[self.level - 1]

    # coercion ------------------------------------------------------------------
    def _lift(self, other):
        """(operand, is_lower); operand is None when it is unusable or sits at a higher level."""
        if isinstance(other, TowerElement):
            if other.level == self.level:
                if other.tower is not self.tower and not self.tower.compatible(other.tower, self.level):
                    raise FieldMismatch("elements of different towers")
                return other, False
            if other.level > self.level:
                return None, True
            return other, True
        if isinstance(other, (LaurentSeries, int, FqElement)):
            return other, True
        return None, False

    def __add__(self, other):
        o, lower = self._lift(other)
        if o is None:
            return other.__add__(self) if lower else NotImplemented
        if lower:
            o = self.tower.embed(o, self.level)
        return TowerElement(self.tower, self.level, tuple(a + b for a, b in zip(self.rep, o.rep)))

    __radd__ = __add__

    def __neg__(self):
        return TowerElement(self.tower, self.level, tuple(-a for a in self.rep))

    def __sub__(self, other):
        o, lower = self._lift(other)
        if o is None:
            return (-other).__add__(self) if lower else NotImplemented
        if lower:
            o = self.tower.embed(o, self.level)
        return TowerElement(self.tower, self.level, tuple(a - b for a, b in zip(self.rep, o.rep)))

    def __rsub__(self, other):
        return (-self) + other

    def _scale(self, c):
        if isinstance(c, TowerElement) and c.level < self.level - 1:
            c = self.tower.embed(c, self.level - 1)
        elif isinstance(c, (int, FqElement)) and self.level > 1:
            c = self.tower.embed(c, self.level - 1)
        return TowerElement(self.tower, self.level, tuple(a * c for a in self.rep))

    def __mul__(self, other):
        o, lower = self._lift(other)
        if o is None:
            return other.__mul__(self) if lower else NotImplemented
        if lower:
            return self._scale(o)
        step = self.step
        d = step.degree
        zero = self.tower.zero(self.level - 1)
        prod = [zero] * (2 * d - 1)
        for i, a in enumerate(self.rep):
            if a.is_exact_zero():
                continue
            for j, b in enumerate(o.rep):
                if b.is_exact_zero():
                    continue
                prod[i + j] = prod[i + j] + a * b
        for k in range(2 * d - 2, d - 1, -1):
            c = prod[k]
            if c.is_exact_zero():
                continue
            for i, r in step.reduction:
                prod[k - d + i] = prod[k - d + i] + (c if r.is_one() else c * r)
        return TowerElement(self.tower, self.level, prod[:d])

    __rmul__ = __mul__

    def inverse(self) -> TowerElement:
        """Inverse via the relative characteristic polynomial."""
        if self.is_exact_zero():
            raise DivisionByZero("inverse of exact zero")
        if self.is_zero():
            raise PrecisionExhausted("inverse of an element that is zero at precision")
        cp = self.tower.relative_charpoly(self)     # lowest first, monic
        c0 = cp[0]
        if c0.is_exact_zero():
            raise DivisionByZero("element has zero norm")
        acc = self.tower.one(self.level)
        for c in reversed(cp[1:-1]):
            acc = acc * self + c
        return acc._scale(-(c0.inverse()))

    def __truediv__(self, other):
        if isinstance(other, TowerElement) and other.level == self.level:
            return self * other.inverse()
        if isinstance(other, (LaurentSeries, TowerElement)):
            return self._scale(other.inverse())
        if isinstance(other, (int, FqElement)):
            F = self.tower.base
            code = other.value if isinstance(other, FqElement) else F.from_int(other)
            return self._scale(FqElement(F, F.inv(code)))
        return NotImplemented

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.tower.one(self.level)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # conveniences -------------------------------------------------------------
    def valuation(self):
        return self.tower.valuation(self)

    def trace(self):
        return self.tower.trace(self)

    def norm(self):
        return self.tower.norm(self)

    def truncate(self, prec) -> TowerElement:
        return TowerElement(self.tower, self.level, tuple(c.truncate(prec) for c in self.rep))

    def __eq__(self, other):
        if isinstance(other, TowerElement):
            return self.level == other.level and self.rep == other.rep
        if isinstance(other, (int, LaurentSeries)):
            return self == self.tower.embed(other, self.level)
        return NotImplemented

    def __hash__(self):
        return hash((self.level, self.rep))

    def __repr__(self):
        return self.tower.format(self)


class TowerMap:
    """K-algebra map from the top level of ``domain`` into the top level of ``codomain``.

    ``images[k]`` is the image of the generator of step k+1.
    """

    def __init__(self, domain: Tower, codomain: Tower, images, label=None):
        if domain.base != codomain.base:
            raise FieldMismatch("maps must fix the common base field")
        self.domain = domain
        self.codomain = codomain
        self.images = [codomain.embed(x, codomain.height) for x in images]
        self.label = label
        self._powers = [[codomain.one()] for _ in images]

    def _power(self, k, j):
        pw = self._powers[k]
        while len(pw) <= j:
            pw.append(pw[-1] * self.images[k])
        return pw[j]

    def __call__(self, x):
        return self._apply(x)

    def _apply(self, x):
        top = self.codomain.height
        if isinstance(x, LaurentSeries):
            return self.codomain.embed(x, top)
        k = x.level - 1
        acc = self.codomain.zero(top)
        for j, c in enumerate(x.rep):
            if c.is_exact_zero():
                continue
            img = self._apply(c)
            acc = acc + (img if j == 0 else img * self._power(k, j))
        return acc

    def check(self) -> bool:
        """Every generator image is a root of the mapped step polynomial."""
        partial = TowerMap.__new__(TowerMap)
        for k, s in enumerate(self.domain.steps):
            partial.domain, partial.codomain = self.domain, self.codomain
            partial.images = self.images[:k]
            partial._powers = self._powers[:k]
            acc = self.codomain.zero()
            for c in reversed(s.poly):
                acc = acc * self.images[k] + partial._apply(c)
            if not acc.is_zero():
                return False
        return True

    def compose(self, other: TowerMap) -> TowerMap:
        """self o other (apply other first)."""
        return TowerMap(other.domain, self.codomain, [self(x) for x in other.images])
