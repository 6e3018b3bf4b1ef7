"""Galois closures, the fixed algebra E[N]^G and group-algebra idempotents.

The nonclassical structure is built for L = K(theta), theta^q - theta = alpha
with q = p^f over K = F_p((T)).  Its closure is E = F L where F = F_q K, and
G = Gal(E/K) is the semidirect product of N = Gal(E/F) ~ (F_q, +) with the
Frobenius subgroup Gal(E/L) of order f.  The embedding labelled by the
translation tau_w is theta -> theta + w.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from . import fqpoly, linalg
from .basefield import FqElement, LaurentSeries, get_field
from .errors import DegenerateInput, DimensionMismatch, NotInL
from .extfield import ArtinSchreier, Tower, TowerElement, TowerMap, Unramified


# ---------------------------------------------------------------------------
# finite groups

class FiniteGroup:
    """A finite group given by hashable elements and a multiplication."""

    def __init__(self, elements, mul, name=None):
        self.elements = list(elements)
        self.index = {g: i for i, g in enumerate(self.elements)}
        n = len(self.elements)
        self.table = [[self.index[mul(a, b)] for b in self.elements] for a in self.elements]
        self.identity = next(i for i in range(n) if all(self.table[i][j] == j for j in range(n)))
        self.inv = [next(j for j in range(n) if self.table[i][j] == self.identity) for i in range(n)]
        self.name = name

    def __len__(self):
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def power(self, i: int, k: int) -> int:
        r = self.identity
        for _ in range(k % self.element_order(i)):
            r = self.table[r][i]
        return r

    def conj(self, g: int, h: int) -> int:
        """g h g^-1."""
        return self.table[self.table[g][h]][self.inv[g]]

    def element_order(self, i: int) -> int:
        k, r = 1, i
        while r != self.identity:
            r = self.table[r][i]
            k += 1
        return k

    def is_abelian(self) -> bool:
        n = len(self)
        return all(self.table[i][j] == self.table[j][i] for i in range(n) for j in range(i))

    def subgroup_indices(self, pred):
        return [i for i in range(len(self)) if pred(i)]


def abelian_group(orders) -> FiniteGroup:
    """Z/orders[0] x ... as tuples under componentwise addition."""
    orders = tuple(orders)
    elems = list(product(*(range(m) for m in orders)))
    return FiniteGroup(elems, lambda a, b: tuple((x + y) % m for x, y, m in zip(a, b, orders)),
                       name="x".join(f"C{m}" for m in orders))


@dataclass(frozen=True)
class GroupElementG:
    """tau_a phi^j: translation by a in F_q after j Frobenius steps."""
    a: int
    j: int
    p: int
    f: int

    def __mul__(self, other):
        # (tau_a phi^i)(tau_b phi^j) = tau_{a + b^{p^i}} phi^{i+j}
        F = get_field(self.p, self.f)
        b = F.pow(other.a, self.p ** self.j)
        return GroupElementG(F.add(self.a, b), (self.j + other.j) % self.f, self.p, self.f)

    def is_translation(self) -> bool:
        return self.j == 0

    def __repr__(self):
        F = get_field(self.p, self.f)
        return f"tau[{F.element(self.a)!r}]phi^{self.j}"


# ---------------------------------------------------------------------------
# group algebras

class GroupAlgebra:
    """R[N] for a coefficient ring given by its zero and one."""

    def __init__(self, group: FiniteGroup, zero, one):
        self.group = group
        self.zero = zero
        self.one = one

    def element(self, coeffs) -> GroupAlgebraElement:
        if isinstance(coeffs, dict):
            coeffs = [coeffs.get(i, self.zero) for i in range(len(self.group))]
        return GroupAlgebraElement(self, tuple(coeffs))

    def basis_element(self, i: int, coeff=None) -> GroupAlgebraElement:
        return self.element({i: self.one if coeff is None else coeff})

    def unit(self) -> GroupAlgebraElement:
        return self.basis_element(self.group.identity)

    def sum_all(self) -> GroupAlgebraElement:
        return self.element([self.one] * len(self.group))


class GroupAlgebraElement:
    """sum_eta coeffs[eta] * eta."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: GroupAlgebra, coeffs):
        self.algebra = algebra
        self.coeffs = tuple(coeffs)

    def __add__(self, other):
        return GroupAlgebraElement(self.algebra, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        return GroupAlgebraElement(self.algebra, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return GroupAlgebraElement(self.algebra, tuple(-a for a in self.coeffs))

    def scale(self, c):
        return GroupAlgebraElement(self.algebra, tuple(c * a for a in self.coeffs))

    def __mul__(self, other):
        if not isinstance(other, GroupAlgebraElement):
            return self.scale(other)
        table = self.algebra.group.table
        out = [self.algebra.zero] * len(self.coeffs)
        for i, a in enumerate(self.coeffs):
            if _is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                if _is_zero(b):
                    continue
                k = table[i][j]
                out[k] = out[k] + a * b
        return GroupAlgebraElement(self.algebra, tuple(out))

    def augmentation(self):
        """epsilon: sum of the coefficients."""
        acc = self.algebra.zero
        for c in self.coeffs:
            acc = acc + c
        return acc

    def is_zero(self) -> bool:
        return all(_is_zero(c) for c in self.coeffs)

    def __eq__(self, other):
        return isinstance(other, GroupAlgebraElement) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def support(self):
        return [i for i, c in enumerate(self.coeffs) if not _is_zero(c)]


def _is_zero(c):
    if isinstance(c, FqElement):
        return not c
    return c.is_exact_zero()


# ---------------------------------------------------------------------------
# embeddings and closures

class EmbeddingTable:
    """eta -> sigma_eta : L -> E, indexed by the elements of a group N."""

    def __init__(self, domain: Tower, codomain: Tower, group: FiniteGroup, maps):
        self.domain = domain
        self.codomain = codomain
        self.group = group
        self.maps = list(maps)

    def __getitem__(self, i):
        return self.maps[i]

    def __len__(self):
        return len(self.maps)

    def check(self) -> bool:
        """Every entry maps roots to roots and the entries are pairwise distinct."""
        if not all(m.check() for m in self.maps):
            return False
        images = [tuple(m.images) for m in self.maps]
        return len(set(images)) == len(images) == self.domain.degree


@dataclass
class Closure:
    tower_L: Tower
    tower_E: Tower
    embeddings: EmbeddingTable
    G: FiniteGroup
    N_indices: list          # indices in G of the translations, in the order of embeddings
    automorphisms: list      # TowerMap E -> E for every element of G
    inclusion: TowerMap      # L -> E


def _as_family(tower_L: Tower):
    if (tower_L.height != 1 or tower_L.steps[0].kind != "artin-schreier"
            or tower_L.base.f0 != 1):
        raise DegenerateInput("closure is built for a single Artin-Schreier step over F_p((T))")
    step = tower_L.steps[0]
    p = tower_L.p
    q = step.degree
    f = 0
    while p ** f < q:
        f += 1
    return step, p, q, f


def build_closure(tower_L: Tower) -> Closure:
    """E = F_q K (theta) with its Galois group and the embeddings sigma_w."""
    step, p, q, f = _as_family(tower_L)
    alpha = step.poly[0] * -1
    if f == 1:
        E = tower_L
        const = lambda code: E.constant(code)
    else:
        E = Tower(tower_L.base).extend(Unramified(f, get_field(p, f).modulus))
        E = E.extend(ArtinSchreier(alpha, q, step.name))

        def const(code):
            # F_q constants in the zeta power basis (zeta has the Conway modulus of F_q)
            zeta = E.embed(E.gen(1))
            acc = E.zero()
            for i, d in enumerate(get_field(p, f)._digits(code)):
                if d:
                    acc = acc + zeta ** i * d
            return acc
    theta = E.gen(E.height)
    elems = [GroupElementG(a, j, p, f) for j in range(f) for a in range(q)]
    G = FiniteGroup(elems, lambda x, y: x * y, name=f"F_{q} x| C{f}")
    autos = []
    for g in elems:
        if f == 1:
            autos.append(TowerMap(E, E, [theta + const(g.a)], label=repr(g)))
        else:
            zeta = E.embed(E.gen(1), E.height)
            autos.append(TowerMap(E, E, [zeta ** (p ** g.j), theta + const(g.a)], label=repr(g)))
    n_idx = [G.index[GroupElementG(a, 0, p, f)] for a in range(q)]
    maps = [TowerMap(tower_L, E, [theta + const(G.elements[i].a)], label=repr(G.elements[i])) for i in n_idx]
    N = FiniteGroup([G.elements[i] for i in n_idx], lambda x, y: x * y, name=f"F_{q}")
    table = EmbeddingTable(tower_L, E, N, maps)
    inclusion = maps[N.identity]
    return Closure(tower_L, E, table, G, n_idx, autos, inclusion)


def galois_group(tower: Tower):
    """All K-automorphisms of the top level, or DegenerateInput if fewer than n exist."""
    candidates = []
    for k, s in enumerate(tower.steps, start=1):
        g = tower.embed(tower.gen(k))
        consts = tower.constants()
        if s.kind == "artin-schreier":
            opts = [g + c for c in consts if c ** s.degree == c]
        elif s.kind == "radical":
            opts = [g * c for c in consts if not c.is_exact_zero() and c ** s.degree == tower.one()]
        else:
            Q = tower.base.q
            opts = [g ** (Q ** j) for j in range(s.degree)]
        candidates.append(opts)
    autos = []
    for images in product(*candidates):
        m = TowerMap(tower, tower, list(images))
        if m.check():
            autos.append(m)
    if len(autos) != tower.degree:
        raise DegenerateInput(f"found {len(autos)} automorphisms for degree {tower.degree}: not Galois")
    return autos


def automorphism_group(tower: Tower):
    """(FiniteGroup on image tuples, list of maps in group order); product is composition."""
    autos = galois_group(tower)
    keyed = {tuple(m.images): m for m in autos}
    keys = list(keyed)

    def mul(a, b):
        return tuple(keyed[a].compose(keyed[b]).images)

    G = FiniteGroup(keys, mul, name="Gal")
    return G, [keyed[k] for k in keys]


# ---------------------------------------------------------------------------
# the fixed algebra

@dataclass
class HopfAlgebraBasis:
    kind: str                         # "almost-classical" or "classical"
    tower_L: Tower
    tower_E: Tower
    N: FiniteGroup
    embeddings: EmbeddingTable
    algebra: GroupAlgebra
    basis: list
    vectors: list = field(default_factory=list)   # constant coordinates of the basis
    closure: Closure | None = None
    contains_tH: bool = False
    _pullback: dict | None = None

    @property
    def n(self) -> int:
        return len(self.basis)


def _constant_matrix(E: Tower, fn):
    """Matrix (rows = coordinates) of a K-linear map of E with constant entries, as codes."""
    cols = []
    for b in E.basis():
        vec = E.to_vector(fn(b))
        col = []
        for c in vec:
            if not c.is_constant():
                raise DimensionMismatch("action matrix has a non-constant entry")
            col.append(c.coeffs[0] if c.coeffs else 0)
        cols.append(col)
    m = len(cols)
    return [[cols[j][i] for j in range(m)] for i in range(m)]


def _pullback_map(inclusion: TowerMap):
    """E-coordinate index of the image of each L basis monomial."""
    E, L = inclusion.codomain, inclusion.domain
    out = {}
    for k, b in enumerate(L.basis()):
        vec = E.to_vector(inclusion(b))
        nz = [i for i, c in enumerate(vec) if not c.is_exact_zero()]
        if len(nz) != 1 or not vec[nz[0]].is_one():
            raise DegenerateInput("inclusion does not map basis monomials to basis monomials")
        out[nz[0]] = k
    return out


_H_CACHE = {}


def hopf_fixed_basis(closure: Closure) -> HopfAlgebraBasis:
    """K-basis of E[N]^G, G acting on coefficients and on N by conjugation."""
    from .basefield import default_precision
    key = (closure.tower_L.key, default_precision())
    if key in _H_CACHE:
        return _H_CACHE[key]
    E = closure.tower_E
    F = E.base
    G = closure.G
    nN = len(closure.N_indices)
    nE = E.degree
    pos = {g: i for i, g in enumerate(closure.N_indices)}
    rows = []
    gens = _generators(G)
    for gi in gens:
        M = _constant_matrix(E, closure.automorphisms[gi])
        # (g.x)[g eta g^-1] = g(x[eta]); stack (g - 1)
        big = [[0] * (nN * nE) for _ in range(nN * nE)]
        for eta, ni in enumerate(closure.N_indices):
            tgt = pos[G.conj(gi, ni)]
            for r in range(nE):
                for c in range(nE):
                    big[tgt * nE + r][eta * nE + c] = M[r][c]
        for i in range(nN * nE):
            big[i][i] = F.sub(big[i][i], 1)
        rows.extend(big)
    kernel = linalg.nullspace(F, rows, nN * nE)
    n = closure.tower_L.degree
    if len(kernel) != n:
        raise DimensionMismatch(f"dim E[N]^G = {len(kernel)}, expected {n}")
    alg = GroupAlgebra(closure.embeddings.group, E.zero(), E.one())
    basis = [alg.element([_from_codes(E, v[eta * nE:(eta + 1) * nE]) for eta in range(nN)])
             for v in kernel]
    t_vec = [1 if r == 0 else 0 for eta in range(nN) for r in range(nE)]
    kind = "classical" if closure.tower_E is closure.tower_L else "almost-classical"
    H = HopfAlgebraBasis(kind, closure.tower_L, E, closure.embeddings.group, closure.embeddings,
                         alg, basis, kernel, closure,
                         contains_tH=linalg.solve(F, kernel, t_vec) is not None,
                         _pullback=_pullback_map(closure.inclusion))
    _H_CACHE[key] = H
    return H


def _generators(G: FiniteGroup):
    """A small generating set, chosen greedily in element order."""
    gens, reached = [], {G.identity}
    for i in range(len(G)):
        if i in reached:
            continue
        gens.append(i)
        frontier = set(reached)
        while True:
            new = {G.mul(a, b) for a in frontier for b in gens} | frontier
            if new == frontier:
                break
            frontier = new
        reached = frontier
        if len(reached) == len(G):
            break
    return gens


def _from_codes(E: Tower, codes):
    F = E.base
    vec = [LaurentSeries.monomial(F, 0, FqElement(F, c)) if c else LaurentSeries.zero(F) for c in codes]
    return E.from_vector(vec)


def classical_structure(tower: Tower) -> HopfAlgebraBasis:
    """K[G] for a Galois tower: basis the automorphisms themselves."""
    G, autos = automorphism_group(tower)
    emb = EmbeddingTable(tower, tower, G, autos)
    alg = GroupAlgebra(G, tower.zero(), tower.one())
    basis = [alg.basis_element(i) for i in range(len(G))]
    identity = {i: i for i in range(tower.degree)}
    return HopfAlgebraBasis("classical", tower, tower, G, emb, alg, basis, [], None,
                            contains_tH=True, _pullback=identity)


def hopf_structure(tower: Tower) -> HopfAlgebraBasis:
    """The almost-classical structure for the Artin-Schreier family, else K[G]."""
    try:
        _as_family(tower)
    except DegenerateInput:
        return classical_structure(tower)
    return hopf_fixed_basis(build_closure(tower))


def g_action(H: HopfAlgebraBasis, gi: int, h: GroupAlgebraElement) -> GroupAlgebraElement:
    """g . h for the simultaneous action on coefficients and on N."""
    cl = H.closure
    g = cl.automorphisms[gi]
    pos = {ni: k for k, ni in enumerate(cl.N_indices)}
    out = [None] * len(h.coeffs)
    for eta, ni in enumerate(cl.N_indices):
        out[pos[cl.G.conj(gi, ni)]] = g(h.coeffs[eta])
    return H.algebra.element(out)


def is_fixed(H: HopfAlgebraBasis, h: GroupAlgebraElement) -> bool:
    """G-fixedness of h under every element of G."""
    if H.closure is None:
        return True
    return all(g_action(H, gi, h) == h for gi in range(len(H.closure.G)))


def _in_L(H: HopfAlgebraBasis, y):
    E, L = H.tower_E, H.tower_L
    if E is L:
        return y
    vec = E.to_vector(y)
    zero = LaurentSeries.zero(E.base)
    out = [zero] * L.degree
    for i, c in enumerate(vec):
        if i in H._pullback:
            out[H._pullback[i]] = c
        elif not c.is_zero():
            raise NotInL("result has a component outside the image of L")
        elif not c.is_exact_zero():
            raise NotInL("component outside L is only zero at precision")
    return L.from_vector(out)


def hopf_act(H: HopfAlgebraBasis, h: GroupAlgebraElement, rho: TowerElement) -> TowerElement:
    """(sum lambda_eta eta)(rho) = sum lambda_eta sigma_eta(rho), returned in L."""
    rho = H.tower_L.embed(rho)
    acc = H.tower_E.zero()
    for eta, lam in enumerate(h.coeffs):
        if lam.is_exact_zero():
            continue
        acc = acc + lam * H.embeddings[eta](rho)
    return _in_L(H, acc)


def integral_tH(H: HopfAlgebraBasis) -> GroupAlgebraElement:
    return H.algebra.sum_all()


def verify_tH_properties(H: HopfAlgebraBasis) -> dict:
    """h t_H = t_H h = eps(h) t_H and (h - eps(h)) t_H = 0 for every basis element."""
    t = integral_tH(H)
    one = H.algebra.unit()
    rows = []
    for k, h in enumerate(H.basis):
        eps = h.augmentation()
        et = t.scale(eps)
        rows.append({
            "index": k,
            "left": (h * t) == et,
            "right": (t * h) == et,
            "ideal": (h - one.scale(eps)) * t == H.algebra.element([H.algebra.zero] * len(t.coeffs)),
            "fixed": is_fixed(H, h),
        })
    eps_t = t.augmentation()
    return {
        "dimension": H.n,
        "contains_tH": H.contains_tH,
        "eps_tH": H.tower_E.format(eps_t),
        "tH_squared_is_eps_tH": t * t == t.scale(eps_t),
        "basis": rows,
        "ok": H.contains_tH and all(r["left"] and r["right"] and r["ideal"] and r["fixed"] for r in rows),
    }


def hopf_to_json(H: HopfAlgebraBasis) -> list:
    out = []
    for h in H.basis:
        out.append({repr(H.N.elements[i]): H.tower_E.format(c) for i, c in enumerate(h.coeffs)
                    if not c.is_exact_zero()})
    return out


# ---------------------------------------------------------------------------
# idempotents of commutative group algebras over finite fields

def central_idempotents_commutative(group: FiniteGroup, field) -> list:
    """Primitive idempotents of F[N] for abelian N with p not dividing |N|.

    The Frobenius a -> a^Q (Q = |F|) fixes exactly the span of the
    primitive idempotents, which is the span of the sums over Q-power
    orbits in N.  Splitting 1 along those orbit sums with
    e -> e (1 - (b - c)^(Q-1)) yields every primitive idempotent.
    The augmentation idempotent comes first.
    """
    if not group.is_abelian():
        raise DegenerateInput("only commutative group algebras are supported")
    r = len(group)
    if r % field.p == 0:
        raise DegenerateInput(f"p = {field.p} divides |N| = {r}")
    alg = GroupAlgebra(group, field.zero(), field.one())
    Q = field.q
    orbits, seen = [], set()
    for i in range(r):
        if i in seen:
            continue
        orb, j = [], i
        while j not in orb:
            orb.append(j)
            j = group.power(j, Q)
        seen.update(orb)
        orbits.append(orb)
    sums = [alg.element({j: field.one() for j in orb}) for orb in orbits]
    idem = [alg.unit()]
    for b in sums:
        refined = []
        for e in idem:
            eb = e * b
            for c in field.elements():
                d = eb - e.scale(c)
                piece = e - e * _alg_pow(d, Q - 1, alg, e)
                if not piece.is_zero():
                    refined.append(piece)
        idem = refined
    aug = alg.sum_all().scale(field.one() / field(r))
    idem.sort(key=lambda x: (x != aug, [c.value for c in x.coeffs]))
    if len(idem) != len(orbits):
        raise DimensionMismatch("idempotent count differs from the number of Frobenius orbits")
    return idem


def _alg_pow(x, k, alg, unit):
    result = unit
    base = x
    while k:
        if k & 1:
            result = result * base
        k >>= 1
        if k:
            base = base * base
    return result


def cyclic_idempotents(r: int, field):
    """CRT idempotents of F[X]/(X^r - 1) = F[C_r]: (factor, coefficient codes on sigma^k)."""
    if r % field.p == 0:
        raise DegenerateInput(f"p = {field.p} divides r = {r}")
    xr1 = [field.neg(1)] + [0] * (r - 1) + [1]
    out = []
    for fac in fqpoly.factor_squarefree(field, xr1):
        cofactor = fqpoly.divmod_(field, xr1, fac)[0]
        s = fqpoly.gcdext(field, cofactor, fac)[1]
        e = fqpoly.mod(field, fqpoly.mul(field, s, cofactor), xr1)
        out.append((fac, e + [0] * (r - len(e))))
    return out


def pprime_idempotents(group: FiniteGroup, field):
    """(e_1, e_2) in F[N] for abelian N: the augmentation idempotent of the p'-part and 1 - e_1."""
    if not group.is_abelian():
        raise DegenerateInput("only commutative group algebras are supported")
    p = field.p
    sub = group.subgroup_indices(lambda i: group.element_order(i) % p != 0)
    if len(sub) == 1:
        raise DegenerateInput("|N| is a power of p: no nontrivial idempotents")
    alg = GroupAlgebra(group, field.zero(), field.one())
    inv = field.one() / field(len(sub))
    e1 = alg.element({i: inv for i in sub})
    e2 = alg.unit() - e1
    return e1, e2


def act_classical(H: HopfAlgebraBasis, coeffs, rho):
    """sum c_g g(rho) for constant coefficients c_g (FqElement or tower constants)."""
    L = H.tower_L
    acc = L.zero()
    for i, c in enumerate(coeffs):
        if isinstance(c, FqElement):
            if not c:
                continue
            acc = acc + H.embeddings[i](rho) * c
        elif not c.is_exact_zero():
            acc = acc + c * H.embeddings[i](rho)
    return acc
