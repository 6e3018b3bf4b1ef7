"""Ramification invariants, uniformizers and differents of towers."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .basefield import INF, LaurentSeries
from .errors import DegenerateInput, InconsistentValuation, SearchExhausted
from .extfield import Tower, TowerElement, derivative, evaluate_poly


@dataclass
class RamificationData:
    n: int
    e: int
    f: int
    w: int
    pi_uniformizer: TowerElement | None
    checks: dict = field(default_factory=dict)

    def to_json(self, tower: Tower) -> dict:
        return {
            "n": self.n, "e": self.e, "f": self.f, "w": self.w,
            "uniformizer": tower.format(self.pi_uniformizer) if self.pi_uniformizer is not None else None,
            **self.checks,
        }


def ramification_invariants(tower: Tower):
    """(e, f) with e = v_L(T) computed from the norm, f = n / e."""
    e = tower.valuation_ext(tower.T())
    if e != tower.e or tower.degree % e:
        raise InconsistentValuation(f"v_L(T) = {e} disagrees with the step data e = {tower.e}")
    return e, tower.degree // e


def uniformizer(tower: Tower, level=None) -> TowerElement:
    """An element of valuation 1: a basis monomial times a power of T."""
    level = tower.height if level is None else level
    if level == 0:
        return LaurentSeries.T(tower.base)
    e = tower.e_levels[level]
    for b, v in zip(tower.basis(level), tower.basis_valuations(level)):
        if (v - 1) % e == 0:
            pi = b * tower.T(level) ** ((1 - v) // e)
            if tower.valuation(pi) != 1:
                raise InconsistentValuation("uniformizer candidate has the wrong valuation")
            return pi
    raise SearchExhausted("no basis monomial has valuation 1 mod e")


def uniformizer_artin_schreier(tower: Tower) -> TowerElement:
    """theta^u T^s with -b u + e s = 1 and 0 <= u < e, for a single totally ramified step."""
    if tower.height != 1 or tower.steps[0].kind != "artin-schreier":
        raise DegenerateInput("expected a single Artin-Schreier step over K")
    e, b = tower.e, tower.steps[0].b
    u = (-pow(b, -1, e)) % e
    s = (1 + b * u) // e
    pi = tower.gen() ** u * tower.T() ** s
    if tower.valuation_ext(pi) != 1:
        raise InconsistentValuation("v_L(theta^u T^s) != 1")
    return pi


def hilbert_different(q: int, b: int) -> int:
    """(b + 1)(q - 1): different exponent of X^q - X - alpha with v(alpha) = -b."""
    p = _prime_of(q)
    if b <= 0 or b % p == 0:
        raise DegenerateInput(f"need b > 0 prime to p = {p}, got b = {b}")
    return (b + 1) * (q - 1)


def _prime_of(q):
    if q < 2:
        raise DegenerateInput(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    r = q
    while r % p == 0:
        r //= p
    if r != 1:
        raise DegenerateInput(f"{q} is not a prime power")
    return p


def _step_generator(tower: Tower, k: int):
    """A generator of the valuation ring of level k over level k - 1."""
    if tower.steps[k - 1].kind == "unramified":
        return tower.gen(k)
    return uniformizer(tower, k)


def step_different(tower: Tower, k: int) -> int:
    """v_{L_k}(g'(g_k)) for the relative minimal polynomial g of a ring generator g_k."""
    gk = _step_generator(tower, k)
    cp = tower.relative_charpoly(gk)
    return tower.valuation(evaluate_poly(derivative(cp), gk, tower))


def step_hilbert(tower: Tower, k: int) -> int:
    s = tower.steps[k - 1]
    if s.kind == "artin-schreier":
        return hilbert_different(s.degree, s.b)
    if s.kind == "radical":
        return s.degree - 1
    return 0


def _transitive(tower: Tower, per_step):
    top = tower.e
    return sum((top // tower.e_levels[k]) * w for k, w in enumerate(per_step, start=1))


def different_valuation(tower: Tower, pi=None) -> int:
    """w = v_L(D_{L/K}).

    When L/K is totally ramified this is v_L(m'(Pi)) for the minimal
    polynomial m of a uniformizer Pi; otherwise the step differents are
    combined along the tower.
    """
    if tower.e == tower.degree:
        pi = uniformizer(tower) if pi is None else pi
        m = tower.minimal_polynomial(pi)
        return tower.valuation(evaluate_poly(derivative(m), pi, tower))
    return _transitive(tower, [step_different(tower, k) for k in range(1, tower.height + 1)])


def ramification_data(tower: Tower) -> RamificationData:
    """Invariants together with the cross-checks of the different."""
    e, f = ramification_invariants(tower)
    pi = uniformizer(tower)
    w = different_valuation(tower, pi)
    steps = [step_different(tower, k) for k in range(1, tower.height + 1)]
    hilbert = [step_hilbert(tower, k) for k in range(1, tower.height + 1)]
    checks = {
        "check": "hilbert" if tower.height == 1 and tower.steps[0].kind == "artin-schreier" else "transitivity",
        "w_transitivity": _transitive(tower, steps),
        "w_hilbert": _transitive(tower, hilbert),
    }
    checks["consistent"] = w == checks["w_transitivity"] == checks["w_hilbert"]
    return RamificationData(tower.degree, e, f, w, pi, checks)


# ---------------------------------------------------------------------------
# residues

def residue_lift(tower: Tower, omega) -> TowerElement:
    """Lift of a residue class: constants of the tower lift themselves."""
    x = tower.embed(omega) if isinstance(omega, (TowerElement, LaurentSeries)) else tower.constant(omega)
    if not tower.is_constant(x):
        raise DegenerateInput("residue classes are given as constants of the tower")
    if x.is_exact_zero():
        raise DegenerateInput("the zero residue has no unit lift")
    return x


def residue(tower: Tower, x):
    """Residue class of an integral element, as a constant of its level."""
    level = tower.level_of(x)
    if tower.valuation(x) < 0:
        raise DegenerateInput("element is not integral")
    return tower.embed(_residue(tower, x), level)


def _residue(tower, x):
    if isinstance(x, LaurentSeries):
        c = x.coefficient(0)
        return LaurentSeries.monomial(tower.base, 0, c)
    if x.step.kind == "unramified":
        return TowerElement(tower, x.level, tuple(_residue(tower, c) for c in x.rep))
    # ramified steps: only the j = 0 term can have valuation 0
    return tower.embed(_residue(tower, x.rep[0]), x.level)


def residue_basis(tower: Tower, level=None):
    """Lifts of an F_p0-basis of the residue field: the constant basis monomials."""
    level = tower.height if level is None else level
    basis = tower.basis(level)
    return [basis[i] for i in tower.constant_indices(level)]


def integral_basis_sweep(tower: Tower, pi: TowerElement, count=None):
    """Pi^j * (residue basis lifts) for j < count (default e*f)."""
    count = tower.degree if count is None else count
    lifts = residue_basis(tower)
    out = []
    power = tower.one()
    for _ in range(count):
        out.extend(power * c for c in lifts)
        power = power * pi
    return out


def random_integral(tower: Tower, rng: random.Random, pi, terms=4):
    """Random element of the valuation ring: a random R-combination of the sweep."""
    sweep = integral_basis_sweep(tower, pi, tower.e)
    acc = tower.zero()
    q = tower.base.q
    for s in sweep:
        coeff = {j: rng.randrange(q) for j in range(terms)}
        acc = acc + s * LaurentSeries.from_terms(tower.base, coeff)
    return acc


def trace_dual_check(tower: Tower, data: RamificationData, samples=50, seed=0) -> dict:
    """Tr(Pi^{-w} S) lies in R while Tr(Pi^{-w-1} s) leaves R for some s."""
    pi = data.pi_uniformizer
    inv = pi.inverse()
    scale_w = inv ** data.w
    scale_w1 = scale_w * inv
    sweep = integral_basis_sweep(tower, pi)
    worst = INF
    for s in sweep:
        worst = min(worst, _trace_val(tower, scale_w * s))
    rng = random.Random(seed)
    for _ in range(samples):
        worst = min(worst, _trace_val(tower, scale_w * random_integral(tower, rng, pi)))
    witness = None
    for idx, s in enumerate(sweep):
        v = _trace_val(tower, scale_w1 * s)
        if v < 0:
            witness = (idx, s, v)
            break
    return {
        "contained": worst >= 0,
        "min_trace_valuation": worst if worst != INF else None,
        "witness_index": witness[0] if witness else None,
        "witness": tower.format(witness[1]) if witness else None,
        "witness_trace_valuation": witness[2] if witness else None,
        "sweep_size": len(sweep),
        "samples": samples,
    }


def _trace_val(tower, x):
    return tower.trace(x).valuation()
