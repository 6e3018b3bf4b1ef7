"""Normal basis generator tests, the x_i sequence, counterexamples and sweeps.

For a totally ramified extension of p-power degree n with different
exponent w, every rho with v_L(rho) = b generates a normal basis exactly
when b = -w - 1 (mod n).  Outside that case an explicit non-generator of
valuation b is produced for every b.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import linalg
from .basefield import LaurentSeries, default_precision, working_precision
from .errors import (DegenerateInput, PrecisionExhausted, SearchExhausted,
                     WrongDegree)
from .extfield import Tower, TowerElement
from .hopfgal import (HopfAlgebraBasis, act_classical, classical_structure,
                      galois_group, hopf_act, hopf_structure, pprime_idempotents)
from .ramify import RamificationData, residue_lift

MAX_DOUBLINGS = 3


def is_p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


@dataclass
class NBGVerdict:
    method: str
    is_generator: bool
    witness: object
    precision_used: int

    def to_json(self):
        return {"method": self.method, "is_generator": self.is_generator,
                "witness": self.witness, "precision": self.precision_used}


@dataclass
class XSequence:
    elements: list
    valuations: list
    traces: list

    def audit(self, e: int, w: int) -> dict:
        vals_ok = self.valuations == [e - w - i for i in range(1, len(self.elements) + 1)]
        pattern = [t.is_one() if i == 0 else t.is_exact_zero() for i, t in enumerate(self.traces)]
        return {"valuations": self.valuations, "valuations_ok": vals_ok, "traces_ok": all(pattern)}


@dataclass
class CounterexampleWitness:
    rho: TowerElement
    b: int
    branch: str
    proof: dict = field(default_factory=dict)

    def to_json(self, tower: Tower) -> dict:
        return {"b": self.b, "branch": self.branch, "rho": tower.format(self.rho), **self.proof}


# ---------------------------------------------------------------------------
# the three tests

def nbg_trace_test(tower: Tower, rho) -> NBGVerdict:
    """rho generates iff Tr(rho) != 0 (p-power degree only)."""
    if not is_p_power(tower.degree, tower.p):
        raise WrongDegree(f"[L:K] = {tower.degree} is not a power of p = {tower.p}")
    tr = tower.trace(tower.embed(rho))
    if tr.is_exact_zero():
        return NBGVerdict("trace", False, "trace = 0", default_precision())
    if tr.is_zero():
        raise PrecisionExhausted("trace is zero at precision")
    return NBGVerdict("trace", True, tr.valuation(), default_precision())


def _rank_verdict(method, tower, images):
    cols = [tower.to_vector(y) for y in images]
    n = len(cols)
    m = [[cols[j][i] for j in range(n)] for i in range(n)]
    d = linalg.det(m, LaurentSeries.one(tower.base), LaurentSeries.zero(tower.base))
    if d.is_exact_zero():
        return NBGVerdict(method, False, "det = 0", default_precision())
    if d.is_zero():
        raise PrecisionExhausted("determinant is zero at precision")
    return NBGVerdict(method, True, d.valuation(), default_precision())


def nbg_rank_test_galois(tower: Tower, rho, autos=None) -> NBGVerdict:
    """rho generates iff its conjugates are K-independent."""
    autos = galois_group(tower) if autos is None else autos
    rho = tower.embed(rho)
    return _rank_verdict("galois-rank", tower, [s(rho) for s in autos])


def nbg_rank_test_hopf(tower: Tower, rho, H: HopfAlgebraBasis) -> NBGVerdict:
    """rho generates iff h_1(rho), ..., h_n(rho) are K-independent."""
    rho = tower.embed(rho)
    return _rank_verdict("hopf-rank", tower, [hopf_act(H, h, rho) for h in H.basis])


class Tester:
    """Every applicable test for a tower, with the Galois and Hopf data cached."""

    def __init__(self, tower: Tower):
        self.tower = tower
        self.p_power = is_p_power(tower.degree, tower.p)
        try:
            self.autos = galois_group(tower)
        except DegenerateInput:
            self.autos = None
        try:
            self.H = hopf_structure(tower)
        except DegenerateInput:
            self.H = None

    def methods(self):
        out = []
        if self.p_power:
            out.append("trace")
        if self.autos is not None:
            out.append("galois")
        if self.H is not None and self.H.kind != "classical":
            out.append("hopf")
        return out

    def run(self, rho, method):
        if method == "trace":
            return nbg_trace_test(self.tower, rho)
        if method == "galois":
            if self.autos is None:
                raise DegenerateInput("extension is not Galois: no classical rank test")
            return nbg_rank_test_galois(self.tower, rho, self.autos)
        if method == "hopf":
            if self.H is None:
                raise DegenerateInput("no Hopf-Galois structure available")
            return nbg_rank_test_hopf(self.tower, rho, self.H)
        raise DegenerateInput(f"unknown method {method!r}")

    def run_all(self, rho):
        return [self.run(rho, m) for m in self.methods()]


def with_retry(fn, *args, prec=None):
    """Call fn, doubling the working precision on PrecisionExhausted (at most 3 times)."""
    prec = default_precision() if prec is None else prec
    for k in range(MAX_DOUBLINGS + 1):
        try:
            with working_precision(prec * 2 ** k):
                return fn(*args)
        except PrecisionExhausted:
            if k == MAX_DOUBLINGS:
                raise


# ---------------------------------------------------------------------------
# the x_i sequence

def _shifted_monomials(tower: Tower, target: int):
    """Basis monomials times T^s with valuation exactly target, in basis order."""
    e = tower.e
    for b, v in zip(tower.basis(), tower.basis_valuations()):
        if (target - v) % e == 0:
            yield b * tower.T() ** ((target - v) // e)


def _unit_sweep(tower: Tower, pi):
    """Units: residue basis lifts, then 1 + Pi^j * lift for 0 < j < e."""
    from .ramify import residue_basis
    lifts = residue_basis(tower)
    yield from lifts
    power = tower.one()
    for _ in range(1, tower.e):
        power = power * pi
        for c in lifts:
            yield tower.one() + power * c


def construct_x_sequence(tower: Tower, data: RamificationData) -> XSequence:
    """x_1..x_e with v_L(x_i) = e - w - i, Tr(x_1) = 1 and Tr(x_i) = 0 for i >= 2."""
    e, w = data.e, data.w
    target = e - w - 1
    y = None
    for cand in _shifted_monomials(tower, target):
        tr = tower.trace(cand)
        if not tr.is_zero() and tr.valuation() == 0:
            y = cand
            break
    if y is None:
        pi_t = data.pi_uniformizer ** target
        for u in _unit_sweep(tower, data.pi_uniformizer):
            cand = pi_t * u
            tr = tower.trace(cand)
            if not tr.is_zero() and tr.valuation() == 0:
                y = cand
                break
    if y is None:
        raise SearchExhausted("no y with v_L(y) = e - w - 1 and a unit trace")
    x1 = y / tower.trace(y)
    xs = [x1]
    for i in range(2, e + 1):
        xp = next(_shifted_monomials(tower, e - w - i))
        xs.append(xp - x1 * tower.trace(xp))
    return XSequence(xs, [tower.valuation(x) for x in xs], [tower.trace(x) for x in xs])


def x_basis_rank(tower: Tower, xs: XSequence):
    """n when the x_i form a K-basis (totally ramified case), n - 1 if dependent, None otherwise."""
    n = tower.degree
    if len(xs.elements) != n:
        return None
    return n if _det_nonzero(tower, xs.elements) else n - 1


def _det_nonzero(tower, elems):
    cols = [tower.to_vector(x) for x in elems]
    m = [[cols[j][i] for j in range(len(cols))] for i in range(len(cols))]
    d = linalg.det(m, LaurentSeries.one(tower.base), LaurentSeries.zero(tower.base))
    if d.is_zero() and not d.is_exact_zero():
        raise PrecisionExhausted("determinant is zero at precision")
    return not d.is_exact_zero()


def first_coefficient_nonzero(tower: Tower, xs: XSequence, rho) -> bool:
    """a_1 != 0 in rho = sum a_i x_i (Cramer: replace column 1 by rho)."""
    elems = [tower.embed(rho)] + xs.elements[1:]
    return _det_nonzero(tower, elems)


# ---------------------------------------------------------------------------
# the verdict and counterexamples

@dataclass
class TheoremVerdict:
    certificate: bool
    branch: str | None

    def to_json(self):
        return {"certificate": self.certificate, "branch": self.branch}


BRANCHES = {"i": "non-p-power", "ii": "not-totally-ramified", "iii": "wrong-residue"}


def theorem_verdict(n: int, e: int, w: int, b: int, p: int) -> TheoremVerdict:
    """Certificate iff n is a power of p, e = n and b = -w - 1 (mod n)."""
    if n % e:
        raise DegenerateInput("e must divide n")
    if not is_p_power(n, p):
        return TheoremVerdict(False, BRANCHES["i"])
    if e < n:
        return TheoremVerdict(False, BRANCHES["ii"])
    if (b + w + 1) % n:
        return TheoremVerdict(False, BRANCHES["iii"])
    return TheoremVerdict(True, None)


def certificate_residue(tower: Tower, data: RamificationData):
    v = theorem_verdict(data.n, data.e, data.w, 0, tower.p)
    if v.branch in (BRANCHES["i"], BRANCHES["ii"]):
        return None
    return (-data.w - 1) % data.n


def random_unit(tower: Tower, rng: random.Random, pi, tail=3):
    """Random nonzero residue lift plus sum_{j=1..tail} c_j Pi^j with random constants c_j."""
    consts = tower.constants()
    nonzero = consts[1:]
    u = nonzero[rng.randrange(len(nonzero))]
    power = tower.one()
    for _ in range(tail):
        power = power * pi
        c = consts[rng.randrange(len(consts))]
        if not c.is_exact_zero():
            u = u + c * power
    return u


def sample_at_valuation(tower: Tower, pi, b: int, rng: random.Random):
    return pi ** b * random_unit(tower, rng, pi)


def counterexample_for_b(tower: Tower, data: RamificationData, b: int, tester: Tester | None = None,
                         xs: XSequence | None = None, seed=0) -> CounterexampleWitness:
    """A non-generator of valuation exactly b, built along the applicable branch."""
    verdict = theorem_verdict(data.n, data.e, data.w, b, tower.p)
    if verdict.certificate:
        raise DegenerateInput(f"b = {b} is a certificate residue: no counterexample exists")
    tester = Tester(tower) if tester is None else tester
    if verdict.branch == BRANCHES["i"]:
        return _branch_non_p_power(tower, data, b, tester, seed)
    xs = construct_x_sequence(tower, data) if xs is None else xs
    e, w = data.e, data.w
    i = (-w - b) % e or e
    s = (b + w + i) // e - 1
    Ts = tower.T() ** s
    proof = {"i": i, "s": s}
    if i == 1:
        if verdict.branch != BRANCHES["ii"]:
            raise DegenerateInput("the i = 1 class is only refuted when L/K is not totally ramified")
        omega = residue_lift(tower, _non_base_constant(tower))
        x1 = xs.elements[0]
        core = omega - tower.trace(x1 * omega)
        rho = Ts * core * x1
        proof["omega"] = tower.format(omega)
        proof["v_core"] = tower.valuation(core)
    else:
        rho = Ts * xs.elements[i - 1]
    tr = tower.trace(rho)
    proof["v_rho"] = tower.valuation(rho)
    proof["trace_exact_zero"] = tr.is_exact_zero()
    proof["tests"] = {v.method: v.is_generator for v in tester.run_all(rho)}
    proof["valid"] = (proof["v_rho"] == b and proof["trace_exact_zero"]
                      and not any(proof["tests"].values())
                      and proof.get("v_core", 0) == 0)
    return CounterexampleWitness(rho, b, verdict.branch, proof)


def _non_base_constant(tower: Tower):
    """First constant of the top level outside the base constant field."""
    for c in tower.constants():
        vec = tower.to_vector(c)
        if any(not x.is_exact_zero() for x in vec[1:]):
            return c
    raise DegenerateInput("residue field equals the base constants")


def idempotent_pair(tester: Tester):
    if tester.autos is None:
        raise DegenerateInput("idempotent counterexamples need an abelian Galois extension")
    H = tester.H if tester.H is not None and tester.H.kind == "classical" else classical_structure(tester.tower)
    e1, e2 = pprime_idempotents(H.N, tester.tower.base)
    return H, e1, e2


def apply_idempotent(H, e, rho):
    return act_classical(H, e.coeffs, rho)


def _branch_non_p_power(tower, data, b, tester, seed, attempts=64):
    H, e1, e2 = idempotent_pair(tester)
    rng = random.Random(seed)
    pi = data.pi_uniformizer
    for attempt in range(attempts):
        seed_rho = sample_at_valuation(tower, pi, b, rng)
        parts = [apply_idempotent(H, e1, seed_rho), apply_idempotent(H, e2, seed_rho)]
        for j, part in enumerate(parts):
            if part.is_exact_zero() or tower.valuation(part) != b:
                continue
            other = (e2, e1)[j]
            killed = apply_idempotent(H, other, part)
            rank = nbg_rank_test_galois(tower, part, tester.autos)
            proof = {
                "idempotent": j + 1,
                "attempt": attempt,
                "v_rho": tower.valuation(part),
                "annihilated_exactly": killed.is_exact_zero(),
                "tests": {"galois": rank.is_generator},
            }
            proof["valid"] = proof["v_rho"] == b and proof["annihilated_exactly"] and not rank.is_generator
            return CounterexampleWitness(part, b, BRANCHES["i"], proof)
    raise SearchExhausted(f"no seed with a summand of valuation {b} in {attempts} attempts")


def idempotent_report(tower: Tower, data: RamificationData, samples=100, seed=7) -> dict:
    """Orthogonality, completeness and v(e_j rho) >= v(rho) on seeded samples."""
    tester = Tester(tower)
    H, e1, e2 = idempotent_pair(tester)
    alg_ok = {
        "idempotent": e1 * e1 == e1 and e2 * e2 == e2,
        "orthogonal": (e1 * e2).is_zero() and (e2 * e1).is_zero(),
        "sum_to_one": e1 + e2 == e1.algebra.unit(),
    }
    rng = random.Random(seed)
    pi = data.pi_uniformizer
    bound_ok = True
    for k in range(samples):
        b = k % data.n
        rho = sample_at_valuation(tower, pi, b, rng)
        v = tower.valuation(rho)
        for e in (e1, e2):
            part = apply_idempotent(H, e, rho)
            if not part.is_exact_zero() and tower.valuation(part) < v:
                bound_ok = False
    return {**alg_ok, "valuation_bound": bound_ok, "samples": samples,
            "e1": [repr(c) for c in e1.coeffs], "e2": [repr(c) for c in e2.coeffs]}


# ---------------------------------------------------------------------------
# sweeps

@dataclass
class SweepRow:
    residue: int
    verdict: str
    samples: int
    generators: int
    failures: int
    witness: str

    def tsv(self, n):
        return "\t".join([f"{self.residue} mod {n}", self.verdict, str(self.samples),
                          str(self.failures), self.witness])


def sweep_verify(tower: Tower, data: RamificationData, samples=100, seed=7, residues=None):
    """(rows, records): the certificate residue must be universal, every other one refuted."""
    tester = Tester(tower)
    methods = tester.methods()
    cert = certificate_residue(tower, data)
    xs = None
    if tester.p_power:
        xs = construct_x_sequence(tower, data)
    residues = range(data.n) if residues is None else residues
    pi = data.pi_uniformizer
    rows, records = [], []
    for r in residues:
        rng = random.Random(f"{seed}:{r}")
        gens = failures = 0
        for k in range(samples):
            rho = sample_at_valuation(tower, pi, r, rng)
            verdicts = with_retry(tester.run_all, rho)
            flags = {v.method: v.is_generator for v in verdicts}
            agree = len(set(flags.values())) == 1
            generator = all(flags.values())
            gens += generator
            sound = True
            if r == cert and xs is not None and tower.e == tower.degree:
                sound = first_coefficient_nonzero(tower, xs, rho)
            bad = not agree or (r == cert and not (generator and sound))
            failures += bad
            records.append({"kind": "sample", "residue": r, "index": k, "seed": seed,
                            "valuation": tower.valuation(rho), "tests": flags,
                            "agree": agree, **({"a1_nonzero": sound} if r == cert else {})})
        if r == cert:
            rows.append(SweepRow(r, "certificate", samples, gens, failures,
                                 f"{gens}/{samples} generators"))
        else:
            wit = counterexample_for_b(tower, data, r, tester, xs, seed=seed)
            rec = wit.to_json(tower)
            records.append({"kind": "counterexample", "residue": r, "seed": seed, **rec})
            failures += not wit.proof["valid"]
            rows.append(SweepRow(r, f"counterexample({wit.branch})", samples, gens, failures,
                                 f"v={wit.proof['v_rho']} {'ok' if wit.proof['valid'] else 'INVALID'}; "
                                 f"random generators {gens}/{samples}"))
    return rows, records, methods


def random_element(tower: Tower, rng: random.Random, span=3):
    """Random exact element: each basis coordinate a random Laurent polynomial in [-span, span]."""
    F = tower.base
    vec = []
    for _ in range(tower.degree):
        terms = {j: rng.randrange(F.q) for j in range(-span, span + 1) if rng.random() < 0.5}
        vec.append(LaurentSeries.from_terms(F, terms))
    if all(c.is_exact_zero() for c in vec):
        vec[0] = LaurentSeries.one(F)
    return tower.from_vector(vec)

