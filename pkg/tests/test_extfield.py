import random

import pytest

from charp_nbg import linalg
from charp_nbg.basefield import LaurentSeries, get_field
from charp_nbg.config import SHIPPED
from charp_nbg.errors import DegenerateInput, NotAGenerator, NotIrreducible
from charp_nbg.extfield import (ArtinSchreier, Radical, Tower, Unramified, derivative, evaluate_poly)
from charp_nbg.hopfgal import galois_group
from charp_nbg.nbgtest import random_element

from conftest import shipped

F2 = get_field(2)


def Tm(k, field=F2):
    return LaurentSeries.monomial(field, k)


def q2():
    return Tower.over(2).extend(ArtinSchreier("T^-1", 2))


# Polynomials in theta with Laurent polynomial coefficients, as dicts
# {(theta exponent, T exponent): coefficient mod p}, reduced by theta^2 = theta + T^-1.
def poly_mul(a, b, p):
    out = {}
    for (i, j), x in a.items():
        for (k, l), y in b.items():
            key = (i + k, j + l)
            out[key] = (out.get(key, 0) + x * y) % p
    return {k: v for k, v in out.items() if v}


def reduce_q2(a):
    a = dict(a)
    while any(i >= 2 for i, _ in a):
        i, j = max(k for k in a if k[0] >= 2)
        c = a.pop((i, j))
        for key in ((i - 1, j), (i - 2, j - 1)):
            a[key] = (a.get(key, 0) + c) % 2
            if not a[key]:
                del a[key]
    return a


def test_defining_relation_and_inverse():
    t = q2()
    th = t.gen()
    assert th * th == th + t.embed(Tm(-1))
    assert th.inverse() * th == t.one()


def test_other_root_against_symbolic_oracle():
    t = q2()
    u = t.gen() + 1
    assert u * u + u == t.embed(Tm(-1))
    s = {(1, 0): 1, (0, 0): 1}
    expanded = reduce_q2(poly_mul(s, s, 2))
    for k, v in s.items():
        expanded[k] = (expanded.get(k, 0) + v) % 2
    assert {k: v for k, v in expanded.items() if v} == {(0, -1): 1}


def test_mult_matrix_examples():
    t = q2()
    assert t.mult_matrix(t.one()) == [[LaurentSeries.one(F2), LaurentSeries.zero(F2)],
                                      [LaurentSeries.zero(F2), LaurentSeries.one(F2)]]
    assert t.mult_matrix(t.gen()) == [[LaurentSeries.zero(F2), Tm(-1)],
                                      [LaurentSeries.one(F2), LaurentSeries.one(F2)]]


def test_trace_norm_valuation_examples():
    t = q2()
    th = t.gen()
    assert t.trace(th) == LaurentSeries.one(F2)
    assert t.norm(th) == Tm(-1)
    assert t.valuation(th) == t.valuation_ext(th) == -1
    assert t.valuation(t.T()) == 2
    assert t.minimal_polynomial(th) == [Tm(-1), LaurentSeries.one(F2), LaurentSeries.one(F2)]
    with pytest.raises(NotAGenerator):
        t.minimal_polynomial(t.one())


@pytest.mark.parametrize("name", ["q2b1", "q4b1", "q3b1", "mixed", "tame-nonp"])
def test_trace_of_one_is_degree(name):
    t = shipped(name)
    assert t.trace(t.one()) == LaurentSeries.monomial(t.base, 0, t.degree)


def test_q4_monomial_valuations():
    t = shipped("q4b1")
    th, T = t.gen(), t.T()
    for u in range(4):
        for s in range(-2, 3):
            x = th ** u * T ** s
            assert t.valuation(x) == t.valuation_ext(x) == -u + 4 * s


@pytest.mark.parametrize("name", SHIPPED)
def test_direct_and_norm_valuations_agree(name):
    t = shipped(name)
    rng = random.Random(f"val:{name}")
    for _ in range(200):
        x = random_element(t, rng)
        assert t.valuation(x) == t.valuation_ext(x)


@pytest.mark.parametrize("name", SHIPPED)
def test_mult_matrix_is_multiplicative(name):
    t = shipped(name)
    rng = random.Random(f"mm:{name}")
    zero = LaurentSeries.zero(t.base)
    for _ in range(10):
        a, b = random_element(t, rng, 2), random_element(t, rng, 2)
        assert t.mult_matrix(a * b) == linalg.matmul(t.mult_matrix(a), t.mult_matrix(b), zero)


@pytest.mark.parametrize("name", SHIPPED)
def test_trace_and_norm_match_matrix_definitions(name):
    t = shipped(name)
    rng = random.Random(f"tn:{name}")
    for _ in range(10):
        a, b = random_element(t, rng, 2), random_element(t, rng, 2)
        assert t.trace(a) == t.matrix_trace(a)
        assert t.norm(a) == t.matrix_norm(a)
        assert t.trace(a + b) == t.trace(a) + t.trace(b)
        assert t.norm(a * b) == t.norm(a) * t.norm(b)


@pytest.mark.parametrize("name", ["q2b1", "q2b3", "q3b1", "q3b2", "mixed", "tame2", "tame-nonp"])
def test_trace_and_norm_over_conjugates(name):
    t = shipped(name)
    autos = galois_group(t)
    rng = random.Random(f"conj:{name}")
    for _ in range(5):
        a = random_element(t, rng, 2)
        images = [s(a) for s in autos]
        total, prod = t.zero(), t.one()
        for y in images:
            total, prod = total + y, prod * y
        assert total == t.embed(t.trace(a))
        assert prod == t.embed(t.norm(a))


@pytest.mark.parametrize("name", SHIPPED)
def test_minimal_polynomial_annihilates_random_generators(name):
    t = shipped(name)
    rng = random.Random(f"mp:{name}")
    done = 0
    while done < 3:
        a = random_element(t, rng, 1)
        try:
            m = t.minimal_polynomial(a)
        except NotAGenerator:
            continue
        assert len(m) == t.degree + 1 and m[-1].is_one()
        assert evaluate_poly(m, a, t).is_zero()
        assert not evaluate_poly(derivative(m), a, t).is_zero()
        done += 1


def test_ramification_of_steps():
    t = Tower.over(2).extend(ArtinSchreier("T^-1", 4))
    assert (t.degree, t.e, t.f) == (4, 4, 1)
    u = Tower.over(2).extend(Unramified(2))
    assert (u.degree, u.e, u.f) == (2, 1, 2)
    m = u.extend(ArtinSchreier("T^-1", 2))
    assert (m.degree, m.e, m.f) == (4, 2, 2)
    r = Tower.over(3).extend(Radical(2, "T"))
    assert (r.degree, r.e, r.f) == (2, 2, 1)


@pytest.mark.parametrize("step", [
    ArtinSchreier("T^-2", 2),
    ArtinSchreier("T", 2),
    ArtinSchreier("T^-1", 3),
    Radical(3, "T"),
    Radical(2, "T^2"),
    Unramified(1),
])
def test_extend_rejects_degenerate_steps(step):
    with pytest.raises(DegenerateInput):
        Tower.over(2 if step.kind != "radical" else 3).extend(step)


def test_extend_rejects_reducible_modulus():
    with pytest.raises(NotIrreducible):
        Tower.over(2).extend(Unramified(2, (1, 0, 1)))


def test_limits():
    t = Tower.over(2)
    for _ in range(3):
        t = t.extend(ArtinSchreier("T^-1", 2)) if t.height == 0 else t.extend(
            ArtinSchreier(f"T^-1*{t.names()[-1]}", 2, f"g{t.height}"))
    with pytest.raises(DegenerateInput):
        t.extend(Unramified(2))


@pytest.mark.parametrize("name", SHIPPED)
def test_parse_format_round_trip(name):
    t = shipped(name)
    rng = random.Random(f"fmt:{name}")
    for _ in range(20):
        x = random_element(t, rng)
        assert t.parse(t.format(x)) == x
    assert t.parse("0").is_exact_zero()
