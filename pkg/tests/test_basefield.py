import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from charp_nbg.basefield import (INF, FqField, LaurentSeries, default_precision, get_field,
                                 working_precision)
from charp_nbg.errors import (DegenerateInput, DivisionByZero, FieldMismatch, NotIrreducible,
                              PrecisionExhausted)


def f4_table():
    # F_4 = {0, 1, x, x+1} as pairs (c0, c1); multiply polynomials and reduce x^2 = x + 1
    elems = [(a, b) for b in range(2) for a in range(2)]

    def mul(u, v):
        c0 = u[0] * v[0]
        c1 = u[0] * v[1] + u[1] * v[0]
        c2 = u[1] * v[1]
        return ((c0 + c2) % 2, (c1 + c2) % 2)

    return elems, mul


def test_f4_matches_hand_table():
    F = get_field(2, 2)
    elems, mul = f4_table()
    for u in elems:
        for v in elems:
            got = F(list(u)) * F(list(v))
            assert got == F(list(mul(u, v)))


def test_f4_frobenius_of_generator():
    F = get_field(2, 2)
    x = F.gen()
    assert x.frobenius() == x + 1
    assert x * x == x + 1


def test_inverse_of_one_and_zero():
    F = get_field(3, 2)
    assert F.one().inverse() == F.one()
    with pytest.raises(DivisionByZero):
        F.zero().inverse()


def test_multiplicative_order_in_f9():
    F = get_field(3, 2)
    for g in F.elements()[1:]:
        assert g ** 8 == F.one()


@pytest.mark.parametrize("p,f0", [(2, 1), (2, 3), (3, 1), (3, 2), (5, 2), (2, 8)])
def test_frobenius_fixed_field_has_p_elements(p, f0):
    F = get_field(p, f0)
    fixed = [a for a in F.elements() if a.frobenius() == a]
    assert len(fixed) == p


def test_mixed_fields_rejected():
    with pytest.raises(FieldMismatch):
        get_field(2, 2).gen() + get_field(3).one()
    with pytest.raises(FieldMismatch):
        LaurentSeries.one(get_field(2)) + LaurentSeries.one(get_field(3))


def test_field_construction_errors():
    with pytest.raises(DegenerateInput):
        FqField(4)
    with pytest.raises(DegenerateInput):
        FqField(2, 9)
    with pytest.raises(NotIrreducible):
        FqField(2, 2, (1, 0, 1))


def schoolbook(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return out


def coeff_list(s, lo, hi):
    return [s.coefficient(k).value for k in range(lo, hi)]


def test_geometric_series_product_against_convolution():
    F = get_field(2)
    one_plus_t = LaurentSeries(F, 0, b"\x01\x01")
    geo = LaurentSeries(F, 0, b"\x01" * 8, prec=8)
    prod = one_plus_t * geo
    assert prod.prec == 8
    expected = schoolbook([1, 1], [1] * 8, 2)[:8]
    assert coeff_list(prod, 0, 8) == expected == [1] + [0] * 7
    with working_precision(8):
        inv = one_plus_t.inverse()
    assert coeff_list(inv, 0, 8) == [1] * 8
    assert (inv * one_plus_t).agrees_with(LaurentSeries.one(F))


@pytest.mark.parametrize("p", [2, 3, 5])
def test_products_against_convolution(p):
    rng = random.Random(p)
    F = get_field(p)
    for _ in range(50):
        a = [rng.randrange(p) for _ in range(rng.randrange(1, 30))]
        b = [rng.randrange(p) for _ in range(rng.randrange(1, 30))]
        a[0] = b[0] = 1
        va, vb = rng.randrange(-5, 5), rng.randrange(-5, 5)
        prod = LaurentSeries(F, va, a) * LaurentSeries(F, vb, b)
        assert prod == LaurentSeries(F, va + vb, schoolbook(a, b, p))


def test_monomial_inverse_is_exact():
    F = get_field(3)
    inv = LaurentSeries.monomial(F, -1).inverse()
    assert inv == LaurentSeries.T(F)
    assert inv.is_exact
    trunc = LaurentSeries.monomial(F, -1, prec=5).inverse()
    assert trunc.v0 == 1 and trunc.prec == 7


def test_cancellation_keeps_precision():
    F = get_field(3)
    a = LaurentSeries(F, -2, [1, 2, 1], prec=10)
    z = a - a
    assert z.is_zero_at_precision() and z.prec == 10
    assert not z.is_exact_zero()
    with pytest.raises(PrecisionExhausted):
        z.valuation()
    with pytest.raises(PrecisionExhausted):
        z.inverse()
    exact = LaurentSeries(F, 0, [1, 1])
    assert (exact - exact).is_exact_zero()
    assert (exact - exact).valuation() == INF
    with pytest.raises(DivisionByZero):
        (exact - exact).inverse()


def test_valuation_examples():
    F = get_field(2)
    assert (LaurentSeries.monomial(F, -3) + 1).valuation() == -3
    assert LaurentSeries.one(F).valuation() == 0


def random_series(rng, F, exact=False):
    n = rng.randrange(1, 12)
    coeffs = [rng.randrange(F.q) for _ in range(n)]
    coeffs[0] = rng.randrange(1, F.q)
    v0 = rng.randrange(-6, 6)
    prec = INF if exact else v0 + n + rng.randrange(0, 4)
    return LaurentSeries(F, v0, bytes(coeffs), prec)


@pytest.mark.parametrize("p,f0", [(2, 1), (3, 1), (2, 2)])
def test_valuation_is_additive_on_seeded_pairs(p, f0):
    rng = random.Random(100 + p * 10 + f0)
    F = get_field(p, f0)
    for _ in range(100):
        a, b = random_series(rng, F), random_series(rng, F)
        assert (a * b).valuation() == a.valuation() + b.valuation()
        s = a + b
        if not s.is_zero():
            assert s.valuation() >= min(a.valuation(), b.valuation())


def test_default_precision_sources(monkeypatch):
    monkeypatch.delenv("CHARP_NBG_PREC", raising=False)
    assert default_precision() == 64
    monkeypatch.setenv("CHARP_NBG_PREC", "40")
    assert default_precision() == 40
    with working_precision(12):
        assert default_precision() == 12
    assert default_precision() == 40
    with pytest.raises(ValueError):
        with working_precision(0):
            pass


def test_doubling_precision_reproduces_known_coefficients():
    F = get_field(3)
    a = LaurentSeries(F, -1, [1, 2, 0, 1, 1])
    with working_precision(16):
        lo = a.inverse()
    with working_precision(32):
        hi = a.inverse()
    assert hi.prec > lo.prec
    assert hi.truncate(lo.prec) == lo


def test_json_round_trip():
    F = get_field(3, 2)
    s = LaurentSeries(F, -2, [F.gen().value, 1, 0, 5], prec=6)
    data = json.loads(json.dumps(s.to_json()))
    assert data["coeffs"][0] == [0, 1]
    assert LaurentSeries.from_json(data) == s
    exact = LaurentSeries.from_terms(F, {0: 1, 3: 2})
    assert LaurentSeries.from_json(exact.to_json()) == exact
    with pytest.raises(FieldMismatch):
        LaurentSeries.from_json(s.to_json(), get_field(3))


FIELDS = [get_field(2), get_field(3), get_field(2, 2)]


@st.composite
def series(draw, field):
    n = draw(st.integers(0, 8))
    coeffs = draw(st.lists(st.integers(0, field.q - 1), min_size=n, max_size=n))
    v0 = draw(st.integers(-4, 4))
    exact = draw(st.booleans())
    prec = INF if exact else v0 + n + draw(st.integers(0, 3))
    return LaurentSeries(field, v0, bytes(coeffs), prec)


@st.composite
def triples(draw):
    F = draw(st.sampled_from(FIELDS))
    return draw(series(F)), draw(series(F)), draw(series(F))


@settings(max_examples=200, deadline=None)
@given(triples())
def test_ring_axioms_on_known_window(t):
    a, b, c = t
    assert ((a * b) * c).agrees_with(a * (b * c))
    assert (a * (b + c)).agrees_with(a * b + a * c)
    assert (a + b).agrees_with(b + a)
    assert (a * b).agrees_with(b * a)


@settings(max_examples=200, deadline=None)
@given(triples())
def test_precision_never_exceeds_propagation_rule(t):
    a, b, _ = t
    assert (a + b).prec == min(a.prec, b.prec)
    if not (a.is_exact_zero() or b.is_exact_zero()):
        assert (a * b).prec == min(a.prec + b.valuation_bound(), b.prec + a.valuation_bound())


@settings(max_examples=100, deadline=None)
@given(triples())
def test_inverse_is_inverse_on_window(t):
    a, _, _ = t
    if a.is_zero():
        return
    with working_precision(10):
        inv = a.inverse()
    assert (a * inv).agrees_with(LaurentSeries.one(a.field))
