import math

import pytest
from hypothesis import given, settings, strategies as st

from fflab.errors import DivisionByZero, PrecisionExhausted
from fflab.localfield import INF, LocalField


F = LocalField(3)


def rand_element(draw_val, coeffs):
    return F.element(draw_val, coeffs)


small_elements = st.builds(
    rand_element,
    st.integers(min_value=-3, max_value=3),
    st.lists(st.integers(min_value=0, max_value=2), min_size=0, max_size=5),
)


def test_inv_geometric_series():
    x = F.one - F.pi()
    xi = x.inv()
    # 1 + pi + pi^2 + ... up to the working precision
    assert xi.val == 0
    assert all(c == 1 for c in xi.coeffs)
    assert xi.known_to == F.precision
    assert (x * xi).same(F.one)


def test_valuation_examples():
    assert (F.pi(3) + F.pi(5)).valuation() == 3
    assert (F.pi(-1) * F.pi(1)) == F.one
    assert F.zero.valuation() == INF


def test_exact_zero_vs_inexact_zero():
    o = F.o_term(7)
    assert o.is_zeroish and not o.is_exact_zero
    with pytest.raises(PrecisionExhausted):
        o.valuation()
    with pytest.raises(PrecisionExhausted):
        o.inv()
    with pytest.raises(DivisionByZero):
        F.zero.inv()


def test_precision_never_inflated():
    x = F.element(0, [1, 2], known_to=5)
    y = F.element(0, [2], known_to=9)
    assert (x + y).known_to == 5
    assert (x * y).known_to == 5
    # multiplication by a positive-valuation element raises the bound
    z = F.element(2, [1], known_to=9)
    assert (x * z).known_to == 7


def test_reduce_mod_is_exact():
    x = F.element(-1, [1, 0, 2, 1], known_to=10)
    r = x.reduce_mod(2)
    assert r.is_exact
    assert r.val == -1 and r.coeffs == (1, 0, 2)
    with pytest.raises(PrecisionExhausted):
        x.reduce_mod(11)


@settings(max_examples=60, deadline=None)
@given(small_elements, small_elements, small_elements)
def test_ring_axioms(a, b, c):
    assert ((a + b) + c).same(a + (b + c))
    assert (a + b).same(b + a)
    assert ((a * b) * c).same(a * (b * c))
    assert (a * (b + c)).same(a * b + a * c)


@settings(max_examples=40, deadline=None)
@given(small_elements, small_elements)
def test_valuation_multiplicative(a, b):
    if a.coeffs and b.coeffs:
        assert (a * b).valuation() == a.valuation() + b.valuation()


@settings(max_examples=40, deadline=None)
@given(small_elements)
def test_inverse_roundtrip(a):
    if a.coeffs:
        assert (a * a.inv()).same(F.one)


def test_serialization_generator_exponents():
    x = F.element(2, [2, 1])
    j = x.to_json()
    g = F.gf
    assert j["terms"] == [[2, g.log(2)], [3, 0]]
    assert j["known_to"] is None


def test_even_q_field():
    F4 = LocalField(4)
    g = F4.gf
    a = F4.from_fq(g.generator)
    assert (a * a * a).same(F4.one)  # generator of F_4^x has order 3
    assert (a + a).is_exact_zero    # characteristic 2
