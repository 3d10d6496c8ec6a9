import cmath
import math

import pytest
from hypothesis import given, settings, strategies as st

from hypdmod.cyclotomic import (
    CycInt,
    OrderMismatch,
    cyc_arith,
    cyc_embed,
    cyc_lift,
    cyclotomic_polynomial,
    euler_phi,
)


def z(n, e=1):
    return CycInt.root_of_unity(n, e)


def test_cyclotomic_polynomials_small():
    # values checked against the product over primitive roots
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(5) == (1, 1, 1, 1, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)
    assert cyclotomic_polynomial(105)[7] == -2


@pytest.mark.parametrize("n", [1, 2, 3, 4, 8, 12, 15, 28, 60, 105])
def test_cyclotomic_roots_numerically(n):
    phi = cyclotomic_polynomial(n)
    assert len(phi) - 1 == euler_phi(n)
    for k in range(1, n + 1):
        if math.gcd(k, n) == 1:
            w = cmath.exp(2j * math.pi * k / n)
            assert abs(sum(c * w**i for i, c in enumerate(phi))) < 1e-8


def test_sum_of_primitive_fifth_roots():
    total = z(5, 1) + z(5, 2) + z(5, 3) + z(5, 4)
    assert total == -1
    assert cyc_arith(z(5), z(5, 2), "add") + z(5, 3) + z(5, 4) == CycInt.from_int(5, -1)


def test_small_products():
    assert cyc_arith(z(3), z(3, 2), "mul") == 1
    one = CycInt.one(4)
    assert cyc_arith(one + z(4), one - z(4), "mul") == 2
    assert cyc_arith(z(7), None, "neg") == -z(7)
    assert cyc_arith(z(7), z(7), "sub").is_zero()


def test_order_mismatch_is_explicit():
    with pytest.raises(OrderMismatch):
        z(3) + z(6)
    with pytest.raises(OrderMismatch):
        cyc_arith(z(3), z(5), "mul")
    with pytest.raises(ValueError):
        cyc_arith(z(3), z(3), "pow")


def test_lift_examples():
    assert cyc_lift(z(3), 6) == z(6, 2)
    assert cyc_lift(CycInt.one(1), 30) == 1
    assert cyc_lift(z(5), 10) == z(10, 2)
    with pytest.raises(ValueError):
        cyc_lift(z(4), 10)


def test_embed_examples():
    assert abs(cyc_embed(z(4)) - 1j) < 1e-12
    assert cyc_embed(CycInt.from_int(9, -1)) == -1
    assert abs(cyc_embed(z(8) + z(8, -1)) - math.sqrt(2)) < 1e-12


def test_json_round_trip():
    a = z(12, 5) * 3 - 7
    assert CycInt.from_json(a.to_json()) == a
    assert a.to_json()["order"] == 12
    assert len(a.to_json()["coeffs"]) == euler_phi(12)


def test_conjugate_and_exponent_counts():
    n = 15
    counts = [0] * n
    counts[2] = 3
    counts[14] = -1
    a = CycInt.from_exponent_counts(n, counts)
    assert a == z(n, 2) * 3 - z(n, 14)
    assert abs(cyc_embed(a.conjugate()) - cyc_embed(a).conjugate()) < 1e-9


orders = st.integers(min_value=1, max_value=200)


@st.composite
def pairs(draw):
    n = draw(orders)
    k = euler_phi(n)
    coeffs = st.lists(st.integers(-1000, 1000), min_size=k, max_size=k)
    return CycInt(n, draw(coeffs)), CycInt(n, draw(coeffs))


@settings(max_examples=60, deadline=None)
@given(pairs())
def test_embedding_is_multiplicative(ab):
    a, b = ab
    lhs = cyc_embed(a * b)
    rhs = cyc_embed(a) * cyc_embed(b)
    assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(rhs))


@settings(max_examples=60, deadline=None)
@given(pairs())
def test_canonical_form_is_idempotent(ab):
    a, _ = ab
    assert CycInt(a.order, a.coeffs) == a
    assert CycInt(a.order, list(a.coeffs) + [0] * 5).coeffs == a.coeffs


@settings(max_examples=40, deadline=None)
@given(pairs(), st.integers(1, 4))
def test_lift_is_a_ring_homomorphism(ab, k):
    a, b = ab
    n = a.order * k
    assert cyc_lift(a, n) + cyc_lift(b, n) == cyc_lift(a + b, n)
    assert cyc_lift(a, n) * cyc_lift(b, n) == cyc_lift(a * b, n)
