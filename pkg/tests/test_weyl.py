import json

import pytest
from hypothesis import given, settings, strategies as st

from hypdmod.identities import (
    check_fourier,
    check_fourier_display,
    check_inversion,
    check_kummer,
    check_kummer_literal,
    check_mod_partial,
    check_mod_x,
    check_relations,
    check_top_coefficient,
    inversion_unit,
    top_coefficient,
)
from hypdmod.weyl import (
    ContextMismatch,
    OpContext,
    WeylOp,
    connection_matrix,
    divided_power,
    dpoly_coeffs,
    falling,
    fourier_auto,
    hyp_operator,
    kummer_module_twist,
    kummer_twist,
    left_ideal_equal_up_to_unit,
    op_ring,
    reduce_mod_left_partial,
    reduce_mod_right_x,
    substitute_inversion,
)

CTX = OpContext(-1)
X = WeylOp.x(CTX)
D = WeylOp.d(CTX)
ONE = WeylOp.const(CTX)


def test_commutation_relation():
    assert D * X - X * D == ONE
    assert D * WeylOp.x(CTX, -1) == WeylOp.x(CTX, -1) * D - WeylOp.x(CTX, -2)


def test_product_formula():
    # d^2 x^3 = x^3 d^2 + 6 x^2 d + 6 x
    assert D**2 * X**3 == WeylOp.monomial(CTX, 3, 2) + WeylOp.monomial(CTX, 2, 1, 6) + WeylOp.x(CTX) * 6


def test_op_ring():
    assert op_ring(X, D, "add") == X + D
    assert op_ring(D, X, "mul") == X * D + 1
    with pytest.raises(ValueError):
        op_ring(X, D, "div")
    with pytest.raises(ContextMismatch):
        op_ring(X, WeylOp.d(OpContext(1)), "mul")


def test_falling():
    assert falling(5, 2) == 20
    assert falling(-1, 3) == -6
    assert falling(3, 0) == 1


monomials = st.builds(
    lambda k, l, c: WeylOp.monomial(CTX, k, l, c),
    st.integers(-3, 3),
    st.integers(0, 2),
    st.integers(-3, 3).filter(bool),
)
ops = st.lists(monomials, min_size=1, max_size=3).map(lambda xs: sum(xs[1:], xs[0]))


@settings(max_examples=40, deadline=None)
@given(ops, ops, ops)
def test_associativity(a, b, c):
    assert (a * b) * c == a * (b * c)


@settings(max_examples=40, deadline=None)
@given(ops, ops, ops)
def test_distributivity(a, b, c):
    assert a * (b + c) == a * b + a * c


@settings(max_examples=30, deadline=None)
@given(ops)
def test_inversion_is_an_involution(a):
    assert substitute_inversion(substitute_inversion(a)) == a


@settings(max_examples=30, deadline=None)
@given(ops)
def test_kummer_twists_cancel(a):
    g = CTX.sym("g")
    assert kummer_twist(kummer_twist(a, g), -g) == a


@settings(max_examples=30, deadline=None)
@given(ops, ops)
def test_inversion_is_multiplicative(a, b):
    assert substitute_inversion(a * b) == substitute_inversion(a) * substitute_inversion(b)


def test_fourier_squares_to_minus_identity():
    assert fourier_auto(fourier_auto(X)) == -X
    assert fourier_auto(fourier_auto(D)) == -D
    with pytest.raises(ValueError):
        fourier_auto(WeylOp.x(CTX, -1))


def test_kummer_shifts_theta():
    g = CTX.sym("g")
    th = WeylOp.theta(CTX)
    assert kummer_twist(th, g) == th + g
    assert kummer_module_twist(th, g) == th - g


def test_relations_preserved():
    for eps in (1, -1):
        assert all(r["ok"] for r in check_relations(OpContext(eps)))


def test_hyp_operator_shape():
    H = hyp_operator(CTX, 1, 0)
    # x d - a1 - (-1) pi x
    assert H == WeylOp.theta(CTX) - CTX.sym("a1") + X * CTX.pi
    assert hyp_operator(CTX, alpha=[], beta=[], allow_empty=True) == ONE - X
    with pytest.raises(ValueError):
        hyp_operator(CTX, 0, 0)


def test_inversion_unit_for_rank_one():
    # the unit is pi x^-1 at either parity
    for eps in (1, -1):
        ctx = OpContext(eps)
        assert inversion_unit(ctx, 1, 0) == ctx.pi
        rec = check_inversion(ctx, 1, 0)
        assert rec["ok"]
        assert rec["witness"] == "(pi)*x^-1"


@pytest.mark.parametrize("eps", [1, -1])
@pytest.mark.parametrize("m,n", [(1, 0), (0, 1), (2, 1), (1, 2), (2, 2), (3, 0)])
def test_inversion_and_kummer(eps, m, n):
    ctx = OpContext(eps)
    assert check_inversion(ctx, m, n)["ok"]
    assert check_kummer(ctx, m, n)["ok"]


@pytest.mark.parametrize("eps", [1, -1])
@pytest.mark.parametrize("m,n", [(1, 0), (2, 0), (1, 1), (2, 1), (1, 2), (3, 2)])
def test_fourier(eps, m, n):
    assert check_fourier(OpContext(eps), m, n)["ok"]


def test_alternative_forms_are_refuted():
    # d -> d + g/x gives the minus shift, and the braces need an x in front of
    # the second product
    for eps in (1, -1):
        ctx = OpContext(eps)
        assert not check_kummer_literal(ctx, 1, 1)["ok"]
        assert not check_fourier_display(ctx, 2, 1)["ok"]


@pytest.mark.parametrize("eps", [1, -1])
def test_top_coefficient(eps):
    ctx = OpContext(eps)
    for m in range(4):
        for n in range(4):
            if m + n:
                assert check_top_coefficient(ctx, m, n)["ok"], (m, n)
    tc = top_coefficient(ctx, 1, 1)
    assert set(tc) == {1, 2}
    assert tc[2] == ctx.scalar(eps)


@pytest.mark.parametrize("eps", [1, -1])
def test_mod_reductions(eps):
    ctx = OpContext(eps)
    for m, n in [(1, 0), (0, 1), (2, 1), (3, 3)]:
        for l in range(6):
            assert check_mod_partial(ctx, m, n, l)["ok"]
            assert check_mod_x(ctx, m, n, l)["ok"]


def test_reduce_mod_left_partial_examples():
    # x^3 d^2 -> 6 x, x d -> -1, d -> 0
    assert reduce_mod_left_partial(WeylOp.monomial(CTX, 3, 2)) == {1: CTX.scalar(6)}
    assert reduce_mod_left_partial(WeylOp.theta(CTX)) == {0: CTX.scalar(-1)}
    assert reduce_mod_left_partial(D) == {}


def test_reduce_mod_right_x_examples():
    assert reduce_mod_right_x(D * X) == {0: CTX.scalar(1)}
    assert reduce_mod_right_x(X * D + D**2) == {2: CTX.scalar(1)}
    assert divided_power(CTX, 3) * 6 == D**3
    with pytest.raises(ValueError):
        reduce_mod_right_x(WeylOp.x(CTX, -1))


def test_dpoly_and_connection_matrix():
    H = hyp_operator(CTX, 2, 0)
    h = dpoly_coeffs(H)
    assert len(h) == 3
    assert set(h[2]) == {2}
    mat = connection_matrix(H)
    assert mat[0][1].num == {0: CTX.scalar(1)}
    # last row: -h_0 / x^2, -h_1 / x^2
    a1, a2 = CTX.alpha(2)
    assert mat[1][0].num[-2] == -(a1 * a2)
    with pytest.raises(ValueError):
        connection_matrix(X)


def test_unit_verdicts():
    H = hyp_operator(CTX, 2, 1)
    v = left_ideal_equal_up_to_unit(WeylOp.x(CTX, 2) * H * 3, H)
    assert v.equal and v.shift == 2 and v.coeff == CTX.scalar(3)
    assert not left_ideal_equal_up_to_unit(H, hyp_operator(CTX, 2, 0)).equal
    assert not left_ideal_equal_up_to_unit(H + 1, H).equal
    assert json.loads(json.dumps(v.to_json()))["shift"] == 2


def test_json_round_trip():
    H = hyp_operator(CTX, 2, 2) * (1 / CTX.pi)
    data = json.loads(json.dumps(H.to_json()))
    assert WeylOp.from_json(CTX, data) == H
    assert "pi" in H.pretty()
