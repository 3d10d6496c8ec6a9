import itertools
import math
import random

import pytest

from hypdmod.cyclotomic import CycInt
from hypdmod.finite_field import AddChar, MultChar, field_create
from hypdmod.hypersum import (
    BudgetError,
    HypSpec,
    SpecError,
    convolution_trace_check,
    gauss_sum,
    hyp_sum_convolved,
    hyp_sum_direct,
    hyp_table_convolved,
    hyp_table_direct,
    trace_normalizations,
)

# Kloosterman sums over GF(7) from a plain double loop, x + t/x mod 7:
# counts[e] = #{x : x + t x^-1 = e}.  Frozen oracle output.
KLOOSTERMAN_7 = {
    1: [0, 2, 1, 0, 0, 1, 2],
    2: [0, 1, 0, 2, 2, 0, 1],
    3: [2, 0, 0, 2, 2, 0, 0],
    4: [0, 0, 2, 1, 1, 2, 0],
    5: [2, 2, 0, 0, 0, 0, 2],
    6: [2, 0, 2, 0, 0, 2, 0],
}


def kloosterman_oracle(p, t):
    counts = [0] * p
    for x in range(1, p):
        for y in range(1, p):
            if x * y % p == t:
                counts[(x + y) % p] += 1
    return CycInt.from_exponent_counts(p, counts)


def spec(p, s=1, chi=(), rho=(), psi=1):
    return HypSpec.from_exponents(field_create(p, s), psi, chi, rho)


def test_kloosterman_table_gf7():
    sp = spec(7, chi=(0, 0))
    table = hyp_table_direct(sp)
    for t, counts in KLOOSTERMAN_7.items():
        frozen = CycInt.from_exponent_counts(7, counts).lift(sp.order)
        assert table[t] == frozen
        assert kloosterman_oracle(7, t).lift(sp.order) == frozen


@pytest.mark.parametrize("p", [3, 5, 11, 13])
def test_kloosterman_matches_double_loop(p):
    sp = spec(p, chi=(0, 0))
    for t in range(1, p):
        assert hyp_sum_direct(sp, t) == kloosterman_oracle(p, t).lift(sp.order)


@pytest.mark.parametrize("p,s", [(5, 1), (7, 1), (3, 2)])
def test_rank_one_closed_forms(p, s):
    f = field_create(p, s)
    N = p * (f.q - 1)
    psi = AddChar(f, f.elem(1))
    for a in range(f.q - 1):
        chi = MultChar(f, a)
        sp = HypSpec(f, psi, (chi,))
        sp_rho = HypSpec(f, psi, (), (chi,))
        for t in f.units():
            expected = psi(t).lift(N) * chi(t).lift(N)
            assert hyp_sum_direct(sp, t) == expected
            assert hyp_sum_convolved(sp, t) == expected
            expected_rho = psi(-t.inverse()).lift(N) * chi(t).lift(N)
            assert hyp_sum_direct(sp_rho, t) == expected_rho
            assert hyp_sum_convolved(sp_rho, t) == expected_rho


@pytest.mark.parametrize(
    "p,s,chi,rho",
    [(5, 1, (1,), (0,)), (7, 1, (1, 2), (3,)), (3, 2, (1, 5), (2,)), (5, 1, (0, 2), (1, 3))],
)
def test_convolution_route_equals_direct(p, s, chi, rho):
    sp = spec(p, s, chi, rho)
    assert hyp_table_convolved(sp) == hyp_table_direct(sp)


def test_random_convolution_equivalence():
    rng = random.Random(7)
    for p, s in [(3, 1), (5, 1), (7, 1), (3, 2)]:
        q = p**s
        for _ in range(5):
            m = rng.randrange(0, 3)
            n = rng.randrange(0 if m else 1, 3 - m + 1)
            chi = [rng.randrange(q - 1) for _ in range(m)]
            rho = [b for b in (rng.randrange(q - 1) for _ in range(n)) if b not in chi]
            if not chi and not rho:
                continue
            sp = spec(p, s, chi, rho)
            assert hyp_table_convolved(sp) == hyp_table_direct(sp)


def test_spec_validation():
    f = field_create(5)
    with pytest.raises(SpecError):
        spec(5, chi=(1,), rho=(1,))
    with pytest.raises(SpecError):
        HypSpec(f, AddChar(f, f.zero()), (MultChar(f, 1),))
    with pytest.raises(SpecError):
        HypSpec(f, AddChar(f, f.one()), (MultChar(f, 1),), alpha=("1/2",))
    with pytest.raises(SpecError):
        HypSpec(f, AddChar(f, f.one()), (MultChar(f, 1),), alpha=("1/3",))
    ok = HypSpec(f, AddChar(f, f.one()), (MultChar(f, 1),), alpha=("5/4",))
    assert str(ok.alpha[0]) == "5/4"
    with pytest.raises(SpecError):
        hyp_sum_direct(spec(5, chi=(1,)), 0)
    g = field_create(7)
    with pytest.raises(SpecError):
        HypSpec(f, AddChar(f, f.one()), (MultChar(g, 1),))


def test_budget_error_carries_count():
    sp = spec(13, chi=(0, 0, 0, 0))
    with pytest.raises(BudgetError) as info:
        hyp_sum_direct(sp, 1, budget=1000)
    assert info.value.required == 12**3


def test_spec_json():
    sp = spec(5, chi=(1, 3), rho=(2,))
    assert {k: sp.to_json()[k] for k in ("p", "s", "chi", "rho", "psi")} == {
        "p": 5,
        "s": 1,
        "chi": [1, 3],
        "rho": [2],
        "psi": 1,
    }


def test_gauss_sums():
    f = field_create(7)
    psi = AddChar(f, f.one())
    assert gauss_sum(psi, MultChar(f, 0)) == -1
    assert gauss_sum(AddChar(f, f.zero()), MultChar(f, 2)).is_zero()
    for a in range(1, 6):
        assert abs(abs(gauss_sum(psi, MultChar(f, a)).embed()) - math.sqrt(7)) < 1e-9


def test_convolution_trace_check():
    f = field_create(5)
    sp1 = spec(5, chi=(1,))
    sp2 = spec(5, chi=(2,))
    N = sp1.order
    h1 = hyp_table_direct(sp1)
    h2 = hyp_table_direct(sp2)
    f1 = {f.elem(k): v for k, v in h1.items()}
    f2 = {f.elem(k): v for k, v in h2.items()}
    both = spec(5, chi=(1, 2))
    delta = {x: CycInt.from_int(N, 1 if x == f.one() else 0) for x in f.units()}
    ones = {x: CycInt.one(N) for x in f.units()}
    for t in f.units():
        assert convolution_trace_check(f1, f2, t) == hyp_sum_direct(both, t)
        assert convolution_trace_check(delta, f2, t) == f2[t]
        # sum over x of psi chi(x), independent of t
        independent = CycInt.zero(N)
        for x in f.units():
            independent = independent + f1[x]
        assert convolution_trace_check(ones, f1, t) == independent


def test_trace_normalizations():
    f = field_create(5)
    sp = spec(5, chi=(1,))
    v = hyp_sum_direct(sp, 2)
    assert trace_normalizations(v, 1, 0, 5, "dmodule") == v * 25
    assert trace_normalizations(v, 1, 0, 5, "sheaf") == v
    assert trace_normalizations(v, 1, 1, 5, "sheaf") == -v
    assert trace_normalizations(v, 1, 1, 5, "raw") == v
    with pytest.raises(ValueError):
        trace_normalizations(v, 1, 0, 5, "other")
    assert f.q == 5


@pytest.mark.parametrize("p,s", [(5, 1), (7, 1), (3, 2), (11, 1), (5, 2)])
def test_weil_bound(p, s):
    sp = spec(p, s, chi=(0, 0))
    q = p**s
    for v in hyp_table_direct(sp).values():
        assert abs(v.embed()) <= 2 * math.sqrt(q) + 1e-6


@pytest.mark.parametrize("p,s", [(3, 1), (5, 1), (7, 1), (3, 2)])
def test_scaling_psi_for_balanced_data(p, s):
    # x -> c x, y -> c y preserves V(1, 1, t), giving
    # Hyp_{psi_c}(t) = chi(c)^-1 rho(c) Hyp_psi(t)
    f = field_create(p, s)
    N = p * (f.q - 1)
    for a, b in itertools.permutations(range(f.q - 1), 2):
        chi, rho = MultChar(f, a), MultChar(f, b)
        base = hyp_table_direct(HypSpec(f, AddChar(f, f.one()), (chi,), (rho,)))
        for c in f.units():
            scaled = hyp_table_direct(HypSpec(f, AddChar(f, c), (chi,), (rho,)))
            factor = chi.inverse()(c).lift(N) * rho(c).lift(N)
            for t in base:
                assert scaled[t] == factor * base[t]


def test_scaling_with_unswapped_factor_fails_somewhere():
    # chi(c) rho(c)^-1 instead: wrong unless every character involved is quadratic
    f = field_create(5)
    N = 20
    chi, rho = MultChar(f, 1), MultChar(f, 0)
    base = hyp_table_direct(HypSpec(f, AddChar(f, f.one()), (chi,), (rho,)))
    c = f.elem(2)
    scaled = hyp_table_direct(HypSpec(f, AddChar(f, c), (chi,), (rho,)))
    factor = chi(c).lift(N) * rho.inverse()(c).lift(N)
    assert any(scaled[t] != factor * base[t] for t in base)
