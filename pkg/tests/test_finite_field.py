import itertools

import pytest

from hypdmod.cyclotomic import CycInt
from hypdmod.finite_field import (
    AddChar,
    FieldCtx,
    FieldSizeError,
    MultChar,
    char_eval,
    char_pullback,
    extend,
    field_create,
)


def brute_irreducible(coeffs, p):
    """No root / no factor, by trying every monic divisor of lower degree."""
    s = len(coeffs) - 1

    def polymod(a, b):
        a = list(a)
        while len(a) >= len(b):
            c = a[-1] * pow(b[-1], -1, p) % p
            shift = len(a) - len(b)
            for i, y in enumerate(b):
                a[shift + i] = (a[shift + i] - c * y) % p
            while a and a[-1] == 0:
                a.pop()
        return a

    for d in range(1, s // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not polymod(coeffs, list(low) + [1]):
                return False
    return True


def brute_first_irreducible(p, s):
    for enc in range(p**s):
        low = [(enc // p**i) % p for i in range(s)]
        if brute_irreducible(low + [1], p):
            return tuple(low + [1])


def brute_order(x):
    one = x.ctx.one()
    y, k = x, 1
    while y != one:
        y, k = y * x, k + 1
    return k


@pytest.mark.parametrize("p,gen", [(5, 2), (7, 3), (3, 2), (11, 2), (13, 2)])
def test_prime_field_generators(p, gen):
    f = field_create(p)
    assert f.generator.encode() == gen
    # smallest-encoding primitive element
    assert all(brute_order(f.elem(x)) < p - 1 for x in range(1, gen))
    assert brute_order(f.generator) == p - 1


@pytest.mark.parametrize("p,s", [(3, 2), (2, 3), (5, 2), (7, 2), (3, 3), (2, 4)])
def test_defining_polynomial_and_generator(p, s):
    f = field_create(p, s)
    assert tuple(f.defining_poly) == brute_first_irreducible(p, s)
    assert brute_order(f.generator) == f.q - 1
    for enc in range(1, f.generator.encode()):
        assert brute_order(f.elem(enc)) < f.q - 1


def test_gf9_conventions():
    f = field_create(3, 2)
    assert tuple(f.defining_poly) == (1, 0, 1)
    assert f.generator.encode() == 4


def test_field_errors_and_determinism():
    with pytest.raises(ValueError):
        field_create(6)
    with pytest.raises(FieldSizeError):
        field_create(2, 21)
    a, b = FieldCtx(5, 2), FieldCtx(5, 2)
    assert a == b and a.defining_poly == b.defining_poly and a.generator == b.generator


def test_field_axioms_gf9():
    f = field_create(3, 2)
    elems = list(f)
    for x in elems:
        assert x + (-x) == f.zero()
        if not x.is_zero():
            assert x * x.inverse() == f.one()
    for x, y in itertools.product(elems, repeat=2):
        assert x * y == y * x
        assert (x + y).encode() == f.add_enc(x.encode(), y.encode())


def test_norm_and_trace_gf25():
    base = field_create(5)
    tower = extend(base, 2)
    big = tower.field
    fibres = {}
    for y in big.units():
        n = tower.norm(y)
        assert tower.embed(n) == y**6
        fibres[n.encode()] = fibres.get(n.encode(), 0) + 1
    assert sorted(fibres) == [1, 2, 3, 4]
    assert set(fibres.values()) == {6}


def test_trace_of_base_elements_gf49():
    base = field_create(7)
    tower = extend(base, 2)
    for c in range(7):
        assert tower.trace(tower.embed(base.elem(c))) == base.elem(2 * c)


def test_tower_maps_are_linear_and_multiplicative():
    base = field_create(3)
    tower = extend(base, 3)
    big = list(tower.field)
    for x, y in itertools.product(big[::3], big[::4]):
        assert tower.trace(x + y) == tower.trace(x) + tower.trace(y)
        assert tower.norm(x * y) == tower.norm(x) * tower.norm(y)
    for c in base:
        for x in big[::5]:
            assert tower.trace(tower.embed(c) * x) == c * tower.trace(x)


def test_transitivity_in_towers():
    # GF(2) < GF(4) < GF(16): Tr_{16/2} = Tr_{4/2} o Tr_{16/4}
    f2 = field_create(2)
    t4 = extend(f2, 2)
    t16 = extend(t4.field, 2)
    t16_direct = extend(f2, 4)
    # identify GF(16) over GF(4) with GF(16) over GF(2) via absolute traces
    for y in t16.field:
        via = t4.trace(t16.trace(y))
        assert via.encode() == t16.field.absolute_trace(y) % 2
        nv = t4.norm(t16.norm(y)) if not y.is_zero() else f2.zero()
        assert nv == (f2.one() if not y.is_zero() else f2.zero())
    assert t16_direct.field.q == 16


def test_char_eval_examples():
    f = field_create(5)
    assert char_eval(MultChar(f, 0), f.elem(3)) == 1
    assert char_eval(MultChar(f, 1), f.generator) == CycInt.root_of_unity(4, 1)
    assert char_eval(AddChar(f, f.elem(1)), f.zero()) == 1
    with pytest.raises(ZeroDivisionError):
        char_eval(MultChar(f, 1), f.zero())
    lifted = char_eval(MultChar(f, 1), f.generator, order=20)
    assert lifted == CycInt.root_of_unity(20, 5)


@pytest.mark.parametrize("p,s", [(5, 1), (7, 1), (3, 2), (2, 3)])
def test_orthogonality(p, s):
    f = field_create(p, s)
    for a in range(1, f.q):
        psi = AddChar(f, f.elem(a))
        total = CycInt.zero(p)
        for x in f:
            total = total + psi(x)
        assert total.is_zero()
    for a in range(1, f.q - 1):
        chi = MultChar(f, a)
        total = CycInt.zero(f.q - 1)
        for x in f.units():
            total = total + chi(x)
        assert total.is_zero()


def test_characters_are_homomorphisms():
    f = field_create(3, 2)
    chi = MultChar(f, 3)
    psi = AddChar(f, f.elem(5))
    for x, y in itertools.product(list(f.units()), repeat=2):
        assert chi(x * y) == chi(x) * chi(y)
    for x, y in itertools.product(list(f), repeat=2):
        assert psi(x + y) == psi(x) * psi(y)


def test_pullbacks_gf25():
    base = field_create(5)
    tower = extend(base, 2)
    triv = char_pullback(MultChar(base, 0), tower)
    assert triv.is_trivial
    chi = MultChar(base, 1)
    pulled = char_pullback(chi, tower)
    for c in base.units():
        assert pulled(tower.embed(c)) == chi(c) ** 2
    units = list(tower.field.units())
    for x, y in itertools.product(units, repeat=2):
        assert pulled.exponent(x * y) == (pulled.exponent(x) + pulled.exponent(y)) % pulled.modulus
    psi = AddChar(base, base.elem(2))
    ppsi = char_pullback(psi, tower)
    for y in tower.field:
        assert ppsi(y) == psi(tower.trace(y))
    other = extend(field_create(7), 2)
    with pytest.raises(ValueError):
        char_pullback(chi, other)
