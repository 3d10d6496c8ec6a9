"""Deterministic finite fields GF(p^s), towers, and their characters.

A field is Fp[x]/(f) where f is the first monic irreducible of degree s in
encoding order.  Elements are identified with integers 0..q-1 by reading
the coefficients (low to high) as base-p digits; this encoding is used for
all tables and for the CLI.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Callable, Iterator

import numpy as np

from .cyclotomic import CycInt

__all__ = [
    "FieldCtx",
    "FqElem",
    "MultChar",
    "AddChar",
    "Tower",
    "FieldSizeError",
    "field_create",
    "extend",
    "char_eval",
    "char_pullback",
    "is_prime",
    "DEFAULT_SIZE_BOUND",
]

DEFAULT_SIZE_BOUND = 10**6


class FieldSizeError(ValueError):
    """Requested field exceeds the configured size bound."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# --- polynomials over Fp, coefficient lists low to high --------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], f: list[int], p: int) -> list[int]:
    a = [x % p for x in a]
    _trim(a)
    df = len(f) - 1
    inv = pow(f[-1], -1, p)
    while len(a) - 1 >= df and a:
        c = a[-1] * inv % p
        shift = len(a) - 1 - df
        for i, y in enumerate(f):
            a[shift + i] = (a[shift + i] - c * y) % p
        _trim(a)
    return a


def _pmulmod(a: list[int], b: list[int], f: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _pmod(out, f, p)


def _ppowmod(a: list[int], e: int, f: list[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(a, f, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, f, p)
        base = _pmulmod(base, base, f, p)
        e >>= 1
    return result


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a = _trim([x % p for x in a])
    b = _trim([x % p for x in b])
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _is_irreducible(f: list[int], p: int) -> bool:
    """Rabin-style test: gcd(x^(p^i) - x, f) = 1 for i <= deg/2."""
    d = len(f) - 1
    if d == 1:
        return True
    xp = [0, 1]
    for _ in range(d // 2):
        xp = _ppowmod(xp, p, f, p)
        diff = list(xp) + [0] * max(0, 2 - len(xp))
        diff[1] = (diff[1] - 1) % p
        if len(_pgcd(f, diff, p)) > 1:
            return False
    return True


@lru_cache(maxsize=None)
def _first_irreducible(p: int, s: int) -> tuple[int, ...]:
    for low in range(p**s):
        coeffs = [(low // p**i) % p for i in range(s)] + [1]
        if _is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise ArithmeticError(f"no irreducible polynomial of degree {s} mod {p}")


# --- field context and elements --------------------------------------------

class FieldCtx:
    """GF(p^s) with a fixed defining polynomial and primitive generator."""

    def __init__(self, p: int, s: int = 1, bound: int = DEFAULT_SIZE_BOUND):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if s < 1:
            raise ValueError("degree s must be positive")
        if p**s > bound:
            raise FieldSizeError(f"GF({p}^{s}) exceeds the size bound {bound}")
        self.p = p
        self.s = s
        self.q = p**s
        self.bound = bound
        self.defining_poly: tuple[int, ...] = _first_irreducible(p, s)
        self.generator = self._find_generator()

    def __repr__(self):
        return f"FieldCtx(p={self.p}, s={self.s})"

    def __eq__(self, other):
        return (
            isinstance(other, FieldCtx)
            and (self.p, self.s, self.defining_poly) == (other.p, other.s, other.defining_poly)
        )

    def __hash__(self):
        return hash((self.p, self.s, self.defining_poly))

    # encodings
    def elem(self, value) -> "FqElem":
        if isinstance(value, FqElem):
            if value.ctx != self:
                raise ValueError("element belongs to a different field")
            return value
        if isinstance(value, int):
            value %= self.q
            return FqElem(self, tuple((value // self.p**i) % self.p for i in range(self.s)))
        coeffs = [int(c) % self.p for c in value]
        if len(coeffs) > self.s:
            coeffs = _pmod(coeffs, list(self.defining_poly), self.p)
        coeffs = coeffs + [0] * (self.s - len(coeffs))
        return FqElem(self, tuple(coeffs))

    def zero(self) -> "FqElem":
        return self.elem(0)

    def one(self) -> "FqElem":
        return self.elem(1)

    def __iter__(self) -> Iterator["FqElem"]:
        for e in range(self.q):
            yield self.elem(e)

    def units(self) -> Iterator["FqElem"]:
        for e in range(1, self.q):
            yield self.elem(e)

    def _find_generator(self) -> "FqElem":
        n = self.q - 1
        factors = _prime_factors(n)
        for e in range(1, self.q):
            g = self.elem(e)
            if all(g ** (n // l) != self.one() for l in factors):
                return g
        raise ArithmeticError("no primitive element found")

    # tables for vectorised enumeration -------------------------------------
    @cached_property
    def exp_table(self) -> np.ndarray:
        """exp_table[k] = encoding of generator^k, k in [0, q-1)."""
        out = np.empty(self.q - 1, dtype=np.int64)
        cur = self.one()
        for k in range(self.q - 1):
            out[k] = cur.encode()
            cur = cur * self.generator
        return out

    @cached_property
    def log_table(self) -> np.ndarray:
        """log_table[enc] = discrete log of the element (entry 0 is -1)."""
        out = np.full(self.q, -1, dtype=np.int64)
        out[self.exp_table] = np.arange(self.q - 1)
        return out

    @cached_property
    def _digit_weights(self) -> np.ndarray:
        return self.p ** np.arange(self.s, dtype=np.int64)

    def add_enc(self, a, b):
        """Vectorised addition on encodings."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for w in self._digit_weights:
            out += (((a // w) % self.p + (b // w) % self.p) % self.p) * w
        return out

    def neg_enc(self, a):
        a = np.asarray(a, dtype=np.int64)
        out = np.zeros(a.shape, dtype=np.int64)
        for w in self._digit_weights:
            out += ((-(a // w)) % self.p) * w
        return out

    def log(self, x: "FqElem") -> int:
        if x.is_zero():
            raise ZeroDivisionError("log of zero")
        return int(self.log_table[x.encode()])

    def absolute_trace(self, x: "FqElem") -> int:
        """Tr_{GF(q)/GF(p)}(x) as an integer in [0, p)."""
        total = self.zero()
        y = x
        for _ in range(self.s):
            total = total + y
            y = y**self.p
        if any(total.coeffs[1:]):
            raise ArithmeticError("trace did not land in the prime field")
        return total.coeffs[0]

    @cached_property
    def trace_table(self) -> np.ndarray:
        """trace_table[enc] = absolute trace of the element."""
        # the trace is Fp-linear, so it is determined by the basis images
        basis = [self.absolute_trace(self.elem([0] * i + [1])) for i in range(self.s)]
        enc = np.arange(self.q, dtype=np.int64)
        out = np.zeros(self.q, dtype=np.int64)
        for i, w in enumerate(self._digit_weights):
            out += ((enc // w) % self.p) * basis[i]
        return out % self.p

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "s": self.s,
            "defining_poly": list(self.defining_poly),
            "generator": self.generator.encode(),
        }


def field_create(p: int, s: int = 1, bound: int = DEFAULT_SIZE_BOUND) -> FieldCtx:
    return _cached_field(p, s, bound)


@lru_cache(maxsize=None)
def _cached_field(p: int, s: int, bound: int) -> FieldCtx:
    return FieldCtx(p, s, bound)


@dataclass(frozen=True, eq=False)
class FqElem:
    ctx: FieldCtx
    coeffs: tuple[int, ...]

    def encode(self) -> int:
        p = self.ctx.p
        return sum(c * p**i for i, c in enumerate(self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _other(self, other) -> "FqElem":
        if isinstance(other, int):
            return self.ctx.elem([other])
        if other.ctx != self.ctx:
            raise ValueError("elements of different fields")
        return other

    def __add__(self, other):
        other = self._other(other)
        p = self.ctx.p
        return FqElem(self.ctx, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.ctx.p
        return FqElem(self.ctx, tuple((-a) % p for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        other = self._other(other)
        ctx = self.ctx
        prod = _pmulmod(list(self.coeffs), list(other.coeffs), list(ctx.defining_poly), ctx.p)
        return ctx.elem(prod)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        ctx = self.ctx
        if e < 0:
            return self.inverse() ** (-e)
        return ctx.elem(_ppowmod(list(self.coeffs), e, list(ctx.defining_poly), ctx.p))

    def inverse(self) -> "FqElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in GF(q)")
        return self ** (self.ctx.q - 2)

    def __truediv__(self, other):
        return self * self._other(other).inverse()

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ctx.elem([other])
        if not isinstance(other, FqElem):
            return NotImplemented
        return self.ctx == other.ctx and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ctx.q, self.coeffs))

    def __repr__(self):
        return f"GF({self.ctx.q})[{self.encode()}]"


# --- towers ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Tower:
    """GF(q^h) over GF(q) with embedding, relative trace and norm."""

    base: FieldCtx
    field: FieldCtx
    degree: int
    root: FqElem  # image of the base field's x

    def embed(self, a: FqElem) -> FqElem:
        a = self.base.elem(a)
        out = self.field.zero()
        power = self.field.one()
        for c in a.coeffs:
            if c:
                out = out + power * c
            power = power * self.root
        return out

    @cached_property
    def _preimage(self) -> dict[tuple[int, ...], FqElem]:
        return {self.embed(a).coeffs: a for a in self.base}

    def restrict(self, y: FqElem) -> FqElem:
        try:
            return self._preimage[self.field.elem(y).coeffs]
        except KeyError:
            raise ValueError(f"{y} is not in the image of the base field") from None

    def trace(self, y: FqElem) -> FqElem:
        y = self.field.elem(y)
        total = self.field.zero()
        for _ in range(self.degree):
            total = total + y
            y = y**self.base.q
        return self.restrict(total)

    def norm(self, y: FqElem) -> FqElem:
        y = self.field.elem(y)
        return self.restrict(y ** ((self.field.q - 1) // (self.base.q - 1)))

    @cached_property
    def norm_log_factor(self) -> int:
        """log_g(Norm(g')) for the two fixed generators."""
        return self.base.log(self.norm(self.field.generator))

    def __iter__(self):
        yield self.field
        yield self.embed
        yield self.trace
        yield self.norm


def extend(ctx: FieldCtx, h: int) -> Tower:
    """GF(q^h) with the embedding sending x to the smallest root of f."""
    if h < 1:
        raise ValueError("extension degree must be positive")
    if ctx.p ** (ctx.s * h) > ctx.bound:
        raise FieldSizeError(f"GF({ctx.p}^{ctx.s * h}) exceeds the size bound {ctx.bound}")
    big = field_create(ctx.p, ctx.s * h, ctx.bound)
    f = ctx.defining_poly
    for y in big:
        val = big.zero()
        for c in reversed(f):
            val = val * y + c
        if val.is_zero():
            return Tower(ctx, big, h, y)
    raise ArithmeticError("defining polynomial has no root in the extension")


# --- characters ------------------------------------------------------------

@dataclass(frozen=True)
class MultChar:
    """chi(generator^k) = zeta_M^(a k) with M = ``modulus`` (default q-1)."""

    ctx: FieldCtx
    a: int
    modulus: int = 0

    def __post_init__(self):
        m = self.modulus or self.ctx.q - 1
        if (self.ctx.q - 1) % m:
            raise ValueError(f"modulus {m} does not divide q-1 = {self.ctx.q - 1}")
        object.__setattr__(self, "modulus", m)
        object.__setattr__(self, "a", self.a % m)

    @property
    def is_trivial(self) -> bool:
        return self.a == 0

    def exponent(self, x: FqElem) -> int:
        if x.is_zero():
            raise ZeroDivisionError("multiplicative character evaluated at 0")
        return self.a * self.ctx.log(x) % self.modulus

    def table(self) -> np.ndarray:
        """Exponents mod ``modulus`` indexed by discrete log."""
        return (self.a * np.arange(self.ctx.q - 1, dtype=np.int64)) % self.modulus

    def inverse(self) -> "MultChar":
        return MultChar(self.ctx, -self.a, self.modulus)

    def __mul__(self, other: "MultChar") -> "MultChar":
        if other.ctx != self.ctx or other.modulus != self.modulus:
            raise ValueError("characters on different groups")
        return MultChar(self.ctx, self.a + other.a, self.modulus)

    def __call__(self, x: FqElem) -> CycInt:
        return CycInt.root_of_unity(self.modulus, self.exponent(x))


@dataclass(frozen=True)
class AddChar:
    """psi_a(x) = zeta_p^Tr(a x)."""

    ctx: FieldCtx
    twist: FqElem

    def __post_init__(self):
        object.__setattr__(self, "twist", self.ctx.elem(self.twist))

    @property
    def is_trivial(self) -> bool:
        return self.twist.is_zero()

    @property
    def modulus(self) -> int:
        return self.ctx.p

    def exponent(self, x: FqElem) -> int:
        return self.ctx.absolute_trace(self.twist * self.ctx.elem(x))

    def table(self) -> np.ndarray:
        """Exponents mod p indexed by encoding."""
        ctx = self.ctx
        scaled = np.empty(ctx.q, dtype=np.int64)
        scaled[0] = 0
        if self.twist.is_zero():
            return np.zeros(ctx.q, dtype=np.int64)
        lt = ctx.log(self.twist)
        scaled[1:] = ctx.exp_table[(ctx.log_table[1:] + lt) % (ctx.q - 1)]
        return ctx.trace_table[scaled]

    def __call__(self, x: FqElem) -> CycInt:
        return CycInt.root_of_unity(self.ctx.p, self.exponent(x))


Character = MultChar | AddChar


def char_eval(chi: Character, x: FqElem, order: int | None = None) -> CycInt:
    """Exact character value, optionally lifted into Z[zeta_order]."""
    value = chi(x)
    return value.lift(order) if order else value


def char_pullback(chi: Character, tower: Tower) -> Character:
    """chi o Norm (multiplicative) or psi o Tr (additive) on ``tower.field``."""
    if chi.ctx != tower.base:
        raise ValueError("character does not live on the tower's base field")
    if isinstance(chi, MultChar):
        return PulledBackMultChar(tower, chi)
    return PulledBackAddChar(tower, chi)


@dataclass(frozen=True)
class PulledBackMultChar:
    tower: Tower
    base_char: MultChar

    @property
    def ctx(self) -> FieldCtx:
        return self.tower.field

    @property
    def modulus(self) -> int:
        return self.base_char.modulus

    @property
    def a(self) -> int:
        # chi(Norm(g'^k)) = chi(g^(c k)) with c = log_g Norm(g')
        return self.base_char.a * self.tower.norm_log_factor % self.modulus

    @property
    def is_trivial(self) -> bool:
        return self.a == 0

    def exponent(self, x: FqElem) -> int:
        return self.base_char.exponent(self.tower.norm(x))

    def table(self) -> np.ndarray:
        return (self.a * np.arange(self.ctx.q - 1, dtype=np.int64)) % self.modulus

    def inverse(self) -> "PulledBackMultChar":
        return PulledBackMultChar(self.tower, self.base_char.inverse())

    def __call__(self, x: FqElem) -> CycInt:
        return CycInt.root_of_unity(self.modulus, self.exponent(x))


@dataclass(frozen=True)
class PulledBackAddChar:
    tower: Tower
    base_char: AddChar

    @property
    def ctx(self) -> FieldCtx:
        return self.tower.field

    @property
    def modulus(self) -> int:
        return self.ctx.p

    @property
    def is_trivial(self) -> bool:
        return self.base_char.is_trivial

    @property
    def twist(self) -> FqElem:
        # Tr_{k/Fp}(a Tr_{k'/k}(x)) = Tr_{k'/Fp}(embed(a) x)
        return self.tower.embed(self.base_char.twist)

    def exponent(self, x: FqElem) -> int:
        return self.base_char.exponent(self.tower.trace(x))

    def table(self) -> np.ndarray:
        return AddChar(self.ctx, self.twist).table()

    def __call__(self, x: FqElem) -> CycInt:
        return CycInt.root_of_unity(self.modulus, self.exponent(x))
