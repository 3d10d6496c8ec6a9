"""Exact arithmetic in the cyclotomic integers Z[zeta_N].

Elements are stored in the power basis zeta^0 .. zeta^(phi(N)-1), already
reduced modulo the N-th cyclotomic polynomial, so two elements are equal
exactly when their coefficient tuples are equal.
"""
from __future__ import annotations

import cmath
import math
from functools import lru_cache

import numpy as np

__all__ = [
    "CycInt",
    "OrderMismatch",
    "cyclotomic_polynomial",
    "euler_phi",
    "cyc_arith",
    "cyc_lift",
    "cyc_embed",
]


class OrderMismatch(ValueError):
    """Raised when two cyclotomic integers of different orders are combined."""


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def euler_phi(n: int) -> int:
    result = n
    for p in _factorize(n):
        result = result // p * (p - 1)
    return result


def _mobius(n: int) -> int:
    f = _factorize(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_divexact(a: list[int], b: list[int]) -> list[int]:
    # b monic or -monic, exact division in Z[x]
    a = list(a)
    lead = b[-1]
    q = [0] * (len(a) - len(b) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = a[i + len(b) - 1] // lead
        q[i] = c
        if c:
            for j, y in enumerate(b):
                a[i + j] -= c * y
    if any(a):
        raise ArithmeticError("inexact polynomial division")
    return q


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients (low to high) of Phi_n, from the Moebius product formula."""
    if n < 1:
        raise ValueError("order must be positive")
    num = [1]
    den = [1]
    for d in range(1, n + 1):
        if n % d:
            continue
        mu = _mobius(n // d)
        if mu == 0:
            continue
        factor = [-1] + [0] * (d - 1) + [1]  # x^d - 1
        if mu == 1:
            num = _poly_mul(num, factor)
        else:
            den = _poly_mul(den, factor)
    return tuple(_poly_divexact(num, den))


@lru_cache(maxsize=None)
def _power_reduction_table(n: int) -> np.ndarray:
    """Row e holds the canonical coordinates of zeta_n^e, for 0 <= e < n."""
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    table = np.zeros((n, deg), dtype=object)
    cur = [0] * deg
    cur[0] = 1
    for e in range(n):
        table[e] = cur
        # multiply by x and reduce with the monic Phi_n
        top = cur[-1]
        nxt = [0] + cur[:-1]
        if top:
            for i in range(deg):
                nxt[i] -= top * phi[i]
        cur = nxt
    return table


def _reduce(n: int, coeffs) -> tuple[int, ...]:
    """Reduce an arbitrary-length coefficient list modulo Phi_n."""
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    c = [int(x) for x in coeffs]
    for i in range(len(c) - 1, deg - 1, -1):
        top = c[i]
        if top:
            c[i] = 0
            base = i - deg
            for j in range(deg):
                c[base + j] -= top * phi[j]
    c = c[:deg] + [0] * (deg - len(c))
    return tuple(c)


class CycInt:
    """An element of Z[zeta_N] in canonical power-basis form."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs=()):
        if order < 1:
            raise ValueError("order must be positive")
        self.order = order
        self.coeffs = _reduce(order, coeffs)

    @classmethod
    def _raw(cls, order: int, coeffs: tuple[int, ...]) -> "CycInt":
        obj = cls.__new__(cls)
        obj.order = order
        obj.coeffs = coeffs
        return obj

    @classmethod
    def zero(cls, order: int) -> "CycInt":
        return cls._raw(order, (0,) * euler_phi(order))

    @classmethod
    def one(cls, order: int) -> "CycInt":
        return cls.from_int(order, 1)

    @classmethod
    def from_int(cls, order: int, value: int) -> "CycInt":
        c = [0] * euler_phi(order)
        c[0] = int(value)
        return cls._raw(order, tuple(c))

    @classmethod
    def root_of_unity(cls, order: int, exponent: int = 1) -> "CycInt":
        row = _power_reduction_table(order)[exponent % order]
        return cls._raw(order, tuple(int(x) for x in row))

    @classmethod
    def from_exponent_counts(cls, order: int, counts) -> "CycInt":
        """Sum_e counts[e] * zeta^e for a length-``order`` integer vector."""
        counts = np.asarray(counts, dtype=object)
        if counts.shape != (order,):
            raise ValueError(f"expected {order} exponent counts, got {counts.shape}")
        table = _power_reduction_table(order)
        vec = counts.dot(table) if order > 1 else counts[:1]
        return cls._raw(order, tuple(int(x) for x in vec))

    # ring operations -----------------------------------------------------

    def _check(self, other: "CycInt") -> None:
        if not isinstance(other, CycInt):
            raise TypeError(f"cannot combine CycInt with {type(other).__name__}")
        if other.order != self.order:
            raise OrderMismatch(f"orders differ: {self.order} vs {other.order}")

    def _coerce(self, other) -> "CycInt":
        if isinstance(other, int):
            return CycInt.from_int(self.order, other)
        self._check(other)
        return other

    def __add__(self, other):
        other = self._coerce(other)
        return CycInt._raw(self.order, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return CycInt._raw(self.order, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return CycInt._raw(self.order, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            return CycInt._raw(self.order, tuple(other * a for a in self.coeffs))
        self._check(other)
        return CycInt(self.order, _poly_mul(list(self.coeffs), list(other.coeffs)))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not supported")
        result = CycInt.one(self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = CycInt.from_int(self.order, other)
        if not isinstance(other, CycInt):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def lift(self, n: int) -> "CycInt":
        return cyc_lift(self, n)

    def embed(self) -> complex:
        return cyc_embed(self)

    def conjugate(self) -> "CycInt":
        """Complex conjugation zeta -> zeta^-1."""
        counts = [0] * self.order
        for i, c in enumerate(self.coeffs):
            counts[(-i) % self.order] += c
        return CycInt(self.order, counts)

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": list(self.coeffs)}

    @classmethod
    def from_json(cls, data: dict) -> "CycInt":
        return cls(int(data["order"]), [int(c) for c in data["coeffs"]])

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "1" if i == 0 else ("z" if i == 1 else f"z^{i}")
            terms.append(f"{c}*{mono}" if mono != "1" else str(c))
        body = " + ".join(terms) if terms else "0"
        return f"CycInt[{self.order}]({body})"


def cyc_arith(a: CycInt, b: CycInt | None, op: str) -> CycInt:
    if op == "neg":
        return -a
    if b is None:
        raise ValueError(f"operation {op!r} needs two operands")
    if a.order != b.order:
        raise OrderMismatch(f"orders differ: {a.order} vs {b.order}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def cyc_lift(a: CycInt, n: int) -> CycInt:
    """Express ``a`` in Z[zeta_n] via zeta_M -> zeta_n^(n/M)."""
    if n % a.order:
        raise ValueError(f"order {a.order} does not divide {n}")
    step = n // a.order
    counts = [0] * n
    for i, c in enumerate(a.coeffs):
        counts[i * step] += c
    return CycInt(n, counts)


def cyc_embed(a: CycInt) -> complex:
    """Evaluate at zeta_N = exp(2 pi i / N) in double precision."""
    n = a.order
    total = 0j
    for i, c in enumerate(a.coeffs):
        if c:
            if (4 * i) % n == 0:
                # exact quarter turns
                total += c * (1, 1j, -1, -1j)[(4 * i // n) % 4]
            else:
                total += c * cmath.exp(2j * math.pi * i / n)
    return total
