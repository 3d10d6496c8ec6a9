"""Exact rational functions in a fixed list of commuting symbols.

The operator identities only ever divide by monomials in practice, so the
numerator/denominator pair is kept as Laurent polynomials and monomial
denominators are folded into the numerator.  General denominators are
supported; equality is decided by cross multiplication.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable

__all__ = ["SymbolSet", "LPoly", "Scalar"]


class SymbolSet:
    """Ordered names of the commuting indeterminates."""

    def __init__(self, names: Iterable[str]):
        self.names = tuple(names)
        self.index = {name: i for i, name in enumerate(self.names)}
        if len(self.index) != len(self.names):
            raise ValueError("duplicate symbol names")

    def __eq__(self, other):
        return isinstance(other, SymbolSet) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __len__(self):
        return len(self.names)

    def __repr__(self):
        return f"SymbolSet({', '.join(self.names)})"


class LPoly:
    """Laurent polynomial: {exponent tuple: Fraction}."""

    __slots__ = ("syms", "terms")

    def __init__(self, syms: SymbolSet, terms: dict | None = None):
        self.syms = syms
        self.terms = {e: c for e, c in (terms or {}).items() if c}

    @classmethod
    def const(cls, syms: SymbolSet, c) -> "LPoly":
        return cls(syms, {(0,) * len(syms): Fraction(c)})

    @classmethod
    def monomial(cls, syms: SymbolSet, exps: dict[str, int], c=1) -> "LPoly":
        e = [0] * len(syms)
        for name, k in exps.items():
            e[syms.index[name]] += k
        return cls(syms, {tuple(e): Fraction(c)})

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def __add__(self, other: "LPoly") -> "LPoly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return LPoly(self.syms, out)

    def __neg__(self) -> "LPoly":
        return LPoly(self.syms, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "LPoly") -> "LPoly":
        return self + (-other)

    def __mul__(self, other: "LPoly") -> "LPoly":
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return LPoly(self.syms, out)

    def scale(self, c) -> "LPoly":
        c = Fraction(c)
        return LPoly(self.syms, {e: c * v for e, v in self.terms.items()})

    def shift(self, e: tuple) -> "LPoly":
        return LPoly(self.syms, {tuple(a + b for a, b in zip(k, e)): v for k, v in self.terms.items()})

    def leading(self):
        e = max(self.terms)
        return e, self.terms[e]

    def divmod_exact(self, other: "LPoly"):
        """Quotient if ``other`` divides self in the Laurent ring, else None."""
        if other.is_monomial():
            e, c = other.leading()
            return LPoly(self.syms, {tuple(a - b for a, b in zip(k, e)): v / c for k, v in self.terms.items()})
        # clear negative exponents, then run lex division in the polynomial ring
        lo_a = _min_exps(self)
        lo_b = _min_exps(other)
        a = self.shift(tuple(-x for x in lo_a))
        b = other.shift(tuple(-x for x in lo_b))
        eb, cb = b.leading()
        quot: dict = {}
        rem = a
        while not rem.is_zero():
            er, cr = rem.leading()
            diff = tuple(x - y for x, y in zip(er, eb))
            if any(d < 0 for d in diff):
                return None
            coef = cr / cb
            quot[diff] = quot.get(diff, 0) + coef
            rem = rem - b * LPoly(self.syms, {diff: coef})
        q = LPoly(self.syms, quot)
        return q.shift(tuple(x - y for x, y in zip(lo_a, lo_b)))

    def __eq__(self, other):
        return isinstance(other, LPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def format(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                name if k == 1 else f"{name}^{k}"
                for name, k in zip(self.syms.names, e)
                if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    __str__ = format

    def __repr__(self):
        return f"LPoly({self.format()})"


def _min_exps(p: LPoly) -> tuple:
    return tuple(min(col) for col in zip(*p.terms))


_TERM_RE = re.compile(r"\s*([+-])?\s*([^+-]+)")


def _parse_lpoly(syms: SymbolSet, text: str) -> LPoly:
    text = text.replace(" ", "").replace("-", "+-").replace("^+-", "^-")
    out = LPoly(syms)
    for chunk in filter(None, text.split("+")):
        sign = -1 if chunk.startswith("-") else 1
        chunk = chunk.lstrip("-")
        coef = Fraction(1)
        exps: dict[str, int] = {}
        for factor in chunk.split("*"):
            if factor[0].isdigit():
                coef *= Fraction(factor)
            else:
                name, _, power = factor.partition("^")
                exps[name] = exps.get(name, 0) + (int(power) if power else 1)
        out = out + LPoly.monomial(syms, exps, sign * coef)
    return out


class Scalar:
    """num / den with den normalised to leading coefficient 1."""

    __slots__ = ("num", "den")

    def __init__(self, num: LPoly, den: LPoly | None = None):
        if den is None or den.is_zero() is False and den.is_monomial():
            if den is not None:
                num = num.divmod_exact(den)
            self.num = num
            self.den = None
            return
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        q = num.divmod_exact(den)
        if q is not None:
            self.num, self.den = q, None
            return
        # make the denominator free of negative powers and monic
        lo = _min_exps(den)
        shift = tuple(-x for x in lo)
        num, den = num.shift(shift), den.shift(shift)
        _, lc = den.leading()
        self.num = num.scale(1 / lc)
        self.den = den.scale(1 / lc)

    @property
    def syms(self) -> SymbolSet:
        return self.num.syms

    @classmethod
    def const(cls, syms: SymbolSet, c) -> "Scalar":
        return cls(LPoly.const(syms, c))

    @classmethod
    def symbol(cls, syms: SymbolSet, name: str, power: int = 1) -> "Scalar":
        return cls(LPoly.monomial(syms, {name: power}))

    @classmethod
    def parse(cls, syms: SymbolSet, text: str) -> "Scalar":
        num, _, den = text.partition(")/(")
        if den:
            return cls(_parse_lpoly(syms, num.lstrip("(")), _parse_lpoly(syms, den.rstrip(")")))
        return cls(_parse_lpoly(syms, text))

    def _lift(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            return other
        return Scalar.const(self.syms, other)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other):
        other = self._lift(other)
        if self.den is None and other.den is None:
            return Scalar(self.num + other.num)
        a_den = self.den or LPoly.const(self.syms, 1)
        b_den = other.den or LPoly.const(self.syms, 1)
        if self.den is not None and self.den == other.den:
            return Scalar(self.num + other.num, self.den)
        return Scalar(self.num * b_den + other.num * a_den, a_den * b_den)

    __radd__ = __add__

    def __neg__(self):
        out = Scalar.__new__(Scalar)
        out.num = -self.num
        out.den = self.den
        return out

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        if self.den is None and other.den is None:
            return Scalar(self.num * other.num)
        one = LPoly.const(self.syms, 1)
        return Scalar(self.num * other.num, (self.den or one) * (other.den or one))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero scalar")
        one = LPoly.const(self.syms, 1)
        return Scalar(self.num * (other.den or one), (self.den or one) * other.num)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return Scalar.const(self.syms, 1) / self ** (-k)
        out = Scalar.const(self.syms, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction)):
                other = Scalar.const(self.syms, other)
            else:
                return NotImplemented
        if self.den is None and other.den is None:
            return self.num == other.num
        one = LPoly.const(self.syms, 1)
        return self.num * (other.den or one) == other.num * (self.den or one)

    def __hash__(self):
        # only meaningful for denominator-free values
        return hash(self.num) if self.den is None else hash(("frac", self.den))

    def format(self) -> str:
        if self.den is None:
            return self.num.format()
        return f"({self.num.format()})/({self.den.format()})"

    __str__ = format

    def __repr__(self):
        return f"Scalar({self.format()})"
