"""The Weyl algebra K<x, x^-1, d> over symbolic rational-function scalars.

Operators are kept in normal form  sum c[k, l] x^k d^l  (x to the left),
with the relation d x = x d + 1.  Scalars live in a shared symbol context
holding pi, the parameters a1.., b1.. and a spare symbol g, plus the parity
eps = (-1)^p which is the only way p enters.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .scalars import Scalar, SymbolSet

__all__ = [
    "OpContext",
    "WeylOp",
    "ContextMismatch",
    "UnitVerdict",
    "op_ring",
    "hyp_operator",
    "substitute",
    "substitute_inversion",
    "kummer_twist",
    "kummer_module_twist",
    "fourier_auto",
    "preserves_relation",
    "left_ideal_equal_up_to_unit",
    "dpoly_coeffs",
    "connection_matrix",
    "reduce_mod_left_partial",
    "reduce_mod_right_x",
    "falling",
]


class ContextMismatch(ValueError):
    pass


def falling(c: int, i: int) -> int:
    """c (c-1) ... (c-i+1); fine for negative c."""
    out = 1
    for j in range(i):
        out *= c - j
    return out


class OpContext:
    """Symbol set plus the parity flag eps = (-1)^p."""

    def __init__(self, parity: int = -1, params: int = 6):
        if parity not in (1, -1):
            raise ValueError("parity must be +1 or -1")
        self.parity = parity
        self.params = params
        names = ["pi"] + [f"a{i}" for i in range(1, params + 1)]
        names += [f"b{j}" for j in range(1, params + 1)] + ["g"]
        self.syms = SymbolSet(names)

    def __eq__(self, other):
        return isinstance(other, OpContext) and (self.parity, self.syms) == (other.parity, other.syms)

    def __hash__(self):
        return hash((self.parity, self.syms))

    def __repr__(self):
        return f"OpContext(parity={self.parity}, params={self.params})"

    def scalar(self, c) -> Scalar:
        if isinstance(c, Scalar):
            return c
        return Scalar.const(self.syms, c)

    def sym(self, name: str, power: int = 1) -> Scalar:
        return Scalar.symbol(self.syms, name, power)

    @property
    def pi(self) -> Scalar:
        return self.sym("pi")

    def alpha(self, m: int) -> list[Scalar]:
        return [self.sym(f"a{i}") for i in range(1, m + 1)]

    def beta(self, n: int) -> list[Scalar]:
        return [self.sym(f"b{j}") for j in range(1, n + 1)]

    def sign(self, e: int) -> int:
        """(-1)^e."""
        return -1 if e % 2 else 1

    def parity_power(self, e: int) -> int:
        """(-1)^(e p) = eps^e."""
        return self.parity if e % 2 else 1


class WeylOp:
    """sum c[k, l] x^k d^l with x to the left of d."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: OpContext, terms: dict | None = None):
        self.ctx = ctx
        self.terms = {kl: c for kl, c in (terms or {}).items() if not c.is_zero()}

    # constructors ---------------------------------------------------------

    @classmethod
    def const(cls, ctx: OpContext, c=1) -> "WeylOp":
        return cls(ctx, {(0, 0): ctx.scalar(c)})

    @classmethod
    def monomial(cls, ctx: OpContext, k: int, l: int, c=1) -> "WeylOp":
        if l < 0:
            raise ValueError("negative power of d")
        return cls(ctx, {(k, l): ctx.scalar(c)})

    @classmethod
    def x(cls, ctx: OpContext, k: int = 1) -> "WeylOp":
        return cls.monomial(ctx, k, 0)

    @classmethod
    def d(cls, ctx: OpContext, l: int = 1) -> "WeylOp":
        return cls.monomial(ctx, 0, l)

    @classmethod
    def theta(cls, ctx: OpContext) -> "WeylOp":
        return cls.monomial(ctx, 1, 1)

    # arithmetic -------------------------------------------------------------

    def _check(self, other: "WeylOp") -> None:
        if self.ctx != other.ctx:
            raise ContextMismatch("operators live in different symbol contexts")

    def _lift(self, other) -> "WeylOp":
        if isinstance(other, WeylOp):
            self._check(other)
            return other
        return WeylOp.const(self.ctx, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for kl, c in other.terms.items():
            out[kl] = out[kl] + c if kl in out else c
        return WeylOp(self.ctx, out)

    __radd__ = __add__

    def __neg__(self):
        return WeylOp(self.ctx, {kl: -c for kl, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, WeylOp):
            c = self.ctx.scalar(other)
            return WeylOp(self.ctx, {kl: v * c for kl, v in self.terms.items()})
        self._check(other)
        out: dict = {}
        for (a, b), c1 in self.terms.items():
            for (c, d), c2 in other.terms.items():
                coef = c1 * c2
                # d^b x^c = sum_i C(b,i) (c)_i x^(c-i) d^(b-i)
                for i in range(b + 1):
                    f = comb(b, i) * falling(c, i)
                    if not f:
                        continue
                    kl = (a + c - i, b - i + d)
                    term = coef * f
                    out[kl] = out[kl] + term if kl in out else term
        return WeylOp(self.ctx, out)

    def __rmul__(self, other):
        c = self.ctx.scalar(other)
        return WeylOp(self.ctx, {kl: c * v for kl, v in self.terms.items()})

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative operator powers are not defined")
        out = WeylOp.const(self.ctx)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, WeylOp):
            if isinstance(other, (int, Fraction, Scalar)):
                other = WeylOp.const(self.ctx, other)
            else:
                return NotImplemented
        if self.ctx != other.ctx or self.terms.keys() != other.terms.keys():
            return False
        return all(self.terms[kl] == other.terms[kl] for kl in self.terms)

    def __hash__(self):
        return hash(frozenset(self.terms))

    # inspection ---------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def order(self) -> int:
        """Highest power of d (-1 for the zero operator)."""
        return max((l for _, l in self.terms), default=-1)

    def x_range(self) -> tuple[int, int]:
        ks = [k for k, _ in self.terms]
        return min(ks), max(ks)

    def coeff(self, k: int, l: int) -> Scalar:
        return self.terms.get((k, l), self.ctx.scalar(0))

    def pretty(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k, l in sorted(self.terms, key=lambda kl: (-kl[1], -kl[0])):
            c = self.terms[(k, l)].format()
            mono = []
            if k:
                mono.append("x" if k == 1 else f"x^{k}")
            if l:
                mono.append("d" if l == 1 else f"d^{l}")
            if not mono:
                parts.append(f"({c})")
            elif c == "1":
                parts.append("*".join(mono))
            else:
                parts.append(f"({c})*" + "*".join(mono))
        return " + ".join(parts)

    __str__ = pretty

    def __repr__(self):
        return f"WeylOp({self.pretty()})"

    def to_json(self) -> list[dict]:
        return [
            {"k": k, "l": l, "coeff": self.terms[(k, l)].format()}
            for k, l in sorted(self.terms)
        ]

    @classmethod
    def from_json(cls, ctx: OpContext, data) -> "WeylOp":
        return cls(ctx, {(int(t["k"]), int(t["l"])): Scalar.parse(ctx.syms, t["coeff"]) for t in data})


def op_ring(a: WeylOp, b: WeylOp, op: str) -> WeylOp:
    if a.ctx != b.ctx:
        raise ContextMismatch("operators live in different symbol contexts")
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def _theta_poly(ctx: OpContext, roots, shift=0) -> WeylOp:
    """prod (x d - r) over the given scalar roots (each shifted by ``shift``)."""
    out = WeylOp.const(ctx)
    th = WeylOp.theta(ctx)
    for r in roots:
        out = out * (th - (ctx.scalar(r) + shift))
    return out


def hyp_operator(
    ctx: OpContext,
    m: int | None = None,
    n: int | None = None,
    pi=None,
    alpha=None,
    beta=None,
    allow_empty: bool = False,
) -> WeylOp:
    """prod(x d - alpha_i) - (-1)^(m + n p) pi^(m-n) x prod(x d - beta_j).

    Parameters default to the context symbols a1..am, b1..bn and pi.  With
    ``allow_empty`` the degenerate m = n = 0 value 1 - x is returned, which
    the Fourier recursion uses as its starting point.
    """
    if alpha is None:
        alpha = ctx.alpha(m or 0)
    if beta is None:
        beta = ctx.beta(n or 0)
    alpha = [ctx.scalar(a) for a in alpha]
    beta = [ctx.scalar(b) for b in beta]
    m, n = len(alpha), len(beta)
    if m + n < 1 and not allow_empty:
        raise ValueError("need m + n >= 1")
    pi = ctx.pi if pi is None else ctx.scalar(pi)
    sign = ctx.sign(m) * ctx.parity_power(n)
    lead = _theta_poly(ctx, alpha)
    tail = WeylOp.x(ctx) * _theta_poly(ctx, beta)
    return lead - tail * (pi ** (m - n) * sign)


# ring endomorphisms ---------------------------------------------------------------


def substitute(a: WeylOp, x_img: WeylOp, xinv_img: WeylOp | None, d_img: WeylOp) -> WeylOp:
    """Apply the endomorphism fixed by the images of x, x^-1 and d.

    Each normal-form monomial x^k d^l maps to X^k D^l; ``xinv_img`` may be
    None when no negative powers occur.
    """
    ctx = a.ctx

    @lru_cache(maxsize=None)
    def xpow(k):
        if k == 0:
            return WeylOp.const(ctx)
        if k > 0:
            return xpow(k - 1) * x_img
        if xinv_img is None:
            raise ValueError("negative power of x has no image under this map")
        return xpow(k + 1) * xinv_img

    @lru_cache(maxsize=None)
    def dpow(l):
        return WeylOp.const(ctx) if l == 0 else dpow(l - 1) * d_img

    out = WeylOp(ctx)
    for (k, l), c in a.terms.items():
        out = out + (xpow(k) * dpow(l)) * c
    return out


def preserves_relation(x_img: WeylOp, d_img: WeylOp) -> bool:
    """True iff D X - X D = 1 for the images."""
    return d_img * x_img - x_img * d_img == WeylOp.const(x_img.ctx)


def _inversion_images(ctx):
    return WeylOp.x(ctx, -1), WeylOp.x(ctx), WeylOp.monomial(ctx, 2, 1, -1)


def substitute_inversion(a: WeylOp) -> WeylOp:
    """x -> x^-1, d -> -x^2 d."""
    return substitute(a, *_inversion_images(a.ctx))


def _kummer_images(ctx, gamma):
    g = ctx.scalar(gamma)
    return WeylOp.x(ctx), WeylOp.x(ctx, -1), WeylOp.d(ctx) + WeylOp.x(ctx, -1) * g


def kummer_twist(a: WeylOp, gamma) -> WeylOp:
    """x -> x, d -> d + gamma x^-1  (so x d -> x d + gamma)."""
    return substitute(a, *_kummer_images(a.ctx, gamma))


def kummer_module_twist(a: WeylOp, gamma) -> WeylOp:
    """Annihilator after tensoring the cyclic module with the Kummer module.

    On the twisted module d acts as d + gamma x^-1, so an old relation P(x, d)
    becomes P(x, d - gamma x^-1); this is kummer_twist at -gamma.
    """
    return kummer_twist(a, -a.ctx.scalar(gamma))


def _fourier_images(ctx, pi):
    pi = ctx.pi if pi is None else ctx.scalar(pi)
    return WeylOp.d(ctx) * (-1 / pi), None, WeylOp.x(ctx) * pi


def fourier_auto(a: WeylOp, pi=None) -> WeylOp:
    """x -> -d/pi, d -> pi x on the polynomial Weyl algebra."""
    if any(k < 0 for k, _ in a.terms):
        raise ValueError("Fourier automorphism needs nonnegative powers of x")
    return substitute(a, *_fourier_images(a.ctx, pi))


# ideal comparison ---------------------------------------------------------------


@dataclass
class UnitVerdict:
    equal: bool
    coeff: Scalar | None = None
    shift: int | None = None
    reason: str = ""

    def witness(self) -> str:
        if not self.equal:
            return f"refuted: {self.reason}"
        xs = "" if self.shift == 0 else ("*x" if self.shift == 1 else f"*x^{self.shift}")
        return f"({self.coeff.format()}){xs}"

    def to_json(self) -> dict:
        return {
            "equal": self.equal,
            "coeff": self.coeff.format() if self.coeff is not None else None,
            "shift": self.shift,
            "reason": self.reason,
        }


def left_ideal_equal_up_to_unit(a: WeylOp, b: WeylOp) -> UnitVerdict:
    """Look for u = c x^k with a = u b.

    Left multiplication by x^k keeps every d-order and shifts x-exponents by
    k, so the top-order term fixes both c and k; the candidate is then
    verified exactly.
    """
    if a.ctx != b.ctx:
        raise ContextMismatch("operators live in different symbol contexts")
    if a.is_zero() or b.is_zero():
        if a.is_zero() and b.is_zero():
            return UnitVerdict(True, a.ctx.scalar(1), 0)
        return UnitVerdict(False, reason="exactly one operator is zero")
    if a.order() != b.order():
        return UnitVerdict(False, reason=f"d-orders differ ({a.order()} vs {b.order()})")
    r = a.order()
    ka = max(k for k, l in a.terms if l == r)
    kb = max(k for k, l in b.terms if l == r)
    shift = ka - kb
    coeff = a.terms[(ka, r)] / b.terms[(kb, r)]
    if a == WeylOp.x(a.ctx, shift) * b * coeff:
        return UnitVerdict(True, coeff, shift)
    return UnitVerdict(False, reason=f"candidate ({coeff.format()})*x^{shift} does not match")


# coefficients and reductions ---------------------------------------------------------


def dpoly_coeffs(a: WeylOp) -> list[dict[int, Scalar]]:
    """[h_0, ..., h_r] with h_l = {k: coefficient of x^k}."""
    r = a.order()
    out: list[dict[int, Scalar]] = [{} for _ in range(r + 1)]
    for (k, l), c in a.terms.items():
        out[l][k] = c
    return out


def _xpoly_str(poly: dict[int, Scalar]) -> str:
    if not poly:
        return "0"
    parts = []
    for k in sorted(poly):
        c = poly[k].format()
        parts.append(f"({c})" if k == 0 else f"({c})*x^{k}")
    return " + ".join(parts)


@dataclass
class XRational:
    """num(x) / den(x) with Laurent coefficients in the symbol field."""

    num: dict
    den: dict | None = None

    def format(self) -> str:
        if self.den is None:
            return _xpoly_str(self.num)
        return f"[{_xpoly_str(self.num)}] / [{_xpoly_str(self.den)}]"

    __str__ = format


def connection_matrix(a: WeylOp) -> list[list[XRational]]:
    """Companion matrix: superdiagonal 1, last row -h_l / h_r."""
    h = dpoly_coeffs(a)
    r = len(h) - 1
    if r < 1 or not h[r]:
        raise ValueError("operator has no positive-order leading coefficient")
    top = h[r]
    one = a.ctx.scalar(1)
    zero_row = lambda: [XRational({}) for _ in range(r)]  # noqa: E731
    mat = [zero_row() for _ in range(r)]
    for i in range(r - 1):
        mat[i][i + 1] = XRational({0: one})
    for l in range(r):
        num = {k: -c for k, c in h[l].items()}
        if len(top) == 1:
            (kt, ct), = top.items()
            mat[r - 1][l] = XRational({k - kt: c / ct for k, c in num.items()})
        else:
            mat[r - 1][l] = XRational(num, dict(top))
    return mat


def reduce_mod_left_partial(a: WeylOp) -> dict[int, Scalar]:
    """Class in D / dD as a Laurent polynomial {k: coeff}.

    f d = d f - f', so x^k d^l is congruent to (-1)^l (k)_l x^(k-l).
    """
    out: dict[int, Scalar] = {}
    for (k, l), c in a.terms.items():
        f = (-1) ** l * falling(k, l)
        if f:
            key = k - l
            term = c * f
            out[key] = out[key] + term if key in out else term
    return {k: v for k, v in out.items() if not v.is_zero()}


def reduce_mod_right_x(a: WeylOp) -> dict[int, Scalar]:
    """Class in A / xA as a polynomial in d: {l: coeff} from the x^0 terms."""
    if any(k < 0 for k, _ in a.terms):
        raise ValueError("negative power of x present")
    return {l: c for (k, l), c in a.terms.items() if k == 0}


def divided_power(ctx: OpContext, l: int) -> WeylOp:
    """d^l / l!."""
    return WeylOp.monomial(ctx, 0, l, Fraction(1, factorial(l)))
