"""Truncated p-adic arithmetic in Q_p(pi), pi^(p-1) = -p.

Elements are c_0 + c_1 pi + ... + c_{p-2} pi^(p-2) with p-integral
coefficients kept modulo p^M; ``precision`` counts pi-adic digits, so a
value is known modulo pi^precision.  Valuations are reported in p units
(v(pi) = 1/(p-1)).
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .finite_field import is_prime

__all__ = [
    "PrecisionError",
    "PiAdicCtx",
    "PadicNumber",
    "vp_int",
    "vp",
    "teichmuller",
    "dwork_coefficients",
    "dwork_theta",
    "valuation_product",
    "valuation_bounds_check",
    "valuation_grid",
    "coefficient_growth",
    "d_series_convergence",
    "default_l0",
    "grid_alphas",
    "random_parameter_pack",
    "grid_to_csv",
]


class PrecisionError(ArithmeticError):
    pass


def vp_int(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp(x, p: int) -> int:
    """v_p of a nonzero rational."""
    x = Fraction(x)
    return vp_int(x.numerator, p) - vp_int(x.denominator, p)


class PiAdicCtx:
    def __init__(self, p: int, precision: int = 40):
        if p == 2 or not is_prime(p):
            raise ValueError(f"p must be an odd prime, got {p}")
        if precision < 1:
            raise PrecisionError("precision must be positive")
        self.p = p
        self.precision = precision
        # p-digits needed so that every coefficient is known modulo pi^precision
        self.digits = -(-precision // (p - 1))
        self.modulus = p**self.digits

    def __eq__(self, other):
        return isinstance(other, PiAdicCtx) and (self.p, self.precision) == (other.p, other.precision)

    def __hash__(self):
        return hash((self.p, self.precision))

    def __repr__(self):
        return f"PiAdicCtx(p={self.p}, precision={self.precision})"

    def element(self, coeffs) -> "PadicNumber":
        return PadicNumber(self, coeffs)

    def from_rational(self, x) -> "PadicNumber":
        return PadicNumber(self, [self.reduce_rational(x)])

    def reduce_rational(self, x) -> int:
        x = Fraction(x)
        if x.denominator % self.p == 0:
            raise ValueError(f"{x} is not {self.p}-integral")
        return x.numerator * pow(x.denominator, -1, self.modulus) % self.modulus

    @property
    def pi(self) -> "PadicNumber":
        return PadicNumber(self, [0, 1])

    @property
    def one(self) -> "PadicNumber":
        return PadicNumber(self, [1])


class PadicNumber:
    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: PiAdicCtx, coeffs):
        p = ctx.p
        c = [int(x) for x in coeffs]
        # fold pi^(p-1+i) = -p pi^i
        for i in range(len(c) - 1, p - 2, -1):
            top = c[i]
            if top:
                c[i] = 0
                c[i - (p - 1)] -= p * top
        c = c[: p - 1] + [0] * (p - 1 - len(c))
        self.ctx = ctx
        self.coeffs = tuple(x % ctx.modulus for x in c)

    def _lift(self, other) -> "PadicNumber":
        if isinstance(other, PadicNumber):
            if other.ctx != self.ctx:
                raise ValueError("p-adic contexts differ")
            return other
        return self.ctx.from_rational(other)

    def __add__(self, other):
        other = self._lift(other)
        return PadicNumber(self.ctx, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return PadicNumber(self.ctx, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        out = [0] * (2 * len(self.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return PadicNumber(self.ctx, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not supported")
        out = self.ctx.one
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def pi_valuation(self) -> int | None:
        """Exact pi-adic valuation, or None if zero to working precision."""
        p = self.ctx.p
        best = None
        for i, c in enumerate(self.coeffs):
            if c:
                v = (p - 1) * vp_int(c, p) + i
                best = v if best is None else min(best, v)
        if best is None or best >= self.ctx.precision:
            return None
        return best

    def valuation(self) -> Fraction | None:
        v = self.pi_valuation()
        return None if v is None else Fraction(v, self.ctx.p - 1)

    def is_zero(self) -> bool:
        return self.pi_valuation() is None

    def congruent(self, other, digits: int) -> bool:
        """self == other modulo pi^digits."""
        if digits > self.ctx.precision:
            raise PrecisionError(f"asked for {digits} pi-digits, have {self.ctx.precision}")
        diff = self - self._lift(other)
        v = diff.pi_valuation()
        return v is None or v >= digits

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) or isinstance(other, PadicNumber):
            return (self - other).is_zero()
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx, self.coeffs))

    def digit(self, i: int) -> int:
        """Coefficient of pi^i reduced mod p."""
        return self.coeffs[i] % self.ctx.p

    def to_json(self) -> dict:
        return {
            "p": self.ctx.p,
            "precision": self.ctx.precision,
            "coeffs": list(self.coeffs),
            "valuation": str(self.valuation()) if self.valuation() is not None else None,
        }

    def __repr__(self):
        terms = [f"{c}*pi^{i}" for i, c in enumerate(self.coeffs) if c]
        return f"PadicNumber({' + '.join(terms) or '0'} mod pi^{self.ctx.precision})"


def teichmuller(p: int, x: int, digits: int) -> int:
    """The (p-1)-th root of unity congruent to x mod p, modulo p^digits."""
    if digits < 1:
        raise ValueError("digits must be >= 1")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    mod = p**digits
    y = x % p
    if y == 0:
        return 0
    for _ in range(digits + 1):
        nxt = pow(y, p, mod)
        if nxt == y:
            return y
        y = nxt
    raise ArithmeticError("Teichmuller iteration did not stabilise")


def dwork_coefficients(p: int, n_max: int) -> list[dict[int, Fraction]]:
    """a_n of exp(pi (z - z^p)) as {power of pi: rational}, before folding.

    a_n = sum over i + p j = n of pi^(i+j) (-1)^j / (i! j!).
    """
    out = []
    for n in range(n_max + 1):
        terms: dict[int, Fraction] = {}
        for j in range(n // p + 1):
            i = n - p * j
            e = i + j
            terms[e] = terms.get(e, 0) + Fraction((-1) ** j, math.factorial(i) * math.factorial(j))
        out.append(terms)
    return out


def _fold_rational(p: int, terms: dict[int, Fraction]) -> list[Fraction]:
    """Reduce a rational combination of pi powers via pi^(p-1) = -p."""
    c = [Fraction(0)] * (p - 1)
    for e, r in terms.items():
        q, i = divmod(e, p - 1)
        c[i] += r * (-p) ** q
    return c


def _pi_val_rational(p: int, c: list[Fraction]) -> Fraction | None:
    vals = [(p - 1) * vp(x, p) + i for i, x in enumerate(c) if x]
    return min(vals) if vals else None


def dwork_theta(ctx: PiAdicCtx, x: int, twist: int = 1, max_terms: int = 10_000) -> PadicNumber:
    """theta(z) = exp(pi (z - z^p)) at the Teichmuller lift of twist * x.

    The series sum a_n z^n is summed with each a_n computed exactly; it is
    cut at the first n whose exact term valuation, and the proven tail bound
    v_p(a_k) >= k (p-1)/p^2 for every k >= n, both reach the precision.
    """
    p = ctx.p
    N = ctx.precision
    z = teichmuller(p, twist * x, ctx.digits + 1)
    total = [Fraction(0)] * (p - 1)
    zpow = 1
    a_terms: dict[int, Fraction] = {}
    fact = [1]
    n = 0
    while True:
        if n > max_terms:
            raise PrecisionError(
                f"series term {n} still above precision pi^{N} after {max_terms} terms"
            )
        # a_n, built incrementally
        terms: dict[int, Fraction] = {}
        while len(fact) <= n:
            fact.append(fact[-1] * len(fact))
        for j in range(n // p + 1):
            i = n - p * j
            e = i + j
            terms[e] = terms.get(e, 0) + Fraction((-1) ** j, fact[i] * fact[j])
        coeff = _fold_rational(p, terms)
        term = [c * zpow for c in coeff]
        for i in range(p - 1):
            total[i] += term[i]
        v = _pi_val_rational(p, term)
        tail = Fraction(n * (p - 1) ** 2, p * p)  # pi-units
        if (v is None or v >= N) and tail >= N:
            break
        zpow = zpow * z % (p ** (ctx.digits + 1))
        n += 1
    for c in total:
        if c and c.denominator % p == 0:
            raise PrecisionError(f"coefficient {c} is not p-integral; first unbounded term {n}")
    return PadicNumber(ctx, [ctx.reduce_rational(c) for c in total])


# valuation bounds ---------------------------------------------------------------------


def _check_alpha(alpha, p: int, q: int) -> Fraction:
    alpha = Fraction(alpha)
    if alpha.denominator % p == 0:
        raise ValueError(f"alpha = {alpha} has p in its denominator")
    if ((q - 1) * alpha).denominator != 1:
        raise ValueError(f"alpha = {alpha} is not in (1/(q-1))Z")
    return alpha


def valuation_product(l: int, N: int, alpha, p: int, q: int) -> Fraction:
    """v_p(prod_{s=l}^N (s - alpha)), exactly."""
    if l > N:
        raise ValueError("need l <= N")
    alpha = _check_alpha(alpha, p, q)
    total = Fraction(0)
    for s in range(l, N + 1):
        f = s - alpha
        if f == 0:
            raise ValueError(f"factor s - alpha vanishes at s = {s}")
        total += vp(f, p)
    return total


@dataclass
class BoundVerdict:
    l: int
    N: int
    alpha: Fraction
    v: Fraction
    lower: float
    upper: float | None
    ok: bool
    slack: float

    def row(self) -> dict:
        return {
            "l": self.l,
            "N": self.N,
            "alpha": str(self.alpha),
            "v": str(self.v),
            "lower": f"{self.lower:.6f}",
            "upper": "" if self.upper is None else f"{self.upper:.6f}",
            "pass": self.ok,
        }


_EPS = 1e-9


def _bounds(l, N, alpha, p, q):
    L = N - l + 1
    lower = L / (p - 1) - math.log(L, p) - 1
    upper = None
    if alpha < l:
        upper = L / (p - 1) + math.log((q - 1) * float(N - alpha), p)
    return lower, upper


def valuation_bounds_check(l: int, N: int, alpha, p: int, q: int, v: Fraction | None = None) -> BoundVerdict:
    """Both bounds on v_p(prod (s - alpha)); the upper one only when alpha < l."""
    alpha = _check_alpha(alpha, p, q)
    if v is None:
        v = valuation_product(l, N, alpha, p, q)
    lower, upper = _bounds(l, N, alpha, p, q)
    slack = float(v) - lower
    ok = slack >= -_EPS
    if upper is not None:
        slack = min(slack, upper - float(v))
        ok = ok and float(v) <= upper + _EPS
    return BoundVerdict(l, N, alpha, v, lower, upper, ok, slack)


def grid_alphas(p: int, q: int, l: int | None = None) -> list[Fraction]:
    alphas = [Fraction(a, q - 1) for a in range(q - 1)]
    alphas += [Fraction(k) for k in range(6) if Fraction(k) not in alphas]
    return alphas


def valuation_grid(p: int, q: int | None = None, n_max: int = 200) -> list[BoundVerdict]:
    """Every (l, N, alpha) with 1 <= l <= N <= n_max; integer alphas need alpha < l."""
    q = p if q is None else q
    out = []
    for alpha in grid_alphas(p, q):
        alpha = _check_alpha(alpha, p, q)
        # prefix sums of v_p(s - alpha); integer alpha only used past the zero
        prefix = [Fraction(0)] * (n_max + 1)
        for s in range(1, n_max + 1):
            f = s - alpha
            prefix[s] = prefix[s - 1] + (vp(f, p) if f else 0)
        for l in range(1, n_max + 1):
            if alpha.denominator == 1 and alpha >= l:
                continue
            for N in range(l, n_max + 1):
                v = prefix[N] - prefix[l - 1]
                out.append(valuation_bounds_check(l, N, alpha, p, q, v))
    return out


def grid_to_csv(rows) -> str:
    import csv
    import io

    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=["l", "N", "alpha", "v", "lower", "upper", "pass"])
    writer.writeheader()
    for r in rows:
        writer.writerow(r.row())
    return buf.getvalue()


# growth of recurrence coefficients ------------------------------------------------------


@dataclass
class GrowthReport:
    alpha: list
    beta: list
    p: int
    q: int
    l: int
    valuations: list  # v_p(c_{l+k} / c_l), k = 0..kmax
    bound_stated: list  # upper limits on the valuation from the stated lower bound on |c_{l+k}|
    bound_derived: list  # the same with the constants the per-factor estimates yield
    stated_ok: bool
    derived_ok: bool
    first_stated_failure: int | None = None

    def to_json(self) -> dict:
        return {
            "alpha": [str(a) for a in self.alpha],
            "beta": [str(b) for b in self.beta],
            "p": self.p,
            "q": self.q,
            "l": self.l,
            "kmax": len(self.valuations) - 1,
            "stated_ok": self.stated_ok,
            "derived_ok": self.derived_ok,
            "first_stated_failure": self.first_stated_failure,
            "valuations_head": [str(v) for v in self.valuations[:10]],
        }


def coefficient_growth(alpha, beta, p: int, q: int, l: int, kmax: int) -> GrowthReport:
    """v_p(c_{l+k}/c_l) for the two-term recurrence, k = 0..kmax.

    c_{l+k} = +-pi^(-k(m-n)) prod_i (l+k-1-a_i)..(l-a_i) / prod_j (l+k-1-b_j)..(l-b_j) c_l.

    Two checks of |c_{l+k}| >= K(k) prod_i (l+k-1-a_i)^-1 |c_l|:
      stated:  K = p^-m (q-1)^-2m k^-n
      derived: K = p^-n (q-1)^-m k^-n   (what the per-factor bounds give)
    In valuation form |y| >= p^-A means v(y) <= A.
    """
    alpha = [_check_alpha(a, p, q) for a in alpha]
    beta = [_check_alpha(b, p, q) for b in beta]
    m, n = len(alpha), len(beta)
    if any(a.denominator == 1 for a in alpha):
        raise ValueError("alpha parameters must not be integers")
    if any(l <= x for x in alpha + beta):
        raise ValueError("l must exceed every alpha_i and beta_j")
    vals = [Fraction(0)]
    stated = [None]
    derived = [None]
    run_a = [Fraction(0)] * m
    run_b = [Fraction(0)] * n
    stated_ok = derived_ok = True
    first = None
    lg = lambda y: math.log(y, p)  # noqa: E731
    for k in range(1, kmax + 1):
        s = l + k - 1
        for i, a in enumerate(alpha):
            run_a[i] += vp(s - a, p)
        for j, b in enumerate(beta):
            run_b[j] += vp(s - b, p)
        v = Fraction(-k * (m - n), p - 1) + sum(run_a) - sum(run_b)
        vals.append(v)
        logs = sum(lg(float(s - a)) for a in alpha)
        A_stated = m + 2 * m * lg(q - 1) + n * lg(k) + logs
        A_derived = n + m * lg(q - 1) + n * lg(k) + logs
        stated.append(A_stated)
        derived.append(A_derived)
        if float(v) > A_stated + _EPS:
            stated_ok = False
            if first is None:
                first = k
        if float(v) > A_derived + _EPS:
            derived_ok = False
    return GrowthReport(alpha, beta, p, q, l, vals, stated, derived, stated_ok, derived_ok, first)


@dataclass
class SeriesReport:
    alpha: list
    beta: list
    p: int
    q: int
    l0: int
    s: int
    eta_valuation: Fraction
    rows: list = field(default_factory=list)  # (t - s, summand valuation, stated env., derived env.)
    diverges: bool = False
    stated_envelope_ok: bool | None = None
    derived_envelope_ok: bool | None = None

    def to_json(self) -> dict:
        return {
            "alpha": [str(a) for a in self.alpha],
            "beta": [str(b) for b in self.beta],
            "p": self.p,
            "q": self.q,
            "l0": self.l0,
            "s": self.s,
            "eta_valuation": str(self.eta_valuation),
            "tmax": len(self.rows) - 1,
            "diverges": self.diverges,
            "stated_envelope_ok": self.stated_envelope_ok,
            "derived_envelope_ok": self.derived_envelope_ok,
        }


def default_l0(beta) -> int:
    ints = [int(b) + 1 for b in map(Fraction, beta) if b.denominator == 1 and b + 1 >= 0]
    return max(ints) if ints else 0


def d_series_convergence(
    alpha, beta, p: int, q: int, l0: int | None = None, s: int = 0, tmax: int = 100,
    eta_valuation=None,
) -> SeriesReport:
    """Valuations of the summands defining d_{l0+s}, t = s..s+tmax.

    The free coefficients c_{l0+t} are replaced by the envelope
    |c| = eta^(l0+t) with v_p(eta) = ``eta_valuation`` (default 1/(p-1)),
    so the summand valuation is
      (t-s)(m-n)/(p-1) + sum_j v(prod_{u=l0+s}^{l0+t-1}(u-b_j))
                       - sum_i v(prod_{u=l0+s}^{l0+t}(u-a_i)) + (l0+t) v(eta).
    The envelope bound is only compared for t > s, where it is finite.  The
    stated form carries (t-s)^m, the derived one (t-s)^n; both need
    a_i < l0 + s for the per-factor estimate on the alpha products.
    """
    alpha = [_check_alpha(a, p, q) for a in alpha]
    beta = [_check_alpha(b, p, q) for b in beta]
    m, n = len(alpha), len(beta)
    l0 = default_l0(beta) if l0 is None else l0
    lam = Fraction(1, p - 1) if eta_valuation is None else Fraction(eta_valuation)
    if lam <= 0:
        raise ValueError("eta must have positive valuation (eta < 1)")
    lg = lambda y: math.log(y, p)  # noqa: E731
    envelope_applies = all(a < l0 + s for a in alpha)
    base = l0 + s
    for a in alpha:
        for u in range(base, base + tmax + 1):
            if u == a:
                raise ValueError(f"denominator factor vanishes at u = {u}")
    run_b = Fraction(0)
    run_a = sum((vp(base - a, p) for a in alpha), Fraction(0))
    rep = SeriesReport(alpha, beta, p, q, l0, s, lam)
    stated_ok = derived_ok = True
    for d in range(tmax + 1):
        t = s + d
        if d >= 1:
            u = l0 + t - 1
            for b in beta:
                if u - b == 0:
                    run_b = None
                    break
                run_b += vp(u - b, p)
            if run_b is None:
                break
            run_a += sum(vp(l0 + t - a, p) for a in alpha)
        v = Fraction(d * (m - n), p - 1) + run_b - run_a + (l0 + t) * lam
        stated = derived = None
        if d >= 1 and envelope_applies:
            common = -m / (p - 1) - n - m * lg(q - 1) - sum(lg(float(l0 + t - a)) for a in alpha)
            common += float((l0 + t) * lam)
            stated = common - m * lg(d)
            derived = common - n * lg(d)
            stated_ok = stated_ok and float(v) >= stated - _EPS
            derived_ok = derived_ok and float(v) >= derived - _EPS
        rep.rows.append((d, v, stated, derived))
    if run_b is None:
        # a vanishing numerator kills every later summand: trivially convergent
        rep.diverges = True
    else:
        vals = [r[1] for r in rep.rows]
        # divergence to +infinity: the tail minimum beats the head maximum and
        # the last value exceeds every earlier one by the linear envelope margin
        half = len(vals) // 2
        rep.diverges = len(vals) > 2 and min(vals[half:]) > max(vals[: max(1, len(vals) // 4)])
    # None when a_i >= l0 + s puts the envelope outside the estimate's range
    rep.stated_envelope_ok = stated_ok if envelope_applies else None
    rep.derived_envelope_ok = derived_ok if envelope_applies else None
    return rep


def random_parameter_pack(rng: random.Random, m: int, n: int, p: int) -> tuple[list, list]:
    """Non-integral alphas and betas in (1/(p-1))Z with alpha_i - beta_j not integral."""
    q = p
    if m and q < 3:
        raise ValueError("need q >= 3 for non-integral alphas")
    alpha = [Fraction(rng.randrange(1, q - 1), q - 1) + rng.randrange(0, 3) for _ in range(m)]
    used = {a - math.floor(a) for a in alpha}
    choices = [Fraction(b, q - 1) for b in range(q - 1) if Fraction(b, q - 1) not in used]
    if n and not choices:
        raise ValueError("no admissible beta")
    beta = [rng.choice(choices) + rng.randrange(0, 3) for _ in range(n)]
    return alpha, beta
