"""Hypergeometric character sums over finite fields.

Two independent evaluation routes are provided: literal enumeration of the
hypersurface prod(x)/prod(y) = t, and the multiplicative-convolution
recursion built from the rank-one closed forms.  Every value is an exact
element of Z[zeta_N] with N = p * M, M the multiplicative modulus (q - 1 of
the base field, also for sums pulled back to an extension).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from .cyclotomic import CycInt
from .finite_field import AddChar, FieldCtx, FqElem, MultChar

__all__ = [
    "HypSpec",
    "SpecError",
    "BudgetError",
    "hyp_sum_direct",
    "hyp_table_direct",
    "hyp_sum_convolved",
    "hyp_table_convolved",
    "gauss_sum",
    "convolution_trace_check",
    "trace_normalizations",
    "DEFAULT_BUDGET",
]

DEFAULT_BUDGET = 5 * 10**7


class SpecError(ValueError):
    """A HypSpec violates one of its preconditions."""


class BudgetError(RuntimeError):
    """An enumeration would exceed the configured budget."""

    def __init__(self, required: int, budget: int):
        super().__init__(f"enumeration needs {required} points, budget is {budget}")
        self.required = required
        self.budget = budget


@dataclass(frozen=True)
class HypSpec:
    """Parameters of Hyp_psi(chi; rho).

    ``alpha``/``beta`` default to a_i/M with a_i the character exponent in
    [0, M).  Characters may be pulled back to an extension field, in which
    case ``mult_order`` is the base field's q - 1.
    """

    field: FieldCtx
    psi: AddChar
    chi: tuple = ()
    rho: tuple = ()
    alpha: tuple = None
    beta: tuple = None
    mult_order: int = 0

    def __post_init__(self):
        object.__setattr__(self, "chi", tuple(self.chi))
        object.__setattr__(self, "rho", tuple(self.rho))
        M = self.mult_order or self.field.q - 1
        object.__setattr__(self, "mult_order", M)
        if self.psi.ctx != self.field:
            raise SpecError("additive character is not on the sum's field")
        if self.psi.is_trivial:
            raise SpecError("additive character must be nontrivial")
        for c in self.chi + self.rho:
            if c.ctx != self.field:
                raise SpecError("multiplicative character is not on the sum's field")
            if M % c.modulus:
                raise SpecError(f"character modulus {c.modulus} does not divide {M}")
        for i, c in enumerate(self.chi):
            for j, r in enumerate(self.rho):
                if _lifted_exponent(c, M) == _lifted_exponent(r, M):
                    raise SpecError(f"chi_{i + 1} equals rho_{j + 1}; hypergeometric data must be disjoint")
        alpha = self.alpha
        if alpha is None:
            alpha = tuple(Fraction(_param_exponent(c, M), M) for c in self.chi)
        beta = self.beta
        if beta is None:
            beta = tuple(Fraction(_param_exponent(r, M), M) for r in self.rho)
        alpha = tuple(Fraction(a) for a in alpha)
        beta = tuple(Fraction(b) for b in beta)
        if len(alpha) != len(self.chi) or len(beta) != len(self.rho):
            raise SpecError("alpha/beta lengths must match chi/rho")
        for name, pars, chars in (("alpha", alpha, self.chi), ("beta", beta, self.rho)):
            for k, (a, c) in enumerate(zip(pars, chars)):
                scaled = a * M
                if scaled.denominator != 1:
                    raise SpecError(f"{name}_{k + 1} = {a} is not in (1/{M})Z")
                if int(scaled) % M != _param_exponent(c, M):
                    raise SpecError(f"{name}_{k + 1} = {a} does not match its character exponent")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @property
    def m(self) -> int:
        return len(self.chi)

    @property
    def n(self) -> int:
        return len(self.rho)

    @property
    def order(self) -> int:
        return self.field.p * self.mult_order

    @classmethod
    def from_exponents(cls, field: FieldCtx, psi: int = 1, chi=(), rho=()) -> "HypSpec":
        return cls(
            field,
            AddChar(field, field.elem(psi)),
            tuple(MultChar(field, a) for a in chi),
            tuple(MultChar(field, b) for b in rho),
        )

    def to_json(self) -> dict:
        out = {
            "p": self.field.p,
            "s": self.field.s,
            "chi": [_param_exponent(c, self.mult_order) for c in self.chi],
            "rho": [_param_exponent(r, self.mult_order) for r in self.rho],
            "psi": getattr(self.psi, "base_char", self.psi).twist.encode(),
            "alpha": [str(a) for a in self.alpha],
            "beta": [str(b) for b in self.beta],
        }
        return out


def _lifted_exponent(c, M: int) -> int:
    return c.a * (M // c.modulus) % M


def _param_exponent(c, M: int) -> int:
    # pulled-back characters keep the base field's Kummer parameter
    return _lifted_exponent(getattr(c, "base_char", c), M)


def _unit_exponents(spec: HypSpec):
    """Per-variable exponent tables (indexed by log) in Z/N."""
    M, p = spec.mult_order, spec.field.p
    N = p * M
    # zeta_M = zeta_N^p and zeta_p = zeta_N^M
    chi_t = [p * (c.table() * (M // c.modulus)) % N for c in spec.chi]
    rho_inv_t = [(-p * (r.table() * (M // r.modulus))) % N for r in spec.rho]
    return chi_t, rho_inv_t


def _psi_exponents(spec: HypSpec) -> np.ndarray:
    return spec.psi.table() * spec.mult_order % spec.order


def _check_t(spec: HypSpec, t) -> FqElem:
    t = spec.field.elem(t)
    if t.is_zero():
        raise SpecError("t must be nonzero")
    return t


def _check_rank(spec: HypSpec) -> None:
    if spec.m + spec.n == 0:
        raise SpecError("(m, n) = (0, 0) has no hypergeometric sum")


def hyp_sum_direct(spec: HypSpec, t, budget: int = DEFAULT_BUDGET) -> CycInt:
    """Enumerate V(m, n, t) and sum the character values.

    The first m+n-1 coordinates run freely over GF(q)^x; the last one is
    solved from prod(x)/prod(y) = t.
    """
    _check_rank(spec)
    t = _check_t(spec, t)
    ctx = spec.field
    L = ctx.q - 1
    k = spec.m + spec.n
    required = L ** (k - 1)
    if required > budget:
        raise BudgetError(required, budget)
    chi_t, rho_inv_t = _unit_exponents(spec)
    psi_t = _psi_exponents(spec)
    N = spec.order
    lt = ctx.log(t)
    # sign +1 for x-coordinates, -1 for y-coordinates
    signs = [1] * spec.m + [-1] * spec.n
    tables = chi_t + rho_inv_t
    counts = np.zeros(N, dtype=np.int64)
    chunk = max(1, 2**20 // max(1, L))
    free = k - 1
    total_points = L**free
    for start in range(0, total_points, chunk):
        idx = np.arange(start, min(total_points, start + chunk), dtype=np.int64)
        logs = []
        rest = idx
        for _ in range(free):
            logs.append(rest % L)
            rest = rest // L
        # solve last coordinate: sum(sign_i * log_i) = log t (mod L)
        acc = np.zeros_like(idx)
        for sgn, lg in zip(signs[:-1], logs):
            acc += sgn * lg
        last = (signs[-1] * (lt - acc)) % L
        logs.append(last)
        # field sum  sum x_i - sum y_j, on encodings
        total_enc = np.zeros_like(idx)
        for sgn, lg in zip(signs, logs):
            enc = ctx.exp_table[lg]
            if sgn < 0:
                enc = ctx.neg_enc(enc)
            total_enc = ctx.add_enc(total_enc, enc)
        expo = psi_t[total_enc].copy()
        for tab, lg in zip(tables, logs):
            expo += tab[lg]
        counts += np.bincount(expo % N, minlength=N)
    return CycInt.from_exponent_counts(N, counts)


def hyp_table_direct(spec: HypSpec, budget: int = DEFAULT_BUDGET) -> dict[int, CycInt]:
    """Direct values at every t, keyed by t's encoding."""
    return {t.encode(): hyp_sum_direct(spec, t, budget) for t in spec.field.units()}


# --- convolution route -----------------------------------------------------

def _rank_one_exponents(spec: HypSpec, kind: str, index: int) -> np.ndarray:
    """Closed-form rank-one exponents in Z/N, indexed by log t.

    Hyp(chi; -)(t) = psi(t) chi(t),  Hyp(-; rho)(t) = psi(-1/t) rho(t).
    """
    ctx = spec.field
    L = ctx.q - 1
    M, p = spec.mult_order, ctx.p
    N = p * M
    psi_t = _psi_exponents(spec)
    logs = np.arange(L, dtype=np.int64)
    if kind == "chi":
        c = spec.chi[index]
        mult = p * (c.table() * (M // c.modulus)) % N
        enc = ctx.exp_table[logs]
    else:
        r = spec.rho[index]
        mult = p * (r.table() * (M // r.modulus)) % N
        inv_logs = (-logs) % L
        enc = ctx.neg_enc(ctx.exp_table[inv_logs])
    return (psi_t[enc] + mult) % N


def _convolve_with_monomials(H: np.ndarray, expo: np.ndarray, N: int) -> np.ndarray:
    """(H * R)(t) = sum_s H(s) R(t/s), R(u) = zeta_N^expo[log u].

    H has shape (L, N): row = log t, column = exponent-count vector.
    """
    L = H.shape[0]
    out = np.zeros_like(H)
    cols = np.arange(N)
    rows = np.arange(L)
    for s in range(L):
        if not H[s].any():
            continue
        shift = expo[(rows - s) % L]  # R(t / s) for every t
        out += H[s][(cols[None, :] - shift[:, None]) % N]
    return out


def _convolved_counts(spec: HypSpec) -> np.ndarray:
    _check_rank(spec)
    N = spec.order
    L = spec.field.q - 1
    factors = [("chi", i) for i in range(spec.m)] + [("rho", j) for j in range(spec.n)]

    def build(fs):
        if len(fs) == 1:
            expo = _rank_one_exponents(spec, *fs[0])
            H = np.zeros((L, N), dtype=np.int64)
            H[np.arange(L), expo] = 1
            return H
        # peel the last chi if any remain, otherwise the last rho
        chis = [f for f in fs if f[0] == "chi"]
        peel = chis[-1] if chis else fs[-1]
        rest = [f for f in fs if f != peel]
        return _convolve_with_monomials(build(rest), _rank_one_exponents(spec, *peel), N)

    return build(factors)


def hyp_table_convolved(spec: HypSpec) -> dict[int, CycInt]:
    """Convolution-route values at every t, keyed by t's encoding."""
    H = _convolved_counts(spec)
    ctx = spec.field
    return {
        int(ctx.exp_table[k]): CycInt.from_exponent_counts(spec.order, H[k])
        for k in range(ctx.q - 1)
    }


def hyp_sum_convolved(spec: HypSpec, t) -> CycInt:
    t = _check_t(spec, t)
    H = _convolved_counts(spec)
    return CycInt.from_exponent_counts(spec.order, H[spec.field.log(t)])


# --- auxiliary sums --------------------------------------------------------

def gauss_sum(psi, chi) -> CycInt:
    """sum_{x != 0} psi(x) chi(x), in Z[zeta_{p * modulus}]."""
    ctx = psi.ctx
    N = ctx.p * chi.modulus
    total = CycInt.zero(N)
    for x in ctx.units():
        total = total + psi(x).lift(N) * chi(x).lift(N)
    return total


def convolution_trace_check(
    f: Callable[[FqElem], CycInt] | Mapping,
    g: Callable[[FqElem], CycInt] | Mapping,
    t: FqElem,
) -> CycInt:
    """sum_{x1 x2 = t} f(x1) g(x2) over GF(q)^x."""
    ctx = t.ctx
    ff = f.__getitem__ if isinstance(f, Mapping) else f
    gg = g.__getitem__ if isinstance(g, Mapping) else g
    total = None
    for x1 in ctx.units():
        term = ff(x1) * gg(t / x1)
        total = term if total is None else total + term
    return total


def trace_normalizations(v: CycInt, m: int, n: int, q: int, mode: str) -> CycInt:
    """Apply the D-module (q^(2(m+n))) or sheaf ((-1)^(m+n+1)) convention."""
    if mode == "dmodule":
        return v * q ** (2 * (m + n))
    if mode == "sheaf":
        return v if (m + n) % 2 else -v
    if mode == "raw":
        return v
    raise ValueError(f"unknown normalization {mode!r}")
