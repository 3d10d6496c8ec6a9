"""Frobenius eigenvalues from hypergeometric traces over extension fields.

The exact traces T_h (sheaf normalization) are computed over GF(q^h) for
h = 1..r, turned into a characteristic polynomial by Newton's identities
and solved numerically.  Only the last step leaves exact arithmetic.
"""
from __future__ import annotations

import cmath
import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .cyclotomic import CycInt
from .finite_field import FieldCtx, FqElem, char_pullback, extend
from .hypersum import (
    DEFAULT_BUDGET,
    BudgetError,
    HypSpec,
    SpecError,
    hyp_sum_direct,
    trace_normalizations,
)

__all__ = [
    "SpectrumReport",
    "RootFindingError",
    "power_traces",
    "char_poly_from_traces",
    "poly_roots",
    "purity_check",
    "extended_spec",
    "reports_to_csv",
    "DEFAULT_DEPTH",
]

DEFAULT_DEPTH = 4
PURITY_TOL = 0.05


class RootFindingError(ArithmeticError):
    def __init__(self, message: str, residuals):
        super().__init__(message)
        self.residuals = list(residuals)


def extended_spec(spec: HypSpec, h: int) -> tuple[HypSpec, "Tower"]:
    """The same HypSpec with psi o Tr and chi o Norm over GF(q^h)."""
    tower = extend(spec.field, h)
    big = tower.field
    return (
        HypSpec(
            big,
            char_pullback(spec.psi, tower),
            tuple(char_pullback(c, tower) for c in spec.chi),
            tuple(char_pullback(r, tower) for r in spec.rho),
            spec.alpha,
            spec.beta,
            mult_order=spec.mult_order,
        ),
        tower,
    )


def power_traces(
    spec: HypSpec,
    t,
    r: int,
    depth: int = DEFAULT_DEPTH,
    budget: int = DEFAULT_BUDGET,
) -> list[CycInt]:
    """T_h = (-1)^(m+n+1) Hyp over GF(q^h) at t, for h = 1..r."""
    if not 1 <= r <= depth:
        raise ValueError(f"depth r={r} outside [1, {depth}]")
    t = spec.field.elem(t)
    if t.is_zero():
        raise SpecError("t must be nonzero")
    q = spec.field.q
    k = spec.m + spec.n
    required = sum((q**h - 1) ** (k - 1) for h in range(1, r + 1))
    if required > budget:
        raise BudgetError(required, budget)
    out = []
    for h in range(1, r + 1):
        big_spec, tower = extended_spec(spec, h)
        value = hyp_sum_direct(big_spec, tower.embed(t), budget)
        out.append(trace_normalizations(value, spec.m, spec.n, q, "sheaf"))
    return out


def char_poly_from_traces(T) -> list[complex]:
    """Coefficients of prod(X - gamma_i), highest degree first.

    e_k from Newton's identities  k e_k = sum_{i=1..k} (-1)^(i-1) e_{k-i} T_i;
    the returned list is [1, -e_1, e_2, ..., (-1)^r e_r].
    """
    T = [complex(x) for x in T]
    r = len(T)
    if r < 1:
        raise ValueError("need at least one power sum")
    e = [1 + 0j]
    for k in range(1, r + 1):
        s = sum((-1) ** (i - 1) * e[k - i] * T[i - 1] for i in range(1, k + 1))
        e.append(s / k)
    return [(-1) ** k * e[k] for k in range(r + 1)]


def _horner(coeffs, z):
    p = 0j
    dp = 0j
    for c in coeffs:
        dp = dp * z + p
        p = p * z + c
    return p, dp


def poly_roots(coeffs, max_iter: int = 200) -> list[complex]:
    """All roots by Aberth-Ehrlich iteration seeded with companion eigenvalues."""
    coeffs = [complex(c) for c in coeffs]
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
    deg = len(coeffs) - 1
    if deg < 1:
        return []
    if deg > 8:
        raise ValueError("poly_roots supports degree <= 8")
    scale = max(abs(c) for c in coeffs)
    tol = 1e-8 * scale
    lead = coeffs[0]
    monic = [c / lead for c in coeffs]
    companion = np.zeros((deg, deg), dtype=complex)
    companion[0, :] = [-c for c in monic[1:]]
    if deg > 1:
        companion[1:, :-1] = np.eye(deg - 1)
    z = list(np.linalg.eigvals(companion))
    # break exact coincidences so the Aberth sum stays finite
    for i in range(deg):
        for j in range(i):
            if z[i] == z[j]:
                z[i] += 1e-9 * (1 + abs(z[i])) * cmath.exp(1j * (i + 1))
    residuals = [abs(_horner(coeffs, zi)[0]) for zi in z]
    for _ in range(max_iter):
        if max(residuals) <= tol * 1e-3:
            break
        new = list(z)
        for i in range(deg):
            p, dp = _horner(coeffs, z[i])
            if p == 0:
                continue
            ratio = p / dp if dp != 0 else p / (1e-300 + 0j)
            repulse = sum(1 / (z[i] - z[j]) for j in range(deg) if j != i and z[i] != z[j])
            denom = 1 - ratio * repulse
            new[i] = z[i] - (ratio / denom if denom != 0 else ratio)
        step = max(abs(a - b) for a, b in zip(new, z))
        z = new
        residuals = [abs(_horner(coeffs, zi)[0]) for zi in z]
        if step <= 1e-15 * (1 + max(abs(v) for v in z)):
            break
    if max(residuals) > tol:
        raise RootFindingError(f"roots did not converge (tolerance {tol:.3g})", residuals)
    return z


@dataclass
class SpectrumReport:
    t: int
    m: int
    n: int
    q: int
    r: int
    power_traces: list
    char_poly: list
    eigenvalues: list
    moduli: list
    weight_estimate: list
    threshold: float
    rank_found: int
    rank_ok: bool
    purity_asserted: bool
    purity_ok: bool
    roundtrip_error: float
    flags: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.rank_ok and self.purity_ok

    def to_json(self) -> dict:
        def cplx(z):
            return [z.real, z.imag]

        return {
            "t": self.t,
            "m": self.m,
            "n": self.n,
            "q": self.q,
            "r": self.r,
            "normalization": "sheaf",
            "power_traces": [T.to_json() for T in self.power_traces],
            "char_poly": [cplx(c) for c in self.char_poly],
            "eigenvalues": [cplx(z) for z in self.eigenvalues],
            "moduli": self.moduli,
            "weight_estimate": self.weight_estimate,
            "threshold": self.threshold,
            "rank_found": self.rank_found,
            "rank_ok": self.rank_ok,
            "purity_asserted": self.purity_asserted,
            "purity_ok": self.purity_ok,
            "roundtrip_error": self.roundtrip_error,
            "flags": self.flags,
        }

    def csv_row(self) -> dict:
        return {
            "t": self.t,
            "rank_found": self.rank_found,
            "min_weight": min(self.weight_estimate) if self.weight_estimate else "",
            "max_weight": max(self.weight_estimate) if self.weight_estimate else "",
            "purity_pass": self.purity_ok,
        }


def purity_check(
    spec: HypSpec,
    t,
    r: int | None = None,
    depth: int = DEFAULT_DEPTH,
    budget: int = DEFAULT_BUDGET,
) -> SpectrumReport:
    m, n = spec.m, spec.n
    q = spec.field.q
    r = max(m, n) if r is None else r
    t = spec.field.elem(t)
    T = power_traces(spec, t, r, depth, budget)
    Tc = [x.embed() for x in T]
    poly = char_poly_from_traces(Tc)
    roots = [complex(z) for z in poly_roots(poly)]
    threshold = 1e-6 * q**r
    moduli = [float(abs(z)) for z in roots]
    weights = [2 * math.log(mod, q) if mod > 0 else float("-inf") for mod in moduli]
    flags = []
    if abs(poly[-1]) < threshold:
        flags.append(f"constant term {abs(poly[-1]):.3g} below zero threshold")
    rank_found = sum(1 for mod in moduli if mod >= threshold)
    rank_ok = rank_found == r and not flags
    if rank_found != r:
        flags.append(f"found {rank_found} nonzero eigenvalues, expected {r}")
    purity_asserted = m != n
    purity_ok = True
    if purity_asserted:
        w = m + n - 1
        bad = [x for x in weights if abs(x - w) > PURITY_TOL]
        if bad:
            purity_ok = False
            flags.append(f"weights {bad} differ from {w} by more than {PURITY_TOL}")
    err = 0.0
    for h, Th in enumerate(Tc, start=1):
        recon = sum(z**h for z in roots)
        err = max(err, abs(recon - Th) / max(1.0, abs(Th), q ** (h * (m + n - 1) / 2)))
    return SpectrumReport(
        t=t.encode(),
        m=m,
        n=n,
        q=q,
        r=r,
        power_traces=T,
        char_poly=poly,
        eigenvalues=roots,
        moduli=moduli,
        weight_estimate=weights,
        threshold=threshold,
        rank_found=rank_found,
        rank_ok=rank_ok,
        purity_asserted=purity_asserted,
        purity_ok=purity_ok,
        roundtrip_error=err,
        flags=flags,
    )


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=["t", "rank_found", "min_weight", "max_weight", "purity_pass"])
    writer.writeheader()
    for rep in sorted(reports, key=lambda x: x.t):
        writer.writerow(rep.csv_row())
    return buf.getvalue()
