"""Symbolic identity checks for hypergeometric operators.

Every check returns a plain dict with at least ``name``, ``case`` and
``ok`` so the CLI and the tests can tabulate them.
"""
from __future__ import annotations

from math import factorial

from .weyl import (
    OpContext,
    WeylOp,
    fourier_auto,
    hyp_operator,
    kummer_module_twist,
    kummer_twist,
    left_ideal_equal_up_to_unit,
    divided_power,
    dpoly_coeffs,
    preserves_relation,
    reduce_mod_left_partial,
    reduce_mod_right_x,
    substitute_inversion,
    _fourier_images,
    _inversion_images,
    _kummer_images,
)

__all__ = [
    "inversion_unit",
    "check_inversion",
    "check_kummer",
    "check_kummer_literal",
    "fourier_unit",
    "check_fourier",
    "check_fourier_display",
    "top_coefficient",
    "check_top_coefficient",
    "check_mod_partial",
    "check_mod_x",
    "check_relations",
    "run_suite",
]


def _theta_product(ctx, roots):
    th = WeylOp.theta(ctx)
    out = WeylOp.const(ctx)
    for r in roots:
        out = out * (th - r)
    return out


def _case(ctx, **kw):
    return {"parity": ctx.parity, **kw}


def inversion_unit(ctx: OpContext, m: int, n: int):
    """(-1)^(m + n p + n + 1) pi^(m-n), the coefficient of x^-1."""
    return ctx.pi ** (m - n) * (ctx.sign(m + n + 1) * ctx.parity_power(n))


def check_inversion(ctx: OpContext, m: int, n: int) -> dict:
    """Inversion pulls Hyp_pi(a; b) back to unit * Hyp_{eps pi}(-b; -a)."""
    lhs = substitute_inversion(hyp_operator(ctx, m, n))
    target = hyp_operator(
        ctx,
        pi=ctx.pi * ctx.parity,
        alpha=[-b for b in ctx.beta(n)],
        beta=[-a for a in ctx.alpha(m)],
    )
    unit = inversion_unit(ctx, m, n)
    structural = lhs == WeylOp.x(ctx, -1) * target * unit
    verdict = left_ideal_equal_up_to_unit(lhs, target)
    return {
        "name": "inversion",
        "case": _case(ctx, m=m, n=n),
        "ok": structural and verdict.equal,
        "expected_unit": f"({unit.format()})*x^-1",
        "witness": verdict.witness(),
    }


def _shifted(ctx, m, n, gamma):
    return hyp_operator(
        ctx,
        alpha=[a + gamma for a in ctx.alpha(m)],
        beta=[b + gamma for b in ctx.beta(n)],
    )


def check_kummer(ctx: OpContext, m: int, n: int) -> dict:
    """Twisting the module by K_g turns Hyp(a; b) into Hyp(a+g; b+g)."""
    g = ctx.sym("g")
    H = hyp_operator(ctx, m, n)
    verdict = left_ideal_equal_up_to_unit(kummer_module_twist(H, g), _shifted(ctx, m, n, g))
    # the raw substitution d -> d + g/x lands on the opposite shift
    raw = left_ideal_equal_up_to_unit(kummer_twist(H, g), _shifted(ctx, m, n, -g))
    round_trip = kummer_twist(kummer_twist(H, g), -g) == H
    return {
        "name": "kummer",
        "case": _case(ctx, m=m, n=n),
        "ok": verdict.equal and raw.equal and round_trip,
        "witness": verdict.witness(),
        "raw_substitution_witness": raw.witness(),
    }


def check_kummer_literal(ctx: OpContext, m: int, n: int) -> dict:
    """Raw substitution d -> d + g/x compared against Hyp(a+g; b+g)."""
    g = ctx.sym("g")
    verdict = left_ideal_equal_up_to_unit(
        kummer_twist(hyp_operator(ctx, m, n), g), _shifted(ctx, m, n, g)
    )
    return {
        "name": "kummer_raw_vs_plus_shift",
        "case": _case(ctx, m=m, n=n),
        "ok": verdict.equal,
        "witness": verdict.witness(),
    }


def fourier_unit(ctx: OpContext, m: int, n: int):
    """(-1)^(n(p-1) + m - 1) pi^(n-m), the coefficient of x^-1."""
    return ctx.pi ** (n - m) * (ctx.sign(n + m - 1) * ctx.parity_power(n))


def _fourier_source(ctx, m, n):
    # first parameter normalised to 0
    rest = ctx.alpha(m)[1:]
    return fourier_auto(
        hyp_operator(
            ctx,
            pi=ctx.pi * ctx.parity,
            alpha=[-b - 1 for b in ctx.beta(n)],
            beta=[-a - 1 for a in rest],
            allow_empty=True,
        )
    )


def check_fourier(ctx: OpContext, m: int, n: int) -> dict:
    """phi(Hyp_{eps pi}(-b-1; -a'-1)) = unit * x^-1 * Hyp_pi(0, a'; b)."""
    if m < 1:
        raise ValueError("Fourier step needs m >= 1")
    lhs = _fourier_source(ctx, m, n)
    alpha = [ctx.scalar(0)] + ctx.alpha(m)[1:]
    target = hyp_operator(ctx, alpha=alpha, beta=ctx.beta(n))
    unit = fourier_unit(ctx, m, n)
    structural = lhs == WeylOp.x(ctx, -1) * target * unit
    verdict = left_ideal_equal_up_to_unit(lhs, target)
    return {
        "name": "fourier",
        "case": _case(ctx, m=m, n=n),
        "ok": structural and verdict.equal,
        "expected_unit": f"({unit.format()})*x^-1",
        "witness": verdict.witness(),
    }


def check_fourier_display(ctx: OpContext, m: int, n: int) -> dict:
    """Same left side against  unit x^-1 {x d prod(x d - a_i) - s prod(x d - b_j)},

    i.e. with no x in front of the second product.
    """
    lhs = _fourier_source(ctx, m, n)
    s = ctx.pi ** (m - n) * (ctx.sign(m) * ctx.parity_power(n))
    braces = WeylOp.theta(ctx) * _theta_product(ctx, ctx.alpha(m)[1:]) - _theta_product(ctx, ctx.beta(n)) * s
    unit = fourier_unit(ctx, m, n)
    structural = lhs == WeylOp.x(ctx, -1) * braces * unit
    verdict = left_ideal_equal_up_to_unit(lhs, braces)
    return {
        "name": "fourier_braces_without_x",
        "case": _case(ctx, m=m, n=n),
        "ok": structural or verdict.equal,
        "witness": verdict.witness(),
    }


def top_coefficient(ctx: OpContext, m: int, n: int) -> dict:
    """Closed form of the leading coefficient h_r(x) as {power: scalar}."""
    if m > n:
        return {m: ctx.scalar(1)}
    if m == n:
        # (-1)^(n(p+1)) = eps^n (-1)^n
        s = ctx.parity_power(n) * ctx.sign(n)
        return {m: ctx.scalar(1), m + 1: ctx.scalar(-s)}
    return {n + 1: ctx.pi ** (m - n) * (-ctx.sign(m) * ctx.parity_power(n))}


def check_top_coefficient(ctx: OpContext, m: int, n: int) -> dict:
    h = dpoly_coeffs(hyp_operator(ctx, m, n))
    r = max(m, n)
    expected = top_coefficient(ctx, m, n)
    got = h[r] if len(h) > r else {}
    ok = len(h) == r + 1 and got.keys() == expected.keys() and all(got[k] == expected[k] for k in got)
    return {"name": "top_coefficient", "case": _case(ctx, m=m, n=n), "ok": ok, "order": len(h) - 1}


def check_mod_partial(ctx: OpContext, m: int, n: int, l: int) -> dict:
    """x^l Hyp mod d D against the closed two-term Laurent polynomial."""
    got = reduce_mod_left_partial(WeylOp.x(ctx, l) * hyp_operator(ctx, m, n))
    s = ctx.pi ** (m - n) * (ctx.sign(m) * ctx.parity_power(n))
    first = ctx.scalar(1)
    for a in ctx.alpha(m):
        first = first * (-l - 1 - a)
    second = ctx.scalar(1)
    for b in ctx.beta(n):
        second = second * (-l - 2 - b)
    expected = {l: first, l + 1: -s * second}
    expected = {k: v for k, v in expected.items() if not v.is_zero()}
    ok = got.keys() == expected.keys() and all(got[k] == expected[k] for k in got)
    return {"name": "mod_left_d", "case": _case(ctx, m=m, n=n, l=l), "ok": ok}


def check_mod_x(ctx: OpContext, m: int, n: int, l: int) -> dict:
    """(d^l / l!) Hyp mod xA, the per-basis form of the coefficient recurrence.

    Expected: prod(l - a_i) d^[l] - s prod(l - 1 - b_j) d^[l-1].
    """
    got = reduce_mod_right_x(divided_power(ctx, l) * hyp_operator(ctx, m, n))
    s = ctx.pi ** (m - n) * (ctx.sign(m) * ctx.parity_power(n))
    first = ctx.scalar(1)
    for a in ctx.alpha(m):
        first = first * (l - a)
    expected = {l: first / factorial(l)}
    if l >= 1:
        second = ctx.scalar(1)
        for b in ctx.beta(n):
            second = second * (l - 1 - b)
        expected[l - 1] = -s * second / factorial(l - 1)
    expected = {k: v for k, v in expected.items() if not v.is_zero()}
    ok = got.keys() == expected.keys() and all(got[k] == expected[k] for k in got)
    return {"name": "mod_right_x", "case": _case(ctx, m=m, n=n, l=l), "ok": ok}


def check_relations(ctx: OpContext) -> list[dict]:
    g = ctx.sym("g")
    maps = {
        "inversion": _inversion_images(ctx),
        "kummer": _kummer_images(ctx, g),
        "fourier": _fourier_images(ctx, None),
    }
    return [
        {"name": f"relation_{name}", "case": _case(ctx), "ok": preserves_relation(X, D)}
        for name, (X, _, D) in maps.items()
    ]


def run_suite(max_total: int = 5, parities=(1, -1), max_each: int = 4) -> list[dict]:
    """Every identity over the standard grid; ``ok`` on each record."""
    out = []
    for eps in parities:
        ctx = OpContext(eps)
        out += check_relations(ctx)
        for m in range(max_total + 1):
            for n in range(max_total + 1 - m):
                if m + n == 0:
                    continue
                out.append(check_inversion(ctx, m, n))
                out.append(check_kummer(ctx, m, n))
        for m in range(max_each + 1):
            for n in range(max_each + 1):
                if m + n:
                    out.append(check_top_coefficient(ctx, m, n))
        for m in range(1, 5):
            for n in range(4):
                out.append(check_fourier(ctx, m, n))
        for m in range(4):
            for n in range(4):
                if m + n == 0:
                    continue
                for l in range(6):
                    out.append(check_mod_partial(ctx, m, n, l))
                    out.append(check_mod_x(ctx, m, n, l))
    return out
