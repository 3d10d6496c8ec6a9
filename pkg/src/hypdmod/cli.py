"""Command line entry point: hypdmod {sum,spectrum,verify-ops,padic,all}.

Exit codes: 0 pass, 1 internal error, 2 invalid spec, 3 budget exceeded,
4 precision starvation, 5 a verification ran and failed.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .finite_field import AddChar, FieldSizeError, field_create, is_prime
from .hypersum import (
    DEFAULT_BUDGET,
    BudgetError,
    HypSpec,
    SpecError,
    hyp_table_convolved,
    hyp_table_direct,
    trace_normalizations,
)
from .identities import (
    check_fourier,
    check_fourier_display,
    check_inversion,
    check_kummer,
    check_kummer_literal,
    run_suite,
)
from .padic import (
    PiAdicCtx,
    PrecisionError,
    coefficient_growth,
    d_series_convergence,
    default_l0,
    dwork_theta,
    grid_to_csv,
    random_parameter_pack,
    teichmuller,
    valuation_grid,
)
from .spectrum import DEFAULT_DEPTH, RootFindingError, purity_check, reports_to_csv
from .weyl import OpContext

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_SPEC = 2
EXIT_BUDGET = 3
EXIT_PRECISION = 4
EXIT_FAILED = 5


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    p: int = 5
    s: int = 1
    psi: int = 1
    chi: list = field(default_factory=list)
    rho: list = field(default_factory=list)
    t: str = "all"
    depth: int | None = None
    precision: int = 40
    norm: str = "raw"
    format: str = "json"
    out: str | None = None
    jobs: int = 1
    budget: int = DEFAULT_BUDGET
    method: str = "direct"
    pretty: bool = False
    m: int | None = None
    n: int | None = None
    max_total: int = 5
    parity: str = "both"
    seed: int = 0


# parsing -----------------------------------------------------------------------


def _int_list(text: str | None) -> list[int]:
    if not text:
        return []
    return [int(x) for x in text.split(",") if x.strip()]


def _rational_list(text: str | None) -> list[Fraction]:
    if not text:
        return []
    return [Fraction(x.strip()) for x in text.split(",") if x.strip()]


def _exponents_from_rationals(values, q: int, name: str) -> list[int]:
    out = []
    for a in values:
        scaled = a * (q - 1)
        if scaled.denominator != 1:
            raise ConfigError(f"--{name} value {a} is not in (1/{q - 1})Z")
        out.append(int(scaled) % (q - 1))
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hypdmod", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--p", type=int, default=5, help="characteristic")
        sp.add_argument("--s", type=int, default=1, help="field degree, q = p^s")
        sp.add_argument("--psi", type=int, default=1, help="additive character twist (element encoding)")
        sp.add_argument("--chi", default=None, help="comma separated chi exponents")
        sp.add_argument("--rho", default=None, help="comma separated rho exponents")
        sp.add_argument("--alpha", default=None, help="chi as rationals a/b (alternative to --chi)")
        sp.add_argument("--beta", default=None, help="rho as rationals a/b (alternative to --rho)")
        sp.add_argument("--t", default="all", help="'all' or comma separated encodings")
        sp.add_argument("--depth", type=int, default=None, help="number of extension fields r")
        sp.add_argument("--precision", type=int, default=40, help="pi-adic digits")
        sp.add_argument("--norm", choices=["raw", "sheaf", "dmodule"], default="raw")
        sp.add_argument("--format", choices=["json", "csv"], default="json")
        sp.add_argument("--out", default=None, help="write output here instead of stdout")
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
        sp.add_argument("--pretty", action="store_true", help="human readable output")

    for name in ("sum", "spectrum", "verify-ops", "padic", "all"):
        sp = sub.add_parser(name)
        common(sp)
        if name in ("sum", "all"):
            sp.add_argument("--method", choices=["direct", "convolved"], default="direct")
        if name in ("verify-ops", "all"):
            sp.add_argument("--m", type=int, default=None, help="single case: number of alphas")
            sp.add_argument("--n", type=int, default=None, help="single case: number of betas")
            sp.add_argument("--max-total", type=int, default=5)
            sp.add_argument("--parity", choices=["both", "odd", "even"], default="both")
        if name in ("padic", "all"):
            sp.add_argument("--seed", type=int, default=0)
    return parser


def config_from_args(args) -> RunConfig:
    cfg = RunConfig(command=args.command)
    for key in ("p", "s", "psi", "t", "depth", "precision", "norm", "format", "out", "jobs", "budget", "pretty"):
        setattr(cfg, key, getattr(args, key))
    for key in ("method", "m", "n", "max_total", "parity", "seed"):
        if hasattr(args, key):
            setattr(cfg, key, getattr(args, key))
    if not is_prime(cfg.p):
        raise ConfigError(f"p = {cfg.p} is not prime")
    if cfg.s < 1:
        raise ConfigError("s must be >= 1")
    if cfg.jobs < 1:
        raise ConfigError("--jobs must be >= 1")
    q = cfg.p**cfg.s
    if args.chi is not None and args.alpha is not None:
        raise ConfigError("give either --chi or --alpha, not both")
    if args.rho is not None and args.beta is not None:
        raise ConfigError("give either --rho or --beta, not both")
    cfg.chi = _int_list(args.chi) if args.alpha is None else _exponents_from_rationals(_rational_list(args.alpha), q, "alpha")
    cfg.rho = _int_list(args.rho) if args.beta is None else _exponents_from_rationals(_rational_list(args.beta), q, "beta")
    return cfg


def make_spec(cfg: RunConfig) -> HypSpec:
    if not cfg.chi and not cfg.rho:
        raise SpecError("need at least one of --chi/--rho (m + n >= 1)")
    fld = field_create(cfg.p, cfg.s)
    return HypSpec.from_exponents(fld, cfg.psi, cfg.chi, cfg.rho)


def t_values(cfg: RunConfig, spec: HypSpec) -> list[int]:
    q = spec.field.q
    if cfg.t == "all":
        return list(range(1, q))
    ts = sorted(set(_int_list(cfg.t)))
    for t in ts:
        if not 1 <= t < q:
            raise SpecError(f"t encoding {t} is not a nonzero element of GF({q})")
    return ts


# commands -----------------------------------------------------------------------------


def cmd_sum(cfg: RunConfig):
    spec = make_spec(cfg)
    ts = t_values(cfg, spec)
    if spec.m + spec.n >= 2:
        required = (spec.field.q - 1) ** (spec.m + spec.n - 1) * len(ts)
        if required > cfg.budget:
            raise BudgetError(required, cfg.budget)
    table = hyp_table_direct(spec, cfg.budget) if cfg.method == "direct" else hyp_table_convolved(spec)
    values = []
    for t in ts:
        v = trace_normalizations(table[t], spec.m, spec.n, spec.field.q, cfg.norm)
        z = v.embed()
        values.append({"t": t, "value": v.to_json(), "complex": [z.real, z.imag]})
    report = {"spec": spec.to_json(), "normalization": cfg.norm, "values": values}
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["t_encoding", "coeffs_json", "complex_re", "complex_im"])
        for row in values:
            w.writerow([row["t"], json.dumps(row["value"]["coeffs"]), repr(row["complex"][0]), repr(row["complex"][1])])
        return buf.getvalue(), EXIT_OK
    if cfg.pretty:
        lines = [f"Hyp over GF({spec.field.q}), normalization {cfg.norm}"]
        lines += [f"t={r['t']:>4}  {r['complex'][0]: .6f} {r['complex'][1]:+.6f}i" for r in values]
        return "\n".join(lines) + "\n", EXIT_OK
    return report, EXIT_OK


def _spectrum_worker(args):
    cfg, t, r = args
    spec = make_spec(cfg)
    return purity_check(spec, t, r, depth=max(r, DEFAULT_DEPTH), budget=cfg.budget)


def cmd_spectrum(cfg: RunConfig):
    spec = make_spec(cfg)
    ts = t_values(cfg, spec)
    r = cfg.depth if cfg.depth is not None else max(spec.m, spec.n)
    if r < 1:
        raise SpecError("depth must be >= 1")
    q, k = spec.field.q, spec.m + spec.n
    required = sum((q**h - 1) ** (k - 1) for h in range(1, r + 1)) * len(ts)
    if required > cfg.budget:
        raise BudgetError(required, cfg.budget)
    jobs = [(cfg, t, r) for t in ts]
    if cfg.jobs > 1 and len(ts) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            reports = list(pool.map(_spectrum_worker, jobs))
    else:
        reports = [_spectrum_worker(j) for j in jobs]
    reports.sort(key=lambda rep: rep.t)
    status = EXIT_OK if all(rep.passed for rep in reports) else EXIT_FAILED
    if cfg.format == "csv":
        return reports_to_csv(reports), status
    if cfg.pretty:
        lines = [f"Frobenius spectrum over GF({q}), r = {r}"]
        for rep in reports:
            mods = ", ".join(f"{x:.6f}" for x in rep.moduli)
            lines.append(f"t={rep.t:>4} rank={rep.rank_found} |gamma|=[{mods}] {'ok' if rep.passed else 'FLAGGED ' + '; '.join(rep.flags)}")
        return "\n".join(lines) + "\n", status
    return {"spec": spec.to_json(), "normalization": "sheaf", "reports": [rep.to_json() for rep in reports]}, status


def _parities(cfg: RunConfig):
    return {"both": (1, -1), "even": (1,), "odd": (-1,)}[cfg.parity]


def cmd_verify_ops(cfg: RunConfig):
    parities = _parities(cfg)
    literal = []
    if cfg.m is not None or cfg.n is not None:
        m, n = cfg.m or 0, cfg.n or 0
        if m + n < 1:
            raise SpecError("need m + n >= 1")
        records = []
        for eps in parities:
            ctx = OpContext(eps)
            records.append(check_inversion(ctx, m, n))
            records.append(check_kummer(ctx, m, n))
            literal.append(check_kummer_literal(ctx, m, n))
            if m >= 1:
                records.append(check_fourier(ctx, m, n))
                literal.append(check_fourier_display(ctx, m, n))
    else:
        if cfg.max_total < 1:
            raise SpecError("--max-total must be >= 1")
        records = run_suite(cfg.max_total, parities)
        for eps in parities:
            ctx = OpContext(eps)
            for m in range(1, 5):
                for n in range(4):
                    literal.append(check_fourier_display(ctx, m, n))
            for m in range(cfg.max_total + 1):
                for n in range(cfg.max_total + 1 - m):
                    if m + n:
                        literal.append(check_kummer_literal(ctx, m, n))
    failed = [r for r in records if not r["ok"]]
    status = EXIT_OK if not failed else EXIT_FAILED
    if cfg.pretty:
        lines = []
        for r in records:
            extra = r.get("witness", "")
            lines.append(f"{'PASS' if r['ok'] else 'FAIL'} {r['name']:<16} {r['case']} {extra}")
        lines.append(f"{len(records) - len(failed)}/{len(records)} identities hold")
        refuted = sum(1 for r in literal if not r["ok"])
        lines.append(f"alternative forms checked: {len(literal)}, refuted: {refuted}")
        return "\n".join(lines) + "\n", status
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["name", "case", "ok", "witness"])
        for r in records + literal:
            w.writerow([r["name"], json.dumps(r["case"]), r["ok"], r.get("witness", "")])
        return buf.getvalue(), status
    return {
        "checked": len(records),
        "failed": len(failed),
        "records": records,
        "alternative_forms": literal,
    }, status


def cmd_padic(cfg: RunConfig):
    p = cfg.p
    if p == 2:
        raise SpecError("p-adic suite needs an odd prime")
    if cfg.s != 1:
        raise SpecError("p-adic suite covers prime fields only (s = 1)")
    if cfg.precision < 4:
        raise PrecisionError(f"precision {cfg.precision} < 4 pi-adic digits")
    ctx = PiAdicCtx(p, cfg.precision)
    fld = field_create(p, 1)
    psi_twist = cfg.psi % p
    if psi_twist == 0:
        raise SpecError("additive character must be nontrivial")
    D = ctx.digits
    lifts = {x: teichmuller(p, x, D) for x in range(p)}
    mod = p**D
    mult_ok = all(lifts[x * y % p] == lifts[x] * lifts[y] % mod for x in range(p) for y in range(p))
    root_ok = all(pow(lifts[x], p - 1, mod) == 1 for x in range(1, p))
    thetas = {x: dwork_theta(ctx, x, psi_twist) for x in range(p)}
    one = dwork_theta(ctx, 1)
    congruence_ok = one.congruent(1 + ctx.pi, 2)
    pth_ok = all(th**p == 1 for th in thetas.values())
    psi = AddChar(fld, fld.elem(psi_twist))
    digit_table = [thetas[x].digit(1) for x in range(p)]
    psi_table = [psi.exponent(fld.elem(x)) for x in range(p)]
    grid = valuation_grid(p, p, 200)
    grid_fail = [r for r in grid if not r.ok]
    if cfg.format == "csv":
        status = EXIT_OK if not grid_fail else EXIT_FAILED
        return grid_to_csv(grid), status
    rng = random.Random(cfg.seed)
    growth = []
    for m in range(4):
        for n in range(4 - m):
            if m + n == 0 or (m and p < 3):
                continue
            alpha, beta = random_parameter_pack(rng, m, n, p)
            l = int(max(alpha + beta, default=0)) + 1
            g = coefficient_growth(alpha, beta, p, p, l, 200)
            l0 = default_l0(beta)
            s = max(0, int(max(alpha, default=-1)) + 1 - l0)
            d = d_series_convergence(alpha, beta, p, p, l0, s, 100)
            growth.append({"m": m, "n": n, "growth": g.to_json(), "series": d.to_json()})
    checks = {
        "teichmuller_multiplicative": mult_ok,
        "teichmuller_roots_of_unity": root_ok,
        "theta_one_congruent_1_plus_pi": congruence_ok,
        "theta_pth_power_is_one": pth_ok,
        "theta_digits_match_psi": digit_table == psi_table,
        "valuation_grid": not grid_fail,
        "growth_derived_bound": all(g["growth"]["derived_ok"] for g in growth),
        "series_diverges": all(g["series"]["diverges"] for g in growth),
    }
    status = EXIT_OK if all(checks.values()) else EXIT_FAILED
    report = {
        "p": p,
        "precision": cfg.precision,
        "checks": checks,
        "teichmuller": {str(x): lifts[x] for x in range(p)},
        "theta": {str(x): thetas[x].to_json() for x in range(p)},
        "theta_digit_table": digit_table,
        "psi_exponent_table": psi_table,
        "valuation_grid": {"rows": len(grid), "failures": len(grid_fail)},
        "growth": growth,
        "growth_stated_bound_ok": all(g["growth"]["stated_ok"] for g in growth),
    }
    if cfg.pretty:
        lines = [f"p-adic suite, p = {p}, precision pi^{cfg.precision}"]
        lines += [f"{'PASS' if ok else 'FAIL'} {name}" for name, ok in checks.items()]
        lines.append(f"stated growth bound holds on every pack: {report['growth_stated_bound_ok']}")
        return "\n".join(lines) + "\n", status
    return report, status


def cmd_all(cfg: RunConfig):
    out = {}
    status = EXIT_OK
    sub_cfg = RunConfig(**{**cfg.__dict__, "format": "json", "pretty": False})
    for name, fn in (("sum", cmd_sum), ("spectrum", cmd_spectrum), ("verify_ops", cmd_verify_ops), ("padic", cmd_padic)):
        try:
            body, code = fn(sub_cfg)
        except Exception as exc:  # reported per section, worst code wins
            body, code = {"error": str(exc)}, _exit_code(exc)
        out[name] = {"exit": code, "result": body}
        status = max(status, code)
    if cfg.pretty:
        lines = [f"{name}: exit {sec['exit']}" for name, sec in out.items()]
        return "\n".join(lines) + "\n", status
    return out, status


COMMANDS = {
    "sum": cmd_sum,
    "spectrum": cmd_spectrum,
    "verify-ops": cmd_verify_ops,
    "padic": cmd_padic,
    "all": cmd_all,
}


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, BudgetError):
        return EXIT_BUDGET
    if isinstance(exc, PrecisionError):
        return EXIT_PRECISION
    if isinstance(exc, (SpecError, ConfigError, FieldSizeError, ValueError)):
        return EXIT_SPEC
    if isinstance(exc, RootFindingError):
        return EXIT_FAILED
    return EXIT_INTERNAL


def _emit(body, cfg: RunConfig) -> None:
    text = body if isinstance(body, str) else json.dumps(body, indent=2, sort_keys=False) + "\n"
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    try:
        body, status = COMMANDS[cfg.command](cfg)
    except Exception as exc:
        code = _exit_code(exc)
        extra = f" (required {exc.required})" if isinstance(exc, BudgetError) else ""
        print(f"error: {exc}{extra}", file=sys.stderr)
        return code
    _emit(body, cfg)
    return status


if __name__ == "__main__":
    sys.exit(main())
