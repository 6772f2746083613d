"""Command-line front end.

Subcommands: constants, figures, density, price, impvol, smile, tstar,
critical, transform.  Global flags: --params <path>, --maturity <T>,
--format human|csv|json, --quad-tol, --out-dir.

The parameter file is a flat key/value document (JSON object or `key = value`
lines) holding either {a, b, c, rho, v0} or {vbar, lambda, c, rho, v0}.

Exit codes: 0 ok, 2 domain error, 3 convergence/tolerance error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import figures as figmod
from .criticality import critical_point, explosion_time
from .errors import DomainError, HestonError
from .model import LOWER, UPPER, EvalContext, ModelParams, params_from_mapping
from .reference import ContourSpec, DampingSpec, call_price_numeric, density_numeric_log, implied_vol
from .riccati import transform_closed
from .smile import smile_coeffs
from .tails import tail_constants

_EXIT_IO = 4


def load_params(path: str) -> ModelParams:
    with open(path) as fh:
        text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError:
        doc = {}
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, value = line.replace(":", "=", 1).partition("=")
            doc[key.strip()] = float(value)
    if not isinstance(doc, dict):
        raise ValueError(f"parameter file {path} is not a flat key/value document")
    return params_from_mapping(doc)


def _fmt_scalar(v):
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    v = float(v)
    if math.isinf(v):
        return "+inf" if v > 0 else "-inf"
    if math.isnan(v):
        return "nan"
    return repr(v)


def _json_scalar(v):
    if v is None or isinstance(v, str):
        return v
    v = float(v)
    if math.isfinite(v):
        return v
    return _fmt_scalar(v)


def emit_table(header: list[str], rows: list[tuple], fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        payload = [{h: _json_scalar(v) for h, v in zip(header, row)} for row in rows]
        out.write(json.dumps(payload, indent=2) + "\n")
    elif fmt == "csv":
        out.write(",".join(header) + "\n")
        for row in rows:
            out.write(",".join(_fmt_scalar(v) for v in row) + "\n")
    else:
        widths = [max(len(h), *(len(_fmt_scalar(r[i])) for r in rows)) if rows else len(h) for i, h in enumerate(header)]
        out.write("  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip() + "\n")
        for row in rows:
            out.write("  ".join(_fmt_scalar(v).ljust(w) for v, w in zip(row, widths)).rstrip() + "\n")


def emit_document(doc: dict, fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps({k: _json_scalar(v) for k, v in doc.items()}, indent=2) + "\n")
    elif fmt == "csv":
        emit_table(list(doc.keys()), [tuple(doc.values())], "csv", out)
    else:
        for k, v in doc.items():
            out.write(f"{k} = {_fmt_scalar(v)}\n")


def _constants_row(params: ModelParams, ctx: EvalContext, side: str, quad_tol: float) -> dict:
    cp = critical_point(params, ctx, side)
    consts = tail_constants(params, ctx, side, quad_tol=quad_tol)
    coeffs = smile_coeffs(consts, params)
    return {
        "side": side,
        "s_crit": cp.s_crit,
        "sigma": cp.sigma,
        "kappa": cp.kappa,
        "C1": consts.C1,
        "C2": consts.C2,
        "C3": consts.C3,
        "beta": consts.beta,
        "gamma_const": consts.gamma_const,
        "power_exp": consts.power_exp,
        "c_sqrt": coeffs.c_sqrt,
        "c_const": coeffs.c_const,
        "c_log": coeffs.c_log,
    }


def cmd_constants(args, params, ctx) -> int:
    sides = [args.side] if args.side in (UPPER, LOWER) else [UPPER, LOWER]
    rows = [_constants_row(params, ctx, side, args.quad_tol) for side in sides]
    if len(rows) == 1:
        emit_document(rows[0], args.format)
    else:
        header = list(rows[0].keys())
        emit_table(header, [tuple(r.values()) for r in rows], args.format)
    return 0


def cmd_figures(args, params, ctx) -> int:
    log_grid = np.linspace(args.logx_min, args.logx_max, args.logx_points)
    k_grid = np.linspace(args.k_min, args.k_max, args.k_points)
    x_grid = np.linspace(args.x_min, args.x_max, args.x_points)
    written = figmod.write_figures(
        params, ctx, args.out_dir, quad_tol=args.quad_tol, log_grid=log_grid, k_grid=k_grid, x_grid=x_grid
    )
    for path in written:
        print(path)
    return 0


def _parse_grid(text: str):
    lo, hi, n = text.split(":")
    n = int(n)
    if n < 2 or not float(lo) < float(hi):
        raise DomainError(f"bad grid spec {text!r}: need min < max and n >= 2")
    return np.linspace(float(lo), float(hi), n)


def cmd_density(args, params, ctx) -> int:
    spec = ContourSpec(abscissa=args.abscissa, truncation=args.truncation, quad_tol=args.quad_tol)
    if args.logx_grid:
        grid = _parse_grid(args.logx_grid)
        rows = [(L, density_numeric_log(params, ctx, L, spec)) for L in grid]
        emit_table(["log_x", "log_density"], rows, args.format)
    else:
        value = density_numeric_log(params, ctx, args.logx, spec)
        emit_document({"log_x": args.logx, "log_density": value}, args.format)
    return 0


def cmd_price(args, params, ctx) -> int:
    spec = DampingSpec(alpha=args.alpha, truncation=args.truncation, quad_tol=args.quad_tol)
    price = call_price_numeric(params, ctx, args.k, spec)
    emit_document({"k": args.k, "price": price}, args.format)
    return 0


def cmd_impvol(args, params, ctx) -> int:
    if args.price is not None:
        price = args.price
    else:
        price = call_price_numeric(params, ctx, args.k, DampingSpec(quad_tol=args.quad_tol))
    vol = implied_vol(price, args.k, ctx.maturity)
    emit_document({"k": args.k, "price": price, "implied_vol": vol}, args.format)
    return 0


def cmd_smile(args, params, ctx) -> int:
    orders = tuple(int(o) for o in args.orders.split(","))
    grid = np.linspace(args.k_min, args.k_max, args.points)
    header, rows = figmod.smile_table(
        params,
        ctx,
        grid,
        orders=orders,
        include_exact=args.exact,
        include_sqrt_form=args.sqrt_form,
        quad_tol=args.quad_tol,
    )
    emit_table(header, rows, args.format)
    return 0


def cmd_tstar(args, params, ctx) -> int:
    emit_document({"s": args.s, "tstar": explosion_time(params, args.s)}, args.format)
    return 0


def cmd_critical(args, params, ctx) -> int:
    cp = critical_point(params, ctx, args.side)
    emit_document({"side": cp.side, "s_crit": cp.s_crit, "sigma": cp.sigma, "kappa": cp.kappa}, args.format)
    return 0


def cmd_transform(args, params, ctx) -> int:
    t = args.t if args.t is not None else ctx.maturity
    tv = transform_closed(params, complex(args.u_re, args.u_im), t)
    emit_document(
        {
            "u_re": args.u_re,
            "u_im": args.u_im,
            "t": t,
            "phi_re": tv.phi.real,
            "phi_im": tv.phi.imag,
            "psi_re": tv.psi.real,
            "psi_im": tv.psi.imag,
        },
        args.format,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hestonwings", description="Heston tail and smile asymptotics toolkit")
    parser.add_argument("--params", required=True, help="parameter file (flat key/value document)")
    parser.add_argument("--maturity", type=float, default=1.0, help="maturity in years (default 1)")
    parser.add_argument("--format", choices=("human", "csv", "json"), default="human")
    parser.add_argument("--quad-tol", type=float, default=1e-10, dest="quad_tol")
    parser.add_argument("--out-dir", default=".", dest="out_dir")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constants", help="critical points, tail constants and wing coefficients")
    p.add_argument("--side", choices=(UPPER, LOWER, "both"), default="both")
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("figures", help="write fig1..fig5 CSV tables and PNG renderings")
    p.add_argument("--logx-min", type=float, default=5.0)
    p.add_argument("--logx-max", type=float, default=40.0)
    p.add_argument("--logx-points", type=int, default=36)
    p.add_argument("--k-min", type=float, default=-2.0)
    p.add_argument("--k-max", type=float, default=2.0)
    p.add_argument("--k-points", type=int, default=41)
    p.add_argument("--x-min", type=float, default=-12.0)
    p.add_argument("--x-max", type=float, default=12.0)
    p.add_argument("--x-points", type=int, default=49)
    p.set_defaults(func=cmd_figures)

    p = sub.add_parser("density", help="log of the spot density by contour inversion")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--logx", type=float)
    group.add_argument("--logx-grid", help="grid as lo:hi:n")
    p.add_argument("--abscissa", type=float, default=None)
    p.add_argument("--truncation", type=float, default=None)
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("price", help="call price by damped Fourier integration")
    p.add_argument("--k", type=float, required=True, help="log-strike")
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--truncation", type=float, default=None)
    p.set_defaults(func=cmd_price)

    p = sub.add_parser("impvol", help="implied volatility (model smile, or invert a given price)")
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--price", type=float, default=None)
    p.set_defaults(func=cmd_impvol)

    p = sub.add_parser("smile", help="smile comparison table")
    p.add_argument("--k-min", type=float, default=-2.0)
    p.add_argument("--k-max", type=float, default=2.0)
    p.add_argument("--points", type=int, default=41)
    p.add_argument("--orders", default="1,3")
    p.add_argument("--exact", action="store_true")
    p.add_argument("--sqrt-form", action="store_true", dest="sqrt_form")
    p.set_defaults(func=cmd_smile)

    p = sub.add_parser("tstar", help="moment explosion time")
    p.add_argument("--s", type=float, required=True)
    p.set_defaults(func=cmd_tstar)

    p = sub.add_parser("critical", help="critical moment, slope and curvature")
    p.add_argument("--side", choices=(UPPER, LOWER), required=True)
    p.set_defaults(func=cmd_critical)

    p = sub.add_parser("transform", help="closed-form transform values (debug)")
    p.add_argument("--u-re", type=float, required=True)
    p.add_argument("--u-im", type=float, default=0.0)
    p.add_argument("--t", type=float, default=None)
    p.set_defaults(func=cmd_transform)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        params = load_params(args.params)
        ctx = EvalContext(maturity=args.maturity)
        return args.func(args, params, ctx)
    except HestonError as err:
        print(f"{type(err).__name__}: {err}", file=sys.stderr)
        return err.exit_code
    except OSError as err:
        print(f"IOError: {err}", file=sys.stderr)
        return _EXIT_IO
    except ValueError as err:
        print(f"ValueError: {err}", file=sys.stderr)
        return _EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
