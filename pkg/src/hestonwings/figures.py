"""Reproduction of the diagnostic figures: plot-ready tables plus rendered PNGs.

Five figures are produced:

* fig1: minus log of the log-spot density with its two wing asymptotes.
* fig2: -log D / log x against the power-law exponent (upper tail).
* fig3: log(x^C3 D) / sqrt(log x) against the sqrt-log coefficient.
* fig4: the ratio of the density to its slowly varying part against the
  amplitude constant.
* fig5: exact total implied variance on [-2, 2] with the squared order-1 and
  order-3 wing approximations.

Each table is written as CSV (shortest round-trip float formatting, blank
cells where a column is out of domain) and rendered to PNG with matplotlib.
"""

from __future__ import annotations

import math
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .errors import DomainError
from .model import LOWER, UPPER, EvalContext, ModelParams
from .reference import ContourSpec, DampingSpec, call_price_numeric, density_numeric_log, implied_vol
from .smile import implied_vol_expansion, smile_coeffs, smile_sqrt_form
from .tails import logspot_density_asymptotic_log, tail_constants

FIGURE_NAMES = ("fig1", "fig2", "fig3", "fig4", "fig5")


def _fmt(v) -> str:
    return "" if v is None else repr(float(v))


def write_csv(path: str, header: list[str], rows: list[tuple]) -> None:
    lines = [",".join(header)]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def logspot_table(params: ModelParams, ctx: EvalContext, x_grid, quad_tol: float):
    """fig1 rows: (x, -log D_log(x), right asymptote, left asymptote)."""
    upper = tail_constants(params, ctx, UPPER, quad_tol=quad_tol)
    lower = tail_constants(params, ctx, LOWER, quad_tol=quad_tol)
    spec = ContourSpec(quad_tol=quad_tol)
    rows = []
    for x in x_grid:
        log_dlog = x + density_numeric_log(params, ctx, x, spec)
        right = -logspot_density_asymptotic_log(upper, x) if x > 1 else None
        left = -logspot_density_asymptotic_log(lower, x) if x < -1 else None
        rows.append((x, -log_dlog, right, left))
    return ["x", "neg_log_density", "right_asym", "left_asym"], rows


def density_check_tables(params: ModelParams, ctx: EvalContext, log_grid, quad_tol: float):
    """fig2/fig3/fig4 rows from one shared sweep of the numeric density."""
    consts = tail_constants(params, ctx, UPPER, quad_tol=quad_tol)
    spec = ContourSpec(quad_tol=quad_tol)
    rows2, rows3, rows4 = [], [], []
    for L in log_grid:
        ld = density_numeric_log(params, ctx, L, spec)
        rows2.append((L, -ld / L, consts.C3))
        rows3.append((L, (consts.C3 * L + ld) / math.sqrt(L), consts.C2))
        slowly = consts.C2 * math.sqrt(L) + consts.power_exp * math.log(L)
        rows4.append((L, math.exp(ld + consts.C3 * L - slowly), consts.C1))
    header = ["log_x"]
    return (
        (header + ["ratio", "C3"], rows2),
        (header + ["ratio", "C2"], rows3),
        (header + ["ratio", "C1"], rows4),
    )


def variance_table(params: ModelParams, ctx: EvalContext, k_grid, quad_tol: float):
    """fig5 rows: (k, exact total variance, squared order-1, squared order-3)."""
    upper = smile_coeffs(tail_constants(params, ctx, UPPER, quad_tol=quad_tol), params)
    lower = smile_coeffs(tail_constants(params, ctx, LOWER, quad_tol=quad_tol), params)
    dspec = DampingSpec(quad_tol=quad_tol)
    T = ctx.maturity
    rows = []
    for k in k_grid:
        coeffs = upper if k > 0 else lower
        price = call_price_numeric(params, ctx, k, dspec)
        guess = None
        if abs(k) > 1:
            guess = implied_vol_expansion(coeffs, ctx, k, order=3)
        exact = implied_vol(price, k, T, initial_guess=guess)
        o1 = o3 = None
        if k != 0:
            try:
                o1 = T * implied_vol_expansion(coeffs, ctx, k, order=1) ** 2
                o3 = T * implied_vol_expansion(coeffs, ctx, k, order=3) ** 2
            except DomainError:
                o1 = o3 = None
        rows.append((k, T * exact * exact, o1, o3))
    return ["k", "exact_total_variance", "order1_sq", "order3_sq"], rows


def smile_table(
    params: ModelParams,
    ctx: EvalContext,
    k_grid,
    orders=(1, 3),
    include_exact: bool = True,
    include_sqrt_form: bool = False,
    quad_tol: float = 1e-10,
):
    """Smile comparison rows: k, exact vol, one column per expansion order, sqrt form."""
    upper = tail_constants(params, ctx, UPPER, quad_tol=quad_tol)
    lower = tail_constants(params, ctx, LOWER, quad_tol=quad_tol)
    cu, cl = smile_coeffs(upper, params), smile_coeffs(lower, params)
    dspec = DampingSpec(quad_tol=quad_tol)
    header = ["k"]
    if include_exact:
        header.append("exact_vol")
    header += [f"order{o}" for o in orders]
    if include_sqrt_form:
        header.append("sqrt_form")
    rows = []
    for k in k_grid:
        coeffs = cu if k > 0 else cl
        consts = upper if k > 0 else lower
        row = [k]
        if include_exact:
            price = call_price_numeric(params, ctx, k, dspec)
            guess = None
            if abs(k) > 1:
                guess = implied_vol_expansion(coeffs, ctx, k, order=3)
            row.append(implied_vol(price, k, ctx.maturity, initial_guess=guess))
        for order in orders:
            try:
                row.append(None if k == 0 else implied_vol_expansion(coeffs, ctx, k, order=order))
            except DomainError:
                row.append(None)
        if include_sqrt_form:
            try:
                row.append(None if k == 0 else smile_sqrt_form(consts, ctx, math.exp(k)))
            except DomainError:
                row.append(None)
        rows.append(tuple(row))
    return header, rows


def _line(ax, rows, ix, iy, **kw):
    xs = [r[ix] for r in rows if r[iy] is not None]
    ys = [r[iy] for r in rows if r[iy] is not None]
    ax.plot(xs, ys, **kw)


def render_fig1(rows, path: str) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    _line(ax, rows, 0, 1, color="tab:blue", label="numeric")
    _line(ax, rows, 0, 2, color="tab:red", ls="--", label="right asymptote")
    _line(ax, rows, 0, 3, color="tab:green", ls=":", label="left asymptote")
    ax.set_xlabel("log-spot x")
    ax.set_ylabel("-log density")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def _render_ratio(rows, path: str, ylabel: str) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    _line(ax, rows, 0, 1, color="tab:blue", label="numeric ratio")
    ax.axhline(rows[0][2], color="k", ls="--", lw=1, label="constant")
    ax.set_xlabel("log x")
    ax.set_ylabel(ylabel)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def render_fig5(rows, path: str) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    _line(ax, rows, 0, 1, color="tab:blue", label="exact")
    _line(ax, rows, 0, 2, color="tab:orange", ls="--", label="order 1")
    _line(ax, rows, 0, 3, color="tab:green", ls=":", label="order 3")
    ax.set_xlabel("log-strike k")
    ax.set_ylabel("total implied variance")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def write_figures(
    params: ModelParams,
    ctx: EvalContext,
    out_dir: str,
    quad_tol: float = 1e-10,
    log_grid=None,
    k_grid=None,
    x_grid=None,
) -> list[str]:
    """Compute and write fig1..fig5 CSVs and PNGs; returns the paths written.

    Partial outputs are removed if any figure fails.
    """
    if log_grid is None:
        log_grid = np.linspace(5.0, 40.0, 36)
    if k_grid is None:
        k_grid = np.linspace(-2.0, 2.0, 41)
    if x_grid is None:
        x_grid = np.linspace(-12.0, 12.0, 49)
    os.makedirs(out_dir, exist_ok=True)
    written: list[str] = []

    def emit(name, header, rows, renderer):
        csv_path = os.path.join(out_dir, f"{name}.csv")
        png_path = os.path.join(out_dir, f"{name}.png")
        write_csv(csv_path, header, rows)
        written.append(csv_path)
        renderer(rows, png_path)
        written.append(png_path)

    try:
        h1, r1 = logspot_table(params, ctx, x_grid, quad_tol)
        emit("fig1", h1, r1, render_fig1)
        (h2, r2), (h3, r3), (h4, r4) = density_check_tables(params, ctx, log_grid, quad_tol)
        emit("fig2", h2, r2, lambda rows, p: _render_ratio(rows, p, "-log D / log x"))
        emit("fig3", h3, r3, lambda rows, p: _render_ratio(rows, p, "log(x^C3 D) / sqrt(log x)"))
        emit("fig4", h4, r4, lambda rows, p: _render_ratio(rows, p, "density / slowly varying part"))
        h5, r5 = variance_table(params, ctx, k_grid, quad_tol)
        emit("fig5", h5, r5, render_fig5)
    except BaseException:
        for path in written:
            if os.path.exists(path):
                os.remove(path)
        raise
    return written
