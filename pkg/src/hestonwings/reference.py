"""Independent numerical engine used to certify every asymptotic formula.

* ``density_numeric_log``: spot density via inversion of the moment transform
  along a vertical contour.  The contour abscissa is placed at the saddle of
  the integrand (asymptotic formula for large |log x|, convex minimization
  otherwise), which keeps the oscillatory cancellation bounded and lets the
  result be assembled in the log domain.
* ``call_price_numeric``: undiscounted call prices by damped Fourier
  integration; out-of-the-money strikes priced directly, in-the-money strikes
  priced as puts and converted through parity.
* ``bs_call`` / ``implied_vol``: Black-Scholes reference and a safeguarded
  Newton inversion.

All contour and pricing integrals use a panel Gauss-Legendre rule with the
panel width tied to the oscillation wavelength, auto-extended truncation, and
a panel-halving refinement check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import ndtr

from .criticality import critical_point, fundamental_strip
from .errors import (
    ArbitrageError,
    BoundsError,
    ConvergenceError,
    DomainError,
    NegativeMassError,
    NoExplosionError,
    StripError,
    ToleranceError,
)
from .model import LOWER, UPPER, EvalContext, ModelParams
from .riccati import _mgf_log_raw

DEFAULT_QUAD_TOL = 1e-10
DEFAULT_CALL_ALPHA = 29.1
DEFAULT_PUT_ALPHA = -4.4


@dataclass(frozen=True)
class ContourSpec:
    """Vertical-contour parameters for the density integral.

    ``abscissa`` must lie strictly inside the fundamental strip
    (s_- + 1, s_+ + 1); None selects the saddle automatically.  ``truncation``
    caps |Im u|; None auto-extends until the tail is below ``quad_tol``.
    """

    abscissa: float | None = None
    truncation: float | None = None
    quad_tol: float = DEFAULT_QUAD_TOL


@dataclass(frozen=True)
class DampingSpec:
    """Damping parameters for Fourier pricing.

    ``alpha`` > 0 prices calls, ``alpha`` < -1 prices puts; None selects the
    defaults 29.1 (calls) / -4.4 (puts).
    """

    alpha: float | None = None
    truncation: float | None = None
    quad_tol: float = DEFAULT_QUAD_TOL


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)
_BLOCK_PANELS = 64
_MAX_BLOCKS = 40000


def _gl_block(f, start: float, width: float, n_panels: int) -> tuple[float, float, float]:
    """Integrate f over n_panels consecutive panels of the given width.

    Returns (signed integral, integral of |f|, end point); the gross mass
    bounds the roundoff floor of the cancellation-prone signed value.
    """
    edges = start + width * np.arange(n_panels + 1)
    mids = 0.5 * (edges[:-1] + edges[1:])
    ys = (mids[:, None] + 0.5 * width * _GL_NODES[None, :]).ravel()
    vals = np.asarray(f(ys), dtype=float).reshape(n_panels, _GL_NODES.size)
    signed = float((vals @ _GL_WEIGHTS).sum() * 0.5 * width)
    gross = float((np.abs(vals) @ _GL_WEIGHTS).sum() * 0.5 * width)
    return signed, gross, float(edges[-1])


def _sweep(f, width: float, quad_tol: float, truncation: float | None) -> tuple[float, float, float, float]:
    """One pass over the half line; returns (total, y_reached, block scale, gross).

    The block scale (largest |block contribution|) measures the integrand's
    natural magnitude before cancellation; the gross mass (integral of |f|)
    bounds the machine-roundoff floor of the signed total.
    """
    if truncation is not None:
        n = max(int(math.ceil(truncation / width)), 1)
        weff = truncation / n
        total, y, scale, gross = 0.0, 0.0, 0.0, 0.0
        while n > 0:
            take = min(n, 512)
            part, g, y = _gl_block(f, y, weff, take)
            total += part
            gross += g
            scale = max(scale, abs(part))
            n -= take
        return total, truncation, scale, gross
    total, y, quiet, blocks, scale, gross = 0.0, 0.0, 0, 0, 0.0, 0.0
    while quiet < 3:
        part, g, y = _gl_block(f, y, width, _BLOCK_PANELS)
        total += part
        gross += g
        scale = max(scale, abs(part))
        blocks += 1
        if blocks > _MAX_BLOCKS:
            raise ToleranceError("oscillatory integral failed to decay within the block budget")
        if abs(part) < 0.02 * quad_tol * max(abs(total), 1e-3 * scale, 1e-300):
            quiet += 1
        else:
            quiet = 0
    return total, y, scale, gross


def _oscillatory_halfline(f, wavelength: float, quad_tol: float, truncation: float | None = None) -> tuple[float, float]:
    """Half-line integral of an oscillatory decaying integrand.

    Panel width starts at a quarter wavelength; the whole sweep is repeated at
    half width until two successive sweeps agree to quad_tol, measured against
    the larger of the net value and a small fraction of the pre-cancellation
    block scale.  Agreement is always granted at the machine-roundoff floor of
    the gross mass, below which no refinement can help.
    """
    width = wavelength / 4.0
    prev, y_used, scale, gross = _sweep(f, width, quad_tol, truncation)
    for _ in range(3):
        width /= 2.0
        cur, y_used, scale, gross = _sweep(f, width, quad_tol, truncation)
        floor = 100.0 * np.finfo(float).eps * gross
        if abs(cur - prev) <= max(quad_tol * max(abs(cur), 1e-3 * scale), floor, 1e-300):
            return cur, y_used
        prev = cur
    raise ToleranceError("panel refinement did not converge to the requested tolerance")


def _strip_bounds(params: ModelParams, ctx: EvalContext) -> tuple[float, float]:
    lo, hi = fundamental_strip(params, ctx)
    return lo + 1.0, hi + 1.0


def _auto_abscissa(params: ModelParams, ctx: EvalContext, L: float) -> float:
    """Saddle abscissa: asymptotic formula for large |L|, convex search otherwise."""
    lo, hi = _strip_bounds(params, ctx)
    if L >= 4.0 and math.isfinite(hi):
        cp = critical_point(params, ctx, UPPER)
        beta = math.sqrt(2.0 * params.v0 / (params.c * params.c * cp.sigma))
        return hi - beta / math.sqrt(L)
    if L <= -4.0 and math.isfinite(lo):
        cp = critical_point(params, ctx, LOWER)
        beta = math.sqrt(2.0 * params.v0 / (params.c * params.c * cp.sigma))
        return lo + beta / math.sqrt(-L)
    T = ctx.maturity
    blo = lo + 1e-6 * max(1.0, abs(lo)) if math.isfinite(lo) else -50.0
    bhi = hi - 1e-6 * max(1.0, abs(hi)) if math.isfinite(hi) else 50.0

    def height(u):
        return float(np.real(_mgf_log_raw(params, u - 1.0, T))) - u * L

    res = minimize_scalar(height, bounds=(blo, bhi), method="bounded", options={"xatol": 1e-8})
    return float(res.x)


def density_numeric_log(params: ModelParams, ctx: EvalContext, log_x: float, spec: ContourSpec | None = None) -> float:
    """log D_T(e^{log_x}) by contour inversion of the moment transform.

    Exploits conjugate symmetry: the full-line integral equals twice the real
    part of the half-line integral.  The integrand is normalized by its value
    at the contour's real axis crossing so only logs of moderate numbers are
    ever formed.
    """
    spec = spec or ContourSpec()
    L = float(log_x)
    lo, hi = _strip_bounds(params, ctx)
    if spec.abscissa is not None:
        if not lo < spec.abscissa < hi:
            raise StripError(f"abscissa {spec.abscissa} outside the fundamental strip ({lo}, {hi})")
        uhat = spec.abscissa
    else:
        uhat = _auto_abscissa(params, ctx, L)
    T = ctx.maturity
    M = float(np.real(_mgf_log_raw(params, uhat - 1.0, T)))

    def integrand(ys):
        return np.exp(-1j * ys * L + _mgf_log_raw(params, uhat - 1.0 + 1j * ys, T) - M).real

    # Phase gradient at the axis is -L plus the transform's real-axis slope;
    # at the saddle they cancel, but an explicit abscissa may sit anywhere.
    slope = _transform_slope(params, uhat - 1.0, T)
    freq = max(abs(L), abs(L - slope), 4.0)
    wavelength = 2.0 * math.pi / freq
    total, _ = _oscillatory_halfline(integrand, wavelength, spec.quad_tol, spec.truncation)
    if total <= 0.0:
        raise NegativeMassError(f"non-positive contour integral at log_x = {L}; increase the truncation")
    return -uhat * L + M + math.log(total / math.pi)


def _resolve_alpha(params: ModelParams, ctx: EvalContext, spec: DampingSpec, want_call: bool) -> float:
    alpha = spec.alpha
    if alpha is None:
        alpha = DEFAULT_CALL_ALPHA if want_call else DEFAULT_PUT_ALPHA
    if -1.0 <= alpha <= 0.0:
        raise DomainError(f"damping alpha must lie outside [-1, 0], got {alpha}")
    s_lo, s_hi = fundamental_strip(params, ctx)
    if alpha > 0 and not alpha + 1.0 < s_hi:
        raise DomainError(f"call damping needs alpha + 1 < s_+ = {s_hi}, got alpha = {alpha}")
    if alpha < -1.0 and not alpha + 1.0 > s_lo:
        raise DomainError(f"put damping needs alpha + 1 > s_- = {s_lo}, got alpha = {alpha}")
    return alpha


def _transform_slope(params: ModelParams, u: float, T: float) -> float:
    """d/du of the real log-transform at a real in-strip point.

    Along the vertical contour through u this is the phase gradient of the
    transform factor at the real axis (Cauchy-Riemann), which adds to the
    explicit oscillation frequency of the integrand.
    """
    h = 1e-4 * max(1.0, abs(u))
    lo = float(np.real(_mgf_log_raw(params, u - h, T)))
    hi = float(np.real(_mgf_log_raw(params, u + h, T)))
    return (hi - lo) / (2.0 * h)


def _damped_integral(params: ModelParams, ctx: EvalContext, k: float, alpha: float, spec: DampingSpec) -> tuple[float, float]:
    """Damped Fourier pricing integral, normalized: returns (total, M) with
    price = exp(-alpha k + M) * total / pi.  ``total`` may come out <= 0 from
    roundoff when the price is below the quadrature resolution."""
    T = ctx.maturity
    M = float(np.real(_mgf_log_raw(params, alpha + 1.0, T)))
    a2a = alpha * alpha + alpha
    two_a1 = 2.0 * alpha + 1.0

    def integrand(us):
        num = np.exp(-1j * us * k + _mgf_log_raw(params, alpha + 1.0 + 1j * us, T) - M)
        den = a2a - us * us + 1j * two_a1 * us
        return (num / den).real

    freq = abs(k) + abs(_transform_slope(params, alpha + 1.0, T))
    wavelength = 2.0 * math.pi / max(freq, 2.0)
    total, _ = _oscillatory_halfline(integrand, wavelength, spec.quad_tol, spec.truncation)
    return total, M


def _damped_price(params: ModelParams, ctx: EvalContext, k: float, alpha: float, spec: DampingSpec) -> float:
    total, M = _damped_integral(params, ctx, k, alpha, spec)
    if total <= 0.0:
        return 0.0
    log_val = -alpha * k + M + math.log(total / math.pi)
    if log_val < -745.0:
        return 0.0
    return math.exp(log_val)


def call_price_numeric(params: ModelParams, ctx: EvalContext, k: float, spec: DampingSpec | None = None) -> float:
    """Undiscounted call price at log-strike k by damped Fourier integration.

    k >= 0 is priced directly with a positive damping constant; k < 0 is
    priced as a put and converted by parity C = P + 1 - e^k.  The result is
    clamped to its no-arbitrage interval; a violation beyond quad_tol raises
    BoundsError since it signals a convention bug rather than noise.
    """
    spec = spec or DampingSpec()
    want_call = k >= 0 if spec.alpha is None else spec.alpha > 0
    alpha = _resolve_alpha(params, ctx, spec, want_call)
    raw = _damped_price(params, ctx, k, alpha, spec)
    price = raw if alpha > 0 else raw + 1.0 - math.exp(k)
    lower, upper = max(1.0 - math.exp(k), 0.0), 1.0
    slack = spec.quad_tol
    if price < lower - slack or price > upper + slack:
        raise BoundsError(f"price {price} at k = {k} violates [{lower}, {upper}] beyond quad_tol")
    return min(max(price, lower), upper)


def call_price_numeric_log(params: ModelParams, ctx: EvalContext, k: float, spec: DampingSpec | None = None) -> float:
    """log of the call price at log-strike k > 0, assembled fully in the log domain.

    Use for far-out-of-the-money strikes where the price itself underflows.
    """
    if k <= 0:
        raise DomainError(f"log-domain call price needs k > 0, got {k}")
    spec = spec or DampingSpec()
    alpha = _resolve_alpha(params, ctx, spec, want_call=True)
    if alpha < 0:
        raise DomainError("log-domain call price needs a call damping (alpha > 0)")
    total, M = _damped_integral(params, ctx, k, alpha, spec)
    if total <= 0.0:
        raise ToleranceError(f"non-positive pricing integral at k = {k}; price below quadrature resolution")
    return -alpha * k + M + math.log(total / math.pi)


def bs_call(k: float, vol: float, T: float) -> float:
    """Undiscounted Black-Scholes call with S0 = 1 and zero rates at log-strike k."""
    if not vol > 0:
        raise DomainError(f"vol must be > 0, got {vol}")
    if not T > 0:
        raise DomainError(f"T must be > 0, got {T}")
    st = vol * math.sqrt(T)
    d1 = (-k + 0.5 * vol * vol * T) / st
    return float(ndtr(d1) - math.exp(k) * ndtr(d1 - st))


def _bs_vega(k: float, vol: float, T: float) -> float:
    st = vol * math.sqrt(T)
    d1 = (-k + 0.5 * vol * vol * T) / st
    return math.exp(-0.5 * d1 * d1) / math.sqrt(2.0 * math.pi) * math.sqrt(T)


def implied_vol(price: float, k: float, T: float, initial_guess: float | None = None) -> float:
    """Invert the Black-Scholes formula: the unique vol with bs_call = price.

    Safeguarded Newton (bisection fallback) iterated to machine-level price
    agreement.  ``initial_guess`` should be the caller's wing-expansion value
    for |k| > 1 when a model is at hand; the parameterless default is 0.2.
    Raises ArbitrageError when price is outside (max(1 - e^k, 0), 1).
    """
    lower, upper = max(1.0 - math.exp(k), 0.0), 1.0
    if not lower < price < upper:
        raise ArbitrageError(f"price {price} outside the no-arbitrage interval ({lower}, {upper}) at k = {k}")
    lo, hi = 1e-12, 1.0
    while bs_call(k, hi, T) < price:
        hi *= 2.0
        if hi > 1e6:
            raise ConvergenceError("implied vol bracket expansion failed")
    v = initial_guess if initial_guess is not None else 0.2
    v = min(max(v, lo * 2), hi)
    for _ in range(300):
        f = bs_call(k, v, T) - price
        if abs(f) <= 1e-14 * max(price, 1e-300) or hi - lo <= 1e-13 * max(1.0, v):
            return v
        if f > 0:
            hi = v
        else:
            lo = v
        vega = _bs_vega(k, v, T)
        step = v - f / vega if vega > 1e-300 else None
        v = step if step is not None and lo < step < hi else 0.5 * (lo + hi)
    raise ConvergenceError(f"implied vol iteration did not converge at k = {k}")
