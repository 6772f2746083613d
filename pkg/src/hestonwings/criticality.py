"""Moment-explosion times, critical moments, slopes and curvatures.

T*(s) is the explosion time of the s-th moment of the spot.  On the
explosive set {Delta(s) < 0} it has the closed form

    T*(s) = (2 / sqrt(-Delta(s))) * atan2(sqrt(-Delta(s)), chi(s)),

which equals the arctan form with the +pi correction exactly when
chi(s) < 0 and needs no correction when chi(s) > 0 (possible on the lower
tail); atan2 covers both branches as well as chi = 0.  The independent
oracle integrates 1/R(s, .) over the half line by adaptive quadrature.

The critical moment of a side solves T*(s) = T by bracketed root-finding
between the Delta = 0 boundary (where T* diverges) and a geometrically
expanded far edge.  The critical slope is |dT*/ds| there; the curvature is
obtained by Richardson-extrapolated central differences of the analytic
first derivative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from scipy.integrate import quad
from scipy.optimize import brentq

from .errors import ConvergenceError, DomainError, NoExplosionError, ToleranceError
from .model import LOWER, UPPER, EvalContext, ModelParams, _check_side
from .riccati import chi, delta


@dataclass(frozen=True)
class CriticalPoint:
    """One tail's critical moment with slope and curvature (both in time units)."""

    side: str
    s_crit: float
    sigma: float
    kappa: float


def explosion_time(params: ModelParams, s: float) -> float:
    """T*(s); +inf when the s-th moment never explodes (Delta(s) >= 0)."""
    d = delta(params, s)
    if d >= 0:
        return math.inf
    root = math.sqrt(-d)
    return 2.0 / root * math.atan2(root, chi(params, s))


def explosion_time_oracle(params: ModelParams, s: float, tol: float = 1e-10) -> float:
    """Quadrature oracle for T*(s): adaptive integral of 1/R(s, .) over [0, inf)."""
    if delta(params, s) >= 0:
        return math.inf
    b, c, rc = params.b, params.c, params.rho * params.c
    quad_coeff = 0.5 * (s * s - s)
    lin = b + s * rc
    c2h = 0.5 * c * c

    def inv_r(eta):
        return 1.0 / (quad_coeff + eta * (lin + c2h * eta))

    val, err = quad(inv_r, 0.0, math.inf, epsabs=tol, epsrel=tol, limit=400)
    if err > 100 * tol * max(1.0, abs(val)):
        raise ToleranceError(f"explosion-time quadrature error {err} at s = {s}")
    return val


def explosion_time_derivative(params: ModelParams, s: float) -> float:
    """Closed-form dT*/ds on the explosive set; DomainError when Delta(s) >= 0."""
    d = delta(params, s)
    if d >= 0:
        raise DomainError(f"dT*/ds undefined: Delta({s}) >= 0")
    x = chi(params, s)
    rc = params.rho * params.c
    c2 = params.c * params.c
    dp = 2.0 * rc * x - c2 * (2.0 * s - 1.0)
    return -explosion_time(params, s) * dp / (2.0 * d) + (x * dp - 2.0 * rc * d) / (d * c2 * (s * s - s))


def _explosive_boundary(params: ModelParams, side: str) -> float:
    """Root of Delta(s) = 0 bounding the explosive region of the side.

    Upper: the larger root (> 1); lower: the smaller root (< 0).  Raises
    NoExplosionError when the side has no explosive region (|rho| = 1 cases).
    """
    b, c, rho = params.b, params.c, params.rho
    aq = c * c * (rho * rho - 1.0)
    bq = 2.0 * rho * c * b + c * c
    cq = b * b
    if aq == 0.0:
        # rho = -1: Delta is affine with positive slope; only the lower side explodes.
        if side == UPPER:
            raise NoExplosionError("no upper moment explosion at rho = -1")
        return -cq / bq
    disc = bq * bq - 4.0 * aq * cq
    root_lo = (-bq + math.sqrt(disc)) / (2.0 * aq)
    root_hi = (-bq - math.sqrt(disc)) / (2.0 * aq)
    return root_hi if side == UPPER else root_lo


@lru_cache(maxsize=256)
def _critical_point_cached(params: ModelParams, maturity: float, side: str) -> CriticalPoint:
    T = maturity
    boundary = _explosive_boundary(params, side)

    def objective(s):
        return explosion_time(params, s) - T

    # T* diverges at the boundary; push just inside the explosive region.
    eps = 1e-9 * max(1.0, abs(boundary))
    near = boundary + eps if side == UPPER else boundary - eps
    while delta(params, near) >= 0:
        eps *= 4.0
        near = boundary + eps if side == UPPER else boundary - eps
    if objective(near) <= 0:
        raise ConvergenceError(f"no bracket for T*(s) = {T} near the Delta boundary on the {side} side")

    far = near + max(1.0, abs(near)) if side == UPPER else near - max(1.0, abs(near))
    for _ in range(200):
        if objective(far) < 0:
            break
        far += far - near
    else:
        raise ConvergenceError(f"T*(s) never drops below {T} on the {side} side")

    lo, hi = (near, far) if side == UPPER else (far, near)
    s_crit = brentq(objective, lo, hi, xtol=1e-12, rtol=8.9e-16, maxiter=300)

    slope = explosion_time_derivative(params, s_crit)
    sigma = abs(slope)

    # Curvature: Richardson-extrapolated central differences of the analytic slope.
    h = 1e-5 * max(1.0, abs(s_crit))
    d1 = (explosion_time_derivative(params, s_crit + h) - explosion_time_derivative(params, s_crit - h)) / (2.0 * h)
    d2 = (explosion_time_derivative(params, s_crit + h / 2) - explosion_time_derivative(params, s_crit - h / 2)) / h
    kappa = (4.0 * d2 - d1) / 3.0

    return CriticalPoint(side=side, s_crit=s_crit, sigma=sigma, kappa=kappa)


def critical_point(params: ModelParams, ctx: EvalContext, side: str) -> CriticalPoint:
    """Critical moment, slope and curvature of the given side at the context maturity.

    Raises NoExplosionError when all moments on the side are finite for every
    maturity (then the tail asymptotics do not apply).
    """
    _check_side(side)
    return _critical_point_cached(params, ctx.maturity, side)


def fundamental_strip(params: ModelParams, ctx: EvalContext) -> tuple[float, float]:
    """(s_-, s_+): the open interval of finite moments at the context maturity."""
    try:
        hi = critical_point(params, ctx, UPPER).s_crit
    except NoExplosionError:
        hi = math.inf
    try:
        lo = critical_point(params, ctx, LOWER).s_crit
    except NoExplosionError:
        lo = -math.inf
    return lo, hi


def lee_psi(x: float) -> float:
    """Moment-formula slope function 2 - 4(sqrt(x^2 + x) - x), mapped [0, inf) -> (0, 2].

    Evaluated in the overflow-free form 2 - 4/(1 + sqrt(1 + 1/x)).
    """
    if x < 0:
        raise DomainError(f"lee_psi requires x >= 0, got {x}")
    if x == 0:
        return 2.0
    return 2.0 - 4.0 / (1.0 + math.sqrt(1.0 + 1.0 / x))
