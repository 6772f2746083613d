"""Tail constants and the asymptotic density / survival / call-price formulas.

For the right tail the spot density behaves like

    D_T(x) ~ C1 * x^{-C3} * exp(C2 sqrt(log x)) * (log x)^{-3/4 + a/c^2},

with C3 = s_+ + 1, C2 = 2 beta, beta = sqrt(2 v0 / (c^2 sigma)), and
C1 = exp(Gamma) * beta^{1/2 - 2a/c^2} / (2 sqrt(pi)).  The left tail mirrors
this with the lower critical point.  Everything here is evaluated in the log
domain: at log x = 100 the density is around exp(-3200) and would underflow.

Gamma combines the critical slope/curvature with a regularized integral of
psi at the critical moment; the integrand difference of two diverging terms
is switched to its exact limit expansion near the upper endpoint to avoid
catastrophic cancellation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .criticality import critical_point
from .errors import DomainError, ToleranceError
from .model import LOWER, UPPER, EvalContext, ModelParams, _check_side
from .riccati import _phi_psi, chi, delta


@dataclass(frozen=True)
class TailConstants:
    """One tail's density-asymptotics constants plus beta and Gamma.

    C1/C2/C3 are the amplitude, sqrt-log coefficient and power-law exponent;
    power_exp = -3/4 + a/c^2 is the slowly varying log-power.
    """

    side: str
    C1: float
    C2: float
    C3: float
    beta: float
    gamma_const: float
    power_exp: float


def _psi_at(params: ModelParams, s: float, t: float) -> float:
    phi, psi = _phi_psi(params, s, t)
    return float(np.real(psi))


def gamma_constant(params: ModelParams, ctx: EvalContext, side: str, quad_tol: float = 1e-10) -> float:
    """The constant term Gamma of the transform's singular expansion for a side.

    Gamma = -v0 ((b + s* rho c)/c^2 + kappa/(c^2 sigma^2)) + (2a/c^2) log(T/sigma) + a I,
    where I integrates psi(s*, t) - 2/(c^2 (T - t)) over [0, T].  Near t = T the
    integrand is replaced by its limit expansion -chi(s*)/c^2 + Delta(s*) (T-t)/(6 c^2).
    """
    _check_side(side)
    cp = critical_point(params, ctx, side)
    T = ctx.maturity
    c2 = params.c * params.c
    x = chi(params, cp.s_crit)
    dlt = delta(params, cp.s_crit)
    cutoff = 1e-6 * T

    def integrand(t):
        tau = T - t
        if tau < cutoff:
            return -x / c2 + dlt * tau / (6.0 * c2)
        return _psi_at(params, cp.s_crit, t) - 2.0 / (c2 * tau)

    integral, err = quad(integrand, 0.0, T, epsabs=quad_tol, epsrel=quad_tol, limit=400, points=(T - cutoff,))
    if err > 1e4 * quad_tol * max(1.0, abs(integral)):
        raise ToleranceError(f"Gamma integral error estimate {err} too large")

    return (
        -params.v0 * (x / c2 + cp.kappa / (c2 * cp.sigma * cp.sigma))
        + (2.0 * params.a / c2) * math.log(T / cp.sigma)
        + params.a * integral
    )


def tail_constants(params: ModelParams, ctx: EvalContext, side: str, quad_tol: float = 1e-10) -> TailConstants:
    """Assemble the full constant set for one tail."""
    _check_side(side)
    cp = critical_point(params, ctx, side)
    c2 = params.c * params.c
    beta = math.sqrt(2.0 * params.v0 / (c2 * cp.sigma))
    gamma = gamma_constant(params, ctx, side, quad_tol=quad_tol)
    a_over_c2 = params.a / c2
    c1 = math.exp(gamma) * beta ** (0.5 - 2.0 * a_over_c2) / (2.0 * math.sqrt(math.pi))
    c3 = cp.s_crit + 1.0 if side == UPPER else -(cp.s_crit + 1.0)
    return TailConstants(
        side=side,
        C1=c1,
        C2=2.0 * beta,
        C3=c3,
        beta=beta,
        gamma_const=gamma,
        power_exp=-0.75 + a_over_c2,
    )


def amplitude_product_form(params: ModelParams, ctx: EvalContext, side: str, maturity_scaled: bool = True) -> float:
    """Alternative closed form for the tail amplitude C1, via a complex sinh product.

    The sinh argument is half the square root of Delta at the critical moment,
    which is negative, so the product is evaluated in complex arithmetic (the
    result is real).  With ``maturity_scaled`` the argument carries a factor T;
    that reading agrees with the Gamma-integral route exactly (checked
    analytically and at T != 1 in the test suite), while the unscaled reading
    only coincides at T = 1.  Cross-check only; ``tail_constants`` is the
    authoritative route.
    """
    _check_side(side)
    cp = critical_point(params, ctx, side)
    T = ctx.maturity
    a, c, v0 = params.a, params.c, params.v0
    c2 = c * c
    s = cp.s_crit
    x = chi(params, s)
    dlt = complex(delta(params, s))

    root = np.sqrt(dlt)
    arg = 0.5 * (T * root if maturity_scaled else root)
    bracket = 2.0 * root / (c2 * s * (s - 1.0) * np.sinh(arg))
    prefactor = (
        (1.0 / (2.0 * math.sqrt(math.pi)))
        * (2.0 * v0) ** (0.25 - a / c2)
        * c ** (2.0 * a / c2 - 0.5)
        * cp.sigma ** (-a / c2 - 0.25)
    )
    expo = math.exp(-v0 * (x / c2 + cp.kappa / (c2 * cp.sigma * cp.sigma)) - a * T / c2 * x)
    return float((prefactor * expo * bracket ** (2.0 * a / c2)).real)


def density_asymptotic_log(consts: TailConstants, log_x: float) -> float:
    """log of the leading tail asymptotic of the spot density at log x = log_x.

    Upper tail needs log_x > 0, lower tail log_x < 0; the asymptotic regime
    proper is |log_x| > 1 (smaller values are the caller's responsibility).
    """
    if consts.side == UPPER:
        if log_x <= 0:
            raise DomainError(f"upper tail needs log_x > 0, got {log_x}")
        L = log_x
        return math.log(consts.C1) - consts.C3 * L + consts.C2 * math.sqrt(L) + consts.power_exp * math.log(L)
    if log_x >= 0:
        raise DomainError(f"lower tail needs log_x < 0, got {log_x}")
    L = -log_x
    return math.log(consts.C1) + consts.C3 * log_x + consts.C2 * math.sqrt(L) + consts.power_exp * math.log(L)


def logspot_density_asymptotic_log(consts: TailConstants, x: float) -> float:
    """log of the tail asymptotic of the log-spot density at log-spot x.

    Related to the spot-density formula by D_log(x) = e^x D(e^x).
    """
    if consts.side == UPPER:
        if x <= 0:
            raise DomainError(f"upper tail needs x > 0, got {x}")
        return math.log(consts.C1) - (consts.C3 - 1.0) * x + consts.C2 * math.sqrt(x) + consts.power_exp * math.log(x)
    if x >= 0:
        raise DomainError(f"lower tail needs x < 0, got {x}")
    ax = -x
    return math.log(consts.C1) - (consts.C3 + 1.0) * ax + consts.C2 * math.sqrt(ax) + consts.power_exp * math.log(ax)


def survival_asymptotic_log(consts: TailConstants, log_x: float) -> float:
    """log of the asymptotic survival probability P[S_T > x]; upper tail only."""
    if consts.side != UPPER:
        raise DomainError("survival asymptotic is defined for the upper tail only")
    if log_x <= 0:
        raise DomainError(f"survival asymptotic needs log_x > 0, got {log_x}")
    L = log_x
    return (
        math.log(consts.C1 / (consts.C3 - 1.0))
        + (1.0 - consts.C3) * L
        + consts.C2 * math.sqrt(L)
        + consts.power_exp * math.log(L)
    )


def call_price_asymptotic_log(consts: TailConstants, log_K: float) -> float:
    """log of the asymptotic call price at log-strike log_K; upper tail, C3 > 2."""
    if consts.side != UPPER:
        raise DomainError("call-price asymptotic is defined for the upper tail only")
    if consts.C3 <= 2.0:
        raise DomainError(f"call-price asymptotic needs C3 > 2, got {consts.C3}")
    if log_K <= 0:
        raise DomainError(f"call-price asymptotic needs log_K > 0, got {log_K}")
    L = log_K
    return (
        math.log(consts.C1 / ((consts.C3 - 1.0) * (consts.C3 - 2.0)))
        + (2.0 - consts.C3) * L
        + consts.C2 * math.sqrt(L)
        + consts.power_exp * math.log(L)
    )
