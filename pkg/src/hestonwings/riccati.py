"""Affine transform (phi, psi) of the log-spot at complex arguments.

log E[exp(u) * X_t ... ] more precisely: log E[e^{u X_t}] = phi(u, t) + v0 * psi(u, t),
where psi solves the scalar Riccati ODE psi' = R(u, psi), psi(0) = 0, and
phi' = a * psi, phi(0) = 0, with

    R(u, v) = (u^2 - u)/2 + (c^2/2) v^2 + b v + u*rho*c*v.

Two independent evaluation routes are provided and must agree:

* ``transform_closed`` evaluates the algebraically stable closed form.  With
  chi = b + u*rho*c and d = sqrt(chi^2 - c^2 (u^2 - u)) on the principal
  branch (Re d >= 0), the Riccati roots are (-chi +- d)/c^2 and

      psi(u, t) = ((-chi - d)/c^2) * (1 - e^{-dt}) / (1 - g e^{-dt}),
      phi(u, t) = (a/c^2) * ((-chi - d) t - 2 log((1 - g e^{-dt}) / (1 - g))),

  with g = (chi + d)/(chi - d).  Because |e^{-dt}| <= 1 the formula never
  overflows, and the principal complex logarithm is continuous in t from
  phi = psi = 0 at t = 0 (no branch crossing; verified against the ODE).

* ``transform_ode`` integrates the Riccati system directly with an adaptive
  embedded Runge-Kutta scheme and serves as the oracle for the closed form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .errors import BranchError, DomainError, ExplodedError, ToleranceError
from .model import EvalContext, ModelParams, _check_side

_PSI_OVERFLOW = 1e12


@dataclass(frozen=True)
class TransformValue:
    """Pair (phi, psi) of the affine transform at one argument and time."""

    phi: complex
    psi: complex


@dataclass(frozen=True)
class RiccatiRHS:
    """Right-hand sides and discriminant data of the Riccati system."""

    params: ModelParams

    def F(self, s, v):
        return self.params.a * v

    def R(self, s, v):
        p = self.params
        return 0.5 * (s * s - s) + 0.5 * p.c * p.c * v * v + p.b * v + s * p.rho * p.c * v

    def chi(self, s):
        return chi(self.params, s)

    def delta(self, s):
        return delta(self.params, s)


def chi(params: ModelParams, s):
    """Drift coefficient b + s*rho*c of the Riccati quadratic."""
    return params.b + s * params.rho * params.c


def delta(params: ModelParams, s):
    """Discriminant chi(s)^2 - c^2 (s^2 - s); negative exactly on the explosive set."""
    x = chi(params, s)
    return x * x - params.c * params.c * (s * s - s)


def _phi_psi(params: ModelParams, u, t: float):
    """Vectorized unchecked closed-form evaluation; returns (phi, psi) arrays.

    Degenerate double-root points (d ~ 0, e.g. u = 0 with b = 0) are handled
    with the exact double-root solution.
    """
    a, b, c = params.a, params.b, params.c
    c2 = c * c
    u = np.asarray(u, dtype=complex)
    x = b + u * params.rho * c
    d = np.sqrt(x * x - c2 * (u * u - u))

    degen = np.abs(d) <= 1e-13 * np.maximum(1.0, np.abs(x))
    d_safe = np.where(degen, 1.0, d)

    g = (x + d_safe) / (x - d_safe)
    ed = np.exp(-d_safe * t)
    one_m_ged = 1.0 - g * ed
    psi = ((-x - d_safe) / c2) * (1.0 - ed) / one_m_ged
    phi = (a / c2) * ((-x - d_safe) * t - 2.0 * np.log(one_m_ged / (1.0 - g)))

    if np.any(degen):
        # Double root r = -chi/c^2: psi = r - r/(1 + r c^2 t / 2).
        r = -x / c2
        denom = 1.0 + 0.5 * r * c2 * t
        psi_d = r - r / denom
        phi_d = a * (r * t - (2.0 / c2) * np.log(denom))
        psi = np.where(degen, psi_d, psi)
        phi = np.where(degen, phi_d, phi)
    return phi, psi


def _mgf_log_raw(params: ModelParams, u, t: float):
    """Vectorized unchecked phi + v0*psi."""
    phi, psi = _phi_psi(params, u, t)
    return phi + params.v0 * psi


def transform_closed(params: ModelParams, u: complex, t: float) -> TransformValue:
    """Closed-form (phi, psi) at complex argument u, time t.

    Raises ExplodedError when t is at or beyond the explosion time of the
    real part of u (the transform's singularities all lie on the real axis,
    so Re u governs analyticity).
    """
    from .criticality import explosion_time

    if not t > 0:
        raise DomainError(f"t must be > 0, got {t}")
    if t >= explosion_time(params, complex(u).real):
        raise ExplodedError(f"transform exploded: t = {t} >= T*({complex(u).real})")
    phi, psi = _phi_psi(params, u, t)
    return TransformValue(phi=complex(phi), psi=complex(psi))


def transform_ode(params: ModelParams, u: complex, t: float, tol: float = 1e-12) -> TransformValue:
    """Oracle route: integrate the Riccati system from 0 to t adaptively.

    Local tolerance ``tol`` (absolute and relative).  Raises ExplodedError if
    |psi| crosses the overflow guard before t, ToleranceError if the
    integrator gives up.
    """
    if not t > 0:
        raise DomainError(f"t must be > 0, got {t}")
    uc = complex(u)
    a, b, c = params.a, params.b, params.c
    rc = params.rho * c
    quad = 0.5 * (uc * uc - uc)

    def rhs(_tt, y):
        psi = y[0] + 1j * y[1]
        dpsi = quad + 0.5 * c * c * psi * psi + (b + uc * rc) * psi
        dphi = a * psi
        return (dpsi.real, dpsi.imag, dphi.real, dphi.imag)

    def blow_up(_tt, y):
        return y[0] * y[0] + y[1] * y[1] - _PSI_OVERFLOW**2

    blow_up.terminal = True
    blow_up.direction = 1

    sol = solve_ivp(
        rhs, (0.0, t), (0.0, 0.0, 0.0, 0.0), method="DOP853", rtol=tol, atol=tol, events=blow_up, dense_output=False
    )
    if sol.status == 1:
        raise ExplodedError(f"psi crossed the overflow guard before t = {t} at u = {uc}")
    if sol.status != 0:
        raise ToleranceError(f"Riccati integration failed: {sol.message}")
    y = sol.y[:, -1]
    return TransformValue(phi=complex(y[2], y[3]), psi=complex(y[0], y[1]))


def mgf_log(params: ModelParams, ctx: EvalContext, u: complex) -> complex:
    """log E[e^{u X_T}] = phi(u, T) + v0 psi(u, T) at the context maturity."""
    tv = transform_closed(params, u, ctx.maturity)
    return tv.phi + params.v0 * tv.psi


def verify_branch_continuity(params: ModelParams, u: complex, t: float, n: int = 8, tol: float = 1e-8) -> None:
    """Compare the closed form against the ODE oracle at n intermediate times.

    A branch jump of the complex logarithm in phi would show up as a 2*pi*a/c^2
    discrepancy at some intermediate time; raises BranchError in that case.
    """
    for tt in np.linspace(t / n, t, n):
        closed = transform_closed(params, u, tt)
        ode = transform_ode(params, u, tt, tol=min(tol * 1e-3, 1e-12))
        if abs(closed.phi - ode.phi) > tol * max(1.0, abs(ode.phi)) or abs(closed.psi - ode.psi) > tol * max(
            1.0, abs(ode.psi)
        ):
            raise BranchError(f"closed form departs from the Riccati oracle at u = {u}, t = {tt}")


def singular_expansion(params: ModelParams, ctx: EvalContext, side: str):
    """Coefficients of the transform's expansion at the critical moment.

    Returns (pole_coeff, const_term, log_coeff) of

        phi(u-1, T) + v0 psi(u-1, T)
            = pole_coeff/(u* - u) + log_coeff * log(1/(u* - u)) + const_term + O(u* - u)

    approaching the singular abscissa u* of the given side:
    pole_coeff = beta^2 = 2 v0 / (c^2 sigma), log_coeff = 2a/c^2, and the
    constant term is the side's Gamma constant.
    """
    from .criticality import critical_point
    from .tails import gamma_constant

    _check_side(side)
    cp = critical_point(params, ctx, side)
    c2 = params.c * params.c
    pole_coeff = 2.0 * params.v0 / (c2 * cp.sigma)
    log_coeff = 2.0 * params.a / c2
    const_term = gamma_constant(params, ctx, side)
    return pole_coeff, const_term, log_coeff
