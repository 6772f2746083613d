"""Implied-volatility wing expansions and the SVI comparison utilities.

The total implied variance grows linearly in |log-strike| along each wing;
the refined expansion adds a constant and a log correction on top of the
square-root leading term.  Upper-wing coefficients are built from the
(C2, C3) tail constants, lower-wing ones from the mirrored set; the leading
coefficient squared equals the moment-formula slope function evaluated at
the critical moment shifted by one, an exact algebraic identity used as a
cross-check in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .model import UPPER, EvalContext, ModelParams, _check_side
from .tails import TailConstants


@dataclass(frozen=True)
class SmileCoeffs:
    """One wing's expansion coefficients for sigma * sqrt(T) in sqrt(|k|)."""

    side: str
    c_sqrt: float
    c_const: float
    c_log: float


@dataclass(frozen=True)
class SVIParams:
    """Raw SVI total-variance parameters."""

    a_svi: float
    b_svi: float
    r_svi: float
    m_svi: float
    s_svi: float

    def __post_init__(self):
        if self.b_svi < 0:
            raise DomainError(f"SVI b must be >= 0, got {self.b_svi}")
        if abs(self.r_svi) > 1:
            raise DomainError(f"SVI r must lie in [-1, 1], got {self.r_svi}")
        if self.s_svi < 0:
            raise DomainError(f"SVI s must be >= 0, got {self.s_svi}")


def in_regime(k: float) -> bool:
    """True when |k| is large enough for the wing expansions to be proven."""
    return abs(k) > 1.0


def smile_coeffs(consts: TailConstants, params: ModelParams) -> SmileCoeffs:
    """Wing coefficients from one tail's constants.

    Upper wing (x = C3 = A3, needs A3 > 2):
        c_sqrt = sqrt(2) (sqrt(A3-1) - sqrt(A3-2)),
        c_const = (A2/sqrt 2)(1/sqrt(A3-2) - 1/sqrt(A3-1)),
        c_log = (1/sqrt 2)(1/4 - a/c^2)(1/sqrt(A3-1) - 1/sqrt(A3-2)).
    Lower wing: same structure with (B3+2, B3+1) in place of (A3-1, A3-2),
    which needs B3 > -1.
    """
    quarter_minus = 0.25 - params.a / (params.c * params.c)
    if consts.side == UPPER:
        if consts.C3 <= 2.0:
            raise DomainError(f"upper wing needs A3 > 2, got {consts.C3}")
        hi, lo = consts.C3 - 1.0, consts.C3 - 2.0
    else:
        if consts.C3 <= -1.0:
            raise DomainError(f"lower wing needs B3 > -1, got {consts.C3}")
        hi, lo = consts.C3 + 2.0, consts.C3 + 1.0
    c_sqrt = math.sqrt(2.0) * (math.sqrt(hi) - math.sqrt(lo))
    c_const = consts.C2 / math.sqrt(2.0) * (1.0 / math.sqrt(lo) - 1.0 / math.sqrt(hi))
    c_log = quarter_minus / math.sqrt(2.0) * (1.0 / math.sqrt(hi) - 1.0 / math.sqrt(lo))
    return SmileCoeffs(side=consts.side, c_sqrt=c_sqrt, c_const=c_const, c_log=c_log)


def _wing_arg(coeffs: SmileCoeffs, k: float) -> float:
    if coeffs.side == UPPER:
        if k <= 0:
            raise DomainError(f"upper wing needs k > 0, got {k}")
        return k
    if k >= 0:
        raise DomainError(f"lower wing needs k < 0, got {k}")
    return -k


def implied_vol_expansion(coeffs: SmileCoeffs, ctx: EvalContext, k: float, order: int = 3) -> float:
    """Wing approximation of the implied volatility at log-strike k.

    order 1 keeps the sqrt term, 2 adds the constant, 3 adds the log
    correction (order 2 is a diagnostic intermediate, not part of the proven
    expansion).  Values at |k| <= 1 are out of the proven regime; see
    ``in_regime``.  Raises DomainError when the truncated sum is not positive.
    """
    if order not in (1, 2, 3):
        raise DomainError(f"order must be 1, 2 or 3, got {order}")
    w = _wing_arg(coeffs, k)
    total = coeffs.c_sqrt * math.sqrt(w)
    if order >= 2:
        total += coeffs.c_const
    if order >= 3:
        total += coeffs.c_log * math.log(w) / math.sqrt(w)
    if total <= 0:
        raise DomainError(f"wing expansion non-positive at k = {k} (order {order})")
    return total / math.sqrt(ctx.maturity)


def total_variance_expansion(coeffs: SmileCoeffs, k: float) -> float:
    """Three-term total-variance wing polynomial in (sqrt|k|, log|k|).

    W = c_sqrt^2 |k| + 2 c_sqrt c_const sqrt|k| + 2 c_sqrt c_log log|k|,
    i.e. the square of the order-3 expansion with the O(1)-and-below terms
    dropped.
    """
    w = _wing_arg(coeffs, k)
    total = coeffs.c_sqrt**2 * w + 2.0 * coeffs.c_sqrt * coeffs.c_const * math.sqrt(w)
    total += 2.0 * coeffs.c_sqrt * coeffs.c_log * math.log(w)
    if total < 0:
        raise DomainError(f"total-variance expansion negative at k = {k}")
    return total


def smile_sqrt_form(consts: TailConstants, ctx: EvalContext, K: float) -> float:
    """Two-square-root wing approximation of the implied volatility at strike K.

    sigma = sqrt(2/T) * (sqrt(R + w) - sqrt(R)) with w = |log K| and the
    radicand R = (C3 - 2) w - C2 sqrt(w) - (power_exp + 1/2) log(w) on the
    upper wing (C3 + 1 in place of C3 - 2 on the lower).  Un-Taylored parent
    of the polynomial expansion; typically tighter at moderate strikes.
    Requires both radicands positive.
    """
    if not K > 0:
        raise DomainError(f"strike must be positive, got {K}")
    log_k = math.log(K)
    if consts.side == UPPER:
        if log_k <= 0:
            raise DomainError(f"upper-wing sqrt form needs K > 1, got {K}")
        w = log_k
        lo = consts.C3 - 2.0
    else:
        if log_k >= 0:
            raise DomainError(f"lower-wing sqrt form needs K < 1, got {K}")
        w = -log_k
        lo = consts.C3 + 1.0
    # power_exp = a/c^2 - 3/4 shifted by the half-log-log substitution
    log_coeff = consts.power_exp + 0.5
    r_small = lo * w - consts.C2 * math.sqrt(w) - log_coeff * math.log(w)
    r_big = r_small + w
    if r_small <= 0 or r_big <= 0:
        raise DomainError(f"sqrt-form radicand not positive at K = {K}")
    return math.sqrt(2.0 / ctx.maturity) * (math.sqrt(r_big) - math.sqrt(r_small))


def svi(k: float, p: SVIParams) -> float:
    """Raw SVI total variance at log-strike k."""
    z = k - p.m_svi
    return p.a_svi + p.b_svi * (z * p.r_svi + math.sqrt(z * z + p.s_svi))


def svi_wing_expansion(p: SVIParams) -> tuple[float, float]:
    """(slope, intercept) of the asymptotically linear right wing of SVI.

    slope = b(1 + r), intercept = a - b m (1 + r); no constant term survives
    in sqrt(SVI), which is exactly where it departs from the refined wing
    expansion (whose c_const is nonzero at finite maturity).
    """
    slope = p.b_svi * (1.0 + p.r_svi)
    if slope <= 0:
        raise DomainError("SVI wing expansion needs b(1 + r) > 0")
    return slope, p.a_svi - p.b_svi * p.m_svi * (1.0 + p.r_svi)
