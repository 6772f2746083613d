"""Heston tail asymptotics, implied-volatility wing expansions, and the
numerical reference engine that certifies them."""

from .criticality import (
    CriticalPoint,
    critical_point,
    explosion_time,
    explosion_time_derivative,
    explosion_time_oracle,
    fundamental_strip,
    lee_psi,
)
from .errors import (
    ArbitrageError,
    BoundsError,
    BranchError,
    ConvergenceError,
    DomainError,
    ExplodedError,
    HestonError,
    NegativeMassError,
    NoExplosionError,
    StripError,
    ToleranceError,
)
from .model import (
    LOWER,
    UPPER,
    EvalContext,
    ModelParams,
    from_meanreversion,
    params_from_mapping,
    validate,
)
from .reference import (
    ContourSpec,
    DampingSpec,
    bs_call,
    call_price_numeric,
    call_price_numeric_log,
    density_numeric_log,
    implied_vol,
)
from .riccati import (
    RiccatiRHS,
    TransformValue,
    chi,
    delta,
    mgf_log,
    singular_expansion,
    transform_closed,
    transform_ode,
    verify_branch_continuity,
)
from .smile import (
    SmileCoeffs,
    SVIParams,
    implied_vol_expansion,
    in_regime,
    smile_coeffs,
    smile_sqrt_form,
    svi,
    svi_wing_expansion,
    total_variance_expansion,
)
from .tails import (
    TailConstants,
    amplitude_product_form,
    call_price_asymptotic_log,
    density_asymptotic_log,
    gamma_constant,
    logspot_density_asymptotic_log,
    survival_asymptotic_log,
    tail_constants,
)

__all__ = [
    "ArbitrageError",
    "BoundsError",
    "BranchError",
    "ContourSpec",
    "ConvergenceError",
    "CriticalPoint",
    "DampingSpec",
    "DomainError",
    "EvalContext",
    "ExplodedError",
    "HestonError",
    "LOWER",
    "ModelParams",
    "NegativeMassError",
    "NoExplosionError",
    "RiccatiRHS",
    "SVIParams",
    "SmileCoeffs",
    "StripError",
    "TailConstants",
    "ToleranceError",
    "TransformValue",
    "UPPER",
    "amplitude_product_form",
    "bs_call",
    "call_price_asymptotic_log",
    "call_price_numeric",
    "call_price_numeric_log",
    "chi",
    "critical_point",
    "delta",
    "density_asymptotic_log",
    "density_numeric_log",
    "explosion_time",
    "explosion_time_derivative",
    "explosion_time_oracle",
    "from_meanreversion",
    "fundamental_strip",
    "gamma_constant",
    "implied_vol",
    "implied_vol_expansion",
    "in_regime",
    "lee_psi",
    "logspot_density_asymptotic_log",
    "mgf_log",
    "params_from_mapping",
    "singular_expansion",
    "smile_coeffs",
    "smile_sqrt_form",
    "survival_asymptotic_log",
    "svi",
    "svi_wing_expansion",
    "tail_constants",
    "total_variance_expansion",
    "transform_closed",
    "transform_ode",
    "validate",
    "verify_branch_continuity",
]

__version__ = "0.1.0"
