"""Model parameters, admissibility checks, and the evaluation context.

The variance process is dV = (a + b V) dt + c sqrt(V) dZ with spot/variance
correlation rho and spot variance v0.  All downstream asymptotics are proven
for rho <= 0, so validation rejects positive correlation outright, and the
pair (rho = 0, b = 0) is rejected because the drift coefficient b + s*rho*c
then vanishes identically and the explosion-time formula degenerates.

The Feller condition is deliberately NOT enforced: only a >= 0 is needed and
the tail exponents -3/4 + a/c^2 stay well defined at a = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError

UPPER = "upper"
LOWER = "lower"
SIDES = (UPPER, LOWER)


def _check_side(side: str) -> str:
    if side not in SIDES:
        raise DomainError(f"side must be 'upper' or 'lower', got {side!r}")
    return side


@dataclass(frozen=True)
class ModelParams:
    """Heston coefficients: variance inflow rate a, drift coefficient b,
    vol-of-vol c, correlation rho, spot variance v0.

    Instances are immutable, hashable, and validated on construction.
    """

    a: float
    b: float
    c: float
    rho: float
    v0: float

    def __post_init__(self):
        _check_params(self)

    @property
    def vbar(self) -> float:
        """Mean-reversion level a / (-b); requires b < 0."""
        if self.b >= 0:
            raise DomainError("mean-reversion level undefined for b = 0")
        return self.a / (-self.b)

    @property
    def lam(self) -> float:
        """Mean-reversion speed -b."""
        return -self.b


def _check_params(p: ModelParams) -> None:
    if not p.a >= 0:
        raise DomainError(f"a must be >= 0, got {p.a}")
    if not p.b <= 0:
        raise DomainError(f"b must be <= 0, got {p.b}")
    if not p.c > 0:
        raise DomainError(f"c must be > 0, got {p.c}")
    if not -1.0 <= p.rho <= 0.0:
        raise DomainError(f"rho must lie in [-1, 0], got {p.rho}")
    if not p.v0 > 0:
        raise DomainError(f"v0 must be > 0, got {p.v0}")
    if p.rho == 0.0 and p.b == 0.0:
        # b + s*rho*c == 0 for every s: no usable explosion-time formula.
        raise DomainError("rho = 0 together with b = 0 is inadmissible")


def validate(params: ModelParams) -> ModelParams:
    """Return ``params`` unchanged iff every admissibility invariant holds.

    Idempotent; raises DomainError naming the violated invariant otherwise.
    """
    _check_params(params)
    return params


def from_meanreversion(vbar: float, lam: float, c: float, rho: float, v0: float) -> ModelParams:
    """Build ModelParams from the (mean-reversion level, speed) parameterization.

    a = vbar * lam and b = -lam; requires vbar >= 0 and lam > 0.
    """
    if not lam > 0:
        raise DomainError(f"lambda must be > 0, got {lam}")
    if not vbar >= 0:
        raise DomainError(f"vbar must be >= 0, got {vbar}")
    return validate(ModelParams(a=vbar * lam, b=-lam, c=c, rho=rho, v0=v0))


@dataclass(frozen=True)
class EvalContext:
    """Evaluation context: maturity in years.  Spot and drift are fixed
    constants (S0 = 1, zero drift), not inputs."""

    maturity: float

    S0 = 1.0
    DRIFT = 0.0

    def __post_init__(self):
        if not self.maturity > 0:
            raise DomainError(f"maturity must be > 0, got {self.maturity}")


_NATIVE_KEYS = ("a", "b", "c", "rho", "v0")
_MEANREV_KEYS = ("vbar", "lambda", "c", "rho", "v0")


def params_from_mapping(doc: dict) -> ModelParams:
    """Build ModelParams from a flat key/value document.

    Accepts either {a, b, c, rho, v0} or {vbar, lambda, c, rho, v0}.
    Presence of keys from both forms is an error, as are unknown keys.
    """
    keys = set(doc)
    has_native = "a" in keys or "b" in keys
    has_meanrev = "vbar" in keys or "lambda" in keys
    if has_native and has_meanrev:
        raise DomainError("parameter document mixes {a, b} and {vbar, lambda} forms")
    if has_meanrev:
        missing = [k for k in _MEANREV_KEYS if k not in keys]
        extra = keys - set(_MEANREV_KEYS)
        if missing or extra:
            raise DomainError(f"bad parameter document: missing {missing}, unknown {sorted(extra)}")
        return from_meanreversion(
            float(doc["vbar"]), float(doc["lambda"]), float(doc["c"]), float(doc["rho"]), float(doc["v0"])
        )
    missing = [k for k in _NATIVE_KEYS if k not in keys]
    extra = keys - set(_NATIVE_KEYS)
    if missing or extra:
        raise DomainError(f"bad parameter document: missing {missing}, unknown {sorted(extra)}")
    return validate(
        ModelParams(a=float(doc["a"]), b=float(doc["b"]), c=float(doc["c"]), rho=float(doc["rho"]), v0=float(doc["v0"]))
    )
