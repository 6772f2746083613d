import math

import numpy as np
import pytest

from hestonwings import EvalContext, ModelParams, from_meanreversion

# Typical equity market parameter set used throughout: vbar=0.0707,
# lambda=0.6067, c=0.2928, rho=-0.7571, v0=0.0654, maturity 1y.
VBAR, LAM, C, RHO, V0 = 0.0707, 0.6067, 0.2928, -0.7571, 0.0654


@pytest.fixture(scope="session")
def market():
    return from_meanreversion(VBAR, LAM, C, RHO, V0)


@pytest.fixture(scope="session")
def ctx():
    return EvalContext(maturity=1.0)


def random_admissible(rng, rho_zero=False):
    """One random parameter set satisfying every admissibility invariant."""
    return ModelParams(
        a=float(rng.uniform(0.0, 0.2)),
        b=-float(rng.uniform(0.05, 2.5)),
        c=float(rng.uniform(0.12, 1.0)),
        rho=0.0 if rho_zero else -float(rng.uniform(0.0, 0.95)),
        v0=float(rng.uniform(0.01, 0.5)),
    )


def log_tail_integral(g, lo, hi, n=121):
    """log of the integral of exp(g(L)) over [lo, hi] by Simpson in log domain."""
    grid = np.linspace(lo, hi, n)
    vals = np.array([g(float(L)) for L in grid])
    m = vals.max()
    from scipy.integrate import simpson

    return float(m + math.log(simpson(np.exp(vals - m), x=grid)))
