import math

import numpy as np
import pytest

from hestonwings import (
    DomainError,
    EvalContext,
    ModelParams,
    TailConstants,
    amplitude_product_form,
    call_price_asymptotic_log,
    critical_point,
    density_asymptotic_log,
    gamma_constant,
    logspot_density_asymptotic_log,
    mgf_log,
    survival_asymptotic_log,
    tail_constants,
)

from conftest import random_admissible


def test_upper_constants_market_values(market, ctx):
    tc = tail_constants(market, ctx, "upper")
    assert tc.C3 == pytest.approx(33.2124, abs=5e-3)
    assert tc.C2 == pytest.approx(12.3533, abs=5e-3)
    assert tc.C1 == pytest.approx(2311.69, rel=5e-3)
    assert tc.power_exp == pytest.approx(-0.75 + market.a / market.c**2, rel=1e-14)


def test_constants_internal_identities(market, ctx):
    tc = tail_constants(market, ctx, "upper")
    # C2 c sqrt(sigma) / (2 sqrt(2 v0)) = 1 by definition of beta.
    cp = critical_point(market, ctx, "upper")
    assert tc.C2 * market.c * math.sqrt(cp.sigma) / (2 * math.sqrt(2 * market.v0)) == pytest.approx(1.0, rel=1e-14)
    assert tc.C2 == pytest.approx(2 * tc.beta, rel=1e-15)
    expect_c1 = math.exp(tc.gamma_const) * tc.beta ** (0.5 - 2 * market.a / market.c**2) / (2 * math.sqrt(math.pi))
    assert tc.C1 == pytest.approx(expect_c1, rel=1e-14)


def test_lower_constants(market, ctx):
    tc = tail_constants(market, ctx, "lower")
    cp = critical_point(market, ctx, "lower")
    assert tc.C3 == pytest.approx(-(cp.s_crit + 1.0), rel=1e-14)
    assert tc.C3 > -1.0
    assert tc.C1 > 0 and tc.C2 > 0


def test_gamma_with_zero_inflow(ctx):
    # With a = 0 the integral and log terms vanish and Gamma is explicit.
    p = ModelParams(a=0.0, b=-0.6067, c=0.2928, rho=-0.7571, v0=0.0654)
    cp = critical_point(p, ctx, "upper")
    c2 = p.c**2
    explicit = -p.v0 * ((p.b + cp.s_crit * p.rho * p.c) / c2 + cp.kappa / (c2 * cp.sigma**2))
    assert gamma_constant(p, ctx, "upper") == pytest.approx(explicit, rel=1e-12)


def test_gamma_quad_tol_invariance(market, ctx):
    g10 = gamma_constant(market, ctx, "upper", quad_tol=1e-10)
    g12 = gamma_constant(market, ctx, "upper", quad_tol=1e-12)
    assert abs(g10 - g12) <= 1e-8


def test_gamma_against_transform_limit(market, ctx):
    # The constant term of the singular expansion, extracted numerically from
    # the transform itself, must approach the quadrature Gamma.
    cp = critical_point(market, ctx, "upper")
    beta_sq = 2 * market.v0 / (market.c**2 * cp.sigma)
    log_coeff = 2 * market.a / market.c**2
    gamma = gamma_constant(market, ctx, "upper")
    errs = []
    for j in (2, 3, 4):
        s = cp.s_crit - 10.0**-j
        est = mgf_log(market, ctx, s).real - beta_sq / (cp.s_crit - s) - log_coeff * math.log(1.0 / (cp.s_crit - s))
        errs.append(abs(est - gamma))
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 5e-3 * max(1.0, abs(gamma))


def test_product_form_cross_check(market, ctx):
    # The complex-sinh product form agrees with the Gamma route only in the
    # maturity-scaled reading; at T = 1 the readings coincide, so T = 2
    # discriminates.
    tc = tail_constants(market, ctx, "upper")
    assert amplitude_product_form(market, ctx, "upper", maturity_scaled=True) == pytest.approx(tc.C1, rel=1e-6)
    assert amplitude_product_form(market, ctx, "upper", maturity_scaled=False) == pytest.approx(tc.C1, rel=1e-6)

    ctx2 = EvalContext(maturity=2.0)
    tc2 = tail_constants(market, ctx2, "upper")
    scaled = amplitude_product_form(market, ctx2, "upper", maturity_scaled=True)
    unscaled = amplitude_product_form(market, ctx2, "upper", maturity_scaled=False)
    assert scaled == pytest.approx(tc2.C1, rel=1e-6)
    assert abs(unscaled - tc2.C1) > 0.1 * tc2.C1


def test_product_form_lower_side(market, ctx):
    tc = tail_constants(market, ctx, "lower")
    assert amplitude_product_form(market, ctx, "lower", maturity_scaled=True) == pytest.approx(tc.C1, rel=1e-6)


def test_appendix_style_zero_correlation_identity(ctx):
    # At rho = 0 the squared sqrt-log coefficient has an independent closed
    # form in (s_+, b, c, v0, T); both routes must agree tightly.
    rng = np.random.default_rng(42)
    for _ in range(10):
        p = random_admissible(rng, rho_zero=True)
        T = float(rng.choice([0.5, 1.0, 2.0]))
        cc = EvalContext(maturity=T)
        cp = critical_point(p, cc, "upper")
        s = cp.s_crit
        a2_sq = 8.0 * p.v0 / (p.c**2 * cp.sigma)
        closed = (
            16.0
            * p.v0
            * s
            * (s - 1)
            * (p.c**2 * s * (s - 1) - p.b**2)
            / (p.c**2 * (2 * s - 1) * (T * p.c**2 * s * (s - 1) - 2 * p.b))
        )
        assert a2_sq == pytest.approx(closed, rel=1e-10)


def _toy_constants(**kw):
    base = dict(side="upper", C1=1.0, C2=0.0, C3=2.0, beta=1.0, gamma_const=0.0, power_exp=0.0)
    base.update(kw)
    return TailConstants(**base)


def test_density_asymptotic_pure_power_law():
    assert density_asymptotic_log(_toy_constants(), 1.0) == pytest.approx(-2.0, rel=1e-15)


def test_density_asymptotic_wrong_sign(market, ctx):
    up = tail_constants(market, ctx, "upper")
    lo = tail_constants(market, ctx, "lower")
    with pytest.raises(DomainError):
        density_asymptotic_log(up, -3.0)
    with pytest.raises(DomainError):
        density_asymptotic_log(lo, 3.0)


def test_logspot_relation(market, ctx):
    # log-spot density asymptote equals the spot one shifted by x.
    for side, x in (("upper", 20.0), ("lower", -10.0)):
        tc = tail_constants(market, ctx, side)
        assert logspot_density_asymptotic_log(tc, x) == pytest.approx(
            density_asymptotic_log(tc, x) + x, rel=1e-12
        )


def test_logspot_behavior(market, ctx):
    up = tail_constants(market, ctx, "upper")
    lo = tail_constants(market, ctx, "lower")
    xs = np.linspace(5.0, 25.0, 9)
    vals = [logspot_density_asymptotic_log(up, x) for x in xs]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    # dominated by the linear term on each wing
    assert logspot_density_asymptotic_log(lo, -10.0) == pytest.approx(-(lo.C3 + 1.0) * 10.0, rel=0.35)


def test_survival_relation(market, ctx):
    tc = tail_constants(market, ctx, "upper")
    for L in (10.0, 50.0):
        diff = survival_asymptotic_log(tc, L) - density_asymptotic_log(tc, L) - L
        assert diff == pytest.approx(-math.log(tc.C3 - 1.0), rel=1e-12)
    lo = tail_constants(market, ctx, "lower")
    with pytest.raises(DomainError):
        survival_asymptotic_log(lo, 10.0)


def test_survival_decreasing_in_power_exponent():
    a = _toy_constants(C3=5.0)
    b = _toy_constants(C3=50.0)
    gap_a = survival_asymptotic_log(a, 2.0) - density_asymptotic_log(a, 2.0)
    gap_b = survival_asymptotic_log(b, 2.0) - density_asymptotic_log(b, 2.0)
    assert gap_b < gap_a


def test_call_price_relation(market, ctx):
    tc = tail_constants(market, ctx, "upper")
    for L in (5.0, 20.0):
        diff = call_price_asymptotic_log(tc, L) - survival_asymptotic_log(tc, L) - L
        assert diff == pytest.approx(-math.log(tc.C3 - 2.0), rel=1e-12)
    vals = [call_price_asymptotic_log(tc, L) for L in (10.0, 20.0, 40.0, 80.0)]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_call_price_requires_enough_moments():
    with pytest.raises(DomainError):
        call_price_asymptotic_log(_toy_constants(C3=1.9), 5.0)


def test_survival_against_numeric_tail(market, ctx):
    # Tail mass from the numeric density, accumulated in the log domain,
    # must agree with the survival asymptote within its sqrt-log envelope.
    from hestonwings import density_numeric_log

    from conftest import log_tail_integral

    tc = tail_constants(market, ctx, "upper")
    L = 50.0
    numeric = log_tail_integral(lambda x: x + density_numeric_log(market, ctx, x), L, L + 3.0)
    asym = survival_asymptotic_log(tc, L)
    assert abs(asym - numeric) <= 3.0 / math.sqrt(L)


def test_call_asymptote_against_log_domain_price(market, ctx):
    from hestonwings import call_price_numeric_log

    tc = tail_constants(market, ctx, "upper")
    log_k = 20.0
    lee = call_price_numeric_log(market, ctx, log_k)
    asym = call_price_asymptotic_log(tc, log_k)
    # quarter-power envelope of the price asymptotics
    assert abs(lee - asym) <= 3.0 * log_k**-0.25
