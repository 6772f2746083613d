import math

import numpy as np
import pytest
from scipy.integrate import quad

from hestonwings import (
    ArbitrageError,
    ContourSpec,
    DampingSpec,
    DomainError,
    StripError,
    bs_call,
    call_price_numeric,
    call_price_numeric_log,
    critical_point,
    density_numeric_log,
    implied_vol,
)
from hestonwings.riccati import _mgf_log_raw


def test_deep_itm_bound(market, ctx):
    c = call_price_numeric(market, ctx, -14.0)
    assert abs(c - (1.0 - math.exp(-14.0))) <= 1e-9


def test_otm_limit_monotone(market, ctx):
    prices = [call_price_numeric(market, ctx, k) for k in (1.0, 2.0, 3.0, 5.0)]
    assert all(b < a for a, b in zip(prices, prices[1:]))
    assert prices[-1] < 1e-20


def test_price_bounds_on_grid(market, ctx):
    for k in np.linspace(-3.0, 3.0, 13):
        c = call_price_numeric(market, ctx, float(k))
        assert max(1.0 - math.exp(k), 0.0) <= c <= 1.0


def test_put_call_parity(market, ctx):
    # alpha < -1 prices the put and converts through parity, so the two
    # routes must agree wherever both dampings are admissible and accurate.
    for k in (0.3, 0.7, 1.0, 2.0):
        direct = call_price_numeric(market, ctx, k, DampingSpec(alpha=29.1))
        via_put = call_price_numeric(market, ctx, k, DampingSpec(alpha=-4.4))
        assert abs(direct - via_put) <= 1e-10


def test_damping_invariance(market, ctx):
    for k in (0.5, 1.0, 2.0):
        a = call_price_numeric(market, ctx, k, DampingSpec(alpha=29.1))
        b = call_price_numeric(market, ctx, k, DampingSpec(alpha=15.0))
        assert abs(a - b) <= 1e-9


def test_price_consistent_with_density(market, ctx):
    k = 0.5
    strike = math.exp(k)
    val, _ = quad(
        lambda L: (math.exp(L) - strike) * math.exp(density_numeric_log(market, ctx, L) + L),
        k,
        k + 12.0,
        limit=300,
        epsabs=1e-12,
        epsrel=1e-10,
    )
    assert call_price_numeric(market, ctx, k) == pytest.approx(val, abs=1e-7)


def test_damping_admissibility(market, ctx):
    with pytest.raises(DomainError):
        call_price_numeric(market, ctx, 1.0, DampingSpec(alpha=-0.5))
    with pytest.raises(DomainError):
        call_price_numeric(market, ctx, 1.0, DampingSpec(alpha=32.0))  # alpha + 1 beyond s_+
    with pytest.raises(DomainError):
        call_price_numeric(market, ctx, -1.0, DampingSpec(alpha=-9.5))  # alpha + 1 below s_-


def test_log_price_consistency(market, ctx):
    for k in (1.0, 3.0):
        assert call_price_numeric_log(market, ctx, k) == pytest.approx(
            math.log(call_price_numeric(market, ctx, k)), abs=1e-9
        )
    with pytest.raises(DomainError):
        call_price_numeric_log(market, ctx, -1.0)


def test_density_strip_guard(market, ctx):
    with pytest.raises(StripError):
        density_numeric_log(market, ctx, 5.0, ContourSpec(abscissa=40.0))
    with pytest.raises(StripError):
        density_numeric_log(market, ctx, 5.0, ContourSpec(abscissa=-8.0))


def test_density_abscissa_independence(market, ctx):
    # Any in-strip abscissa gives the same value; compare the saddle default
    # with two explicit choices.
    base = density_numeric_log(market, ctx, 3.0)
    for absc in (20.0, 28.0):
        alt = density_numeric_log(market, ctx, 3.0, ContourSpec(abscissa=absc))
        assert alt == pytest.approx(base, abs=1e-8)


def test_density_truncation_doubling(market, ctx):
    a = density_numeric_log(market, ctx, 25.0, ContourSpec(truncation=60.0))
    b = density_numeric_log(market, ctx, 25.0, ContourSpec(truncation=120.0))
    assert abs(a - b) < 1e-10


def test_density_conjugate_symmetry_exactness(market, ctx):
    # The half-line reduction relies on the integrand being even in y.
    cp = critical_point(market, ctx, "upper")
    uhat = cp.s_crit + 1.0 - 1.5
    T = ctx.maturity
    L = 7.0

    def full(y):
        return complex(np.exp(-1j * y * L + _mgf_log_raw(market, uhat - 1.0 + 1j * y, T)))

    for y in (0.3, 1.0, 2.7, 8.0, 21.0):
        a, b = full(y), full(-y)
        assert abs(b - np.conj(a)) <= 1e-13 * abs(a)
    # five-panel numeric check: full line equals twice the real half-line part
    ys = np.linspace(-30.0, 30.0, 12001)
    vals = np.array([full(float(y)) for y in ys])
    full_line = np.trapezoid(vals, ys)
    half = 2.0 * np.trapezoid(vals[ys >= 0].real, ys[ys >= 0])
    assert full_line.imag == pytest.approx(0.0, abs=1e-12 * abs(full_line.real))
    assert full_line.real == pytest.approx(half, rel=1e-9)


def test_density_positive_on_grid(market, ctx):
    for L in (-20.0, -5.0, -1.0, 0.0, 1.0, 5.0, 20.0):
        assert np.isfinite(density_numeric_log(market, ctx, L))


def test_bs_call_atm_identity():
    from scipy.special import ndtr

    for vol, T in ((0.2, 1.0), (0.5, 0.25)):
        assert bs_call(0.0, vol, T) == pytest.approx(2 * ndtr(vol * math.sqrt(T) / 2) - 1, rel=1e-14)


def test_bs_call_small_vol_intrinsic():
    assert bs_call(0.5, 1e-8, 1.0) == pytest.approx(0.0, abs=1e-15)
    assert bs_call(-0.5, 1e-8, 1.0) == pytest.approx(1.0 - math.exp(-0.5), rel=1e-12)


def test_bs_call_vega_positive():
    vols = np.linspace(0.05, 1.0, 20)
    prices = [bs_call(0.3, v, 1.0) for v in vols]
    assert all(b > a for a, b in zip(prices, prices[1:]))


def test_implied_vol_round_trip():
    # vega must be non-degenerate for the round trip to be well posed: deep
    # ITM low-vol prices equal intrinsic in double precision
    for k, vol in (
        (-2.0, 0.6),
        (-1.0, 0.3),
        (-0.5, 0.15),
        (-0.2, 0.08),
        (0.0, 0.2),
        (0.0, 0.9),
        (0.7, 0.3),
        (2.0, 0.3),
        (2.0, 0.9),
    ):
        price = bs_call(k, vol, 1.0)
        assert abs(implied_vol(price, k, 1.0) - vol) <= 1e-10


def test_implied_vol_uses_guess():
    price = bs_call(2.0, 0.25, 1.0)
    assert implied_vol(price, 2.0, 1.0, initial_guess=0.24) == pytest.approx(0.25, abs=1e-10)


def test_implied_vol_arbitrage_guard():
    with pytest.raises(ArbitrageError):
        implied_vol(1.0 - math.exp(-0.5), -0.5, 1.0)  # exactly the lower bound
    with pytest.raises(ArbitrageError):
        implied_vol(1.1, 0.5, 1.0)
    # just above the lower bound: a small but valid volatility
    lower = 1.0 - math.exp(-0.5)
    vol = implied_vol(lower + 1e-12, -0.5, 1.0)
    assert 0 < vol < 0.2
