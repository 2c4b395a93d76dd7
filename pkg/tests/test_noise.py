import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cslrad.errors import DomainError
from cslrad.noise import (ColoredNoise, GaussianCorrelation, GeneralCorrelation,
                          NonStationaryNoise, TabulatedFunction, WhiteNoise, effective_gamma,
                          gamma_from_lambda, lambda_from_gamma, noise_weight,
                          nonstationary_weight, spatial_kernel)

# scripts/golden_values.py
GAMMA_STANDARD = 9.8002572744238058e-31
EIGHT_PI_32 = 44.546623974653663

CORR = GaussianCorrelation(1e-5)


def test_gamma_golden():
    assert gamma_from_lambda(2.2e-17, 1e-5) == pytest.approx(GAMMA_STANDARD, rel=1e-14)
    assert gamma_from_lambda(1.0, 1.0) == pytest.approx(EIGHT_PI_32, rel=1e-15)


@given(st.floats(-10, 0), st.floats(-7, -3))
def test_gamma_lambda_inverse(log_lam, log_rc):
    lam, r_c = 10.0**log_lam, 10.0**log_rc
    assert lambda_from_gamma(gamma_from_lambda(lam, r_c), r_c) == pytest.approx(lam, rel=1e-13)


def test_gamma_domain():
    with pytest.raises(DomainError):
        gamma_from_lambda(1.0, 0.0)
    with pytest.raises(DomainError):
        gamma_from_lambda(-1.0, 1e-5)
    with pytest.raises(DomainError):
        WhiteNoise(-1.0)


@settings(max_examples=100)
@given(st.floats(0, 1e22))
def test_constant_colored_equals_white(omega):
    white = noise_weight(WhiteNoise(2.2e-17), omega, CORR)
    colored = noise_weight(ColoredNoise.constant(GAMMA_STANDARD), omega, CORR)
    assert colored == pytest.approx(white, rel=1e-12)


def test_colored_cutoff():
    noise = ColoredNoise.constant(1.0, cutoff=1e11)
    assert noise_weight(noise, 2e11, CORR) == 0.0
    assert noise_weight(noise, 1e10, CORR) == 1.0


def test_colored_table_and_negative_density():
    table = TabulatedFunction([0.0, 1.0, 2.0], [1.0, 3.0, 5.0])
    assert noise_weight(ColoredNoise(table), 1.5, CORR) == pytest.approx(4.0)
    assert noise_weight(ColoredNoise(table), 7.0, CORR) == 0.0
    held = ColoredNoise(TabulatedFunction([0.0, 1.0], [1.0, 3.0], tail="hold"))
    assert noise_weight(held, 7.0, CORR) == 3.0
    with pytest.raises(DomainError):
        noise_weight(ColoredNoise(lambda w: -1.0), 1.0, CORR)


def test_table_validation():
    with pytest.raises(DomainError):
        TabulatedFunction([0.0], [1.0])
    with pytest.raises(DomainError):
        TabulatedFunction([0.0, 0.0], [1.0, 2.0])
    with pytest.raises(DomainError):
        TabulatedFunction([0.0, 1.0], [1.0, 2.0], tail="extrapolate")


# -- non-stationary --------------------------------------------------------

def _gaussian_delta(gamma, tau):
    norm = gamma / (tau * math.sqrt(2 * math.pi))
    return lambda s, u: norm * np.exp(-((s - u) ** 2) / (2 * tau**2))


def test_nonstationary_constant_correlator():
    # Delta = const: weight = |int_0^t e^{i w s} ds|^2 = 2 (1 - cos wt) / w^2
    t, omega = 2.0, 3.0
    res = nonstationary_weight(lambda s, u: np.ones_like(s), t, omega, rel_tol=1e-9)
    assert res.value.real == pytest.approx(2 * (1 - math.cos(omega * t)) / omega**2, rel=1e-7)
    assert abs(res.value.imag) < 1e-10


def test_nonstationary_white_limit():
    res = nonstationary_weight(_gaussian_delta(2.0, 1e-6), 1.0, 10.0)
    assert res.value.real == pytest.approx(2.0, rel=1e-3)
    assert abs(res.value.imag) < 1e-10


def test_nonstationary_wide_limit():
    tau, omega = 1e-4, 2.5e4
    res = nonstationary_weight(_gaussian_delta(1.0, tau), 1.0, omega)
    assert res.value.real == pytest.approx(math.exp(-0.5 * (omega * tau) ** 2), rel=1e-2)


def test_nonstationary_noise_spec():
    spec = NonStationaryNoise(_gaussian_delta(3.0, 1e-6), duration=1.0)
    assert effective_gamma(spec, 1.0, CORR) == pytest.approx(3.0, rel=1e-3)
    with pytest.raises(DomainError):
        noise_weight(spec, 1.0, CORR)
    with pytest.raises(DomainError):
        nonstationary_weight(_gaussian_delta(1.0, 1.0), 0.0, 1.0)


# -- spatial kernel --------------------------------------------------------

@given(st.floats(0, 1e7), st.floats(0, 1e7))
def test_gaussian_kernel_even_and_monotone(a, b):
    ga, gb = spatial_kernel(CORR, [a, b])
    assert spatial_kernel(CORR, -a) == ga
    if a <= b:
        assert ga >= gb


def test_kernel_from_smearing_convolution():
    """G[w] equals the Fourier transform of g*g with g the Gaussian smearing.

    g(x) = (2 pi r_c^2)^(-3/2) exp(-x^2 / 2 r_c^2) factorizes per axis, so the
    1D self-convolution and 1D transform are computed by Gauss-Legendre.
    """
    r_c = 1e-5
    nodes, weights = np.polynomial.legendre.leggauss(400)
    L = 20 * r_c
    x, wx = L * nodes, L * weights

    def g1(y):
        return np.exp(-(y**2) / (2 * r_c**2)) / (math.sqrt(2 * math.pi) * r_c)

    conv = np.array([np.dot(wx, g1(xi - x) * g1(x)) for xi in x])
    for w in np.linspace(0, 4 / r_c, 9):
        # along (w, 0, 0) the transverse axes contribute a factor of 1
        ft = np.dot(wx, conv * np.cos(w * x))
        assert ft == pytest.approx(float(spatial_kernel(CORR, w)), abs=1e-6)


def test_general_correlation_checks():
    with pytest.raises(DomainError):
        GeneralCorrelation(lambda w: 0.5 + 0 * w, 1e-5)
    corr = GeneralCorrelation(lambda w: np.exp(-w), 1e-5)
    assert corr.support == pytest.approx(1.2e6)
    assert GeneralCorrelation(lambda w: np.exp(-w), 1e-5, w_max=3.0).support == 3.0
