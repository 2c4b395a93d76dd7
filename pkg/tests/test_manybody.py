import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cslrad.errors import DomainError, RegimeWarning
from cslrad.free_electron import FreeParticle, rate_closed_form
from cslrad.hydrogen import HydrogenicAtom, rate_high_p
from cslrad.manybody import (CrystalCell, CrystalSite, FixedPositions, Hydrogenic1s, ParticleSpec,
                             angular_mean_square, cell_variance, coherence_ratio, com_inverse,
                             com_transform, commutator_coefficient, crystal_coherence_ratio,
                             crystal_rate, kernel_transverse_moment, mean_square_structure_factor,
                             rate_general, structure_factor)
from cslrad.noise import (ColoredNoise, GaussianCorrelation, GeneralCorrelation, TabulatedFunction,
                          WhiteNoise)
from cslrad.units import CONSTANTS, energy_to_momentum
from cslrad.verify import crystal_variance_mc

K = CONSTANTS
CORR = GaussianCorrelation(1e-5)
WHITE = WhiteNoise(2.2e-17)
P11 = energy_to_momentum(11.0)
H = HydrogenicAtom.hydrogen()
H_PARTICLES = [ParticleSpec(1.0, H.m1), ParticleSpec(-1.0, H.m2)]

masses = st.lists(st.floats(0.1, 100.0), min_size=2, max_size=6)


# -- centre of mass --------------------------------------------------------

def test_com_two_equal_masses():
    d = np.array([0.0, 0.0, 2e-8])
    X, xi, J = com_transform([d / 2, -d / 2], [1.0, 1.0])
    assert np.allclose(X, 0.0)
    assert np.allclose(xi[0], d / 2)
    assert abs(J) == 8.0


def test_com_three_equal_masses():
    assert abs(com_transform(np.eye(3), [2.0, 2.0, 2.0])[2]) == pytest.approx(27.0, rel=1e-15)


def test_two_body_measure_is_relative_coordinate():
    # xi_1 = (m2/M) (x1 - x2), so d^3x_rel = |J| d^3 xi_1
    m1, m2 = K.m_e, K.m_p
    J = com_transform(np.zeros((2, 3)), [m1, m2])[2]
    assert abs(J) == pytest.approx((1 + m1 / m2) ** 3, rel=1e-15)
    assert abs(J) == pytest.approx(((m1 + m2) / m2) ** 3, rel=1e-15)


@settings(max_examples=30)
@given(masses, st.integers(0, 2**31))
def test_com_jacobian_matches_determinant(m, seed):
    m = np.array(m)
    n = len(m)
    # forward map (x_1..x_n) -> (X, xi_1..xi_{n-1}) per Cartesian axis
    A = np.zeros((n, n))
    A[0] = m / m.sum()
    for i in range(n - 1):
        A[i + 1] = -m / m.sum()
        A[i + 1, i] += 1.0
    J = com_transform(np.zeros((n, 3)), m)[2]
    assert J == pytest.approx(1.0 / np.linalg.det(A) ** 3, rel=1e-9)


@settings(max_examples=50)
@given(masses, st.integers(0, 2**31))
def test_com_round_trip(m, seed):
    x = np.random.default_rng(seed).normal(size=(len(m), 3))
    X, xi, _ = com_transform(x, m)
    back = com_inverse(X, xi, m)
    assert np.allclose(back, x, rtol=1e-12, atol=1e-12 * np.abs(x).max())


def test_com_rejects_single_particle():
    with pytest.raises(DomainError):
        com_transform(np.zeros((1, 3)), [1.0])


def test_commutator_by_finite_differences():
    # [a.grad_i, b.xi_j] acting on 1 is a.grad_i (b.xi_j), a linear function of x
    rng = np.random.default_rng(7)
    m = np.array([1.0, 3.0, 0.5, 2.0])
    n = len(m)
    x0 = rng.normal(size=(n, 3))
    a, b = rng.normal(size=3), rng.normal(size=3)
    h = 1e-6
    for i in range(n):
        for j in range(n - 1):
            plus, minus = x0.copy(), x0.copy()
            plus[i] += h * a
            minus[i] -= h * a
            fd = (b @ com_transform(plus, m)[1][j] - b @ com_transform(minus, m)[1][j]) / (2 * h)
            assert fd == pytest.approx((a @ b) * commutator_coefficient(m, i, j), abs=1e-8)


# -- structure factor ------------------------------------------------------

def test_structure_factor_examples():
    zero = [ParticleSpec(0.0, 1.0), ParticleSpec(0.0, 2.0)]
    cfg = FixedPositions([[0, 0, 1e-8], [0, 0, -1e-8]])
    assert structure_factor(zero, cfg, [0, 0, 1e8]) == 0
    neutral = [ParticleSpec(1.0, 1.0, 1.0), ParticleSpec(-1.0, 5.0, 5.0)]
    assert abs(structure_factor(neutral, cfg, [0, 0, 0])) == 0.0
    xi = np.array([0.3e-8, -0.2e-8, 0.5e-8])
    k = np.array([1e8, 2e8, -0.5e8])
    pair = FixedPositions([xi, -xi])
    N2 = abs(structure_factor([ParticleSpec(1.0, 1.0), ParticleSpec(-1.0, 1.0)], pair, k)) ** 2
    assert N2 == pytest.approx(2 - 2 * math.cos(2 * k @ xi), rel=1e-12)


def test_coupling_weights():
    assert ParticleSpec(2.0, 4.0, coupling=1.0).weight == 0.5
    assert ParticleSpec(2.0, 4.0).weight == 2.0


@given(st.floats(-1e-7, 1e-7), st.floats(-1e-7, 1e-7), st.floats(-1e-7, 1e-7))
def test_structure_factor_translation_phase(tx, ty, tz):
    parts = [ParticleSpec(1.0, 1.0), ParticleSpec(-2.0, 1.0), ParticleSpec(0.5, 1.0)]
    base = np.array([[1e-8, 0, 0], [0, 2e-8, 0], [0, 0, -3e-8]])
    k = np.array([3e7, -1e7, 2e7])
    shifted = base + np.array([tx, ty, tz])
    n0 = structure_factor(parts, FixedPositions(base), k)
    n1 = structure_factor(parts, FixedPositions(shifted), k)
    assert abs(n1) == pytest.approx(abs(n0), rel=1e-9, abs=1e-12)


def test_hydrogenic_mean_square_limits():
    cfg = Hydrogenic1s(H.a0_eff)
    assert mean_square_structure_factor(H_PARTICLES, cfg, [0, 0, 0]) == pytest.approx(0.0, abs=1e-15)
    assert mean_square_structure_factor(H_PARTICLES, cfg, [0, 0, 1e12]) == pytest.approx(2.0, rel=1e-10)


def test_small_p_dipole_slope():
    # neutral pair: <|N|^2> ~ p^2 at small p
    cfg = FixedPositions([[0, 0, 0.5e-8], [0, 0, -0.5e-8]])
    pair = [ParticleSpec(1.0, 1.0), ParticleSpec(-1.0, 1.0)]
    ps = np.geomspace(1e2, 1e4, 5)
    vals = [angular_mean_square(pair, cfg, p) for p in ps]
    assert np.polyfit(np.log(ps), np.log(vals), 1)[0] == pytest.approx(2.0, abs=1e-6)


def test_positions_must_be_relative_to_com():
    with pytest.raises(DomainError):
        rate_general(P11, [ParticleSpec(1.0, 1.0), ParticleSpec(1.0, 1.0)],
                     FixedPositions([[0, 0, 1e-8], [0, 0, 2e-8]]), WHITE, CORR)


# -- rates -----------------------------------------------------------------

@pytest.mark.parametrize("E", [1.0, 3.0, 11.0, 30.0, 100.0])
def test_reduction_to_single_charge(E):
    p = energy_to_momentum(E)
    general = rate_general(p, [ParticleSpec(1.0, K.m_e)], FixedPositions([0, 0, 0]), WHITE, CORR)
    closed = rate_closed_form(p, FreeParticle.electron(), 2.2e-17, 1e-5)
    assert general == pytest.approx(closed, rel=1e-6)


@pytest.mark.parametrize("E", [1.0, 3.0, 11.0, 30.0, 100.0])
def test_reduction_to_hydrogen(E):
    p = energy_to_momentum(E)
    general = rate_general(p, H_PARTICLES, Hydrogenic1s(H.a0_eff), WHITE, CORR, mode="w0")
    assert general == pytest.approx(rate_high_p(p, H, 2.2e-17, 1e-5), rel=1e-6)
    exact = rate_general(p, H_PARTICLES, Hydrogenic1s(H.a0_eff), WHITE, CORR)
    # keeping w in N only matters at the (w r_c)/(p a0) level
    assert exact == pytest.approx(general, rel=1e-4)


def test_exact_mode_matches_w0_for_fixed_dipole():
    cfg = FixedPositions([[0, 0, 0.5e-8], [0, 0, -0.5e-8]])
    pair = [ParticleSpec(1.0, 1.0), ParticleSpec(-1.0, 1.0)]
    exact = rate_general(P11, pair, cfg, WHITE, CORR)
    w0 = rate_general(P11, pair, cfg, WHITE, CORR, mode="w0")
    assert exact == pytest.approx(w0, rel=1e-3)


def test_zero_couplings_give_zero():
    parts = [ParticleSpec(1.0, 1.0, coupling=0.0), ParticleSpec(-1.0, 1.0, coupling=0.0)]
    assert rate_general(P11, parts, Hydrogenic1s(H.a0_eff), WHITE, CORR) == 0.0


def test_colored_noise_cutoff_and_constant():
    gamma = 9.8002572744238058e-31
    parts, cfg = [ParticleSpec(1.0, K.m_e)], FixedPositions([0, 0, 0])
    white = rate_general(P11, parts, cfg, WHITE, CORR, mode="w0")
    assert rate_general(P11, parts, cfg, ColoredNoise.constant(gamma), CORR, mode="w0") == \
        pytest.approx(white, rel=1e-12)
    assert rate_general(P11, parts, cfg, ColoredNoise.constant(gamma, cutoff=1e11), CORR) == 0.0


def test_kernel_moment_general_vs_gaussian():
    r_c = 1e-5
    general = GeneralCorrelation(lambda w: np.exp(-(w * r_c) ** 2), r_c)
    assert kernel_transverse_moment(general) == pytest.approx(math.pi**1.5 / r_c**5, rel=1e-9)


def test_tabulated_kernel_substitution():
    r_c = 1e-5
    w = np.linspace(0.0, 12.0 / r_c, 20001)
    table = GeneralCorrelation(TabulatedFunction(w, np.exp(-(w * r_c) ** 2)), r_c, w_max=w[-1])
    cfg = Hydrogenic1s(H.a0_eff)
    native = rate_general(P11, H_PARTICLES, cfg, WHITE, CORR)
    assert rate_general(P11, H_PARTICLES, cfg, WHITE, table) == pytest.approx(native, rel=1e-5)


def test_coherence_ratio():
    assert coherence_ratio(H_PARTICLES, Hydrogenic1s(H.a0_eff), P11) == pytest.approx(0.90098, rel=1e-4)
    assert coherence_ratio([ParticleSpec(0.0, 1.0)], FixedPositions([0, 0, 0]), P11) == 0.0


# -- crystal ---------------------------------------------------------------

def test_crystal_rigid_cell_is_silent():
    cell = CrystalCell([CrystalSite(1.0, (0, 0, 0)), CrystalSite(-1.0, (1e-8, 0, 0))])
    assert cell_variance(cell, P11) == 0.0
    assert crystal_rate(P11, cell, WHITE, CORR) == 0.0


@pytest.mark.parametrize("ps", [0.3, 0.7, 1.5])
def test_crystal_variance_monte_carlo(ps):
    sigma = ps / P11
    mc, se = crystal_variance_mc(1.0, sigma, P11, n_samples=200_000, seed=11)
    analytic = cell_variance(CrystalCell([CrystalSite(1.0, (0, 0, 0), sigma)]), P11)
    assert abs(mc - analytic) < 4 * se


def test_crystal_rate_scaling():
    sites = [CrystalSite(1.0, (0, 0, 0), 1e-9), CrystalSite(-1.0, (2e-8, 0, 0), 1e-9, 0.5)]
    one = crystal_rate(P11, CrystalCell(sites), WHITE, CORR)
    ten = crystal_rate(P11, CrystalCell(sites, n_cells=10), WHITE, CORR)
    assert ten == pytest.approx(10 * one, rel=1e-14)
    expected = 1 - math.exp(-(P11 * 1e-9) ** 2)
    assert crystal_coherence_ratio(CrystalCell(sites), P11) == pytest.approx(expected, rel=1e-12)


def test_crystal_size_warning():
    cell = CrystalCell([CrystalSite(1.0, (0, 0, 0), 1e-9)], n_cells=10**9, lattice_constant=5e-8)
    with pytest.warns(RegimeWarning):
        crystal_rate(P11, cell, WHITE, CORR)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        crystal_rate(P11, CrystalCell([CrystalSite(1.0, (0, 0, 0), 1e-9)], 8, 5e-8), WHITE, CORR)
    with pytest.raises(DomainError):
        CrystalCell([], n_cells=0)
    with pytest.raises(DomainError):
        CrystalSite(1.0, (0, 0, 0), -1.0)
