"""General N-particle emission rate, centre-of-mass utilities and crystal cells.

In the high photon energy regime the rate is

    dGamma/dp = 2 gamma / (2 pi)^4 * hbar e^2 / (m_N^2 c^3 p)
                * Int dOmega_p/4pi Int d^3w G[w] [w^2 - (w.p^)^2] <|N(p - w)|^2>,

    N(k) = sum_j a_j exp(-i k.xi_j),   a_j = e_j g_j / m_j  (units of e),

with xi_j the particle coordinates relative to the centre of mass and G the
spatial kernel (exp(-w^2 r_c^2) for the Gaussian correlation).  Setting w = 0
inside N factorizes the w-integral into the kernel moment
Int d^3w G[w] w_perp^2, which is pi^{3/2}/r_c^5 for the Gaussian.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, RegimeWarning
from .noise import (GaussianCorrelation, NoiseSpec, SpatialCorrelation, effective_gamma,
                    spatial_kernel)
from .quadrature import (integrate_1d, integrate_3d_gaussian, integrate_3d_isotropic,
                         spherical_rule)
from .units import CONSTANTS, Constants


@dataclass(frozen=True)
class ParticleSpec:
    charge: float  # units of e
    mass: float  # g
    coupling: float | None = None  # g; defaults to the mass

    def __post_init__(self):
        if not self.mass > 0:
            raise DomainError(f"particle mass must be positive, got {self.mass!r}")

    @property
    def weight(self):
        """Effective charge a_j = e_j g_j / m_j, in units of e."""
        if self.coupling is None:
            return self.charge
        return self.charge * self.coupling / self.mass


@dataclass(frozen=True)
class FixedPositions:
    """Point particles at fixed positions xi_j (cm) relative to the centre of mass."""

    xi: np.ndarray

    def __post_init__(self):
        xi = np.atleast_2d(np.asarray(self.xi, dtype=float))
        if xi.shape[1] != 3:
            raise DomainError("positions must be 3-vectors")
        object.__setattr__(self, "xi", xi)


@dataclass(frozen=True)
class Hydrogenic1s:
    """Two particles in the hydrogenic 1s state with Bohr radius ``a0_eff`` (cm)."""

    a0_eff: float


@dataclass(frozen=True)
class CrystalSite:
    charge: float  # units of e
    position: tuple  # cm, mean position within the cell
    sigma: float = 0.0  # cm, isotropic Gaussian spread
    coupling_ratio: float = 1.0  # g / m

    def __post_init__(self):
        if self.sigma < 0:
            raise DomainError("site spread must be non-negative")


@dataclass(frozen=True)
class CrystalCell:
    sites: tuple
    n_cells: int = 1
    lattice_constant: float | None = None  # cm; defaults to the site extent

    def __post_init__(self):
        if self.n_cells < 1:
            raise DomainError("n_cells must be at least 1")
        object.__setattr__(self, "sites", tuple(self.sites))

    @property
    def extent(self):
        if self.lattice_constant is not None:
            return self.lattice_constant
        pos = np.array([s.position for s in self.sites], dtype=float)
        if len(pos) < 2:
            return 0.0
        return float(np.max(np.linalg.norm(pos[:, None, :] - pos[None, :, :], axis=-1)))


# ---------------------------------------------------------------------------
# centre-of-mass transform


def com_transform(positions, masses):
    """Return (X, xi, J) for particle positions of shape (n, 3).

    X is the centre of mass, xi the n-1 internal coordinates x_i - X and J the
    signed determinant d(x_1..x_n)/d(X, xi_1..xi_{n-1}), which equals
    (-1)^(n-1) (1 + sum_{j<n} m_j / m_n)^3.
    """
    x = np.asarray(positions, dtype=float)
    m = np.asarray(masses, dtype=float)
    if len(m) < 2 or x.shape != (len(m), 3):
        raise DomainError("com_transform needs n >= 2 positions of shape (n, 3)")
    if np.any(m <= 0):
        raise DomainError("masses must be positive")
    X = m @ x / m.sum()
    xi = x[:-1] - X
    jac = (-1.0) ** (len(m) - 1) * (1.0 + m[:-1].sum() / m[-1]) ** 3
    return X, xi, jac


def com_inverse(X, xi, masses):
    """Reconstruct all n positions from the centre of mass and n-1 internal coordinates."""
    m = np.asarray(masses, dtype=float)
    xi = np.asarray(xi, dtype=float)
    last = np.asarray(X) - (m[:-1] @ xi) / m[-1]
    return np.vstack([xi + X, last])


def commutator_coefficient(masses, i, j):
    """[a.grad_i, b.xi_j] = (a.b) (delta_ij - m_i / M)."""
    m = np.asarray(masses, dtype=float)
    return float(i == j) - m[i] / m.sum()


def check_centre_of_mass(particles, config: FixedPositions, rtol=1e-12):
    m = np.array([pt.mass for pt in particles])
    moment = m @ config.xi
    scale = (m[:, None] * np.abs(config.xi)).sum() or 1.0
    if np.linalg.norm(moment) > rtol * scale:
        raise DomainError("positions are not relative to the centre of mass")


# ---------------------------------------------------------------------------
# structure factors


def _weights(particles):
    return np.array([pt.weight for pt in particles], dtype=float)


def _hydrogenic_defect(k, a0):
    """1 - <1s| cos(k.x) |1s> = 1 - 1/[1 + (k a0/2)^2]^2, without cancellation."""
    q = (0.5 * k * a0) ** 2
    return q * (2.0 + q) / (1.0 + q) ** 2


def _one_minus_sinc(x):
    x = np.asarray(x, dtype=float)
    x2 = x * x
    series = x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0))
    with np.errstate(invalid="ignore", divide="ignore"):
        direct = 1.0 - np.sin(x) / x
    return np.where(np.abs(x) < 1e-2, series, direct)


def structure_factor(particles, config, k):
    """N(k) = sum_j a_j exp(-i k.xi_j) for k of shape (..., 3), in units of e.

    For a Hydrogenic1s configuration N is an operator; the root mean square
    sqrt(<|N|^2>) over the 1s state is returned instead.
    """
    k = np.asarray(k, dtype=float)
    a = _weights(particles)
    if isinstance(config, FixedPositions):
        if len(config.xi) != len(a):
            raise DomainError("one position per particle is required")
        return np.exp(-1j * (k @ config.xi.T)) @ a
    return np.sqrt(mean_square_structure_factor(particles, config, k))


def mean_square_structure_factor(particles, config, k):
    """<|N(k)|^2> in the internal state, for k of shape (..., 3), in units of e^2."""
    k = np.asarray(k, dtype=float)
    a = _weights(particles)
    if isinstance(config, FixedPositions):
        return np.abs(structure_factor(particles, config, k)) ** 2
    if isinstance(config, Hydrogenic1s):
        if len(a) != 2:
            raise DomainError("a hydrogenic configuration has exactly two particles")
        kk = np.linalg.norm(k, axis=-1)
        # (a1 + a2)^2 - 2 a1 a2 (1 - overlap): exact zero for a neutral pair at k = 0
        return (a.sum() ** 2
                - 2 * a[0] * a[1] * _hydrogenic_defect(kk, config.a0_eff))
    raise TypeError(f"unknown configuration {config!r}")


def _isotropic(particles, config):
    if isinstance(config, Hydrogenic1s):
        return True
    a = _weights(particles)
    pts = config.xi[a != 0]
    return len(pts) <= 1 or bool(np.all(pts == pts[0]))


def angular_mean_square(particles, config, p):
    """Average of <|N(p p^)|^2> over photon directions p^."""
    if isinstance(config, Hydrogenic1s) or _isotropic(particles, config):
        return float(mean_square_structure_factor(particles, config, np.array([0.0, 0.0, p])))
    # sum_jk a_j a_k sinc(p |d_jk|), arranged so neutral systems keep precision at small p
    a = _weights(particles)
    d = np.linalg.norm(config.xi[:, None, :] - config.xi[None, :, :], axis=-1)
    return float(a.sum() ** 2 - a @ _one_minus_sinc(p * d) @ a)


def coherence_ratio(particles, config, p):
    """Angle-averaged <|N(p)|^2> over the incoherent sum of a_j^2."""
    a = _weights(particles)
    incoherent = float(a @ a)
    if incoherent == 0:
        return 0.0
    return angular_mean_square(particles, config, p) / incoherent


# ---------------------------------------------------------------------------
# rates


def kernel_transverse_moment(corr: SpatialCorrelation, rel_tol=1e-10):
    """Int d^3w G[w] [w^2 - (w.p^)^2] = (8 pi / 3) Int_0^inf w^4 G[w] dw."""
    if isinstance(corr, GaussianCorrelation):
        return math.pi**1.5 / corr.r_c**5
    scale = 1.0 / corr.r_c
    # integrate in units of 1/r_c to keep the abscissae O(1)
    res = integrate_1d(lambda x: x**4 * spatial_kernel(corr, x * scale), 0.0,
                       corr.support / scale, rel_tol=rel_tol)
    return 8.0 * math.pi / 3.0 * res.value * scale**5


def _prefactor(p, noise, corr, constants):
    k = constants
    gamma = effective_gamma(noise, k.c * p, corr)
    return 2.0 * gamma / (2.0 * math.pi) ** 4 * k.hbar * k.e2 / (k.m_N**2 * k.c**3 * p)


def _direction_rule(particles, config, p):
    if _isotropic(particles, config):
        return np.array([[0.0, 0.0, 1.0]]), np.array([1.0])
    d = np.linalg.norm(config.xi[:, None, :] - config.xi[None, :, :], axis=-1).max()
    n_theta = max(8, int(math.ceil(p * d)) + 8)
    return spherical_rule(n_theta)


def _transverse_integral(f_of_w, p_hat, corr, rel_tol):
    """Int d^3w G[w] [w^2 - (w.p^)^2] f(w)."""

    def integrand(w):
        w_par = w @ p_hat
        return (np.einsum("ij,ij->i", w, w) - w_par**2) * f_of_w(w)

    if isinstance(corr, GaussianCorrelation):
        return integrate_3d_gaussian(integrand, corr.r_c, rel_tol=rel_tol).value
    kernel = lambda w: spatial_kernel(corr, w)  # noqa: E731
    return integrate_3d_isotropic(integrand, kernel, corr.support, rel_tol=rel_tol).value


def rate_general(p, particles, config, noise: NoiseSpec, corr: SpatialCorrelation,
                 mode="exact", rel_tol=1e-6, constants: Constants = CONSTANTS):
    """dGamma/dp (cm s^-1) for an N-particle system.

    ``mode="exact"`` keeps the momentum transfer w inside N; ``mode="w0"``
    sets it to zero, which factorizes the w-integral.
    """
    if p <= 0:
        raise DomainError(f"photon momentum must be positive, got {p!r}")
    if isinstance(config, FixedPositions):
        check_centre_of_mass(particles, config)
    pref = _prefactor(p, noise, corr, constants)
    if pref == 0 or not np.any(_weights(particles)):
        return 0.0
    if mode == "w0":
        return pref * kernel_transverse_moment(corr) * angular_mean_square(particles, config, p)
    if mode != "exact":
        raise DomainError(f"unknown mode {mode!r}")

    dirs, weights = _direction_rule(particles, config, p)
    total = 0.0
    for p_hat, wt in zip(dirs, weights):
        k0 = p * p_hat
        total += wt * _transverse_integral(
            lambda w: mean_square_structure_factor(particles, config, k0 - w),
            p_hat, corr, rel_tol)
    return pref * total


def cell_variance(cell: CrystalCell, p):
    """<|f - <f>|^2> for f = sum_i a_i exp(-i p.xi_i) with independent Gaussian sites.

    Each site contributes a_i^2 (1 - exp(-p^2 sigma_i^2)); the mean positions
    drop out.
    """
    return float(sum((s.charge * s.coupling_ratio) ** 2 * -math.expm1(-(p * s.sigma) ** 2)
                     for s in cell.sites))


def crystal_rate(p, cell: CrystalCell, noise: NoiseSpec, corr: SpatialCorrelation,
                 constants: Constants = CONSTANTS):
    """dGamma/dp for n_cells independent cells, <|N|^2> ~ n_cells <|f - <f>|^2>."""
    if p <= 0:
        raise DomainError(f"photon momentum must be positive, got {p!r}")
    size = cell.extent * cell.n_cells ** (1.0 / 3.0)
    if size > corr.r_c:
        warnings.warn(f"lattice size {size:.3g} cm exceeds r_c = {corr.r_c:.3g} cm",
                      RegimeWarning, stacklevel=2)
    pref = _prefactor(p, noise, corr, constants)
    if pref == 0:
        return 0.0
    return pref * kernel_transverse_moment(corr) * cell.n_cells * cell_variance(cell, p)


def crystal_coherence_ratio(cell: CrystalCell, p):
    incoherent = sum((s.charge * s.coupling_ratio) ** 2 for s in cell.sites)
    return cell_variance(cell, p) / incoherent if incoherent else 0.0

