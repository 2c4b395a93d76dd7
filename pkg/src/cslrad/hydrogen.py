"""Emission from a hydrogenic atom in its 1s ground state.

Only the two limits of the state-resolved rate are implemented:

* small p (photon wavelength long compared to the atom, photon energy small
  compared to level spacings): a p^3 law whose strength is the dipole sum
  S = sum_f |<f|z|1s>|^2 / E_f1s^2 = (43/8) mu^2 a0^6 / hbar^4;
* high p (photon energy far above atomic scales): the free-particle rate
  multiplied by 2 F(p a0), where F(x) = 1 - 1/[1 + (x/2)^2]^2 is the 1s
  expectation of 1 - cos(p z).

The dipole sum is also evaluated independently by the Dalgarno-Lewis method:
solve (H0 - E_1s) chi = z |1s> and take <chi|chi>.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, RegimeWarning
from .free_electron import FreeParticle, rate_closed_form
from .quadrature import RadialFunction, integrate_1d, log_grid, solve_radial_inhomogeneous
from .units import CONSTANTS, KEV, Constants

DIPOLE_SUM_CLOSED_FORM = 43.0 / 8.0

#: Above this value of p a0 the small-p formula is flagged.
SMALL_P_LIMIT = 0.1
#: Below this photon energy (keV) the high-p formula is flagged.
HIGH_P_MIN_KEV = 0.1


@dataclass(frozen=True)
class HydrogenicAtom:
    """Two particles of masses m1, m2 carrying charges +charge and -charge (units of e)."""

    m1: float
    m2: float
    charge: float = 1.0
    constants: Constants = CONSTANTS

    def __post_init__(self):
        if not (self.m1 > 0 and self.m2 > 0):
            raise DomainError("hydrogenic masses must be positive")
        if self.charge == 0:
            raise DomainError("hydrogenic charge must be non-zero")

    @classmethod
    def hydrogen(cls, constants: Constants = CONSTANTS):
        return cls(constants.m_e, constants.m_p, 1.0, constants)

    @property
    def total_mass(self):
        return self.m1 + self.m2

    @property
    def reduced_mass(self):
        return self.m1 * self.m2 / (self.m1 + self.m2)

    @property
    def a0_eff(self):
        k = self.constants
        return k.hbar**2 / (self.reduced_mass * k.e2 * self.charge**2)


@dataclass(frozen=True)
class InternalStateSum:
    value: float  # reduced-mass atomic units
    method: str


def ground_state_form_factor(x):
    """F(x) = 1 - 1/[1 + (x/2)^2]^2 with x = p a0."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("form factor argument must be non-negative")
    q = (0.5 * x) ** 2
    # 1 - (1+q)^-2 written without cancellation at small q
    out = q * (2.0 + q) / (1.0 + q) ** 2
    return float(out) if out.ndim == 0 else out


def form_factor_numeric(x, rel_tol=1e-12):
    """<1s| 1 - cos(p z) |1s> by quadrature over the 1s density (x = p a0).

    The angular average of cos(p r cos(theta)) is sin(p r)/(p r); the radial
    integral over 4 rho^2 exp(-2 rho) (rho = r/a0) is done by adaptive
    Gauss-Kronrod on [0, 40], beyond which the density is below 1e-33.
    """
    if x < 0:
        raise DomainError("form factor argument must be non-negative")
    if x == 0:
        return 0.0

    def integrand(rho):
        return 4.0 * rho**2 * np.exp(-2.0 * rho) * (1.0 - np.sinc(x * rho / math.pi))

    # one panel per oscillation keeps the adaptive phase short
    n_panels = max(1, int(math.ceil(x * 40.0 / math.pi)))
    breaks = np.linspace(0.0, 40.0, n_panels + 1)[1:-1]
    return integrate_1d(integrand, 0.0, 40.0, rel_tol=rel_tol, abs_floor=1e-15,
                        breakpoints=breaks).value


def dipole_source(r):
    """Reduced radial source s(r) = r R(r) of z|1s> in the l = 1 channel.

    z psi_1s = (2 r e^-r / sqrt(3)) Y_10 in atomic units.
    """
    return 2.0 / math.sqrt(3.0) * r**2 * np.exp(-r)


def dipole_sum(method="closed-form", grid=None) -> InternalStateSum:
    """sum_f |<f|z|1s>|^2 / E_f1s^2 in reduced-mass atomic units."""
    if method == "closed-form":
        return InternalStateSum(DIPOLE_SUM_CLOSED_FORM, method)
    if method == "dalgarno-lewis":
        r = log_grid() if grid is None else grid
        chi = solve_radial_inhomogeneous(-0.5, RadialFunction(r, dipole_source(r)), l=1)
        return InternalStateSum(chi.norm_squared(), method)
    raise DomainError(f"unknown dipole_sum method {method!r}")


def dipole_sum_cgs(atom: HydrogenicAtom, method="closed-form"):
    """The dipole sum restored to CGS: value * mu^2 a0^6 / hbar^4."""
    k = atom.constants
    return dipole_sum(method).value * atom.reduced_mass**2 * atom.a0_eff**6 / k.hbar**4


def rate_small_p(p, atom: HydrogenicAtom, lam, r_c, method="closed-form"):
    """2 p^3 (hbar^3/c) (1/m_N^2) (e^2 lambda / pi r_c^2) S, with S the dipole sum."""
    if p <= 0:
        raise DomainError(f"photon momentum must be positive, got {p!r}")
    if p * atom.a0_eff > SMALL_P_LIMIT:
        warnings.warn(f"small-p hydrogen formula used at p a0 = {p * atom.a0_eff:.3g} > "
                      f"{SMALL_P_LIMIT}", RegimeWarning, stacklevel=2)
    k = atom.constants
    coupling = atom.charge**2 * k.e2 * lam / (math.pi * r_c**2)
    return 2.0 * p**3 * (k.hbar**3 / k.c) / k.m_N**2 * coupling * dipole_sum_cgs(atom, method)


def rate_high_p(p, atom: HydrogenicAtom, lam, r_c):
    """2 F(p a0) times the free-particle closed-form rate."""
    if p <= 0:
        raise DomainError(f"photon momentum must be positive, got {p!r}")
    k = atom.constants
    if p * k.hbar_c < HIGH_P_MIN_KEV * KEV:
        warnings.warn(f"high-p hydrogen formula used at {p * k.hbar_c / KEV:.3g} keV, below "
                      f"{HIGH_P_MIN_KEV} keV", RegimeWarning, stacklevel=2)
    free = rate_closed_form(p, FreeParticle(atom.charge, atom.m1), lam, r_c, constants=k)
    return 2.0 * ground_state_form_factor(p * atom.a0_eff) * free
