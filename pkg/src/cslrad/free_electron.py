"""Noise-induced photon emission from a single free charged particle at rest.

Two evaluations of dGamma/dp are provided.  ``rate_closed_form`` keeps only
hbar c p in the energy denominator and is independent of the particle mass.
``rate_exact_quadrature`` integrates the squared second-order amplitude over
the outgoing particle momentum with the full denominator

    hbar c p - (hbar^2 / 2m) (p^2 + 2 p.q),

and serves as the oracle for the closed form.  All box-normalization factors
cancel before anything is evaluated.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularityError
from .noise import gamma_from_lambda
from .quadrature import integrate_1d, integrate_3d_gaussian
from .units import CONSTANTS, Constants

#: Half-width of the Gaussian support in units of 1/r_c used by the
#: denominator sign check.
SUPPORT_RADIUS = 6.0


@dataclass(frozen=True)
class FreeParticle:
    charge: float = 1.0  # units of e
    mass: float = CONSTANTS.m_e  # g

    def __post_init__(self):
        if not self.mass > 0:
            raise DomainError(f"particle mass must be positive, got {self.mass!r}")

    @classmethod
    def electron(cls, constants: Constants = CONSTANTS):
        return cls(charge=1.0, mass=constants.m_e)


def rate_closed_form(p, particle: FreeParticle, lam, r_c, constants: Constants = CONSTANTS):
    """(hbar/c^3) e^2 lambda / (pi r_c^2 m_N^2 p), times charge^2.  Units cm s^-1."""
    if p <= 0:
        raise DomainError(f"photon momentum must be positive, got {p!r}")
    k = constants
    return (k.hbar / k.c**3) * particle.charge**2 * k.e2 * lam / (
        math.pi * r_c**2 * k.m_N**2 * p)


def rate_exact_quadrature(p, particle: FreeParticle, lam, r_c, rel_tol=1e-6,
                          constants: Constants = CONSTANTS):
    """dGamma/dp with the full recoil denominator, by 3D quadrature.

    With u = p + q (the momentum transfer to the noise) the rate is

        4 pi p^2 (2 pi)^-6 (gamma/hbar^2) (hbar/m_N)^2 (2 pi hbar c / p)
            (e hbar / c)^2  Int d^3u exp(-u^2 r_c^2) u_perp^2 / D(u)^2,

    where u_perp is the component of u transverse to the photon (the
    polarization sum) and D(u) = hbar c p + (hbar^2/2m)(p^2 - 2 p.u).
    Raises SingularityError if D can vanish on the Gaussian support.
    """
    if p <= 0:
        raise DomainError(f"photon momentum must be positive, got {p!r}")
    k = constants
    gamma = gamma_from_lambda(lam, r_c)
    if gamma == 0:
        return 0.0
    recoil = k.hbar**2 / (2.0 * particle.mass)  # erg cm^2; zero for infinite mass
    u_max = SUPPORT_RADIUS / r_c
    d_min = k.hbar_c * p + recoil * (p**2 - 2.0 * p * u_max)
    if d_min <= 0:
        raise SingularityError(
            "energy denominator changes sign inside the noise support "
            f"(p={p:.6g} cm^-1, mass={particle.mass:.6g} g); resonant case not treated")

    def integrand(u):
        u_perp2 = u[:, 0] ** 2 + u[:, 1] ** 2
        denom = k.hbar_c * p + recoil * (p**2 - 2.0 * p * u[:, 2])
        return u_perp2 / denom**2

    integral = integrate_3d_gaussian(integrand, r_c, rel_tol=rel_tol).value
    squared_amplitude = (gamma / k.hbar**2) * (k.hbar / k.m_N) ** 2 \
        * (2.0 * math.pi * k.hbar_c / p) * particle.charge**2 * k.e2 * k.hbar**2 / k.c**2
    return 4.0 * math.pi * p**2 / (2.0 * math.pi) ** 6 * squared_amplitude * integral


def back_to_back_fraction(radius=5.0, rel_tol=1e-10):
    """Fraction of the closed-form q-integral carried by |p + q| < radius / r_c.

    The integrand is u_perp^2 exp(-u^2 r_c^2); after the angular integral
    the radial weight is x^4 exp(-x^2) with x = |u| r_c.
    """
    inside = integrate_1d(lambda x: x**4 * np.exp(-x**2), 0.0, radius, rel_tol=rel_tol).value
    return inside / (3.0 * math.sqrt(math.pi) / 8.0)
