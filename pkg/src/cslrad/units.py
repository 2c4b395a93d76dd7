"""Physical constants (CGS-Gaussian, unrationalized charge) and photon kinematics.

All formulas in the package use e^2 in the unrationalized convention, so that
e^2 / (hbar c) is the fine-structure constant.  The rationalized convention
differs by a factor of 4 pi in e^2.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass

from .errors import DomainError

#: Version tag of the constant table; echoed into output metadata.
CONSTANTS_VERSION = "CODATA-2018"

# CODATA 2018 recommended values, converted to CGS.
_HBAR = 1.054571817e-27  # erg s
_C = 2.99792458e10  # cm / s
_ALPHA = 7.2973525693e-3
_M_E = 9.1093837015e-28  # g
_M_P = 1.67262192369e-24  # g
_A0 = 5.29177210903e-9  # cm
KEV = 1.602176634e-9  # erg


@dataclass(frozen=True)
class Constants:
    hbar: float = _HBAR
    c: float = _C
    e2: float = _ALPHA * _HBAR * _C
    m_e: float = _M_E
    m_p: float = _M_P
    m_N: float = _M_P
    a0: float = _A0

    @property
    def fine_structure(self) -> float:
        return self.e2 / (self.hbar * self.c)

    @property
    def hbar_c(self) -> float:
        return self.hbar * self.c

    def replace(self, **changes) -> "Constants":
        return dataclasses.replace(self, **changes)


CONSTANTS = Constants()

#: Standard CSL parameters.
LAMBDA_STANDARD = 2.2e-17  # s^-1
R_C_STANDARD = 1e-5  # cm


def energy_to_momentum(energy_kev, constants: Constants = CONSTANTS):
    """Photon wavenumber p = E / (hbar c) in cm^-1 for an energy in keV."""
    if energy_kev <= 0:
        raise DomainError(f"photon energy must be positive, got {energy_kev!r} keV")
    return energy_kev * KEV / constants.hbar_c


def momentum_to_energy(p, constants: Constants = CONSTANTS):
    """Photon energy in keV for a wavenumber in cm^-1."""
    if p <= 0:
        raise DomainError(f"photon momentum must be positive, got {p!r} cm^-1")
    return p * constants.hbar_c / KEV


def angular_frequency(p, constants: Constants = CONSTANTS):
    """omega_p = c p in s^-1."""
    return constants.c * p


def approximation_ratio(p, mass, constants: Constants = CONSTANTS):
    """2 m c^2 / (hbar c p): how strongly hbar c p dominates the recoil term.

    At back-to-back kinematics the free-particle energy denominator is
    hbar c p (1 + 1/ratio), so the closed-form rate is accurate to roughly
    2/ratio.
    """
    if p <= 0 or mass <= 0:
        raise DomainError("approximation_ratio needs p > 0 and mass > 0")
    return 2.0 * mass * constants.c**2 / (constants.hbar_c * p)
