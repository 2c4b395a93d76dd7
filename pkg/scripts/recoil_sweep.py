"""Closed-form vs full recoil denominator as the particle mass grows.

R = 2 m c^2 / (hbar c p) measures how far the recoil term sits below the
photon energy; the discrepancy should fall roughly as 2/R.
"""
import argparse

import numpy as np

from cslrad.free_electron import FreeParticle, rate_closed_form, rate_exact_quadrature
from cslrad.units import CONSTANTS, R_C_STANDARD, approximation_ratio, energy_to_momentum


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--energy", type=float, default=11.0, help="photon energy in keV")
    args = parser.parse_args()

    k = CONSTANTS
    p = energy_to_momentum(args.energy)
    closed = rate_closed_form(p, FreeParticle.electron(), 1.0, R_C_STANDARD)
    print(f"electron at {args.energy:g} keV: R = {approximation_ratio(p, k.m_e):.4g}")
    print(f"{'R':>10} {'exact/closed':>14} {'|1 - ratio|':>12} {'2/R':>10}")
    for R in np.geomspace(10.0, 1e5, 9):
        mass = R * k.hbar * p / (2.0 * k.c)
        ratio = rate_exact_quadrature(p, FreeParticle(1.0, mass), 1.0, R_C_STANDARD) / closed
        print(f"{R:10.4g} {ratio:14.8f} {abs(1 - ratio):12.4e} {2 / R:10.4e}")


if __name__ == "__main__":
    main()
