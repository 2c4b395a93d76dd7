"""Hydrogen / free-electron rate ratio across photon energies.

Prints 2 F(p a0) alongside the small-p dipole rate where it applies, so the
crossover between the two hydrogen regimes is visible.

    python scripts/hydrogen_vs_free.py [--points 25]
"""
import argparse
import warnings

import numpy as np

from cslrad.errors import RegimeWarning
from cslrad.free_electron import FreeParticle, rate_closed_form
from cslrad.hydrogen import HydrogenicAtom, rate_high_p, rate_small_p
from cslrad.units import LAMBDA_STANDARD, R_C_STANDARD, energy_to_momentum


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--points", type=int, default=25)
    args = parser.parse_args()

    atom = HydrogenicAtom.hydrogen()
    electron = FreeParticle.electron()
    print(f"{'E_keV':>10} {'p_a0':>10} {'high_p/free':>12} {'small_p/free':>13}")
    warnings.simplefilter("ignore", RegimeWarning)
    for E in np.geomspace(1e-3, 100.0, args.points):
        p = energy_to_momentum(E)
        free = rate_closed_form(p, electron, LAMBDA_STANDARD, R_C_STANDARD)
        high = rate_high_p(p, atom, LAMBDA_STANDARD, R_C_STANDARD) / free
        small = rate_small_p(p, atom, LAMBDA_STANDARD, R_C_STANDARD) / free
        print(f"{E:10.4g} {p * atom.a0_eff:10.4g} {high:12.6f} {small:13.6g}")


if __name__ == "__main__":
    main()
