"""Crystal-cell variance vs thermal spread, analytic against Monte Carlo."""
import numpy as np

from cslrad.manybody import CrystalCell, CrystalSite, cell_variance
from cslrad.units import energy_to_momentum
from cslrad.verify import crystal_variance_mc

p = energy_to_momentum(11.0)
print(f"{'p sigma':>8} {'analytic':>10} {'MC':>10} {'z':>6}")
for ps in (0.05, 0.2, 0.7, 1.5, 3.0):
    sigma = ps / p
    mc, se = crystal_variance_mc(1.0, sigma, p, n_samples=200_000, seed=3)
    exact = cell_variance(CrystalCell([CrystalSite(1.0, (0, 0, 0), sigma)]), p)
    print(f"{ps:8.2f} {exact:10.6f} {mc:10.6f} {abs(mc - exact) / se:6.2f}")
