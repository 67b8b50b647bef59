"""
The aggregate interference at a receiver
========================================

D2D transmitters and base stations form independent Poisson fields. The sum
of their received powers has the Laplace transform exp(-nu s^(2/alpha)), a
one-sided stable law. This script prints nu, the median of the law, and the
analytic CDF next to a Monte Carlo histogram of simulated fields.
"""

import numpy as np

from covertd2d.analytics import InterferenceFieldParams, InterferenceLaw, interference_laplace
from covertd2d.core import NetworkConfig
from covertd2d.montecarlo import SimWindow, default_radius, empirical_cdf, simulate

cfg = NetworkConfig()
p_s = 10.0  # mW

params = InterferenceFieldParams.from_config(p_s, cfg)
print(f"nu = {params.nu:.4f}, index 2/alpha = {params.index}")
print(f"L(1) = {interference_laplace(1.0, params):.4f}")

law = InterferenceLaw(params)
grid = np.geomspace(0.1, 1e3, 9)

# the simulation disk is large enough that what lies outside is negligible
radius = default_radius(cfg, p_s)
print(f"simulation radius {radius:.1f} m")
batch = simulate(cfg, SimWindow(radius=radius, trials=20_000, seed=1))
emp = dict(empirical_cdf(batch.interference_rx(p_s), grid))

print(f"{'t (mW)':>10} {'analytic':>10} {'simulated':>10}")
for t in grid:
    print(f"{t:10.3g} {float(law.cdf(t)):10.4f} {emp[t]:10.4f}")
