"""
The adversary's best threshold
==============================

The adversary declares "transmitting" when its received power exceeds tau.
False alarms fall and misses rise as tau grows, so the total error
FA + MD is unimodal. The Rosenbrock search lands on the same minimum as a
dense grid.
"""

import numpy as np

from covertd2d.analytics import DetectionModel
from covertd2d.core import NetworkConfig, dbm_to_mw
from covertd2d.game import best_response_tau, lower_stage_interval
from covertd2d.solvers import exhaustive_min

cfg = NetworkConfig()
p_s = dbm_to_mw(10.0)
model = DetectionModel(p_s, cfg)
lo, hi = lower_stage_interval(model, cfg)

print(f"{'tau (mW)':>10} {'FA':>8} {'MD':>8} {'FA+MD':>8}")
for tau in np.linspace(lo, hi, 12):
    print(f"{tau:10.4f} {model.fa(tau):8.5f} {model.md(tau):8.5f} {model.error(tau):8.5f}")

sol = best_response_tau(p_s, cfg)
x_grid, d_grid = exhaustive_min(model.error, (lo, hi), 2000)
print(f"\nRosenbrock: tau* = {sol.tau_star:.5f} mW, error {sol.error_star:.6f}")
print(f"grid:       tau  = {x_grid:.5f} mW, error {d_grid:.6f}")

# stronger transmitters are easier to spot
for p in (1.0, 10.0, 100.0, 1000.0):
    s = best_response_tau(p, cfg)
    print(f"p_s = {p:7.1f} mW -> min detection error {s.error_star:.5f}")
