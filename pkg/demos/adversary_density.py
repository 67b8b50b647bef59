"""
Link distance and adversary density
===================================

Denser adversaries sit closer to the transmitter, so covertness forces the
power down. Longer links need more power to begin with; at R = 2 m and
lambda_A = 0.002 neither scheme can satisfy both constraints. A reduced GA
budget keeps the run to a few minutes.
"""

from covertd2d.core import NetworkConfig, Scheme
from covertd2d.game import InfeasibleProblemError, solve_equilibrium
from covertd2d.solvers import GaSpec

ga = GaSpec(population=30, generations=40)
lambdas = (0.001, 0.0015, 0.002)

print("R (m)  lambda_A   PS utility   TS utility")
for r_link in (1.0, 1.5, 2.0):
    for lam in lambdas:
        cfg = NetworkConfig(r_link=r_link, lambda_a=lam)
        cells = []
        for scheme in Scheme:
            try:
                cells.append(f"{solve_equilibrium(scheme, cfg, ga).utility:10.4f}")
            except InfeasibleProblemError:
                cells.append(f"{'infeasible':>10}")
        print(f"{r_link:5.1f}  {lam:8.4f}  {cells[0]}   {cells[1]}")
