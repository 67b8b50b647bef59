"""
Stackelberg equilibrium for both SWIPT schemes
==============================================

The network (leader) picks transmit power and split; the adversary
(follower) answers with its best threshold. The network must keep the
adversary's minimum error above 1 - eps_C and the harvesting outage below
eps_P. Under power splitting the optimum sits at the smallest split, while
time switching needs most of the slot for decoding.
"""

from pathlib import Path

from covertd2d.cli import render_csv, utility_surface
from covertd2d.core import NetworkConfig, Scheme, mw_to_dbm
from covertd2d.game import solve_equilibrium

cfg = NetworkConfig()
for scheme in Scheme:
    r = solve_equilibrium(scheme, cfg)
    st = r.strategy
    print(f"{scheme.value}: p_s* = {mw_to_dbm(st.p_s):.2f} dBm, rho* = {st.rho:.3f}, "
          f"utility {r.utility:.4f} (P_SINR {r.sinr:.4f}, P_PH {r.ph:.4f}, "
          f"adversary error {r.lower.error_star:.4f})")

    # a coarse utility surface for a contour plot elsewhere
    rows = utility_surface(scheme, cfg, 25)
    out = Path(__file__).with_name(f"surface_{scheme.value}.csv")
    cols = ["p_s_mw", "rho", "utility", "slack_power", "slack_covert", "feasible"]
    out.write_text(render_csv(cols, rows, cfg, 0, "demo-surface"))
    print(f"  surface written to {out.name}")
