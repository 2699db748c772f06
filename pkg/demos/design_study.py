"""
Design study on the reference deployment (100 RBs, 32 users per cell).

Solves the 5th-percentile-constrained design for FFR and SFR at a few rate
targets, then looks at the user-throughput CDF of the FFR optimum at
0.7 Mbps and the fairness of each optimum. Takes a few minutes.

    python3 demos/design_study.py
"""
import warnings

from ffrsfr.optimize import DesignProblem, DesignSolver
from ffrsfr.radio import NetworkProfile
from ffrsfr.throughput import ThroughputEngine

warnings.simplefilter("ignore", RuntimeWarning)

solver = DesignSolver(ThroughputEngine(NetworkProfile(mean_users=32)))

print("R5%-constrained optimum (eta in Mbps, R5% in Mbps)")
print(f"{'v_o':>6} {'scheme':>6} {'omega':>7} {'zeta':>6} {'eta':>8} {'R5%':>7} {'Jain':>6}")
for v_o in (0.1e6, 0.3e6, 0.7e6, 1.0e6):
    for scheme in ("FFR", "SFR"):
        sol = solver.solve(DesignProblem(scheme, "r5pd", v_o))
        j = solver.model(scheme, sol.zeta, sol.omega).jain_index()
        print(f"{v_o / 1e6:6.1f} {scheme:>6} {sol.omega:7.3f} {sol.zeta:6.2f} "
              f"{sol.eta / 1e6:8.2f} {sol.r5 / 1e6:7.3f} {j:6.3f}")

# low targets favour FFR, tighter ones SFR; FFR's optimum jumps between
# admissible rho values, so its Jain index moves much more than SFR's

sol = solver.solve(DesignProblem("FFR", "r5pd", 0.7e6))
model = solver.model("FFR", sol.zeta, sol.omega)
plat = model.plateau()
print(f"\nFFR optimum at 0.7 Mbps: edge users {model.edge.prob:.3f} of the cell")
if plat:
    print(f"CDF flat at {plat.level:.3f} between {plat.v_lo / 1e6:.2f} and "
          f"{plat.v_hi / 1e6:.2f} Mbps: edge users all sit below, center users above")
for v in (0.5e6, 1e6, 2e6, 4e6, 8e6, 16e6):
    print(f"  F({v / 1e6:4.1f} Mbps) = {model.user_cdf(v):.4f}")
