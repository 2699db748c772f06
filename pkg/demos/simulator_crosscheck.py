"""
Analytic model against the Monte Carlo simulator at desk scale (12 RBs).

First a few users pinned at one spot, where the equal-statistics
assumption behind the PF rate formula holds exactly; then full Poisson
drops for an FFR and an SFR setting.

    python3 demos/simulator_crosscheck.py [--drops 40] [--slots 50000]
"""
import argparse
import warnings

import numpy as np

from ffrsfr.geometry import default_geometry
from ffrsfr.radio import NetworkProfile
from ffrsfr.sim import SimConfig, UserSet, aggregate, run_drop, simulate
from ffrsfr.sinr import AnglePolicy
from ffrsfr.throughput import ThroughputEngine

warnings.simplefilter("ignore", RuntimeWarning)

p = argparse.ArgumentParser()
p.add_argument("--drops", type=int, default=10)
p.add_argument("--slots", type=int, default=20_000)
args = p.parse_args()

geo = default_geometry()
prof = NetworkProfile(mean_users=8)

# pinned users: same distance and bearing, so their SINRs are i.i.d.
d, theta = 200.0, 0.3
cfg = SimConfig(prof, geo, "FFR", 0.5, 0.6, slots=100_000, desk_scale=True)
reg = ThroughputEngine(cfg.effective_profile, geo,
                       policy=AnglePolicy("fixed", theta=theta)).model("FFR", 0.5, 0.6).center
print("pinned users at d = 200 m (per-user rate, Mbps)")
for k in (1, 2, 4, 8):
    res = run_drop(cfg, UserSet.pinned(k, d, theta, "C"), np.random.default_rng(k))
    want = reg.n_rbs * reg.pf_rb_rate(k, d, "quad")
    print(f"  k={k}: simulated {res.rate.mean() / 1e6:.4f}  analytic {want / 1e6:.4f}")

print(f"\nPoisson drops ({args.drops} x {args.slots} slots, stratified)")
for scheme, zeta in (("FFR", 0.5), ("SFR", 0.5)):
    cfg = SimConfig(prof, geo, scheme, zeta, 0.6, slots=args.slots, drops=args.drops,
                    desk_scale=True, sampling="stratified")
    summary = aggregate(simulate(cfg))
    model = ThroughputEngine(cfg.effective_profile, geo).model(scheme, zeta, 0.6)
    r = np.unique(summary.rates)
    sup = np.max(np.abs(model.user_cdf(r) - summary.tagged_cdf(r)))
    print(f"  {scheme}: cell throughput simulated {summary.mean_cell_throughput / 1e6:.2f} "
          f"+- {summary.cell_throughput_stderr / 1e6:.2f}, analytic "
          f"{model.avg_cell_throughput() / 1e6:.2f} Mbps; CDF sup-distance {sup:.3f}")
