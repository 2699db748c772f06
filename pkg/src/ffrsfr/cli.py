"""
Command-line front end.

    ffrsfr <command> [--config run.yaml] [--seed N] [--out DIR]
                     [--scheme ffr|sfr] [--design r5pd|fxd|qoscd] [--desk-scale]

Commands write CSV tables plus a ``*.plot.json`` spec per figure into the
output directory, and ``run_info.json`` with the wall-clock time (kept out
of the CSVs so that reruns are byte-identical).

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 infeasible design (tables are still written).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import __version__
from .config import ConfigError, RunConfig, load_config
from .geometry import build_layout
from .optimize import R5_FRACTION, DesignProblem, DesignSolver, omega_grid, serves_all
from .report import ResultTable, metadata, plot_spec, write_plot_spec
from .sim import SimConfig, aggregate, simulate
from .throughput import QuadratureError, ThroughputEngine

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_INFEASIBLE = 0, 2, 3, 4
DESIGNS = ("r5pd", "fxd", "qoscd")


class Context:
    """Engines and solvers shared by one command invocation."""

    def __init__(self, cfg: RunConfig, command: str, log=print):
        self.cfg = cfg
        self.command = command
        self.log = log
        self.layout = build_layout(cfg.geometry.hex_side, cfg.rings)
        self._solvers = {}
        self.infeasible = False
        self.written = []

    def solver(self, mean_users=None) -> DesignSolver:
        m = self.cfg.profile.mean_users if mean_users is None else float(mean_users)
        if m not in self._solvers:
            prof = self.cfg.profile.with_users(m)
            eng = ThroughputEngine(prof, self.cfg.geometry, self.layout, self.cfg.settings,
                                   self.cfg.policy, self.cfg.rings)
            self._solvers[m] = DesignSolver(eng)
        return self._solvers[m]

    def problem(self, scheme, design=None, target=None) -> DesignProblem:
        d = self.cfg.design
        design = design or d["kind"]
        if target is None:
            target = {"r5pd": d["v_o"], "fxd": self.cfg.zeta_target(scheme),
                      "qoscd": d["varrho"]}[design]
        return DesignProblem(scheme, design, target, d["omega_step"], d["beta_step"], d["refine"])

    def meta(self, **extra):
        return metadata(self.command, self.cfg.digest, self.cfg.seed, **extra)

    def emit(self, table: ResultTable, spec: dict | None = None):
        path = table.write(self.cfg.out_dir)
        self.written.append(path)
        if spec is not None:
            self.written.append(write_plot_spec(spec, self.cfg.out_dir, table.name))
        self.log(f"wrote {path}")

    def operating_point(self, scheme, design=None):
        """(omega, zeta, solution or None) for ``scheme``."""
        op = self.cfg.design["operating_point"]
        if op is not None:
            return op["omega"], op["zeta"], None
        sol = self.solver().solve(self.problem(scheme, design))
        if not sol.feasible:
            self.infeasible = True
        return sol.omega, sol.zeta, sol


# ---------------------------------------------------------------- commands
def cmd_cdf(ctx: Context, simulate_too: bool = False):
    cfg = ctx.cfg
    design = cfg.design["kind"]
    for scheme in cfg.schemes:
        omega, zeta, sol = ctx.operating_point(scheme)
        model = ctx.solver().model(scheme, zeta, omega)
        cdf = model.cdf()
        r5 = model.percentile(R5_FRACTION)
        mass = model.center.mass() + model.edge.mass()
        v_max = 1.05 * model.percentile(min(0.995, mass * 0.995))
        n = cfg.cdf_points
        v = np.linspace(0.0, v_max, n)
        plateau = model.plateau()
        extra = {"scheme": scheme, "design": design if sol else "operating_point",
                 "omega": f"{omega:.12g}", "zeta": f"{zeta:.12g}", "r5_bps": f"{r5:.12g}",
                 "edge_fraction": f"{model.edge.prob:.12g}",
                 "feasible": int(sol.feasible) if sol else 1}
        if plateau is not None:
            extra.update(plateau_level=f"{plateau.level:.12g}",
                         plateau_v_lo_bps=f"{plateau.v_lo:.12g}",
                         plateau_v_hi_bps=f"{plateau.v_hi:.12g}")
        cols = [("v", "bps"), ("F", "-"), ("F_center", "-"), ("F_edge", "-")]
        empirical = None
        if simulate_too:
            summary, _ = _run_sim(ctx, scheme, zeta, omega)
            empirical = summary.tagged_cdf
            support = np.unique(np.concatenate([v, summary.rates]))
            sup = float(np.max(np.abs(model.user_cdf(support) - empirical(support))))
            # also compare against the left limits at the sample points
            left = empirical(np.nextafter(summary.rates, 0.0))
            sup = max(sup, float(np.max(np.abs(model.user_cdf(summary.rates) - left))))
            extra["sup_distance"] = f"{sup:.12g}"
            cols.append(("F_empirical", "-"))
            ctx.log(f"{scheme}: sup-distance analytic vs simulated CDF = {sup:.4f}")
        F = np.maximum.accumulate(cdf(v))
        name = f"cdf_{scheme.lower()}_{extra['design']}"
        tab = ResultTable(name, cols, meta=ctx.meta(**extra))
        fc, fe = model.center.region_cdf(v), model.edge.region_cdf(v)
        for i in range(n):
            row = [v[i], F[i], fc[i], fe[i]]
            if empirical is not None:
                row.append(float(empirical(v[i])))
            tab.add(*row)
        ctx.emit(tab, plot_spec(tab, "v", ["F"] + (["F_empirical"] if empirical else []),
                                f"User throughput CDF ({scheme})", "v (bps)", "F(v)",
                                hlines=[R5_FRACTION]))
        # zoom on the lower tail around F = 0.05
        vz = np.linspace(0.0, 2.0 * r5 if r5 > 0 else v_max / 10, n)
        zoom = ResultTable(name + "_zoom", [("v", "bps"), ("F", "-")], meta=ctx.meta(**extra))
        for vi, fi in zip(vz, np.maximum.accumulate(cdf(vz))):
            zoom.add(vi, fi)
        ctx.emit(zoom, plot_spec(zoom, "v", ["F"], f"CDF lower tail ({scheme})", "v (bps)",
                                 "F(v)", hlines=[R5_FRACTION]))
        ctx.log(f"{scheme}: omega={omega:.4f} zeta={zeta:.4f} R5%={r5 / 1e6:.4f} Mbps"
                + (f" plateau={plateau.level:.4f}" if plateau else ""))


def _sweep_curve(ctx: Context, scheme: str, design: str):
    """(omega, zeta_best, eta, eta_c, eta_e) rows of the eta(omega) curve."""
    solver = ctx.solver()
    prob = ctx.problem(scheme, design)
    rows = []
    if design == "fxd":
        zeta = prob.target
        for w in omega_grid(solver.engine, prob.omega_step):
            m = solver.model(scheme, zeta, w)
            if serves_all(m):
                ec, ee = m.avg_region_throughput("C"), m.avg_region_throughput("E")
                rows.append((w, zeta, ec + ee, ec, ee))
        return rows
    if design == "r5pd":
        v_test = prob.target * (1.0 - 1e-6)
        ev = solver.grid(scheme, prob.omega_step, prob.beta_step, [v_test])
        q = int(np.flatnonzero(ev.rates == v_test)[0])
        feasible = ev.served & (ev.cdf[..., q] <= R5_FRACTION)
    else:
        ev = solver.grid(scheme, prob.omega_step, prob.beta_step)
        with np.errstate(invalid="ignore"):
            feasible = ev.served & (ev.tau_edge >= prob.target * ev.tau_center)
    for j, w in enumerate(ev.omegas):
        eta = np.where(feasible[:, j], ev.eta[:, j], -np.inf)
        if not np.isfinite(eta).any():
            continue
        i = int(np.argmax(eta))
        rows.append((w, ev.zetas[i], ev.eta[i, j], ev.eta_center[i, j], ev.eta_edge[i, j]))
    return rows


def cmd_sweep_omega(ctx: Context, designs=DESIGNS):
    for scheme in ctx.cfg.schemes:
        for design in designs:
            target = ctx.problem(scheme, design).target
            tab = ResultTable(f"sweep_omega_{scheme.lower()}_{design}",
                              [("omega", "-"), ("zeta_best", "-"), ("eta", "bps"),
                               ("eta_center", "bps"), ("eta_edge", "bps")],
                              meta=ctx.meta(scheme=scheme, design=design,
                                            target=f"{target:.12g}"))
            for row in _sweep_curve(ctx, scheme, design):
                tab.add(*row)
            ctx.emit(tab, plot_spec(tab, "omega", ["eta"], f"eta vs omega ({scheme}, {design})",
                                    "omega", "eta (bps)"))


def cmd_pareto(ctx: Context):
    d = ctx.cfg.design
    for m in d["pareto_loads"]:
        solver = ctx.solver(m)
        for scheme in ctx.cfg.schemes:
            front = solver.pareto_front(scheme, d["v_o_grid"], d["omega_step"], d["beta_step"])
            tab = ResultTable(f"pareto_{scheme.lower()}_M{m:g}",
                              [("v_o", "bps"), ("r5", "bps"), ("eta", "bps"), ("omega", "-"),
                               ("zeta", "-"), ("feasible", "bool")],
                              meta=ctx.meta(scheme=scheme, mean_users=f"{m:g}",
                                            discrete=int(scheme == "FFR")))
            for p in front:
                tab.add(p["v_o"], p["r5"], p["eta"], p["omega"], p["zeta"], p["feasible"])
            ctx.emit(tab, plot_spec(tab, "r5", ["eta"], f"Pareto front ({scheme}, M={m:g})",
                                    "R5% (bps)", "eta (bps)"))


def cmd_load_sweep(ctx: Context):
    d = ctx.cfg.design
    for scheme in ctx.cfg.schemes:
        tab = ResultTable(f"load_sweep_{scheme.lower()}",
                          [("M", "users"), ("v_o", "bps"), ("eta", "bps"), ("r5", "bps"),
                           ("omega", "-"), ("zeta", "-"), ("feasible", "bool")],
                          meta=ctx.meta(scheme=scheme))
        for v_o in d["load_v_o"]:
            for m in d["load_grid"]:
                sol = ctx.solver(m).solve_r5pd(ctx.problem(scheme, "r5pd", v_o))
                tab.add(float(m), v_o, sol.eta, sol.r5, sol.omega, sol.zeta, sol.feasible)
        ctx.emit(tab, plot_spec(tab, "M", ["eta"], f"eta vs load ({scheme})", "M (users)",
                                "eta (bps)", group="v_o"))


def cmd_jain(ctx: Context):
    d = ctx.cfg.design
    for scheme in ctx.cfg.schemes:
        tab = ResultTable(f"jain_{scheme.lower()}",
                          [("v_o", "bps"), ("jain", "-"), ("eta", "bps"), ("r5", "bps"),
                           ("omega", "-"), ("zeta", "-"), ("feasible", "bool")],
                          meta=ctx.meta(scheme=scheme))
        solver = ctx.solver()
        for v_o in d["jain_grid"]:
            sol = solver.solve_r5pd(ctx.problem(scheme, "r5pd", v_o))
            j = solver.model(scheme, sol.zeta, sol.omega).jain_index()
            tab.add(v_o, j, sol.eta, sol.r5, sol.omega, sol.zeta, sol.feasible)
        ctx.emit(tab, plot_spec(tab, "v_o", ["jain"], f"Jain index vs R5% target ({scheme})",
                                "v_o (bps)", "J"))


def _run_sim(ctx: Context, scheme, zeta, omega):
    s = ctx.cfg.sim
    cfg = SimConfig(ctx.cfg.profile, ctx.cfg.geometry, scheme, zeta, omega,
                    slots=s["slots"], drops=s["drops"], window=s["window"], warmup=s["warmup"],
                    seed=ctx.cfg.seed, rings=ctx.cfg.rings, sampling=s["sampling"])
    drops = simulate(cfg, workers=s["workers"])
    return aggregate(drops), drops


def cmd_simulate(ctx: Context):
    for scheme in ctx.cfg.schemes:
        omega, zeta, _ = ctx.operating_point(scheme)
        (summary, drops) = _run_sim(ctx, scheme, zeta, omega)
        model = ctx.solver().model(scheme, zeta, omega)
        users = ResultTable(f"sim_users_{scheme.lower()}",
                            [("drop", "-"), ("d", "m"), ("theta", "rad"), ("region", "-"),
                             ("rate", "bps")],
                            meta=ctx.meta(scheme=scheme, omega=f"{omega:.12g}", zeta=f"{zeta:.12g}"))
        for i, dr in enumerate(drops):
            for d, th, reg, r in zip(dr.users.d, dr.users.theta, dr.users.region, dr.rate):
                users.add(i, float(d), float(th), str(reg), float(r))
        ctx.emit(users)
        v = np.unique(summary.rates)
        sup = float(max(np.max(np.abs(model.user_cdf(v) - summary.tagged_cdf(v))),
                        np.max(np.abs(model.user_cdf(v) - summary.tagged_cdf(np.nextafter(v, 0))))))
        tab = ResultTable(f"sim_summary_{scheme.lower()}",
                          [("quantity", "-"), ("simulated", "-"), ("analytic", "-")],
                          meta=ctx.meta(scheme=scheme, omega=f"{omega:.12g}", zeta=f"{zeta:.12g}",
                                        drops=len(drops)))
        tab.add("mean_cell_throughput_bps", summary.mean_cell_throughput, model.avg_cell_throughput())
        tab.add("r5_bps", summary.percentile(R5_FRACTION), model.percentile(R5_FRACTION))
        tab.add("jain", summary.jain, model.jain_index())
        tab.add("cdf_sup_distance", sup, 0.0)
        ctx.emit(tab)
        ctx.log(f"{scheme}: simulated {summary.mean_cell_throughput / 1e6:.3f} Mbps, analytic "
                f"{model.avg_cell_throughput() / 1e6:.3f} Mbps, CDF sup-distance {sup:.4f}")


def cmd_optimize(ctx: Context):
    design = ctx.cfg.design["kind"]
    cols = [("scheme", "-"), ("target", "-"), ("omega", "-"), ("zeta", "-"), ("eta", "bps"),
            ("eta_center", "bps"), ("eta_edge", "bps"), ("r5", "bps"), ("feasible", "bool")]
    if design == "qoscd":
        cols.append(("tau_ratio", "-"))
    tab = ResultTable(f"optimize_{design}", cols, meta=ctx.meta(design=design))
    for scheme in ctx.cfg.schemes:
        sol = ctx.solver().solve(ctx.problem(scheme))
        ctx.infeasible |= not sol.feasible
        row = [scheme, sol.problem.target, sol.omega, sol.zeta, sol.eta, sol.eta_center,
               sol.eta_edge, sol.r5, sol.feasible]
        if design == "qoscd":
            row.append(sol.ratio)
        tab.add(*row)
        trace_cols = [("omega", "-"), ("zeta", "-"), ("eta", "bps"), ("feasible", "bool")]
        if design != "fxd":
            trace_cols.insert(3, ("constraint", "-"))
        trace = ResultTable(f"optimize_{scheme.lower()}_{design}_trace", trace_cols,
                            meta=ctx.meta(scheme=scheme, design=design,
                                          constraint="F(v_o)" if design == "r5pd" else
                                          ("tau_E/tau_C" if design == "qoscd" else "none")))
        for p in sol.trace:
            if not np.isfinite(p.eta):
                continue
            r = [p.omega, p.zeta, p.eta, p.feasible]
            if design != "fxd":
                if not np.isfinite(p.constraint):
                    continue
                r.insert(3, p.constraint)
            trace.add(*r)
        ctx.emit(trace)
        ctx.log(f"{scheme}/{design}: omega*={sol.omega:.4f} zeta*={sol.zeta:.4f} "
                f"eta={sol.eta / 1e6:.3f} Mbps R5%={sol.r5 / 1e6:.4f} Mbps feasible={sol.feasible}")
    ctx.emit(tab)


# -------------------------------------------------------------------- main
def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ffrsfr", description=__doc__.split("\n\n")[0].strip())
    p.add_argument("--version", action="version", version=f"ffrsfr {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("cdf", "sweep-omega", "pareto", "load-sweep", "jain", "simulate", "optimize"):
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="YAML run configuration")
        sp.add_argument("--seed", type=int, help="master seed (unsigned 64-bit)")
        sp.add_argument("--out", help="output directory")
        sp.add_argument("--scheme", choices=("ffr", "sfr"))
        sp.add_argument("--design", choices=DESIGNS)
        sp.add_argument("--desk-scale", action="store_true",
                        help="use 12 RBs (fast simulator runs)")
        if name == "cdf":
            sp.add_argument("--simulate", action="store_true",
                            help="add the simulated CDF and print the sup-distance")
    return p


def run(argv=None, log=print) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        cfg = load_config(args.config, {"seed": args.seed, "out": args.out, "scheme": args.scheme,
                                        "design": args.design, "desk_scale": args.desk_scale})
        ctx = Context(cfg, args.command, log)
        if args.command == "cdf":
            cmd_cdf(ctx, args.simulate)
        elif args.command == "sweep-omega":
            cmd_sweep_omega(ctx, (args.design,) if args.design else DESIGNS)
        elif args.command == "pareto":
            cmd_pareto(ctx)
        elif args.command == "load-sweep":
            cmd_load_sweep(ctx)
        elif args.command == "jain":
            cmd_jain(ctx)
        elif args.command == "simulate":
            cmd_simulate(ctx)
        elif args.command == "optimize":
            cmd_optimize(ctx)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except QuadratureError as exc:
        print(f"numerical failure: {exc} (error estimate {exc.error})", file=sys.stderr)
        return EXIT_NUMERIC
    info = {"command": args.command, "argv": list(argv) if argv is not None else sys.argv[1:],
            "wall_clock_s": round(time.perf_counter() - start, 3), "files": ctx.written,
            "config_sha256": cfg.digest, "infeasible": ctx.infeasible}
    os.makedirs(cfg.out_dir, exist_ok=True)
    with open(os.path.join(cfg.out_dir, "run_info.json"), "w", encoding="utf-8") as fh:
        json.dump(info, fh, indent=2)
        fh.write("\n")
    if ctx.infeasible:
        print("infeasible design: constraint cannot be met on the search grid", file=sys.stderr)
        return EXIT_INFEASIBLE
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
