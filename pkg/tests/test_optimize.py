import math

import numpy as np
import pytest

from ffrsfr.optimize import (CONSTRAINT_RTOL, DesignProblem, DesignSolver, evaluate_grid,
                             omega_grid, serves_all, zeta_grid)
from ffrsfr.throughput import ThroughputEngine

STEP = dict(omega_step=0.05, beta_step=0.1)


def problem(scheme, design, target):
    return DesignProblem(scheme, design, target, **STEP)


def test_problem_validation():
    with pytest.raises(ValueError):
        DesignProblem("FFR", "r5pd", -1.0)
    with pytest.raises(ValueError):
        DesignProblem("SFR", "qoscd", 1.5)
    with pytest.raises(ValueError):
        DesignProblem("HFR", "fxd", 0.5)
    assert DesignProblem("ffr", "R5PD", 1e5).scheme == "FFR"


def test_grids(coarse_solver):
    eng = coarse_solver.engine
    g = omega_grid(eng, 0.05)
    assert g[0] == pytest.approx(eng.geometry.min_omega)
    assert g[-1] == 1.0 and np.all(np.diff(g) > 0)
    assert zeta_grid(eng, "FFR").tolist() == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert zeta_grid(eng, "SFR", 0.25).tolist() == [0.0, 0.25, 0.5, 0.75, 1.0]


def _unconstrained_max(solver, scheme):
    ev = solver.grid(scheme, **STEP)
    return np.where(ev.served, ev.eta, -np.inf).max()


@pytest.mark.parametrize("scheme", ["FFR", "SFR"])
def test_r5pd_vacuous_constraint(coarse_solver, scheme):
    sol = coarse_solver.solve(DesignProblem(scheme, "r5pd", 0.0, refine=False, **STEP))
    assert sol.feasible
    assert sol.eta == pytest.approx(_unconstrained_max(coarse_solver, scheme), rel=1e-12)


@pytest.mark.parametrize("scheme", ["FFR", "SFR"])
def test_r5pd_dominance_and_certificate(coarse_solver, scheme):
    v_o = 150e3
    sol = coarse_solver.solve(problem(scheme, "r5pd", v_o))
    assert sol.feasible
    best = max(p.eta for p in sol.trace if p.feasible)
    assert sol.eta >= best * (1 - 1e-9)
    fresh = ThroughputEngine(coarse_solver.engine.profile, coarse_solver.engine.geometry)
    m = fresh.model(scheme, sol.zeta, sol.omega)
    assert m.percentile(0.05) >= v_o * (1 - CONSTRAINT_RTOL)
    assert m.avg_cell_throughput() == pytest.approx(sol.eta, rel=1e-12)
    assert serves_all(m)


def test_r5pd_infeasible(coarse_solver):
    ev = coarse_solver.grid("FFR", **STEP)
    r5_max = max(coarse_solver.model("FFR", ev.zetas[i], ev.omegas[j]).percentile(0.05)
                 for i in range(len(ev.zetas)) for j in range(len(ev.omegas)) if ev.served[i, j])
    sol = coarse_solver.solve(problem("FFR", "r5pd", 2 * r5_max))
    assert not sol.feasible
    assert sol.r5 < 2 * r5_max


def test_fxd_matches_sweep(coarse_solver):
    p = problem("FFR", "fxd", 0.5)
    sol = coarse_solver.solve(p)
    omegas = omega_grid(coarse_solver.engine, 0.05)
    curve = coarse_solver.sweep_omega("FFR", 0.5, omegas)
    j = int(np.argmax(curve))
    assert abs(sol.omega - omegas[j]) <= 0.05 + 1e-9
    assert sol.eta >= curve[j]
    fine = np.linspace(max(omegas[0], sol.omega - 0.01), min(1, sol.omega + 0.01), 41)
    assert sol.eta >= coarse_solver.sweep_omega("FFR", 0.5, fine).max() * (1 - 1e-6)
    with pytest.raises(ValueError):
        coarse_solver.solve(problem("FFR", "fxd", 0.4))


def test_sfr_tends_to_ffr_as_beta_decreases(solver32):
    ffr = solver32.solve(DesignProblem("FFR", "fxd", 0.49)).eta
    gaps = [solver32.solve(DesignProblem("SFR", "fxd", b)).eta - ffr
            for b in (1.0, 0.5, 0.2, 0.1, 0.05, 0.02)]
    assert all(g > 0 for g in gaps)
    assert np.all(np.diff(gaps) < 0)


@pytest.mark.parametrize("scheme", ["FFR", "SFR"])
def test_qoscd(coarse_solver, scheme):
    free = coarse_solver.solve(problem(scheme, "qoscd", 0.0))
    grid_best = _unconstrained_max(coarse_solver, scheme)
    # SFR polishes beta off the grid, so it may only improve on the grid
    assert grid_best * (1 - 1e-12) <= free.eta <= grid_best * 1.01
    loose = coarse_solver.solve(problem(scheme, "qoscd", 0.02))
    tight = coarse_solver.solve(problem(scheme, "qoscd", 0.2))
    assert tight.eta <= loose.eta
    for sol, q in ((loose, 0.02), (tight, 0.2)):
        assert sol.feasible
        m = ThroughputEngine(coarse_solver.engine.profile).model(scheme, sol.zeta, sol.omega)
        assert m.per_user_region_throughput("E") >= q * m.per_user_region_throughput("C")


def test_qoscd_constraint_active(solver32):
    for scheme in ("FFR", "SFR"):
        sol = solver32.solve(DesignProblem(scheme, "qoscd", 0.6))
        assert sol.feasible
        assert 0.6 <= sol.ratio <= 0.6 + 0.15


def test_pareto_front(coarse_solver):
    targets = np.array([0.0, 50e3, 100e3, 150e3, 200e3])
    for scheme in ("FFR", "SFR"):
        front = coarse_solver.pareto_front(scheme, targets, **STEP)
        etas = [p["eta"] for p in front if p["feasible"]]
        assert np.all(np.diff(etas) <= 1e-9 * etas[0])
        for p in front:
            if p["feasible"]:
                assert p["r5"] >= p["v_o"] * (1 - CONSTRAINT_RTOL)
            assert p["discrete"] == (scheme == "FFR")
    with pytest.raises(ValueError):
        coarse_solver.pareto_front("FFR", targets[::-1], **STEP)


def test_reproducible_and_parallel(coarse_solver):
    eng = coarse_solver.engine
    a = DesignSolver(eng).solve(problem("SFR", "r5pd", 100e3))
    b = DesignSolver(ThroughputEngine(eng.profile)).solve(problem("SFR", "r5pd", 100e3))
    assert (a.omega, a.zeta, a.eta, a.r5) == (b.omega, b.zeta, b.eta, b.r5)
    zetas = zeta_grid(eng, "SFR", 0.25)
    omegas = omega_grid(eng, 0.1)
    s = evaluate_grid(eng, "SFR", zetas, omegas, [1e5], workers=1)
    p = evaluate_grid(ThroughputEngine(eng.profile), "SFR", zetas, omegas, [1e5], workers=2)
    assert np.array_equal(s.eta, p.eta) and np.array_equal(s.cdf, p.cdf)
