import math

import numpy as np
import pytest
from scipy import stats

from ffrsfr.geometry import default_geometry
from ffrsfr.radio import NetworkProfile
from ffrsfr.sim import (DropResult, SimConfig, UserSet, aggregate, drop_rng, drop_users,
                        jain_index, plan_layouts, run_drop, simulate, stratified_layouts,
                        sup_distance)

GEO = default_geometry()


def desk_config(**kw):
    base = dict(profile=NetworkProfile(mean_users=8), geometry=GEO, scheme="FFR", zeta=0.5,
                omega=0.6, slots=6000, drops=3, desk_scale=True)
    base.update(kw)
    return SimConfig(**base)


def test_config_validation():
    assert desk_config().warmup == 500
    assert desk_config(window=200, slots=3000).warmup == 1000
    assert desk_config().effective_profile.total_rbs == 12
    with pytest.raises(ValueError):
        desk_config(slots=400)
    with pytest.raises(ValueError):
        desk_config(warmup=50)
    with pytest.raises(ValueError):
        desk_config(zeta=0.49)            # not admissible with 12 RBs
    with pytest.raises(ValueError):
        desk_config(sampling="sobol")


def test_drop_counts_and_radii():
    rng = np.random.default_rng(0)
    prof = NetworkProfile(mean_users=32)
    counts = [len(drop_users(prof, GEO, rng)) for _ in range(10_000)]
    assert np.mean(counts) == pytest.approx(32, rel=0.01)
    empty = NetworkProfile(mean_users=1e-9)
    assert all(len(drop_users(empty, GEO, rng)) == 0 for _ in range(100))
    d = np.concatenate([drop_users(prof, GEO, rng, 0.6).d for _ in range(3200)])[:100_000]
    lo, hi = GEO.min_dist, GEO.circ_radius
    edges = np.linspace(lo, hi, 21)
    seen = np.histogram(d, edges)[0]
    want = d.size * np.diff(edges ** 2) / (hi ** 2 - lo ** 2)
    assert stats.chisquare(seen, want).pvalue > 0.05
    users = drop_users(prof, GEO, rng, 0.6)
    assert np.all((users.d <= 0.6 * hi) == (users.region == "C"))


def test_single_user_gets_every_slot():
    cfg = desk_config()
    res = run_drop(cfg, UserSet.pinned(1, 300.0, 0.0, "E"), np.random.default_rng(1))
    occ = res.occupancy["E"]
    assert occ.shape == (2, 1)
    assert np.all(occ == cfg.measured_slots)


def test_slot_conservation():
    cfg = desk_config()
    users = drop_users(cfg.effective_profile, GEO, np.random.default_rng(3), cfg.omega)
    res = run_drop(cfg, users, np.random.default_rng(4))
    for region, occ in res.occupancy.items():
        assert np.all(occ.sum(axis=1) == cfg.measured_slots)
        idx = np.flatnonzero(users.region == region)
        assert occ.shape[1] == idx.size
    assert res.bits == pytest.approx(res.rate * cfg.measured_slots * 1e-3)


def test_empty_region_idles():
    cfg = desk_config()
    res = run_drop(cfg, UserSet.pinned(3, 100.0, 0.0, "C"), np.random.default_rng(0))
    assert "E" not in res.occupancy
    assert res.cell_rate > 0


def test_fair_time_share_and_weight_stability():
    cfg = desk_config(slots=200_000)
    res = run_drop(cfg, UserSet.pinned(2, 200.0, 0.5, "C"), np.random.default_rng(9))
    share = res.occupancy["C"].sum(axis=0) / res.occupancy["C"].sum()
    assert np.allclose(share, 0.5, atol=0.02 * 0.5)
    assert np.all(res.mu_cv < 0.1)
    cfg = desk_config(slots=20_000, window=50)
    res = run_drop(cfg, UserSet.pinned(4, 250.0, 0.0, "C"), np.random.default_rng(9))
    share = res.occupancy["C"].sum(axis=0) / res.occupancy["C"].sum()
    assert np.allclose(share, 0.25, atol=0.02 * 0.25 * 4)
    assert np.all(res.mu_cv < 0.1)


def test_determinism_and_worker_independence():
    cfg = desk_config(slots=3000, drops=3)
    a = simulate(cfg)
    b = simulate(cfg)
    c = simulate(cfg, workers=2)
    for x, y, z in zip(a, b, c):
        assert np.array_equal(x.rate, y.rate) and np.array_equal(x.rate, z.rate)
        assert np.array_equal(x.users.d, z.users.d)
    assert not np.array_equal(drop_rng(0, 0).random(4), drop_rng(0, 1).random(4))


def test_stratified_layouts_are_poisson_drops():
    prof = NetworkProfile(mean_users=8)
    rng = np.random.default_rng(5)
    counts = {"C": [], "E": []}
    radii = []
    for _ in range(300):
        for u in stratified_layouts(prof, GEO, 0.6, 40, rng):
            for a in "CE":
                counts[a].append(int(np.sum(u.region == a)))
            radii.append(u.d[u.region == "E"])
    p_c = ((0.6 * GEO.circ_radius) ** 2 - GEO.min_dist ** 2) / (GEO.circ_radius ** 2 - GEO.min_dist ** 2)
    for a, p in (("C", p_c), ("E", 1 - p_c)):
        c = np.array(counts[a])
        assert c.mean() == pytest.approx(8 * p, rel=0.02)
        assert c.var() == pytest.approx(8 * p, rel=0.1)
    d = np.concatenate(radii)
    lo, hi = 0.6 * GEO.circ_radius, GEO.circ_radius
    u = (d ** 2 - lo ** 2) / (hi ** 2 - lo ** 2)
    assert stats.kstest(u, "uniform").statistic < 0.01
    cfg = desk_config(sampling="stratified", drops=5)
    assert len(plan_layouts(cfg)) == 5
    assert plan_layouts(desk_config()) is None


def test_jain_and_aggregate():
    assert jain_index([3.0, 3.0, 3.0]) == pytest.approx(1.0)
    assert jain_index([2.0, 0.0]) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        jain_index([])

    def drop(rates):
        rates = np.asarray(rates, dtype=float)
        n = rates.size
        return DropResult(UserSet(np.full(n, 100.0), np.zeros(n), np.full(n, "C")), rates, rates)

    s = aggregate([drop([1.0, 3.0]), drop([]), drop([2.0])])
    assert s.n_drops == 3
    assert s.mean_cell_throughput == pytest.approx(2.0)
    assert s.pooled_cdf(2.0) == pytest.approx(2 / 3)
    # drop-weighted: 1/6 + 1/3 for the rates <= 2; empty drop adds no mass
    assert s.tagged_cdf(2.0) == pytest.approx(0.5)
    assert s.tagged_cdf(10.0) == pytest.approx(2 / 3)
    assert s.percentile(0.05) == 1.0
    assert s.jain == pytest.approx(jain_index([1.0, 3.0, 2.0]))
    with pytest.raises(ValueError):
        aggregate([drop([]), drop([])])
    assert sup_distance(s.pooled_cdf, s.pooled_cdf, np.linspace(0, 4, 9)) == 0.0


def test_sfr_bands():
    cfg = desk_config(scheme="SFR", zeta=0.5)
    users = UserSet(np.array([100.0, 420.0]), np.array([0.0, 1.0]), np.array(["C", "E"]))
    res = run_drop(cfg, users, np.random.default_rng(0))
    assert res.occupancy["C"].shape == (8, 1)
    assert res.occupancy["E"].shape == (4, 1)
