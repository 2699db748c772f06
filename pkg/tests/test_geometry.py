import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ffrsfr.geometry import (CellGeometry, RegionPartition, build_layout, default_geometry,
                             interferer_distance, interferer_sets, region_probability)


def adjacent_pairs(lay, tol=1e-6):
    out = []
    for i, j in itertools.combinations(range(len(lay)), 2):
        sep = np.hypot(*(lay.positions[i] - lay.positions[j]))
        if abs(sep - lay.spacing) < tol * lay.hex_side:
            out.append((i, j))
    return out


def test_equal_area_circle():
    g = CellGeometry(500.0)
    assert math.pi * g.circ_radius ** 2 == pytest.approx(1.5 * math.sqrt(3) * 500.0 ** 2, rel=1e-12)
    assert g.circ_radius == pytest.approx(454.7, abs=0.05)


def test_radius_conventions():
    assert CellGeometry.from_cell_radius(500, "hex_side").hex_side == 500
    assert CellGeometry.from_cell_radius(500, "circ_radius").circ_radius == pytest.approx(500)
    assert default_geometry().circ_radius == pytest.approx(500)
    with pytest.raises(ValueError):
        CellGeometry.from_cell_radius(500, "diameter")
    with pytest.raises(ValueError):
        CellGeometry(500.0, min_dist=600.0)


def test_single_cell_layout():
    lay = build_layout(500, 0)
    assert len(lay) == 1
    assert np.allclose(lay.positions[0], 0.0)


def test_two_ring_layout(layout):
    assert len(layout) == 19
    assert np.bincount(layout.ring_index).tolist() == [1, 6, 12]
    seps = [np.hypot(*(a - b)) for a, b in itertools.combinations(layout.positions, 2)]
    assert min(seps) == pytest.approx(500 * math.sqrt(3), abs=1e-9)
    assert min(seps) == pytest.approx(866.03, abs=0.01)


@pytest.mark.parametrize("rings", [1, 2, 3, 4])
def test_coloring_is_proper(rings):
    lay = build_layout(500, rings)
    assert len(lay) == 1 + 3 * rings * (rings + 1)
    pairs = adjacent_pairs(lay)
    assert pairs
    for i, j in pairs:
        assert lay.edge_color[i] != lay.edge_color[j]
    assert set(lay.edge_color.tolist()) <= {1, 2, 3}


def test_interferer_distance_examples():
    assert interferer_distance(0.0, 1.3, (600.0, 0.0)) == pytest.approx(600.0)
    assert interferer_distance(200.0, 0.0, (866.0, 0.0)) == pytest.approx(666.0)
    got = interferer_distance(200.0, math.pi / 3, (866.03, 0.0))
    want = math.sqrt(866.03 ** 2 + 200 ** 2 - 2 * 866.03 * 200 * math.cos(math.pi / 3))
    assert got == pytest.approx(want, rel=1e-12)
    assert got == pytest.approx(785.37, abs=0.01)


@given(d=st.floats(35, 455), theta=st.floats(-math.pi, math.pi),
       bx=st.floats(-2000, 2000), by=st.floats(-2000, 2000))
def test_interferer_distance_properties(d, theta, bx, by):
    direct = math.hypot(bx - d * math.cos(theta), by - d * math.sin(theta))
    got = float(interferer_distance(d, theta, (bx, by)))
    assert got == pytest.approx(direct, abs=1e-6)
    assert got == pytest.approx(float(interferer_distance(d, -theta, (bx, -by))), abs=1e-6)


def test_region_probability_examples():
    g = CellGeometry(500.0)
    assert region_probability(g, 1.0, "C") == pytest.approx(1.0)
    assert region_probability(g, 1.0, "E") == pytest.approx(0.0)
    assert region_probability(g, g.min_omega, "C") == pytest.approx(0.0, abs=1e-15)
    rm = g.circ_radius
    want = ((0.6 * rm) ** 2 - 35 ** 2) / (rm ** 2 - 35 ** 2)
    assert region_probability(g, 0.6, "C") == pytest.approx(want, rel=1e-12)
    assert region_probability(g, 0.6, "C") == pytest.approx(0.356, abs=1e-3)
    with pytest.raises(ValueError):
        region_probability(g, 0.01, "C")
    with pytest.raises(ValueError):
        region_probability(g, 1.2, "E")


@given(st.floats(0.0, 1.0))
def test_region_probabilities_sum_to_one(u):
    g = CellGeometry(500.0)
    omega = g.min_omega + u * (1 - g.min_omega)
    p = RegionPartition(g, omega)
    assert p.probability("C") + p.probability("E") == pytest.approx(1.0, abs=1e-15)
    lo, hi = p.radii("E")
    assert lo == pytest.approx(omega * g.circ_radius)


def test_interferer_sets(layout):
    ffr_c = interferer_sets(layout, "FFR", "center")
    assert len(ffr_c.all) == 18
    own = int(layout.edge_color[0])
    ffr_e = interferer_sets(layout, "FFR", own)
    assert len(ffr_e.all) == 6
    assert all(layout.edge_color[i] == own for i in ffr_e.all)
    for band in (1, 2, 3):
        s = interferer_sets(layout, "SFR", band)
        assert len(s.center) + len(s.edge) == 18
        assert set(s.center).isdisjoint(s.edge)
        assert all(layout.edge_color[i] == band for i in s.edge)
    with pytest.raises(ValueError):
        interferer_sets(layout, "SFR", "center")
    with pytest.raises(ValueError):
        interferer_sets(layout, "XFR", 1)
