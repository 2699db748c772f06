import numpy as np
import pytest
from hypothesis import given, strategies as st

from ffrsfr.radio import NetworkProfile, make_partition, sfr_band_sizes, valid_rho_set


def test_pathloss_examples(profile):
    assert profile.pathloss_db(1.0) == pytest.approx(15.3)
    assert profile.pathloss_db(10.0) == pytest.approx(52.9)
    assert profile.pathloss_db(500.0) == pytest.approx(116.78, abs=0.01)
    # antenna gain on top of the pathloss
    assert profile.pathloss_gain(1.0) == pytest.approx(10 ** ((14 - 15.3) / 10))
    with pytest.raises(ValueError):
        profile.pathloss_gain(0.0)


def test_pathloss_decreasing(profile):
    d = np.geomspace(1, 5000, 200)
    assert np.all(np.diff(profile.pathloss_gain(d)) < 0)


def test_budget_constants(profile):
    assert profile.rb_bandwidth == 180e3
    assert profile.tx_power == pytest.approx(39.81, abs=0.01)
    # -174 dBm/Hz + 10 log10(15 kHz) + 7 dB
    assert 10 * np.log10(profile.noise_power / 1e-3) == pytest.approx(-125.24, abs=0.01)


def test_valid_rho_set():
    assert valid_rho_set(3).tolist() == [0.0, 1.0]
    assert valid_rho_set(4).tolist() == [0.25, 1.0]
    s = valid_rho_set(100)
    assert len(s) == 34
    assert s[0] == pytest.approx(0.01) and s[1] == pytest.approx(0.04)
    assert s[-2] == pytest.approx(0.97) and s[-1] == 1.0
    assert np.all(np.diff(s) > 0)


def test_partition_examples(profile):
    p = make_partition(profile, "FFR", 1.0)
    assert (p.n_center, p.n_edge) == (100, 0)
    assert p.power_center == pytest.approx(profile.tx_power / (12 * 100))
    s = make_partition(profile, "SFR", 1.0)
    assert s.power_center == pytest.approx(s.power_edge)
    assert s.power_center == pytest.approx(p.power_center)
    prof = NetworkProfile(total_rbs=99, tx_power_dbm=10 * np.log10(39.8e3))
    s = make_partition(prof, "SFR", 0.5)
    assert (s.n_center, s.n_edge) == (66, 33)
    assert s.power_edge == pytest.approx(39.8 / (12 * (0.5 * 66 + 33)))
    assert s.power_center == pytest.approx(0.5 * s.power_edge)


def test_partition_errors(profile):
    with pytest.raises(ValueError):
        make_partition(profile, "FFR", 0.5)
    with pytest.raises(ValueError):
        make_partition(profile, "SFR", 1.5)
    with pytest.raises(ValueError):
        make_partition(profile, "HFR", 0.5)


@given(i=st.integers(0, 33), beta=st.floats(0, 1))
def test_power_conservation(i, beta):
    prof = NetworkProfile()
    for p in (make_partition(prof, "FFR", valid_rho_set(100)[i]), make_partition(prof, "SFR", beta)):
        assert p.radiated_power == pytest.approx(prof.tx_power, rel=1e-9)
    f = make_partition(prof, "FFR", valid_rho_set(100)[i])
    assert f.n_center + 3 * f.n_edge == 100


@pytest.mark.parametrize("n", [3, 12, 13, 14, 100])
def test_sfr_band_sizes(n):
    sizes = sfr_band_sizes(n)
    assert sum(sizes) == n
    assert sizes[0] == n // 3
    assert max(sizes) - min(sizes) <= 1
