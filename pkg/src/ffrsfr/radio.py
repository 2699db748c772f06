"""
Link budget and spectrum/power partitioning for FFR and SFR.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np


def db2lin(x):
    return 10.0 ** (np.asarray(x, dtype=float) / 10.0)


def dbm2watt(x):
    return db2lin(x) * 1e-3


@dataclass(frozen=True)
class NetworkProfile:
    """Physical-layer constants of the network (LTE 20 MHz numerology by
    default) plus the mean number of users per cell ``mean_users``.

    ``mean_users`` is M = lambda * pi * (R_m**2 - R_0m**2); the user density
    follows once a geometry is fixed, see :meth:`user_density`.
    """

    tx_power_dbm: float = 46.0
    antenna_gain_db: float = 14.0
    noise_psd_dbm_hz: float = -174.0
    noise_figure_db: float = 7.0
    subcarrier_spacing: float = 15e3
    subcarriers_per_rb: int = 12
    total_rbs: int = 100
    pathloss_a: float = 15.3
    pathloss_b: float = 37.6
    mean_users: float = 32.0

    def __post_init__(self):
        if self.total_rbs < 1 or self.subcarriers_per_rb < 1:
            raise ValueError("total_rbs and subcarriers_per_rb must be >= 1")
        if self.subcarrier_spacing <= 0 or self.pathloss_b <= 0:
            raise ValueError("subcarrier_spacing and pathloss_b must be positive")
        if self.mean_users < 0:
            raise ValueError("mean_users must be >= 0")

    @property
    def tx_power(self) -> float:
        """Total BS transmit power P_T (W)."""
        return float(dbm2watt(self.tx_power_dbm))

    @property
    def rb_bandwidth(self) -> float:
        return self.subcarriers_per_rb * self.subcarrier_spacing

    @property
    def noise_power(self) -> float:
        """Per-subcarrier noise power N_0 * df * NF (W)."""
        return float(dbm2watt(self.noise_psd_dbm_hz) * self.subcarrier_spacing
                     * db2lin(self.noise_figure_db))

    @property
    def pathloss_exponent(self) -> float:
        return self.pathloss_b / 10.0

    def pathloss_db(self, d):
        d = np.asarray(d, dtype=float)
        if np.any(d <= 0):
            raise ValueError("distance must be positive")
        return self.pathloss_a + self.pathloss_b * np.log10(d)

    def pathloss_gain(self, d):
        """Linear channel gain at distance ``d`` (m), antenna gain included."""
        return db2lin(self.antenna_gain_db - self.pathloss_db(d))

    def user_density(self, geometry) -> float:
        return self.mean_users / geometry.annulus_area

    def with_users(self, mean_users: float) -> "NetworkProfile":
        return replace(self, mean_users=float(mean_users))


def pathloss_gain(d, profile: NetworkProfile | None = None):
    return (profile or NetworkProfile()).pathloss_gain(d)


def valid_rho_set(total_rbs: int) -> np.ndarray:
    """Admissible FFR spectrum allocation factors, ascending.

    The edge bandwidth must split into three equal integer bands, so
    rho = (N - 3 * n_e) / N for n_e = floor(N/3), ..., 0.
    """
    if total_rbs < 1:
        raise ValueError("total_rbs must be >= 1")
    n_e = np.arange(total_rbs // 3, -1, -1)
    return (total_rbs - 3 * n_e) / total_rbs


@dataclass(frozen=True)
class SpectrumPartition:
    """RB counts and per-subcarrier powers of one cell.

    ``n_center``/``n_edge`` are the RBs used by the cell in each region
    (real valued for SFR when the RB count is not a multiple of 3).
    Under FFR both powers are equal.
    """

    scheme: str
    zeta: float
    n_center: float
    n_edge: float
    power_center: float
    power_edge: float
    subcarriers_per_rb: int

    def n_rbs(self, region: str) -> float:
        return self.n_center if region == "C" else self.n_edge

    def power(self, region: str) -> float:
        return self.power_center if region == "C" else self.power_edge

    @property
    def radiated_power(self) -> float:
        return self.subcarriers_per_rb * (self.n_center * self.power_center
                                          + self.n_edge * self.power_edge)


def make_partition(profile: NetworkProfile, scheme: str, zeta: float) -> SpectrumPartition:
    """Spectrum/power split for FFR (``zeta`` = rho) or SFR (``zeta`` = beta)."""
    scheme = scheme.upper()
    if not 0.0 <= zeta <= 1.0:
        raise ValueError(f"zeta={zeta} outside [0, 1]")
    n_rb = profile.total_rbs
    n_sc = profile.subcarriers_per_rb
    p_t = profile.tx_power
    if scheme == "FFR":
        rhos = valid_rho_set(n_rb)
        i = int(np.argmin(np.abs(rhos - zeta)))
        if abs(rhos[i] - zeta) > 1e-9:
            raise ValueError(f"rho={zeta} not admissible for {n_rb} RBs")
        n_e = (n_rb // 3) - i
        n_c = n_rb - 3 * n_e
        p_n = p_t / (n_sc * (n_c + n_e))
        return SpectrumPartition("FFR", float(rhos[i]), float(n_c), float(n_e), p_n, p_n, n_sc)
    if scheme == "SFR":
        n_c = 2.0 * n_rb / 3.0
        n_e = n_rb / 3.0
        p_e = p_t / (n_sc * (zeta * n_c + n_e))
        return SpectrumPartition("SFR", float(zeta), n_c, n_e, zeta * p_e, p_e, n_sc)
    raise ValueError(f"unknown scheme {scheme!r}")


def sfr_band_sizes(total_rbs: int) -> list:
    """Integer sizes of the three SFR color bands (colors 1, 2, 3).

    Color 1 (the tagged cell) gets floor(N/3) RBs; the remainder goes to
    the other colors.
    """
    base = total_rbs // 3
    extra = total_rbs - 3 * base
    sizes = [base, base, base]
    for i in range(extra):
        sizes[1 + i] += 1
    return sizes


def noise_to_signal(profile: NetworkProfile, power: float, d) -> np.ndarray:
    """N / gamma_0: noise power over mean received power at distance ``d``."""
    return profile.noise_power / (power * profile.pathloss_gain(d))
