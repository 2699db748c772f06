"""
SINR statistics under Rayleigh fading.

Given a user at polar position (d, theta) in the tagged cell, the SINR on
one RB is

    gamma = g0 * E0 / (N + sum_i g_i * E_i)

with unit-mean exponential fading gains E. Its CDF has the closed form

    F(x) = 1 - exp(-x N / g0) * prod_i 1 / (1 + x g_i / g0)

which is evaluated here in the log domain. :class:`BandLink` collects the
mean powers seen by a user of one region (center or edge) and averages the
CDF over the user's bearing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import BsLayout, interferer_sets
from .radio import NetworkProfile, SpectrumPartition


@dataclass(frozen=True)
class SinrContext:
    """Mean received powers for one user on one RB (all in W)."""

    serving_mean: float
    interferer_means: np.ndarray
    noise_power: float

    def __post_init__(self):
        if not self.serving_mean > 0:
            raise ValueError("serving_mean must be positive")
        if np.any(np.asarray(self.interferer_means) < 0) or self.noise_power < 0:
            raise ValueError("interferer means and noise power must be >= 0")

    def log_survival(self, x):
        """-log(1 - F(x)) for x >= 0."""
        x = _check_x(x)
        ratios = np.asarray(self.interferer_means, dtype=float) / self.serving_mean
        out = x * (self.noise_power / self.serving_mean)
        if ratios.size:
            out = out + np.log1p(np.multiply.outer(x, ratios)).sum(axis=-1)
        return out


def _check_x(x):
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("SINR argument must be >= 0")
    return x


def sinr_cdf(ctx: SinrContext, x):
    """P(gamma <= x)."""
    return -np.expm1(-ctx.log_survival(x))


def sinr_pdf(ctx: SinrContext, x):
    """Density of gamma, the x-derivative of :func:`sinr_cdf`."""
    x = _check_x(x)
    ratios = np.asarray(ctx.interferer_means, dtype=float) / ctx.serving_mean
    rate = ctx.noise_power / ctx.serving_mean
    if ratios.size:
        rate = rate + (ratios / (1.0 + np.multiply.outer(x, ratios))).sum(axis=-1)
    return np.exp(-ctx.log_survival(x)) * rate


def sample_sinr(ctx: SinrContext, rng: np.random.Generator, size=None):
    """Draw instantaneous SINRs with i.i.d. unit-mean exponential gains."""
    size = () if size is None else (size if isinstance(size, tuple) else (size,))
    return sample_sinr_batch(np.asarray(ctx.serving_mean, dtype=float),
                             np.asarray(ctx.interferer_means, dtype=float),
                             ctx.noise_power, rng, size)


def sample_sinr_batch(serving, interferers, noise_power, rng, size=()):
    """Vectorized :func:`sample_sinr` over many links.

    Parameters
    ----------
    serving : ndarray, shape (...)
        Mean received serving powers.
    interferers : ndarray, shape (..., n_int)
        Mean received interferer powers, one row per link.
    size : tuple
        Leading sample shape; the result has shape ``size + serving.shape``.
    """
    serving = np.asarray(serving, dtype=float)
    interferers = np.asarray(interferers, dtype=float)
    size = tuple(size)
    signal = serving * rng.standard_exponential(size + serving.shape)
    if interferers.shape[-1]:
        fading = rng.standard_exponential(size + interferers.shape)
        interference = np.einsum("...i,...i->...", fading, interferers)
    else:
        interference = 0.0
    return signal / (noise_power + interference)


@dataclass(frozen=True)
class AnglePolicy:
    """How the bearing of a user is collapsed when only d is known.

    ``average``: uniform average over theta with an ``n_theta``-point
    periodic trapezoid rule (``n_theta`` must be a multiple of 6; the 60
    degree symmetry of the layout reduces it to ``n_theta/6`` bearings).
    ``fixed``: a single bearing ``theta`` (0 points at the nearest
    interferer).
    """

    kind: str = "average"
    n_theta: int = 24
    theta: float = 0.0

    def __post_init__(self):
        if self.kind not in ("average", "fixed"):
            raise ValueError(f"unknown angle policy {self.kind!r}")
        if self.kind == "average" and (self.n_theta < 6 or self.n_theta % 6):
            raise ValueError("n_theta must be a positive multiple of 6")

    def bearings(self) -> np.ndarray:
        if self.kind == "fixed":
            return np.array([float(self.theta)])
        m = self.n_theta // 6
        return np.arange(m) * (2.0 * math.pi / self.n_theta)


class BandLink:
    """Mean-power model of the RBs serving one region of the tagged cell.

    Parameters
    ----------
    profile : NetworkProfile
    layout : BsLayout
    partition : SpectrumPartition
    region : {'C', 'E'}

    Notes
    -----
    SFR center users are served on the two color bands other than the
    tagged cell's own, which differ in which interferers boost their power.
    Both variants are kept and the CDF is averaged over them, which also
    restores the 60 degree symmetry used by :class:`AnglePolicy`.
    """

    def __init__(self, profile: NetworkProfile, layout: BsLayout,
                 partition: SpectrumPartition, region: str):
        if region not in ("C", "E"):
            raise ValueError(f"region must be 'C' or 'E', got {region!r}")
        self.profile = profile
        self.layout = layout
        self.partition = partition
        self.region = region
        self.scheme = partition.scheme
        self.serving_power = partition.power(region)
        own = int(layout.edge_color[0])
        n_bs = len(layout)
        variants = []
        if self.scheme == "FFR":
            band = "center" if region == "C" else own
            sets = interferer_sets(layout, "FFR", band)
            p = np.zeros(n_bs)
            p[list(sets.all)] = partition.power_center
            variants.append(p)
        else:
            bands = [own] if region == "E" else [c for c in (1, 2, 3) if c != own]
            for band in bands:
                sets = interferer_sets(layout, "SFR", band)
                p = np.zeros(n_bs)
                p[list(sets.center)] = partition.power_center
                p[list(sets.edge)] = partition.power_edge
                variants.append(p)
        powers = np.array(variants)[:, 1:]
        active = np.any(powers > 0, axis=0)
        self.bs_index = np.arange(1, n_bs)[active]
        self.interferer_powers = powers[:, active]
        self.interferer_xy = layout.positions[self.bs_index]
        dist, bearing = layout.polar()
        self._bs_dist = dist[self.bs_index]
        self._bs_bearing = bearing[self.bs_index]

    @property
    def n_variants(self) -> int:
        return len(self.interferer_powers)

    @property
    def is_silent(self) -> bool:
        """True when the serving BS radiates nothing on these RBs."""
        return not self.serving_power > 0

    def distances(self, d, theta):
        """Interferer distances, shape ``d.shape + theta.shape + (n_int,)``
        after broadcasting ``d[..., None]`` against ``theta``."""
        d = np.asarray(d, dtype=float)[..., None]
        th = np.asarray(theta, dtype=float)[..., None]
        sq = (d * d + self._bs_dist ** 2
              - 2.0 * d * self._bs_dist * np.cos(th - self._bs_bearing))
        return np.sqrt(np.maximum(sq, 0.0))

    def means(self, d: float, theta: float, variant: int = 0):
        """(serving mean, interferer means) in W for a user at (d, theta)."""
        g = self.profile.pathloss_gain
        serving = self.serving_power * float(g(d))
        dist = self.distances(np.array(d), np.array(theta))
        inter = self.interferer_powers[variant] * g(dist)
        return serving, inter

    def context(self, d: float, theta: float, variant: int = 0) -> SinrContext:
        serving, inter = self.means(d, theta, variant)
        return SinrContext(serving, inter, self.profile.noise_power)

    def _log_survival(self, x, d, thetas):
        """-log P(gamma > x), shape (n_variants, n_theta, n_x) for scalar d."""
        alpha = self.profile.pathloss_exponent
        dist = self.distances(np.array(d), thetas)            # (n_theta, n_int)
        geo = (d / dist) ** alpha
        ratios = (self.interferer_powers[:, None, :] / self.serving_power) * geo[None]
        noise = self.profile.noise_power / (self.serving_power * float(self.profile.pathloss_gain(d)))
        out = np.broadcast_to(x * noise, ratios.shape[:2] + x.shape).copy()
        for j in range(ratios.shape[-1]):
            out += np.log1p(ratios[..., j, None] * x)
        return out

    def survival(self, x, d, policy: AnglePolicy = AnglePolicy()):
        """Angle-policy P(gamma > x | d), vectorized over ``x``."""
        x = _check_x(x)
        if self.is_silent:
            return np.zeros_like(x)
        ls = self._log_survival(np.atleast_1d(x), float(d), policy.bearings())
        return np.exp(-ls).mean(axis=(0, 1)).reshape(x.shape)

    def cdf(self, x, d, policy: AnglePolicy = AnglePolicy()):
        """Angle-policy P(gamma <= x | d), vectorized over ``x``."""
        x = _check_x(x)
        if self.is_silent:
            return np.ones_like(x)
        ls = self._log_survival(np.atleast_1d(x), float(d), policy.bearings())
        return (-np.expm1(-ls)).mean(axis=(0, 1)).reshape(x.shape)

    def pdf(self, x, d, policy: AnglePolicy = AnglePolicy()):
        """Density matching :meth:`cdf`."""
        x = _check_x(x)
        if self.is_silent:
            return np.zeros_like(x)
        xs = np.atleast_1d(x)
        thetas = policy.bearings()
        alpha = self.profile.pathloss_exponent
        dist = self.distances(np.array(float(d)), thetas)
        ratios = (self.interferer_powers[:, None, :] / self.serving_power) * ((d / dist) ** alpha)[None]
        noise = self.profile.noise_power / (self.serving_power * float(self.profile.pathloss_gain(d)))
        ls = self._log_survival(xs, float(d), thetas)
        rate = noise + (ratios[..., None] / (1.0 + ratios[..., None] * xs)).sum(axis=-2)
        return (np.exp(-ls) * rate).mean(axis=(0, 1)).reshape(x.shape)

    def grid(self, x, d_grid, policy: AnglePolicy = AnglePolicy()):
        """CDF and survival tabulated on ``d_grid`` x ``x``.

        Returns two arrays of shape ``(len(d_grid), len(x))``.
        """
        x = _check_x(x)
        n_d = len(d_grid)
        if self.is_silent:
            return np.ones((n_d, x.size)), np.zeros((n_d, x.size))
        thetas = policy.bearings()
        cdf = np.empty((n_d, x.size))
        surv = np.empty((n_d, x.size))
        for i, d in enumerate(d_grid):
            ls = self._log_survival(x, float(d), thetas)
            cdf[i] = (-np.expm1(-ls)).mean(axis=(0, 1))
            surv[i] = np.exp(-ls).mean(axis=(0, 1))
        return cdf, surv


def angle_policy_cdf(link: BandLink, d: float, x, policy: AnglePolicy = AnglePolicy(),
                     bounds=None):
    """SINR CDF at distance ``d`` after collapsing the bearing.

    ``bounds`` optionally gives the (lower, upper) radii of the region the
    user belongs to; ``d`` outside raises ``ValueError``.
    """
    if bounds is not None:
        lo, hi = bounds
        if not (lo - 1e-9 <= d <= hi + 1e-9):
            raise ValueError(f"d={d} outside region [{lo}, {hi}]")
    return link.cdf(x, d, policy)
