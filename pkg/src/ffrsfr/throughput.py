"""
Analytical proportional-fair throughput of the tagged cell.

Under the statistically-equivalent-users approximation, a user at distance d
sharing an RB with k - 1 other users of its region gets on average

    r(k, d) = B_RB * integral log2(1 + x) f(x|d) F(x|d)**(k-1) dx
            = B_RB * log2(e) / k * integral (1 - F(x|d)**k) / (1 + x) dx

per RB, where F(x|d) is the (bearing-averaged) SINR CDF of its band. The
user's average throughput is N_A * r(k, d), decreasing in d, which gives
the per-region user-throughput CDF by inverting d(k, v) and averaging over
the Poisson number of users in the cell.

Two evaluation paths exist:

* :meth:`RateTable` tabulates F on a (distance x SINR) grid, integrates over
  log-SINR with the trapezoid rule and interpolates in log-distance with a
  monotone cubic. This is what the design solvers use.
* ``pf_rb_rate(..., method='quad')`` evaluates the SINR integral directly with
  adaptive Gauss-Kronrod quadrature, used to validate the tables.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy import integrate, stats
from scipy.interpolate import PchipInterpolator

from .geometry import BsLayout, CellGeometry, RegionPartition, build_layout, default_geometry
from .radio import NetworkProfile, SpectrumPartition, make_partition
from .sinr import AnglePolicy, BandLink

LOG2E = 1.0 / math.log(2.0)


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class DegenerateRegionError(ValueError):
    """A per-user quantity was requested for a region with no area."""


@dataclass(frozen=True)
class QuadratureSettings:
    """Numerical knobs of the analytical engine.

    The SINR integrals run over u = log(x) on [log_x_min, log_x_max] with
    step ``log_x_step``; the integrands decay exponentially in u at both
    ends, so the trapezoid rule converges geometrically.
    """

    log_x_min: float = math.log(1e-9)
    log_x_max: float = math.log(1e12)
    log_x_step: float = 0.025
    n_distance: int = 64
    poisson_tail: float = 1e-8
    epsabs: float = 1e-10
    epsrel: float = 1e-7
    quad_limit: int = 400
    gauss_order: int = 5

    def x_nodes(self):
        u = np.arange(self.log_x_min, self.log_x_max + 0.5 * self.log_x_step, self.log_x_step)
        return np.exp(u)


def poisson_kmax(mean: float, tail: float = 1e-8) -> int:
    """Smallest k with P(K > k) < ``tail`` for K ~ Poisson(mean)."""
    if mean <= 0:
        return 1
    k = int(stats.poisson.isf(tail, mean))
    while stats.poisson.sf(k, mean) >= tail:
        k += 1
    while k > 1 and stats.poisson.sf(k - 1, mean) < tail:
        k -= 1
    return max(k, 1)


def cdf_weights(mean: float, prob: float, k_max: int) -> np.ndarray:
    """Weights of Pr{rate <= v | k_A} in the tagged-user CDF, k_A = 1..k_max.

    w[k_A] = sum_{k >= k_A} Pois(k) Binom(k_A; k, P_A) k_A / k
    """
    k = np.arange(1, k_max + 1)
    pois = stats.poisson.pmf(k, mean)
    ka = k[:, None]
    binom = stats.binom.pmf(ka.T, k[:, None], prob)   # [k, k_A]
    return (pois[:, None] * binom * (ka.T / k[:, None])).sum(axis=0)


def sum_weights(mean: float, prob: float, k_max: int) -> np.ndarray:
    """Weights of k_A * eta_u(k_A) in the region throughput double sum."""
    k = np.arange(1, k_max + 1)
    pois = stats.poisson.pmf(k, mean)
    binom = stats.binom.pmf(k[None, :], k[:, None], prob)
    return (pois[:, None] * binom * k[None, :]).sum(axis=0)


def _gauss_nodes(breaks, order):
    """Gauss-Legendre nodes/weights on consecutive intervals of ``breaks``."""
    t, w = np.polynomial.legendre.leggauss(order)
    a, b = breaks[:-1, None], breaks[1:, None]
    nodes = 0.5 * (b - a) * t + 0.5 * (a + b)
    weights = 0.5 * (b - a) * w
    return nodes.ravel(), weights.ravel()


def _pchip(x, y, axis):
    # flat stretches (survival underflowed to 0) make the slope ratios inf/nan
    # inside scipy; those entries get zero derivative anyway
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        return PchipInterpolator(x, y, axis=axis, extrapolate=True)


class RateTable:
    """Per-RB PF rates r(k, d) of one band, tabulated for k = 1..k_max on a
    log-spaced distance grid covering the whole cell.

    The table does not depend on the center/edge threshold, so one table
    per (scheme, zeta, region) serves every omega.
    """

    def __init__(self, link: BandLink, geometry: CellGeometry, k_max: int,
                 settings: QuadratureSettings = QuadratureSettings(),
                 policy: AnglePolicy = AnglePolicy()):
        self.link = link
        self.geometry = geometry
        self.k_max = int(k_max)
        self.settings = settings
        self.policy = policy
        self.n_rbs = link.partition.n_rbs(link.region)
        self.bandwidth = link.profile.rb_bandwidth
        self.d_grid = np.geomspace(geometry.min_dist, geometry.circ_radius, settings.n_distance)
        self.s_grid = np.log(self.d_grid)
        self.x = settings.x_nodes()
        # trapezoid weights in u = log x, times dx/du / (1 + x)
        w = np.full(self.x.size, settings.log_x_step)
        w[[0, -1]] *= 0.5
        self._xw = w * self.x / (1.0 + self.x)
        self.cdf_grid, self.surv_grid = link.grid(self.x, self.d_grid, policy)
        self.rb_rates = self._tabulate_rates()
        self._pchip = _pchip(self.s_grid, self.rb_rates, axis=1)
        self._coef = self._pchip.c   # (4, n_d - 1, k_max)

    def _tabulate_rates(self):
        k = np.arange(1, self.k_max + 1)
        out = np.empty((self.k_max, self.d_grid.size))
        scale = self.bandwidth * LOG2E
        if self.link.is_silent:
            out[:] = 0.0
            return out
        with np.errstate(divide="ignore"):
            log_f = np.log1p(-self.surv_grid)          # log F, -inf where F == 0
        for j in range(self.d_grid.size):
            # 1 - F**k with F**k = exp(k log F)
            tail = -np.expm1(np.multiply.outer(k, log_f[j]))
            out[:, j] = scale * (tail @ self._xw) / k
        return out

    # ----------------------------------------------------------------- rates
    def rb_rate(self, k, d):
        """Interpolated per-RB rate (bps) for integer ``k`` >= 1 and distance ``d``.
        Broadcasts ``k`` against ``d``."""
        k = np.asarray(k, dtype=int)
        d = np.asarray(d, dtype=float)
        k, d = np.broadcast_arrays(k, d)
        if np.any(k < 1) or np.any(k > self.k_max):
            raise ValueError(f"k must be in [1, {self.k_max}]")
        return self._eval_pairs(k - 1, np.log(d))

    def user_rate(self, k, d):
        """Average user throughput N_A * r(k, d)."""
        return self.n_rbs * self.rb_rate(k, d)

    def _eval_pairs(self, k_idx, s):
        j = np.clip(np.searchsorted(self.s_grid, s, side="right") - 1, 0, self.s_grid.size - 2)
        ds = s - self.s_grid[j]
        c = self._coef
        return ((c[0, j, k_idx] * ds + c[1, j, k_idx]) * ds + c[2, j, k_idx]) * ds + c[3, j, k_idx]

    def rb_rate_all(self, d):
        """Rates for every k at distances ``d``; shape (k_max, len(d))."""
        return self._pchip(np.log(np.asarray(d, dtype=float)))

    def invert(self, k, v, iterations: int = 64):
        """Smallest d in [R_0m, R_m] with N_A * r(k, d) <= v (vectorized).

        Returns R_0m when every distance already satisfies it and R_m when
        none does (rate above v everywhere)."""
        k = np.asarray(k, dtype=int)
        v = np.asarray(v, dtype=float)
        k, v = np.broadcast_arrays(k, v)
        idx = k - 1
        lo = np.full(v.shape, self.s_grid[0])
        hi = np.full(v.shape, self.s_grid[-1])
        target = v / self.n_rbs if self.n_rbs > 0 else np.full(v.shape, np.inf)
        r_lo = self._eval_pairs(idx, lo)
        r_hi = self._eval_pairs(idx, hi)
        below = r_lo <= target                # every distance at or under v
        above = r_hi > target                 # no distance reaches v
        for _ in range(iterations):
            mid = 0.5 * (lo + hi)
            ok = self._eval_pairs(idx, mid) <= target
            hi = np.where(ok, mid, hi)
            lo = np.where(ok, lo, mid)
        d = np.exp(hi)
        d = np.where(below, self.d_grid[0], d)
        d = np.where(above, self.d_grid[-1], d)
        return d

    def survival_at(self, d):
        """P(gamma > x | d) on the SINR nodes, monotone-cubic in log d."""
        return self._surv_interp(np.log(d))

    def cdf_at(self, d):
        return self._cdf_interp(np.log(d))

    @cached_property
    def _surv_interp(self):
        return _pchip(self.s_grid, self.surv_grid, axis=0)

    @cached_property
    def _cdf_interp(self):
        return _pchip(self.s_grid, self.cdf_grid, axis=0)


def _quad(func, a, b, settings, what):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err, *info = integrate.quad(func, a, b, epsabs=settings.epsabs,
                                         epsrel=settings.epsrel, limit=settings.quad_limit,
                                         full_output=1)
    if err > max(settings.epsabs, settings.epsrel * abs(val)) * 100:
        raise QuadratureError(f"{what}: quadrature did not converge "
                              f"(value {val:.6g}, error estimate {err:.2g})", val, err)
    return val


def pf_rb_rate_quad(link: BandLink, k: int, d: float, policy: AnglePolicy = AnglePolicy(),
                    settings: QuadratureSettings = QuadratureSettings(), form: str = "tail"):
    """Per-RB PF rate by adaptive quadrature of the SINR integral.

    ``form='tail'`` integrates (1 - F**k) / (1 + x) / k, ``form='density'``
    integrates log2(1 + x) f(x) F(x)**(k-1). Both use x = s t / (1 - t) on
    t in (0, 1) with s a typical SINR of the user.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if link.is_silent:
        return 0.0
    ctx = link.context(d, 0.0)
    scale = ctx.serving_mean / (ctx.noise_power + np.sum(ctx.interferer_means))

    def x_of(t):
        return scale * t / (1.0 - t)

    if form == "tail":
        def f(t):
            if t >= 1.0:
                return 0.0
            surv = float(link.survival(np.array([x_of(t)]), d, policy)[0])
            big_f = 1.0 - surv
            tail = -math.expm1(k * math.log1p(-surv)) if big_f > 0 else 1.0
            # dx / (1 + x) = scale dt / ((1 - t) (1 - t + scale t))
            return tail * scale / ((1.0 - t) * (1.0 - t + scale * t))
        val = _quad(f, 0.0, 1.0, settings, "pf_rb_rate") * LOG2E / k
    elif form == "density":
        def f(t):
            if t >= 1.0:
                return 0.0
            x = np.array([x_of(t)])
            dens = float(link.pdf(x, d, policy)[0])
            big_f = float(link.cdf(x, d, policy)[0])
            return math.log2(1.0 + x[0]) * dens * big_f ** (k - 1) * scale / (1.0 - t) ** 2
        val = _quad(f, 0.0, 1.0, settings, "pf_rb_rate")
    else:
        raise ValueError(f"unknown form {form!r}")
    return link.profile.rb_bandwidth * val


@dataclass
class PfRegionModel:
    """One region (center or edge) of the tagged cell at threshold omega."""

    table: RateTable
    partition: RegionPartition
    region: str
    mean_users: float

    @property
    def bounds(self):
        return self.partition.radii(self.region)

    @property
    def prob(self) -> float:
        return self.partition.probability(self.region)

    @property
    def n_rbs(self) -> float:
        return self.table.n_rbs

    @property
    def k_max(self) -> int:
        return self.table.k_max

    @property
    def is_empty(self) -> bool:
        lo, hi = self.bounds
        return not hi > lo

    # ----------------------------------------------------------- per-user
    def pf_rb_rate(self, k, d, method: str = "table"):
        """Per-RB rate (bps). ``method`` is 'table', 'quad' (tail form) or
        'quad-density'."""
        if method == "table":
            return self.table.rb_rate(k, d)
        form = "tail" if method == "quad" else "density"
        return pf_rb_rate_quad(self.table.link, int(k), float(d), self.table.policy,
                               self.table.settings, form)

    def user_rate(self, k, d):
        """eta_u^A(k, d) = N_A * r(k, d)."""
        return self.table.user_rate(k, d)

    def _nodes(self):
        lo, hi = self.bounds
        s = self.table.s_grid
        inner = s[(s > math.log(lo)) & (s < math.log(hi))]
        breaks = np.concatenate([[math.log(lo)], inner, [math.log(hi)]])
        nodes, w = _gauss_nodes(breaks, self.table.settings.gauss_order)
        d = np.exp(nodes)
        # density of d is 2 d / (hi^2 - lo^2); dd = d ds
        return d, w * 2.0 * d * d / (hi * hi - lo * lo)

    @cached_property
    def _region_quadrature(self):
        return self._nodes()

    def user_region_rate(self, k):
        """Average throughput of a region user when the region holds k users."""
        lo, hi = self.bounds
        if self.n_rbs == 0:
            return 0.0 if np.ndim(k) == 0 else np.zeros(np.shape(k))
        if self.is_empty:
            return self.user_rate(k, lo)
        d, w = self._region_quadrature
        k = np.asarray(k)
        vals = self.table.rb_rate_all(d)[k - 1]     # (..., n_nodes)
        return self.n_rbs * (vals @ w)

    def invert_rate_to_distance(self, k, v):
        """d(k, v) clamped to the region, plus which case applies.

        Returns (d, case) where case is -1 when every region user is at or
        below v (d <= R_L), +1 when none is (d >= R_U), 0 otherwise."""
        lo, hi = self.bounds
        d = float(self.table.invert(k, v))
        if d <= lo:
            return lo, -1
        if d >= hi:
            return hi, 1
        return d, 0

    def conditional_cdf(self, v):
        """Pr{eta_u^A(k) <= v | k} for k = 1..k_max; shape (k_max, len(v))."""
        v = np.atleast_1d(np.asarray(v, dtype=float))
        lo, hi = self.bounds
        if self.is_empty:
            return np.zeros((self.k_max, v.size))
        k = np.arange(1, self.k_max + 1)[:, None]
        d = np.clip(self.table.invert(k, v[None, :]), lo, hi)
        return (hi * hi - d * d) / (hi * hi - lo * lo)

    @cached_property
    def cdf_weights(self):
        return cdf_weights(self.mean_users, self.prob, self.k_max)

    @cached_property
    def sum_weights(self):
        return sum_weights(self.mean_users, self.prob, self.k_max)

    def region_cdf(self, v):
        """Contribution of this region to the tagged-user throughput CDF."""
        scalar = np.ndim(v) == 0
        if self.is_empty:
            out = np.zeros(np.shape(np.atleast_1d(v)))
        else:
            out = self.cdf_weights @ self.conditional_cdf(v)
        return float(out[0]) if scalar else out

    def mass(self) -> float:
        """region_cdf(v) as v -> infinity."""
        return float(self.cdf_weights.sum())

    # ------------------------------------------------------ cell throughput
    def avg_region_throughput(self, method: str = "sum"):
        """Average throughput carried by this region (bps).

        ``sum``: truncated double sum over the cell and region populations.
        ``psi``: closed form after summing the Poisson series, integrated as
        a nested (adaptive over distance, trapezoid over log-SINR) quadrature.
        """
        if self.n_rbs == 0 or self.mean_users == 0 or self.prob == 0:
            return 0.0
        if method == "sum":
            k = np.arange(1, self.k_max + 1)
            return float(self.sum_weights @ self.user_region_rate(k))
        if method == "psi":
            return self._psi_throughput()
        raise ValueError(f"unknown method {method!r}")

    def _psi_throughput(self):
        t = self.table
        lo, hi = self.bounds
        if self.is_empty:
            return 0.0
        mu = self.mean_users * self.prob
        xw = t._xw

        def inner(y):
            surv = t.survival_at(y)
            return float(-np.expm1(-mu * np.clip(surv, 0.0, 1.0)) @ xw) * y

        breaks = np.concatenate([[lo], t.d_grid[(t.d_grid > lo) & (t.d_grid < hi)], [hi]])
        total = 0.0
        for a, b in zip(breaks[:-1], breaks[1:]):
            total += _quad(inner, a, b, t.settings, "psi")
        return 2.0 * t.bandwidth * self.n_rbs * LOG2E * total / (hi * hi - lo * lo)

    def user_moment(self, order: int):
        """sum_k w[k] E[eta_u^A(k)**order] under the tagged-user weights."""
        if self.is_empty:
            return 0.0
        d, w = self._region_quadrature
        rates = self.n_rbs * self.table.rb_rate_all(d)
        return float(self.cdf_weights @ ((rates ** order) @ w))


def _bisect_first(pred, lo, hi, rel_tol=1e-9):
    """Smallest v in [lo, hi] with pred(v) true, for pred monotone in v."""
    if not pred(hi):
        return hi
    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class Plateau:
    level: float
    v_lo: float
    v_hi: float

    @property
    def width(self) -> float:
        return self.v_hi - self.v_lo


class CellModel:
    """Center and edge regions of the tagged cell for one (omega, zeta)."""

    def __init__(self, center: PfRegionModel, edge: PfRegionModel):
        self.center = center
        self.edge = edge
        self.partition = center.partition
        self.mean_users = center.mean_users

    @property
    def omega(self):
        return self.partition.omega

    def region(self, region: str) -> PfRegionModel:
        return self.center if region == "C" else self.edge

    @property
    def empty_cell_prob(self) -> float:
        return math.exp(-self.mean_users)

    # ---------------------------------------------------------- user CDF
    def user_cdf(self, v, normalized: bool = False):
        """Tagged-user throughput CDF, center plus edge contributions.

        The raw value tends to 1 - P(empty cell); ``normalized`` divides by
        that mass."""
        out = self.center.region_cdf(v) + self.edge.region_cdf(v)
        if normalized:
            out = out / (1.0 - self.empty_cell_prob)
        return out

    def max_rate(self) -> float:
        rates = [0.0]
        for reg in (self.center, self.edge):
            if not reg.is_empty and reg.n_rbs > 0:
                rates.append(float(reg.user_rate(1, reg.bounds[0])))
        return max(rates)

    def percentile(self, x: float, rel_tol: float = 1e-10) -> float:
        """inf{v : F(v) >= x}, by bisection."""
        if not 0 < x < 1:
            raise ValueError("x must lie in (0, 1)")
        if self.user_cdf(0.0) >= x:
            return 0.0
        hi = self.max_rate() * (1 + 1e-9) + 1e-12
        if self.user_cdf(hi) < x:
            return math.inf
        lo = 0.0
        while hi - lo > rel_tol * hi:
            mid = 0.5 * (lo + hi)
            if self.user_cdf(mid) >= x:
                hi = mid
            else:
                lo = mid
        return hi

    def plateau(self, tol: float = 1e-4):
        """Flat stretch of the CDF between the edge and the center users.

        It runs from the rate below which all but ``tol`` of the edge mass
        lies up to the rate below which at most ``tol`` of the center mass
        lies. Returns None when these overlap.
        """
        c, e = self.center, self.edge
        if c.is_empty or e.is_empty or e.n_rbs == 0 or c.n_rbs == 0:
            return None
        top = self.max_rate() * (1 + 1e-9) + 1e-12
        target = e.mass() - tol
        v_lo = _bisect_first(lambda v: e.region_cdf(v) >= target, 0.0, top)
        v_hi = _bisect_first(lambda v: c.region_cdf(v) > tol, 0.0, top)
        if not v_hi > v_lo:
            return None
        return Plateau(level=float(self.user_cdf(v_lo)), v_lo=v_lo, v_hi=v_hi)

    # --------------------------------------------------------- throughput
    def avg_region_throughput(self, region: str, method: str = "sum") -> float:
        return self.region(region).avg_region_throughput(method)

    def avg_cell_throughput(self, method: str = "sum") -> float:
        return self.center.avg_region_throughput(method) + self.edge.avg_region_throughput(method)

    def per_user_region_throughput(self, region: str, method: str = "sum") -> float:
        """tau_u^A = eta^A / (M P_A)."""
        reg = self.region(region)
        if reg.prob <= 0 or self.mean_users <= 0:
            raise DegenerateRegionError(f"region {region} is empty")
        return reg.avg_region_throughput(method) / (self.mean_users * reg.prob)

    def jain_index(self) -> float:
        """(E eta)^2 / E eta^2 over the tagged-user throughput distribution."""
        m0 = self.center.mass() + self.edge.mass()
        m1 = self.center.user_moment(1) + self.edge.user_moment(1)
        m2 = self.center.user_moment(2) + self.edge.user_moment(2)
        if m2 <= 0:
            return math.nan
        return (m1 / m0) ** 2 / (m2 / m0)

    def cdf(self, normalized: bool = False) -> "ThroughputCdf":
        return ThroughputCdf(self, normalized)


class ThroughputCdf:
    """Evaluable user-throughput CDF with a cached monotone envelope."""

    def __init__(self, model: CellModel, normalized: bool = False):
        self.model = model
        self.normalized = normalized

    def __call__(self, v):
        return self.model.user_cdf(v, self.normalized)

    def center(self, v):
        return self.model.center.region_cdf(v)

    def edge(self, v):
        return self.model.edge.region_cdf(v)

    @cached_property
    def plateau(self):
        return self.model.plateau()

    def grid(self, n: int = 200, v_max: float | None = None):
        """(v, F) on ``n`` equispaced rates up to ``v_max`` (default: the
        largest attainable user rate), F made non-decreasing."""
        v_max = self.model.max_rate() * 1.02 if v_max is None else v_max
        v = np.linspace(0.0, v_max, n)
        return v, np.maximum.accumulate(self(v))

    def percentile(self, x: float) -> float:
        if self.normalized:
            return self.model.percentile(x * (1.0 - self.model.empty_cell_prob))
        return self.model.percentile(x)


class ThroughputEngine:
    """Builds and caches rate tables for a fixed network.

    Tables depend on (scheme, zeta, region) only; :meth:`model` assembles a
    :class:`CellModel` for any omega on top of them.
    """

    def __init__(self, profile: NetworkProfile = NetworkProfile(),
                 geometry: CellGeometry | None = None, layout: BsLayout | None = None,
                 settings: QuadratureSettings = QuadratureSettings(),
                 policy: AnglePolicy = AnglePolicy(), rings: int = 2, cache_size: int = 256):
        self.profile = profile
        self.geometry = geometry or default_geometry()
        self.layout = layout or build_layout(self.geometry.hex_side, rings)
        self.settings = settings
        self.policy = policy
        self.k_max = poisson_kmax(profile.mean_users, settings.poisson_tail)
        self._tables: dict = {}
        self._cache_size = cache_size

    def with_users(self, mean_users: float) -> "ThroughputEngine":
        return ThroughputEngine(self.profile.with_users(mean_users), self.geometry, self.layout,
                                self.settings, self.policy, cache_size=self._cache_size)

    def partition(self, scheme: str, zeta: float) -> SpectrumPartition:
        return make_partition(self.profile, scheme, zeta)

    def table(self, scheme: str, zeta: float, region: str) -> RateTable:
        part = self.partition(scheme, zeta)
        key = (part.scheme, round(part.zeta, 12), region)
        tab = self._tables.get(key)
        if tab is None:
            link = BandLink(self.profile, self.layout, part, region)
            tab = RateTable(link, self.geometry, self.k_max, self.settings, self.policy)
            if len(self._tables) >= self._cache_size:
                self._tables.pop(next(iter(self._tables)))
            self._tables[key] = tab
        return tab

    def model(self, scheme: str, zeta: float, omega: float) -> CellModel:
        rp = RegionPartition(self.geometry, omega)
        m = self.profile.mean_users
        return CellModel(PfRegionModel(self.table(scheme, zeta, "C"), rp, "C", m),
                         PfRegionModel(self.table(scheme, zeta, "E"), rp, "E", m))
