"""
Monte Carlo system-level simulator of the tagged cell.

Each drop places a Poisson number of users uniformly on the annulus
[R_0m, R_m], splits them into center and edge by the threshold, and runs a
proportional-fair scheduler slot by slot. On every RB of its region a user
draws an independent Rayleigh-faded SINR each slot; the RB goes to the user
with the largest gamma / mu, where mu is the user's moving average of served
SINR over a window of W slots (summed over the region's RBs). Interferers
always transmit at their class power.

Drops are independent: drop ``i`` draws from ``SeedSequence([seed, i])`` so
results do not depend on how drops are distributed over workers.

With ``sampling='stratified'`` the user layouts of all drops are planned
together: the per-region counts come from a randomly shifted rank-1 lattice
pushed through the Poisson quantile function, and radii and bearings are
Latin-hypercube samples within each (region, count) stratum. Every drop is
still marginally a Poisson drop, so estimates stay unbiased while their
variance across the few desk-scale drops shrinks.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import stats

from .geometry import BsLayout, CellGeometry, RegionPartition, build_layout
from .radio import NetworkProfile, make_partition, sfr_band_sizes
from .sinr import BandLink, sample_sinr_batch

DESK_RBS = 12
# second generator of the rank-1 lattice used for stratified counts
_LATTICE_GEN = 11


@dataclass(frozen=True)
class SimConfig:
    """Scenario and run-length settings of the simulator.

    ``desk_scale`` replaces the RB count of ``profile`` with 12 so that a
    drop runs in about a second. ``warmup`` defaults to max(5 W, 500).
    """

    profile: NetworkProfile
    geometry: CellGeometry
    scheme: str
    zeta: float
    omega: float
    slots: int = 50_000
    drops: int = 40
    window: int = 100
    warmup: int | None = None
    seed: int = 0
    desk_scale: bool = False
    rings: int = 2
    slot_duration: float = 1e-3
    chunk: int = 2048
    sampling: str = "iid"

    def __post_init__(self):
        object.__setattr__(self, "scheme", self.scheme.upper())
        if self.sampling not in ("iid", "stratified"):
            raise ValueError(f"unknown sampling {self.sampling!r}")
        if self.warmup is None:
            object.__setattr__(self, "warmup", max(5 * self.window, 500))
        if self.window < 1 or self.drops < 1:
            raise ValueError("window and drops must be >= 1")
        if not self.slots > self.warmup >= self.window:
            raise ValueError("need slots > warmup >= window")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        RegionPartition(self.geometry, self.omega)
        make_partition(self.effective_profile, self.scheme, self.zeta)

    @property
    def effective_profile(self) -> NetworkProfile:
        if self.desk_scale:
            return replace(self.profile, total_rbs=DESK_RBS)
        return self.profile

    @property
    def measured_slots(self) -> int:
        return self.slots - self.warmup


@dataclass
class UserSet:
    """Users of one drop in polar coordinates around the tagged BS."""

    d: np.ndarray
    theta: np.ndarray
    region: np.ndarray   # 'C' or 'E' per user

    def __len__(self):
        return len(self.d)

    @classmethod
    def pinned(cls, k: int, d: float, theta: float = 0.0, region: str = "C"):
        """``k`` users sharing one position (their SINRs are then i.i.d.)."""
        return cls(np.full(k, float(d)), np.full(k, float(theta)), np.full(k, region))


def drop_users(profile: NetworkProfile, geometry: CellGeometry, rng: np.random.Generator,
               omega: float = 1.0) -> UserSet:
    """Poisson number of users, uniform on the annulus, tagged by region."""
    k = rng.poisson(profile.mean_users)
    lo2, hi2 = geometry.min_dist ** 2, geometry.circ_radius ** 2
    d = np.sqrt(lo2 + rng.random(k) * (hi2 - lo2))
    theta = rng.random(k) * 2.0 * math.pi
    th = RegionPartition(geometry, omega).threshold
    return UserSet(d, theta, np.where(d <= th, "C", "E"))


@dataclass
class DropResult:
    """Per-user statistics of one drop, measured after warmup.

    ``rate`` is the user's mean throughput (bps), ``bits`` the data it
    received over the measured slots. ``occupancy[A]`` counts, per RB of
    region A and per region user, the slots it was scheduled; ``mu_cv`` is
    the time coefficient of variation of each user's PF average.
    """

    users: UserSet
    rate: np.ndarray
    bits: np.ndarray
    occupancy: dict = field(default_factory=dict)
    mu_cv: np.ndarray | None = None

    @property
    def cell_rate(self) -> float:
        return float(self.rate.sum())

    @property
    def n_users(self) -> int:
        return len(self.users)


def _sfr_plan(total_rbs: int, region: str, own_color: int = 1):
    """(link variant, RB count) pairs carrying an SFR region's traffic."""
    sizes = sfr_band_sizes(total_rbs)
    if region == "E":
        return [(0, sizes[own_color - 1])]
    others = [c for c in (1, 2, 3) if c != own_color]
    return [(i, sizes[c - 1]) for i, c in enumerate(others)]


class _RegionScheduler:
    """PF scheduling of one region's RBs among that region's users."""

    def __init__(self, link: BandLink, d, theta, plan, window: int):
        self.window = window
        self.bandwidth = link.profile.rb_bandwidth
        self.noise = link.profile.noise_power
        gain = link.profile.pathloss_gain
        self.serving = link.serving_power * gain(d)                   # (k,)
        dist = link.distances(d, theta)                               # (k, n_int)
        variants = np.concatenate([np.full(n, v) for v, n in plan]).astype(int)
        self.n_rb = variants.size
        # mean interferer powers per (rb, user, interferer)
        self.interference = link.interferer_powers[variants][:, None, :] * gain(dist)[None]
        self.serving_rb = np.broadcast_to(self.serving, (self.n_rb, self.serving.size))

    def run(self, rng, slots: int, warmup: int, chunk: int):
        k = self.serving.size
        served = np.zeros(k)                     # sum of per-slot rates (bps)
        occupancy = np.zeros((self.n_rb, k), dtype=np.int64)
        mu = None
        decay = 1.0 - 1.0 / self.window
        mu_sum = np.zeros(k)
        mu_sq = np.zeros(k)
        cols = np.arange(k)
        t0 = 0
        while t0 < slots:
            c = min(chunk, slots - t0)
            gamma = sample_sinr_batch(self.serving_rb, self.interference, self.noise, rng, (c,))
            if mu is None:
                mu = gamma[0].mean(axis=0)
            picks = np.empty((c, self.n_rb), dtype=np.int64)
            for t in range(c):
                g = gamma[t]
                sel = np.argmax(g / mu, axis=1)
                picks[t] = sel
                hit = sel[:, None] == cols
                mu = decay * mu + (hit * g).sum(axis=0) / self.window
                if t0 + t >= warmup:
                    mu_sum += mu
                    mu_sq += mu * mu
            start = max(warmup - t0, 0)
            if start < c:
                p = picks[start:]
                rates = self.bandwidth * np.log2(1.0 + np.take_along_axis(
                    gamma[start:], p[..., None], axis=2)[..., 0])
                served += np.bincount(p.ravel(), weights=rates.ravel(), minlength=k)
                for n in range(self.n_rb):
                    occupancy[n] += np.bincount(p[:, n], minlength=k)
            t0 += c
        m = slots - warmup
        mean = mu_sum / m
        var = np.maximum(mu_sq / m - mean * mean, 0.0)
        return served / m, occupancy, np.sqrt(var) / mean


def _links(config: SimConfig, layout: BsLayout):
    profile = config.effective_profile
    part = make_partition(profile, config.scheme, config.zeta)
    out = {}
    for region in ("C", "E"):
        link = BandLink(profile, layout, part, region)
        if config.scheme == "FFR":
            n = int(round(part.n_rbs(region)))
            plan = [(0, n)] if n > 0 else []
        else:
            plan = _sfr_plan(profile.total_rbs, region, int(layout.edge_color[0]))
        if link.is_silent:
            plan = []
        out[region] = (link, [(v, n) for v, n in plan if n > 0])
    return out


def run_drop(config: SimConfig, users: UserSet, rng: np.random.Generator | None = None,
             layout: BsLayout | None = None) -> DropResult:
    """Simulate one drop. RBs of a region without users stay idle."""
    layout = layout or build_layout(config.geometry.hex_side, config.rings)
    rng = rng if rng is not None else np.random.default_rng(config.seed)
    k = len(users)
    rate = np.zeros(k)
    mu_cv = np.full(k, np.nan)
    occupancy = {}
    for region, (link, plan) in _links(config, layout).items():
        idx = np.flatnonzero(users.region == region)
        if idx.size == 0 or not plan:
            continue
        sched = _RegionScheduler(link, users.d[idx], users.theta[idx], plan, config.window)
        r, occ, cv = sched.run(rng, config.slots, config.warmup, config.chunk)
        rate[idx] = r
        mu_cv[idx] = cv
        occupancy[region] = occ
    bits = rate * config.measured_slots * config.slot_duration
    return DropResult(users, rate, bits, occupancy, mu_cv)


def drop_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(index)]))


def _lhs(rng, n):
    return (rng.permutation(n) + rng.random(n)) / max(n, 1)


def stratified_layouts(profile: NetworkProfile, geometry: CellGeometry, omega: float,
                       drops: int, rng: np.random.Generator) -> list:
    """User sets of ``drops`` drops with jointly stratified sampling."""
    part = RegionPartition(geometry, omega)
    i = np.arange(drops)
    shift = rng.random(2)
    lattice = {"C": (i / drops + shift[0]) % 1.0, "E": (i * _LATTICE_GEN / drops + shift[1]) % 1.0}
    counts = {a: stats.poisson.ppf(lattice[a], profile.mean_users * part.probability(a)).astype(int)
              for a in ("C", "E")}
    d = [[] for _ in range(drops)]
    th = [[] for _ in range(drops)]
    reg = [[] for _ in range(drops)]
    for a in ("C", "E"):
        lo, hi = part.radii(a)
        for k in np.unique(counts[a]):
            members = np.flatnonzero(counts[a] == k)
            if k == 0:
                continue
            n = k * members.size
            u_r = _lhs(rng, n).reshape(members.size, k)
            u_t = _lhs(rng, n).reshape(members.size, k)
            for row, m in enumerate(members):
                d[m].append(np.sqrt(lo * lo + u_r[row] * (hi * hi - lo * lo)))
                th[m].append(2.0 * math.pi * u_t[row])
                reg[m].append(np.full(k, a))
    out = []
    for m in range(drops):
        if d[m]:
            out.append(UserSet(np.concatenate(d[m]), np.concatenate(th[m]), np.concatenate(reg[m])))
        else:
            out.append(UserSet(np.zeros(0), np.zeros(0), np.zeros(0, dtype="<U1")))
    return out


def plan_layouts(config: SimConfig) -> list | None:
    """Pre-planned user sets (stratified sampling) or None (each drop draws its own)."""
    if config.sampling != "stratified":
        return None
    rng = np.random.default_rng(np.random.SeedSequence([int(config.seed), config.drops, 2 ** 32]))
    return stratified_layouts(config.effective_profile, config.geometry, config.omega,
                              config.drops, rng)


def _simulate_one(args):
    config, index, users = args
    rng = drop_rng(config.seed, index)
    if users is None:
        users = drop_users(config.effective_profile, config.geometry, rng, config.omega)
    return run_drop(config, users, rng)


def simulate(config: SimConfig, workers: int = 1) -> list:
    """Run ``config.drops`` independent drops, optionally in parallel."""
    layouts = plan_layouts(config) or [None] * config.drops
    jobs = [(config, i, layouts[i]) for i in range(config.drops)]
    if workers <= 1:
        return [_simulate_one(j) for j in jobs]
    with ProcessPoolExecutor(workers) as pool:
        return list(pool.map(_simulate_one, jobs))


def jain_index(x) -> float:
    """(sum x)^2 / (n sum x^2)."""
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        raise ValueError("Jain index of an empty sample")
    sq = float(np.dot(x, x))
    if sq == 0.0:
        return 1.0
    return float(x.sum() ** 2 / (x.size * sq))


@dataclass
class SimSummary:
    """Statistics pooled over drops.

    Two empirical CDFs are kept. ``pooled_cdf`` weights every simulated
    user equally. ``tagged_cdf`` weights each drop equally and splits the
    drop's weight evenly over its users, empty drops adding no mass; it
    estimates the distribution of a user picked at random in a random
    drop, which is what the analytical CDF describes.
    """

    rates: np.ndarray
    weights: np.ndarray
    n_drops: int
    cell_rates: np.ndarray

    @property
    def mean_cell_throughput(self) -> float:
        return float(self.cell_rates.mean())

    @property
    def cell_throughput_stderr(self) -> float:
        if self.n_drops < 2:
            return math.nan
        return float(self.cell_rates.std(ddof=1) / math.sqrt(self.n_drops))

    def pooled_cdf(self, v):
        r = np.sort(self.rates)
        return np.searchsorted(r, np.asarray(v, dtype=float), side="right") / r.size

    def tagged_cdf(self, v):
        order = np.argsort(self.rates, kind="stable")
        cum = np.concatenate([[0.0], np.cumsum(self.weights[order])])
        pos = np.searchsorted(self.rates[order], np.asarray(v, dtype=float), side="right")
        return cum[pos]

    def percentile(self, x: float = 0.05) -> float:
        """Order-statistic percentile of the pooled user rates."""
        r = np.sort(self.rates)
        i = max(int(math.ceil(x * r.size)) - 1, 0)
        return float(r[i])

    @property
    def jain(self) -> float:
        return jain_index(self.rates)


def aggregate(drops) -> SimSummary:
    """Reduce a list of :class:`DropResult` (order independent up to ties)."""
    drops = list(drops)
    if not drops or all(dr.n_users == 0 for dr in drops):
        raise ValueError("no users in any drop")
    rates, weights = [], []
    for dr in drops:
        if dr.n_users:
            rates.append(dr.rate)
            weights.append(np.full(dr.n_users, 1.0 / (dr.n_users * len(drops))))
    cell = np.array([dr.cell_rate for dr in drops])
    return SimSummary(np.concatenate(rates), np.concatenate(weights), len(drops), cell)


def sup_distance(f, g, v) -> float:
    """max |f(v) - g(v)| over the points ``v``."""
    return float(np.max(np.abs(np.asarray(f(v)) - np.asarray(g(v)))))
