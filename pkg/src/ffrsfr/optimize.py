"""
Design solvers for the distance threshold ratio omega and the reuse factor
zeta (rho for FFR, beta for SFR).

* R5pD: maximize the average cell throughput subject to the 5th-percentile
  user rate being at least v_o.
* FxD: zeta fixed, maximize over omega only.
* QoScD: maximize subject to tau_E >= varrho * tau_C, the per-user average
  throughput of edge users being at least a fraction of the center users'.

All solvers run an exhaustive grid (the objective has plateaus and several
local maxima in omega) followed by a golden-section polish of the
continuous coordinate. Grid points whose populated region would get no
spectrum or no power are never selected (see :func:`serves_all`).
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .radio import valid_rho_set
from .throughput import CellModel, ThroughputEngine

R5_FRACTION = 0.05
CONSTRAINT_RTOL = 1e-6
TIE_RTOL = 1e-9
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class DesignProblem:
    """One design problem.

    ``target`` is v_o in bps for 'r5pd', zeta_o for 'fxd' and varrho for
    'qoscd'.
    """

    scheme: str
    design: str
    target: float
    omega_step: float = 0.01
    beta_step: float = 0.02
    refine: bool = True

    def __post_init__(self):
        object.__setattr__(self, "scheme", self.scheme.upper())
        object.__setattr__(self, "design", self.design.lower())
        if self.scheme not in ("FFR", "SFR"):
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.design not in ("r5pd", "fxd", "qoscd"):
            raise ValueError(f"unknown design {self.design!r}")
        if self.design == "r5pd" and not self.target >= 0:
            raise ValueError("v_o must be >= 0")
        if self.design in ("fxd", "qoscd") and not 0 <= self.target <= 1:
            raise ValueError("zeta_o and varrho must lie in [0, 1]")
        if not (0 < self.omega_step <= 1 and 0 < self.beta_step <= 1):
            raise ValueError("grid steps must lie in (0, 1]")


@dataclass
class GridPoint:
    omega: float
    zeta: float
    eta: float
    eta_center: float
    eta_edge: float
    constraint: float      # F(v_o), tau_E / tau_C or nan
    feasible: bool


@dataclass
class DesignSolution:
    """Optimum of a :class:`DesignProblem` plus the evaluated grid.

    For an infeasible R5pD problem the reported point is the one with the
    smallest F(v_o), i.e. the closest to meeting the constraint.
    """

    problem: DesignProblem
    omega: float
    zeta: float
    eta: float
    eta_center: float
    eta_edge: float
    r5: float
    feasible: bool
    ratio: float = math.nan
    trace: list = field(default_factory=list, repr=False)


def omega_grid(engine: ThroughputEngine, step: float = 0.01) -> np.ndarray:
    """[R_0m/R_m, 1] in steps of ``step``, both ends included."""
    lo = engine.geometry.min_omega
    n = int(math.floor((1.0 - lo) / step + 1e-9))
    grid = lo + step * np.arange(n + 1)
    if 1.0 - grid[-1] > 1e-9:
        grid = np.append(grid, 1.0)
    return grid


def zeta_grid(engine: ThroughputEngine, scheme: str, beta_step: float = 0.02) -> np.ndarray:
    if scheme.upper() == "FFR":
        return valid_rho_set(engine.profile.total_rbs)
    n = int(round(1.0 / beta_step))
    return np.linspace(0.0, 1.0, n + 1)


def serves_all(model: CellModel) -> bool:
    """True when every region that may hold users gets RBs and power."""
    for reg in (model.center, model.edge):
        if reg.prob > 0 and (reg.n_rbs <= 0 or reg.table.link.is_silent):
            return False
    return True


@dataclass
class GridEvaluation:
    """Objective and constraint ingredients on a (zeta, omega) grid.

    ``cdf[i, j, q]`` holds F(v_q) at (zetas[i], omegas[j]); ``tau`` the
    per-user region throughputs (nan for empty regions).
    """

    scheme: str
    zetas: np.ndarray
    omegas: np.ndarray
    rates: np.ndarray
    eta: np.ndarray
    eta_center: np.ndarray
    eta_edge: np.ndarray
    cdf: np.ndarray
    tau_center: np.ndarray
    tau_edge: np.ndarray
    served: np.ndarray

    def point(self, i, j, constraint=math.nan, feasible=False) -> GridPoint:
        return GridPoint(float(self.omegas[j]), float(self.zetas[i]), float(self.eta[i, j]),
                         float(self.eta_center[i, j]), float(self.eta_edge[i, j]),
                         float(constraint), bool(feasible))


def _evaluate_point(model: CellModel, rates):
    eta_c = model.avg_region_throughput("C")
    eta_e = model.avg_region_throughput("E")
    cdf = model.user_cdf(rates) if rates.size else np.zeros(0)
    m = model.mean_users
    tau_c = eta_c / (m * model.center.prob) if model.center.prob > 0 and m > 0 else math.nan
    tau_e = eta_e / (m * model.edge.prob) if model.edge.prob > 0 and m > 0 else math.nan
    return eta_c, eta_e, cdf, tau_c, tau_e, serves_all(model)


def _evaluate_rows(args):
    engine, scheme, zetas, omegas, rates = args
    rows = []
    for z in zetas:
        rows.append([_evaluate_point(engine.model(scheme, z, w), rates) for w in omegas])
    return rows


def evaluate_grid(engine: ThroughputEngine, scheme: str, zetas, omegas, rates=(),
                  workers: int = 1) -> GridEvaluation:
    """Evaluate every (zeta, omega) pair; ``rates`` are the v at which the
    user CDF is recorded. Results do not depend on ``workers``."""
    zetas = np.asarray(zetas, dtype=float)
    omegas = np.asarray(omegas, dtype=float)
    rates = np.atleast_1d(np.asarray(rates, dtype=float))
    if workers <= 1 or len(zetas) < 2:
        rows = _evaluate_rows((engine, scheme, zetas, omegas, rates))
    else:
        chunks = [c for c in np.array_split(zetas, workers) if c.size]
        with ProcessPoolExecutor(workers) as pool:
            parts = pool.map(_evaluate_rows, [(engine, scheme, c, omegas, rates) for c in chunks])
            rows = [r for part in parts for r in part]
    shape = (len(zetas), len(omegas))
    eta_c = np.empty(shape)
    eta_e = np.empty(shape)
    tau_c = np.empty(shape)
    tau_e = np.empty(shape)
    served = np.empty(shape, dtype=bool)
    cdf = np.empty(shape + (rates.size,))
    for i, row in enumerate(rows):
        for j, (ec, ee, f, tc, te, ok) in enumerate(row):
            eta_c[i, j], eta_e[i, j], cdf[i, j] = ec, ee, f
            tau_c[i, j], tau_e[i, j], served[i, j] = tc, te, ok
    return GridEvaluation(scheme.upper(), zetas, omegas, rates, eta_c + eta_e, eta_c, eta_e,
                          cdf, tau_c, tau_e, served)


def _r5_feasible_cdf(cdf_value):
    # F is continuous once every populated region is served, so
    # R5% >= v  <=>  F(v) <= 0.05
    return cdf_value <= R5_FRACTION


def _golden_max(f, a, b, tol):
    """Golden-section search for a maximum of ``f`` on [a, b]; returns
    (x, f(x)) for the best point evaluated."""
    best = (None, -math.inf)
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for x, fx in ((c, fc), (d, fd)):
        if fx > best[1]:
            best = (x, fx)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
            if fc > best[1]:
                best = (c, fc)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
            if fd > best[1]:
                best = (d, fd)
    return best


class DesignSolver:
    """Solves design problems on one :class:`ThroughputEngine`.

    Grid evaluations are cached per (scheme, grid steps), so a sweep of
    R5pD targets or quality factors costs a single grid pass plus one CDF
    evaluation per target.
    """

    def __init__(self, engine: ThroughputEngine, workers: int = 1):
        self.engine = engine
        self.workers = workers
        self._grids: dict = {}

    # ------------------------------------------------------------- helpers
    def grid(self, scheme: str, omega_step=0.01, beta_step=0.02, rates=()) -> GridEvaluation:
        scheme = scheme.upper()
        rates = tuple(float(r) for r in np.atleast_1d(rates))
        key = (scheme, omega_step, beta_step)
        cached = self._grids.get(key)
        if cached is not None and set(rates) <= set(cached.rates.tolist()):
            return cached
        if cached is not None:
            rates = tuple(sorted(set(rates) | set(cached.rates.tolist())))
        ev = evaluate_grid(self.engine, scheme, zeta_grid(self.engine, scheme, beta_step),
                           omega_grid(self.engine, omega_step), rates, self.workers)
        self._grids[key] = ev
        return ev

    def model(self, scheme, zeta, omega) -> CellModel:
        return self.engine.model(scheme, zeta, omega)

    def _r5(self, scheme, zeta, omega) -> float:
        return self.model(scheme, zeta, omega).percentile(R5_FRACTION)

    def _pick(self, scheme, ev, mask):
        """Argmax of eta over ``mask`` with the deterministic tie-break:
        larger R5%, then smaller omega (then smaller zeta)."""
        eta = np.where(mask, ev.eta, -np.inf)
        best = eta.max()
        tied = np.argwhere(eta >= best - TIE_RTOL * abs(best))
        if len(tied) == 1:
            return tuple(tied[0]), None
        scored = []
        for i, j in tied:
            r5 = self._r5(scheme, ev.zetas[i], ev.omegas[j])
            scored.append((-r5, ev.omegas[j], ev.zetas[i], (i, j)))
        scored.sort()
        return scored[0][3], -scored[0][0]

    def _solution(self, problem, omega, zeta, feasible, trace, r5=None, ratio=math.nan):
        m = self.model(problem.scheme, zeta, omega)
        eta_c = m.avg_region_throughput("C")
        eta_e = m.avg_region_throughput("E")
        r5 = m.percentile(R5_FRACTION) if r5 is None else r5
        return DesignSolution(problem, float(omega), float(zeta), eta_c + eta_e, eta_c, eta_e,
                              float(r5), bool(feasible), float(ratio), trace)

    @staticmethod
    def _trace(ev, constraint, feasible):
        return [ev.point(i, j, constraint[i, j], feasible[i, j])
                for i in range(len(ev.zetas)) for j in range(len(ev.omegas))]

    # -------------------------------------------------------------- R5pD
    def solve_r5pd(self, problem: DesignProblem) -> DesignSolution:
        if problem.design != "r5pd":
            raise ValueError("not an R5pD problem")
        v_o = float(problem.target)
        v_test = v_o * (1.0 - CONSTRAINT_RTOL)
        ev = self.grid(problem.scheme, problem.omega_step, problem.beta_step, [v_test])
        q = int(np.flatnonzero(ev.rates == v_test)[0])
        f_vo = ev.cdf[..., q]
        feasible = ev.served & _r5_feasible_cdf(f_vo)
        trace = self._trace(ev, f_vo, feasible)
        if not feasible.any():
            f_masked = np.where(ev.served, f_vo, np.inf)
            i, j = np.unravel_index(np.argmin(f_masked), f_masked.shape)
            return self._solution(problem, ev.omegas[j], ev.zetas[i], False, trace)
        (i, j), r5 = self._pick(problem.scheme, ev, feasible)
        omega, zeta = ev.omegas[j], ev.zetas[i]
        if problem.scheme == "SFR" and problem.refine:
            omega, zeta, r5 = self._polish_beta(problem, ev, omega, zeta, r5,
                                                lambda m: _r5_feasible_cdf(m.user_cdf(v_test)))
        sol = self._solution(problem, omega, zeta, True, trace, r5)
        if sol.r5 < v_test:
            # the CDF test and the percentile disagree only on ties at 0.05;
            # fall back to the next grid point
            mask = feasible.copy()
            mask[i, j] = False
            while mask.any():
                (i, j), r5 = self._pick(problem.scheme, ev, mask)
                sol = self._solution(problem, ev.omegas[j], ev.zetas[i], True, trace, r5)
                if sol.r5 >= v_test:
                    break
                mask[i, j] = False
            else:
                return self._solution(problem, ev.omegas[j], ev.zetas[i], False, trace)
        return sol

    def _polish_beta(self, problem, ev, omega, zeta, r5, is_feasible):
        """Golden-section refinement of beta at fixed omega within one grid
        step of the grid optimum."""
        lo = max(0.0, zeta - problem.beta_step)
        hi = min(1.0, zeta + problem.beta_step)
        base = self.model("SFR", zeta, omega).avg_cell_throughput()

        def score(b):
            m = self.model("SFR", b, omega)
            if not (serves_all(m) and is_feasible(m)):
                return -math.inf
            return m.avg_cell_throughput()

        b, val = _golden_max(score, lo, hi, 1e-4)
        if b is not None and val > base * (1.0 + TIE_RTOL):
            return omega, b, None
        return omega, zeta, r5

    # --------------------------------------------------------------- FxD
    def sweep_omega(self, scheme: str, zeta: float, omegas) -> np.ndarray:
        """eta(omega) at fixed zeta; -inf where a populated region is unserved."""
        out = np.empty(len(omegas))
        for j, w in enumerate(omegas):
            m = self.model(scheme, zeta, w)
            out[j] = m.avg_cell_throughput() if serves_all(m) else -math.inf
        return out

    def solve_fxd(self, problem: DesignProblem) -> DesignSolution:
        if problem.design != "fxd":
            raise ValueError("not an FxD problem")
        scheme, zeta = problem.scheme, float(problem.target)
        # validates rho against the admissible set
        self.engine.partition(scheme, zeta)
        omegas = omega_grid(self.engine, problem.omega_step)
        eta = self.sweep_omega(scheme, zeta, omegas)
        trace = [GridPoint(float(w), zeta, float(e), math.nan, math.nan, math.nan, bool(np.isfinite(e)))
                 for w, e in zip(omegas, eta)]
        if not np.isfinite(eta).any():
            return self._solution(problem, omegas[-1], zeta, False, trace)
        best = eta.max()
        tied = np.flatnonzero(eta >= best - TIE_RTOL * abs(best))
        j = int(tied[0])
        omega = omegas[j]
        if problem.refine:
            lo = omegas[max(j - 1, 0)]
            hi = omegas[min(j + 1, len(omegas) - 1)]

            def score(w):
                m = self.model(scheme, zeta, w)
                return m.avg_cell_throughput() if serves_all(m) else -math.inf

            w, val = _golden_max(score, lo, hi, 1e-4)
            if w is not None and val > best * (1.0 + TIE_RTOL):
                omega = w
        return self._solution(problem, omega, zeta, True, trace)

    # ------------------------------------------------------------- QoScD
    def solve_qoscd(self, problem: DesignProblem) -> DesignSolution:
        if problem.design != "qoscd":
            raise ValueError("not a QoScD problem")
        rho_q = float(problem.target)
        ev = self.grid(problem.scheme, problem.omega_step, problem.beta_step)
        with np.errstate(invalid="ignore", divide="ignore"):
            ratio = ev.tau_edge / ev.tau_center
        valid = ev.served & np.isfinite(ratio)
        feasible = valid & (ev.tau_edge >= rho_q * ev.tau_center)
        trace = self._trace(ev, ratio, feasible)
        if not feasible.any():
            r = np.where(valid, ratio, -np.inf)
            i, j = np.unravel_index(np.argmax(r), r.shape)
            return self._solution(problem, ev.omegas[j], ev.zetas[i], False, trace,
                                  ratio=ratio[i, j])
        (i, j), r5 = self._pick(problem.scheme, ev, feasible)
        omega, zeta = ev.omegas[j], ev.zetas[i]
        if problem.scheme == "SFR" and problem.refine:
            def ok(m):
                tc = m.per_user_region_throughput("C")
                te = m.per_user_region_throughput("E")
                return te >= rho_q * tc
            omega, zeta, r5 = self._polish_beta(problem, ev, omega, zeta, r5, ok)
        m = self.model(problem.scheme, zeta, omega)
        tc = m.per_user_region_throughput("C")
        te = m.per_user_region_throughput("E")
        return self._solution(problem, omega, zeta, True, trace, r5, ratio=te / tc)

    def solve(self, problem: DesignProblem) -> DesignSolution:
        return {"r5pd": self.solve_r5pd, "fxd": self.solve_fxd,
                "qoscd": self.solve_qoscd}[problem.design](problem)

    # ------------------------------------------------------------ Pareto
    def pareto_front(self, scheme: str, targets, omega_step=0.01, beta_step=0.02) -> list:
        """One R5pD solve per ascending v_o.

        Returns a list of dicts with the achieved R5%, eta*, omega*, zeta*
        and the feasibility flag. FFR fronts are flagged ``discrete``.
        """
        targets = np.asarray(targets, dtype=float)
        if np.any(np.diff(targets) < 0):
            raise ValueError("v_o grid must be ascending")
        self.grid(scheme, omega_step, beta_step, targets * (1.0 - CONSTRAINT_RTOL))
        out = []
        for v in targets:
            sol = self.solve_r5pd(DesignProblem(scheme, "r5pd", float(v), omega_step, beta_step))
            out.append({"v_o": float(v), "r5": sol.r5, "eta": sol.eta, "omega": sol.omega,
                        "zeta": sol.zeta, "feasible": sol.feasible,
                        "discrete": scheme.upper() == "FFR"})
        return out


def solve(engine: ThroughputEngine, problem: DesignProblem) -> DesignSolution:
    """Convenience wrapper around :class:`DesignSolver`."""
    return DesignSolver(engine).solve(problem)


def solve_r5pd(engine, problem):
    return DesignSolver(engine).solve_r5pd(problem)


def solve_fxd(engine, problem):
    return DesignSolver(engine).solve_fxd(problem)


def solve_qoscd(engine, problem):
    return DesignSolver(engine).solve_qoscd(problem)


def pareto_front(engine, scheme, targets, **kw):
    return DesignSolver(engine).pareto_front(scheme, targets, **kw)
