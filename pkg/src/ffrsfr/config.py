"""
Run configuration: a nested YAML document validated against a fixed schema.

Sections
--------
profile   link budget and load (see :class:`~ffrsfr.radio.NetworkProfile`)
geometry  cell_radius, cell_radius_is, min_dist, rings
scheme    'ffr', 'sfr' or a list of both
design    kind and targets of the design problem plus the sweep grids
numerics  angle policy and quadrature knobs
sim       simulator run length and sampling
output    output directory and CDF resolution
seed      master seed (unsigned 64-bit)

Unknown keys anywhere are rejected. Every value is checked before any
computation starts.
"""
from __future__ import annotations

import copy
import hashlib
import json
import math
from dataclasses import dataclass, fields, replace

import numpy as np
import yaml

from .geometry import DEFAULT_CELL_RADIUS, DEFAULT_CELL_RADIUS_IS, CellGeometry
from .radio import NetworkProfile, make_partition, valid_rho_set
from .sim import DESK_RBS
from .sinr import AnglePolicy
from .throughput import QuadratureSettings


class ConfigError(ValueError):
    """Invalid or inconsistent configuration."""


_PROFILE_KEYS = {f.name for f in fields(NetworkProfile)}

DEFAULTS = {
    "profile": {},
    "geometry": {"cell_radius": DEFAULT_CELL_RADIUS, "cell_radius_is": DEFAULT_CELL_RADIUS_IS,
                 "min_dist": 35.0, "rings": 2},
    "scheme": ["ffr", "sfr"],
    "design": {
        "kind": "r5pd",
        "v_o": 700e3,
        "rho_o": None,
        "beta_o": 0.5,
        "varrho": 0.2,
        "omega_step": 0.01,
        "beta_step": 0.02,
        "refine": True,
        "operating_point": None,
        "v_o_grid": [0.1e6, 0.2e6, 0.3e6, 0.5e6, 0.7e6, 0.9e6, 1.0e6, 1.2e6, 1.5e6],
        "load_grid": [4, 8, 16, 32, 64, 96, 128],
        "load_v_o": [0.3e6, 0.7e6],
        "jain_grid": [0.1e6, 0.3e6, 0.5e6, 0.7e6, 1.0e6],
        "pareto_loads": [8, 32, 128],
    },
    "numerics": {"angle_policy": "average", "n_theta": 24, "theta": 0.0,
                 "poisson_tail": 1e-8, "n_distance": 64, "log_x_step": 0.025},
    "sim": {"slots": 50_000, "drops": 40, "window": 100, "warmup": None,
            "sampling": "stratified", "workers": 1},
    "output": {"dir": "out", "cdf_points": 200},
    "seed": 0,
}


def _check_keys(section: str, given: dict, allowed):
    unknown = sorted(set(given) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown key(s) in {section}: {', '.join(unknown)}")


def _merge(base: dict, over: dict, path="") -> dict:
    out = copy.deepcopy(base)
    for key, val in over.items():
        where = f"{path}{key}"
        if key not in base:
            raise ConfigError(f"unknown key: {where}")
        if isinstance(base[key], dict) and base[key]:
            if not isinstance(val, dict):
                raise ConfigError(f"{where} must be a mapping")
            out[key] = _merge(base[key], val, where + ".")
        else:
            out[key] = val
    return out


def _number(value, name, lo=-math.inf, hi=math.inf, integer=False, lo_open=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{name} must be a number, got {value!r}")
    if integer and int(value) != value:
        raise ConfigError(f"{name} must be an integer")
    if not math.isfinite(value) or value < lo or value > hi or (lo_open and value == lo):
        raise ConfigError(f"{name}={value} out of range")
    return int(value) if integer else float(value)


@dataclass(frozen=True)
class RunConfig:
    """Validated configuration plus the raw mapping it came from."""

    raw: dict
    profile: NetworkProfile
    geometry: CellGeometry
    rings: int
    schemes: tuple
    design: dict
    policy: AnglePolicy
    settings: QuadratureSettings
    sim: dict
    out_dir: str
    cdf_points: int
    seed: int
    desk_scale: bool = False

    @property
    def digest(self) -> str:
        """sha256 of the canonical JSON of the resolved configuration,
        output location excluded."""
        raw = dict(self.raw, output={k: v for k, v in self.raw["output"].items() if k != "dir"})
        blob = json.dumps(raw, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def zeta_target(self, scheme: str) -> float:
        return self.design["rho_o"] if scheme == "FFR" else self.design["beta_o"]

    def with_users(self, mean_users: float) -> "RunConfig":
        return replace(self, profile=self.profile.with_users(mean_users))


def load_config(path: str | None = None, overrides: dict | None = None) -> RunConfig:
    """Read ``path`` (YAML), apply ``overrides`` and validate.

    An empty file is an error; ``path=None`` means all defaults.
    """
    data = {}
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        try:
            data = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            raise ConfigError(f"config is not valid YAML: {exc}") from exc
        if data is None:
            raise ConfigError("config file is empty")
        if not isinstance(data, dict):
            raise ConfigError("config must be a mapping of sections")
    return build_config(data, overrides)


def build_config(data: dict, overrides: dict | None = None) -> RunConfig:
    merged = _merge(DEFAULTS, data)
    for key, val in (overrides or {}).items():
        if val is None:
            continue
        if key == "seed":
            merged["seed"] = val
        elif key == "out":
            merged["output"]["dir"] = val
        elif key == "scheme":
            merged["scheme"] = val
        elif key == "design":
            merged["design"]["kind"] = val
        elif key != "desk_scale":
            raise ConfigError(f"unknown override {key!r}")
    desk = bool((overrides or {}).get("desk_scale"))
    return _validate(merged, desk)


def _validate(cfg: dict, desk: bool) -> RunConfig:
    prof = cfg["profile"]
    if not isinstance(prof, dict):
        raise ConfigError("profile must be a mapping")
    _check_keys("profile", prof, _PROFILE_KEYS)
    try:
        profile = NetworkProfile(**{k: (int(v) if k in ("total_rbs", "subcarriers_per_rb") else float(v))
                                    for k, v in prof.items()})
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"profile: {exc}") from exc
    if desk:
        profile = replace(profile, total_rbs=DESK_RBS)
        cfg["profile"] = dict(prof, total_rbs=DESK_RBS)

    geo = cfg["geometry"]
    radius = _number(geo["cell_radius"], "geometry.cell_radius", 0, lo_open=True)
    if geo["cell_radius_is"] not in ("hex_side", "circ_radius"):
        raise ConfigError("geometry.cell_radius_is must be hex_side or circ_radius")
    min_dist = _number(geo["min_dist"], "geometry.min_dist", 0, lo_open=True)
    rings = _number(geo["rings"], "geometry.rings", 1, 6, integer=True)
    try:
        geometry = CellGeometry.from_cell_radius(radius, geo["cell_radius_is"], min_dist)
    except ValueError as exc:
        raise ConfigError(f"geometry: {exc}") from exc

    schemes = cfg["scheme"]
    if isinstance(schemes, str):
        schemes = [schemes]
    if not isinstance(schemes, list) or not schemes:
        raise ConfigError("scheme must be 'ffr', 'sfr' or a list of them")
    schemes = tuple(dict.fromkeys(str(s).upper() for s in schemes))
    if not set(schemes) <= {"FFR", "SFR"}:
        raise ConfigError(f"unknown scheme in {cfg['scheme']!r}")
    cfg["scheme"] = [s.lower() for s in schemes]

    des = dict(cfg["design"])
    if des["kind"] not in ("r5pd", "fxd", "qoscd"):
        raise ConfigError("design.kind must be r5pd, fxd or qoscd")
    des["v_o"] = _number(des["v_o"], "design.v_o", 0)
    des["varrho"] = _number(des["varrho"], "design.varrho", 0, 1)
    if des["rho_o"] is None:
        # admissible rho closest to 1/2 (0.49 for 100 RBs, 0.5 for 12)
        rhos = valid_rho_set(profile.total_rbs)
        des["rho_o"] = float(rhos[np.argmin(np.abs(rhos - 0.5) + 1e-12 * rhos)])
    des["rho_o"] = _number(des["rho_o"], "design.rho_o", 0, 1)
    des["beta_o"] = _number(des["beta_o"], "design.beta_o", 0, 1)
    try:
        make_partition(profile, "FFR", des["rho_o"])
    except ValueError as exc:
        raise ConfigError(f"design.rho_o: {exc}") from exc
    des["omega_step"] = _number(des["omega_step"], "design.omega_step", 0, 1, lo_open=True)
    des["beta_step"] = _number(des["beta_step"], "design.beta_step", 0, 1, lo_open=True)
    if not isinstance(des["refine"], bool):
        raise ConfigError("design.refine must be a boolean")
    for key in ("v_o_grid", "load_v_o", "jain_grid"):
        grid = des[key]
        if not isinstance(grid, list) or not grid:
            raise ConfigError(f"design.{key} must be a non-empty list")
        des[key] = [_number(v, f"design.{key}", 0) for v in grid]
        if any(b < a for a, b in zip(des[key], des[key][1:])):
            raise ConfigError(f"design.{key} must be ascending")
    for key in ("load_grid", "pareto_loads"):
        grid = des[key]
        if not isinstance(grid, list) or not grid:
            raise ConfigError(f"design.{key} must be a non-empty list")
        des[key] = [_number(v, f"design.{key}", 0, lo_open=True) for v in grid]
    op = des["operating_point"]
    if op is not None:
        if not isinstance(op, dict):
            raise ConfigError("design.operating_point must be a mapping {omega, zeta}")
        _check_keys("design.operating_point", op, ("omega", "zeta"))
        if set(op) != {"omega", "zeta"}:
            raise ConfigError("design.operating_point needs omega and zeta")
        omega = _number(op["omega"], "design.operating_point.omega", geometry.min_omega - 1e-12, 1)
        zeta = _number(op["zeta"], "design.operating_point.zeta", 0, 1)
        for s in schemes:
            try:
                make_partition(profile, s, zeta)
            except ValueError as exc:
                raise ConfigError(f"design.operating_point: {exc}") from exc
        des["operating_point"] = {"omega": omega, "zeta": zeta}

    num = cfg["numerics"]
    if num["angle_policy"] not in ("average", "fixed"):
        raise ConfigError("numerics.angle_policy must be average or fixed")
    try:
        policy = AnglePolicy(num["angle_policy"],
                             _number(num["n_theta"], "numerics.n_theta", 6, integer=True),
                             _number(num["theta"], "numerics.theta"))
    except ValueError as exc:
        raise ConfigError(f"numerics: {exc}") from exc
    settings = QuadratureSettings(
        poisson_tail=_number(num["poisson_tail"], "numerics.poisson_tail", 0, 0.01, lo_open=True),
        n_distance=_number(num["n_distance"], "numerics.n_distance", 8, 4096, integer=True),
        log_x_step=_number(num["log_x_step"], "numerics.log_x_step", 0, 0.5, lo_open=True))

    sim = dict(cfg["sim"])
    sim["slots"] = _number(sim["slots"], "sim.slots", 2, integer=True)
    sim["drops"] = _number(sim["drops"], "sim.drops", 1, integer=True)
    sim["window"] = _number(sim["window"], "sim.window", 1, integer=True)
    if sim["warmup"] is not None:
        sim["warmup"] = _number(sim["warmup"], "sim.warmup", 0, integer=True)
    warm = sim["warmup"] if sim["warmup"] is not None else max(5 * sim["window"], 500)
    if not sim["slots"] > warm >= sim["window"]:
        raise ConfigError("sim: need slots > warmup >= window")
    if sim["sampling"] not in ("iid", "stratified"):
        raise ConfigError("sim.sampling must be iid or stratified")
    sim["workers"] = _number(sim["workers"], "sim.workers", 1, 256, integer=True)

    out = cfg["output"]
    if not isinstance(out["dir"], str) or not out["dir"]:
        raise ConfigError("output.dir must be a non-empty string")
    points = _number(out["cdf_points"], "output.cdf_points", 10, 100_000, integer=True)

    seed = _number(cfg["seed"], "seed", 0, 2 ** 64 - 1, integer=True)
    cfg["design"] = des
    cfg["sim"] = sim
    return RunConfig(raw=cfg, profile=profile, geometry=geometry, rings=rings, schemes=schemes,
                     design=des, policy=policy, settings=settings, sim=sim,
                     out_dir=out["dir"], cdf_points=points, seed=seed, desk_scale=desk)
