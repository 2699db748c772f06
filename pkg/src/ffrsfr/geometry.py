"""
Cell layout: hexagonal BS grid, circular-cell approximation and the
center/edge spatial partition of the tagged cell.

Cell 0 (the tagged cell) sits at the origin. Interferers are every other
BS of the layout. Edge bands are assigned by a proper 3-coloring of the
hexagonal lattice so that no two adjacent cells share an edge band.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

SQRT3 = math.sqrt(3.0)

# area of a hexagon of side 1 divided by pi, i.e. (R_m / R_h)**2
_HEX_TO_CIRCLE = 3.0 * SQRT3 / (2.0 * math.pi)

# nominal cell radius of the reference deployment and how it is read
DEFAULT_CELL_RADIUS = 500.0
DEFAULT_CELL_RADIUS_IS = "circ_radius"

# axial unit steps to the six neighbours of a hexagon
_AXIAL_DIRECTIONS = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))


@dataclass(frozen=True)
class CellGeometry:
    """Radii of the tagged cell.

    Parameters
    ----------
    hex_side : float
        Side of the hexagonal cell R_h (m).
    min_dist : float
        Minimum BS-user distance R_0m (m).
    """

    hex_side: float
    min_dist: float = 35.0

    def __post_init__(self):
        if self.hex_side <= 0:
            raise ValueError("hex_side must be positive")
        if not 0 < self.min_dist < self.circ_radius:
            raise ValueError("min_dist must lie in (0, circ_radius)")

    @classmethod
    def from_cell_radius(cls, radius: float, cell_radius_is: str = "hex_side",
                         min_dist: float = 35.0) -> "CellGeometry":
        """Build from a nominal cell radius interpreted as hexagon side or
        as the radius of the equal-area circle."""
        if cell_radius_is == "hex_side":
            return cls(hex_side=radius, min_dist=min_dist)
        if cell_radius_is == "circ_radius":
            return cls(hex_side=radius / math.sqrt(_HEX_TO_CIRCLE), min_dist=min_dist)
        raise ValueError(f"unknown cell_radius_is {cell_radius_is!r}")

    @property
    def circ_radius(self) -> float:
        """Radius R_m of the circle with the hexagon's area."""
        return self.hex_side * math.sqrt(_HEX_TO_CIRCLE)

    @property
    def min_omega(self) -> float:
        return self.min_dist / self.circ_radius

    @property
    def annulus_area(self) -> float:
        return math.pi * (self.circ_radius ** 2 - self.min_dist ** 2)


def default_geometry() -> CellGeometry:
    """500 m cell read as the radius of the equal-area circle."""
    return CellGeometry.from_cell_radius(DEFAULT_CELL_RADIUS, DEFAULT_CELL_RADIUS_IS)


@dataclass(frozen=True)
class BsLayout:
    """Positions of all BSs; index 0 is the tagged cell at the origin."""

    positions: np.ndarray
    ring_index: np.ndarray
    edge_color: np.ndarray
    axial: np.ndarray = field(repr=False)
    hex_side: float = 0.0

    def __len__(self):
        return len(self.positions)

    @property
    def interferers(self) -> np.ndarray:
        return np.arange(1, len(self.positions))

    @property
    def spacing(self) -> float:
        return SQRT3 * self.hex_side

    def polar(self):
        """Distance and bearing of every BS as seen from the origin."""
        x, y = self.positions[:, 0], self.positions[:, 1]
        return np.hypot(x, y), np.arctan2(y, x)


def build_layout(hex_side: float, rings: int = 2) -> BsLayout:
    """Hexagonal grid of ``1 + 3*rings*(rings+1)`` BSs spaced ``sqrt(3)*hex_side``.

    Edge colors come from the axial coloring ``(q - r) mod 3``, shifted to
    {1, 2, 3}. Cell 0 gets color 1.
    """
    if rings < 0 or hex_side <= 0:
        raise ValueError("rings must be >= 0 and hex_side > 0")
    coords = [(0, 0)]
    for ring in range(1, rings + 1):
        # walk the ring starting from ring * direction 4
        q, r = ring * _AXIAL_DIRECTIONS[4][0], ring * _AXIAL_DIRECTIONS[4][1]
        for side in range(6):
            dq, dr = _AXIAL_DIRECTIONS[side]
            for _ in range(ring):
                coords.append((q, r))
                q, r = q + dq, r + dr
    axial = np.array(coords, dtype=int)
    q, r = axial[:, 0], axial[:, 1]
    spacing = SQRT3 * hex_side
    x = spacing * (q + 0.5 * r)
    y = spacing * (SQRT3 / 2.0) * r
    ring_index = np.maximum.reduce([np.abs(q), np.abs(r), np.abs(q + r)])
    color = np.mod(q - r, 3) + 1
    return BsLayout(positions=np.column_stack([x, y]), ring_index=ring_index,
                    edge_color=color, axial=axial, hex_side=hex_side)


def interferer_distance(d, theta, bs):
    """Distance from BS ``bs`` (x, y) to a user at polar position (d, theta)
    around the tagged BS. Broadcasts over ``d`` and ``theta``."""
    bx, by = bs
    dist_bs = math.hypot(bx, by)
    phi = math.atan2(by, bx)
    d = np.asarray(d, dtype=float)
    sq = d * d + dist_bs * dist_bs - 2.0 * d * dist_bs * np.cos(np.asarray(theta) - phi)
    return np.sqrt(np.maximum(sq, 0.0))


@dataclass(frozen=True)
class RegionPartition:
    """Center/edge split of the tagged cell at threshold ``omega * R_m``."""

    geometry: CellGeometry
    omega: float

    def __post_init__(self):
        lo = self.geometry.min_omega
        if not (lo - 1e-12 <= self.omega <= 1.0 + 1e-12):
            raise ValueError(f"omega={self.omega} outside [{lo:.6f}, 1]")

    @property
    def threshold(self) -> float:
        return self.omega * self.geometry.circ_radius

    def radii(self, region: str):
        """(lower, upper) radii of ``region`` ('C' or 'E')."""
        g = self.geometry
        th = min(max(self.threshold, g.min_dist), g.circ_radius)
        if region == "C":
            return g.min_dist, th
        if region == "E":
            return th, g.circ_radius
        raise ValueError(f"region must be 'C' or 'E', got {region!r}")

    def probability(self, region: str) -> float:
        lo, hi = self.radii(region)
        g = self.geometry
        return (hi ** 2 - lo ** 2) / (g.circ_radius ** 2 - g.min_dist ** 2)


def region_probability(geometry: CellGeometry, omega: float, region: str) -> float:
    """Probability that a uniformly placed user falls in ``region``."""
    return RegionPartition(geometry, omega).probability(region)


@dataclass(frozen=True)
class InterfererSets:
    """Interferers on one band, split by the power class they use there.

    ``center`` transmit on the band at the center-class power and ``edge``
    at the edge-class power. Under FFR both classes carry the same power.
    """

    band: object
    center: tuple
    edge: tuple

    @property
    def all(self) -> tuple:
        return tuple(sorted(self.center + self.edge))


def interferer_sets(layout: BsLayout, scheme: str, band) -> InterfererSets:
    """Interfering BSs on ``band`` ('center' or an edge color 1..3).

    FFR center band is reused everywhere; an FFR edge band is only used by
    cells of that color. Under SFR every cell transmits on every band, at
    edge power on its own edge band and at center power elsewhere.
    """
    scheme = scheme.upper()
    idx = layout.interferers
    colors = layout.edge_color[idx]
    if scheme == "FFR":
        if band == "center":
            return InterfererSets(band, tuple(int(i) for i in idx), ())
        if band in (1, 2, 3):
            return InterfererSets(band, (), tuple(int(i) for i in idx[colors == band]))
    elif scheme == "SFR":
        if band in (1, 2, 3):
            return InterfererSets(band,
                                  tuple(int(i) for i in idx[colors != band]),
                                  tuple(int(i) for i in idx[colors == band]))
        if band == "center":
            raise ValueError("SFR center RBs live on a specific color band; pass 1, 2 or 3")
    else:
        raise ValueError(f"unknown scheme {scheme!r}")
    raise ValueError(f"invalid band {band!r}")
