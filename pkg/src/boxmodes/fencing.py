"""Half-wave fence layouts: wire grids that partition a square cavity
cross-section into n^d x n^d electromagnetically isolated cells.

Iteration d of the construction adds conducting wires along the grid lines
spaced side/n^d apart: one wire at every interior line intersection and one
at the midpoint of every cell edge lying on an interior line.  Positions on
the outer walls are omitted (the walls already short the field there).  The
wire count of the completed iteration is

    N(d) = (m + 1)^2 + 2 m (m + 1) - 8 m        with m = n^d,

which simplifies to 3 m^2 - 4 m + 1, and the fenced fundamental scales as
f_c / f_101 = m.  Inverting the count gives the pseudo-upper bound
f_tilde(N) = (2 + sqrt(1 + 3 N)) / 3 for any wire budget N.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import sqrt
import warnings

import numpy as np


@dataclass(frozen=True)
class FencePlan:
    """Fence iteration d of division factor n over a side x side cross-section."""

    d: int
    side: float
    wire_diameter: float
    n: int = 2

    def __post_init__(self) -> None:
        if self.d < 0:
            raise ValueError("iteration depth must be non-negative")
        if self.n < 2:
            raise ValueError("division factor must be at least 2")
        if self.side <= 0 or self.wire_diameter <= 0:
            raise ValueError("side and wire diameter must be positive")
        if self.cell_side <= self.wire_diameter:
            raise ValueError("cells are too small for the wire diameter")

    @property
    def cell_side(self) -> float:
        return self.side / self.n**self.d


@dataclass(frozen=True)
class WireLayout:
    """Wire centers (x, z) in metres, shape (N, 2), with a common diameter."""

    centers: np.ndarray
    diameter: float

    def __post_init__(self) -> None:
        centers = np.asarray(self.centers, dtype=float).reshape(-1, 2)
        object.__setattr__(self, "centers", centers)
        if self.diameter <= 0:
            raise ValueError("wire diameter must be positive")
        if centers.shape[0] > 1:
            deltas = centers[:, None, :] - centers[None, :, :]
            dist = np.hypot(deltas[..., 0], deltas[..., 1])
            np.fill_diagonal(dist, np.inf)
            if dist.min() < self.diameter * (1.0 - 1e-12):
                raise ValueError("wires overlap: pairwise distance below one diameter")

    @property
    def count(self) -> int:
        return self.centers.shape[0]


def fence_wire_count(d: int, n: int = 2) -> int:
    """Wires in the completed fence iteration d: (m+1)^2 + 2m(m+1) - 8m, m = n^d."""
    if d < 0:
        raise ValueError("iteration depth must be non-negative")
    if n < 2:
        raise ValueError("division factor must be at least 2")
    m = n**d
    return (m + 1) ** 2 + 2 * m * (m + 1) - 8 * m


def fence_scaled_frequency(d: int, n: int = 2) -> float:
    """Fundamental of the completed iteration d relative to the bare cavity: n^d."""
    if d < 0:
        raise ValueError("iteration depth must be non-negative")
    if n < 2:
        raise ValueError("division factor must be at least 2")
    return float(n**d)


def frequency_from_wire_count(n_wires: float) -> float:
    """Scaled frequency reachable with n_wires wires, (2 + sqrt(1 + 3N)) / 3.

    Inverts the fence count N(d); at complete-iteration counts it returns
    n^d exactly.  Serves as a pseudo-upper bound for any placement method.
    """
    if n_wires < 0:
        raise ValueError("wire count must be non-negative")
    return (2.0 + sqrt(1.0 + 3.0 * n_wires)) / 3.0


def generate_fence_layout(plan: FencePlan) -> WireLayout:
    """Wire positions of the completed fence iteration plan.d.

    Wires sit at interior grid intersections and at cell-edge midpoints on
    interior grid lines; the closest pair is half a cell apart, so the cell
    side must exceed twice the wire diameter.
    """
    m = plan.n**plan.d
    s = plan.side / m
    if plan.d > 0 and 0.5 * s < plan.wire_diameter:
        raise ValueError("adjacent fence wires would overlap at this diameter")
    pts: list[tuple[float, float]] = []
    # interior intersections
    for i in range(1, m):
        for j in range(1, m):
            pts.append((i * s, j * s))
    # midpoints on interior vertical lines x = i s
    for i in range(1, m):
        for j in range(m):
            pts.append((i * s, (j + 0.5) * s))
    # midpoints on interior horizontal lines z = j s
    for j in range(1, m):
        for i in range(m):
            pts.append(((i + 0.5) * s, j * s))
    pts.sort()
    centers = np.array(pts, dtype=float).reshape(-1, 2)
    return WireLayout(centers=centers, diameter=plan.wire_diameter)


def cells_of(plan: FencePlan) -> np.ndarray:
    """Cell bounds (x0, z0, x1, z1) of the n^d x n^d partition, shape (m*m, 4)."""
    m = plan.n**plan.d
    s = plan.side / m
    out = np.empty((m * m, 4))
    k = 0
    for i in range(m):
        for j in range(m):
            out[k] = (i * s, j * s, (i + 1) * s, (j + 1) * s)
            k += 1
    return out


def write_layout_csv(layout: WireLayout, path) -> None:
    """Layout as CSV with columns x_m, z_m, diameter_m."""
    with open(path, "w", newline="") as fh:
        fh.write("x_m,z_m,diameter_m\n")
        diameter = float(layout.diameter)
        for x, z in layout.centers.tolist():
            fh.write(f"{x!r},{z!r},{diameter!r}\n")


def read_layout_csv(path) -> WireLayout:
    with warnings.catch_warnings():
        # a header-only file is reported as empty below, not as a warning
        warnings.simplefilter("ignore")
        rows = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if rows.size == 0:
        raise ValueError("layout file has no wires")
    if rows.shape[1] != 3:
        raise ValueError("layout file must have columns x_m, z_m, diameter_m")
    diameters = np.unique(rows[:, 2])
    if diameters.size != 1:
        raise ValueError("layout file mixes wire diameters")
    return WireLayout(centers=rows[:, :2], diameter=float(diameters[0]))
