"""Scalar 2D Helmholtz eigenproblem for the cavity cross-section.

The fundamental of a thin box (height much smaller than the base) is
uniform along the height, so its transverse profile solves

    -laplacian(u) = k^2 u   on the side x side square,
    u = 0                   on the outer walls and on conductor cells,

discretized with the 5-point finite-difference stencil on a uniform grid.
Wires are rasterized onto the grid as Dirichlet disks.  Mode frequency
follows from the eigenvalue via f = c k / (2 pi sqrt(eps_r)).

The sparse symmetric operator is solved in shift-invert mode about zero,
which targets the smallest eigenvalues directly; a seeded starting vector
makes runs reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from .constants import SPEED_OF_LIGHT
from .fencing import WireLayout

MAX_EIGENMODES = 12

# Slope tolerance for antinode candidates, per grid cell, as a fraction of
# the 1/side gradient scale of a unit-normalized mode.  Crest points of a
# gently curved ridge differ from their along-ridge neighbours by far less
# than this; points on a genuine slope differ by far more.
PLATEAU_SLOPE = 0.05


class NonConvergenceError(RuntimeError):
    """Eigensolver failed to converge within its iteration cap."""


@dataclass(frozen=True)
class Grid:
    """Uniform node grid over the square cross-section, boundary included."""

    side: float
    resolution: int = 257

    def __post_init__(self) -> None:
        if self.side <= 0:
            raise ValueError("side must be positive")
        if self.resolution < 33:
            raise ValueError("resolution must be at least 33")

    @property
    def h(self) -> float:
        return self.side / (self.resolution - 1)

    @property
    def coords(self) -> np.ndarray:
        return np.linspace(0.0, self.side, self.resolution)


@dataclass
class FieldMap:
    """Mode profile sampled on the full grid, normalized to max |u| = 1.

    values[ix, iz] is the field at (x, z) = (ix h, iz h); conductor and wall
    nodes hold exactly zero.  mask[ix, iz] is True on conductor nodes.
    """

    values: np.ndarray
    mask: np.ndarray
    grid: Grid


@dataclass
class EigenSolution:
    """One eigenpair: wavenumber k (1/m), frequency (Hz), and its field map.

    residual is the relative quantity ||A u - k^2 u|| / (k^2 ||u||) of the
    discrete operator; converged requires residual <= 1e-8.
    """

    wavenumber: float
    frequency: float
    field: FieldMap
    converged: bool
    residual: float


def rasterize_wires(grid: Grid, layout: WireLayout) -> np.ndarray:
    """Conductor mask of a wire layout: True where a node is inside a wire.

    A node is masked iff its position lies within diameter/2 of a wire
    center.  Wires thinner than two grid cells would otherwise vanish; they
    mask exactly the nearest interior node instead (minimum footprint).
    """
    res, h = grid.resolution, grid.h
    mask = np.zeros((res, res), dtype=bool)
    radius = 0.5 * layout.diameter
    for x, z in layout.centers:
        if not (0.0 < x < grid.side and 0.0 < z < grid.side):
            raise ValueError(f"wire at ({x:.4g}, {z:.4g}) m is outside the domain")
        if layout.diameter < 2.0 * h:
            ix = min(max(int(round(x / h)), 1), res - 2)
            iz = min(max(int(round(z / h)), 1), res - 2)
            mask[ix, iz] = True
            continue
        i0 = max(int(np.ceil((x - radius) / h)), 1)
        i1 = min(int(np.floor((x + radius) / h)), res - 2)
        j0 = max(int(np.ceil((z - radius) / h)), 1)
        j1 = min(int(np.floor((z + radius) / h)), res - 2)
        if i1 < i0 or j1 < j0:
            continue
        xs = np.arange(i0, i1 + 1) * h - x
        zs = np.arange(j0, j1 + 1) * h - z
        inside = xs[:, None] ** 2 + zs[None, :] ** 2 <= radius**2
        mask[i0 : i1 + 1, j0 : j1 + 1] |= inside
    return mask


def _interior_operator(grid: Grid, mask: np.ndarray | None):
    """5-point Laplacian over unmasked interior nodes, plus the index map."""
    res, h = grid.resolution, grid.h
    active = np.ones((res, res), dtype=bool)
    active[0, :] = active[-1, :] = active[:, 0] = active[:, -1] = False
    if mask is not None:
        active &= ~mask
    n_active = int(active.sum())
    if n_active == 0:
        raise ValueError("no free interior nodes: conductors cover the grid")
    index = -np.ones((res, res), dtype=np.int64)
    index[active] = np.arange(n_active)

    diag = np.full(n_active, 4.0)
    rows, cols, vals = [np.arange(n_active)], [np.arange(n_active)], [diag]
    for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
        here = active & np.roll(np.roll(active, -di, axis=0), -dj, axis=1)
        # np.roll wraps; drop the wrapped edge rows/columns
        if di == 1:
            here[-1, :] = False
        if di == -1:
            here[0, :] = False
        if dj == 1:
            here[:, -1] = False
        if dj == -1:
            here[:, 0] = False
        src = index[here]
        dst = index[np.roll(np.roll(here, di, axis=0), dj, axis=1)]
        rows.append(src)
        cols.append(dst)
        vals.append(np.full(src.size, -1.0))
    a = sparse.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n_active, n_active),
    )
    return a / h**2, index, active


def eigenmodes(
    grid: Grid,
    mask: np.ndarray | None = None,
    count: int = 1,
    relative_permittivity: float = 1.0,
    seed: int = 0,
) -> list[EigenSolution]:
    """The count lowest eigenmodes, sorted by frequency.

    Degenerate modes are returned as separate entries.  Raises
    NonConvergenceError when the iteration cap is hit.
    """
    if not 1 <= count <= MAX_EIGENMODES:
        raise ValueError(f"count must lie in [1, {MAX_EIGENMODES}]")
    if relative_permittivity < 1.0:
        raise ValueError("relative permittivity must be >= 1")
    a, index, active = _interior_operator(grid, mask)
    n = a.shape[0]
    if count >= n:
        raise ValueError("grid too small for the requested mode count")
    v0 = np.random.default_rng(seed).standard_normal(n)
    try:
        lam, vec = eigsh(a, k=count, sigma=0.0, which="LM", v0=v0, maxiter=10000)
    except ArpackNoConvergence as err:
        raise NonConvergenceError(f"eigensolver did not converge: {err}") from err
    order = np.argsort(lam)
    lam, vec = lam[order], vec[:, order]

    res_grid = grid.resolution
    full_mask = (
        np.zeros((res_grid, res_grid), dtype=bool) if mask is None else mask.copy()
    )
    out = []
    for j in range(count):
        u = vec[:, j]
        resid = float(np.linalg.norm(a @ u - lam[j] * u) / (lam[j] * np.linalg.norm(u)))
        peak = np.argmax(np.abs(u))
        u = u / u[peak]  # max |u| = 1, peak positive
        values = np.zeros((res_grid, res_grid))
        values[active] = u
        k = float(np.sqrt(lam[j]))
        out.append(
            EigenSolution(
                wavenumber=k,
                frequency=SPEED_OF_LIGHT
                * k
                / (2.0 * math.pi * math.sqrt(relative_permittivity)),
                field=FieldMap(values=values, mask=full_mask, grid=grid),
                converged=resid <= 1e-8,
                residual=resid,
            )
        )
    return out


def dominant_eigenmode(
    grid: Grid,
    mask: np.ndarray | None = None,
    relative_permittivity: float = 1.0,
    seed: int = 0,
) -> EigenSolution:
    """Lowest eigenmode of the (possibly wire-loaded) cross-section."""
    return eigenmodes(
        grid, mask=mask, count=1, relative_permittivity=relative_permittivity, seed=seed
    )[0]


def find_antinodes(
    field: FieldMap,
    threshold: float = 0.9,
    min_separation: float | None = None,
    exclude: np.ndarray | None = None,
) -> np.ndarray:
    """Field maxima positions, greedily thinned to a minimum separation.

    Candidates are interior nodes whose |value| is >= threshold (relative to
    the global max of 1) and not more than a small slope tolerance below any
    of their 8 neighbours.  The tolerance, PLATEAU_SLOPE / side per cell of
    the unit-normalized field, rejects points sitting on a genuine slope yet
    keeps the gently varying crest of a ridge as one contiguous candidate
    run, so greedy selection in descending field order samples ridges at
    about min_separation spacing (default 3 grid cells) while an isolated
    peak still yields a single point.  Accepted points also keep
    min_separation from the optional exclude points.  Returns (M, 2)
    positions in metres.

    Raises ValueError when no node qualifies at all (a degenerate field,
    e.g. identically zero); a nonempty candidate set whose points are all
    blocked by the separation rule returns an empty array instead.
    """
    if not 0.0 < threshold <= 1.0:
        raise ValueError("threshold must lie in (0, 1]")
    grid = field.grid
    if min_separation is None:
        min_separation = 3.0 * grid.h
    mag = np.abs(field.values)
    inner = mag[1:-1, 1:-1]
    tol = PLATEAU_SLOPE * grid.h / grid.side
    peak = np.ones_like(inner, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            peak &= inner >= mag[1 + di : mag.shape[0] - 1 + di, 1 + dj : mag.shape[1] - 1 + dj] - tol
    peak &= inner >= threshold
    peak &= ~field.mask[1:-1, 1:-1]
    ii, jj = np.nonzero(peak)
    if ii.size == 0:
        raise ValueError("no antinode candidates: the field is degenerate")
    vals = inner[ii, jj]
    order = np.lexsort((jj, ii, -vals))
    ii, jj = ii[order] + 1, jj[order] + 1

    taken: list[tuple[float, float]] = []
    blockers = [] if exclude is None else [tuple(p) for p in np.asarray(exclude).reshape(-1, 2)]
    h = grid.h
    for i, j in zip(ii, jj):
        x, z = i * h, j * h
        if all(
            (x - bx) ** 2 + (z - bz) ** 2 >= min_separation**2
            for bx, bz in taken + blockers
        ):
            taken.append((x, z))
    return np.array(taken).reshape(-1, 2)


def write_field_csv(field: FieldMap, path) -> None:
    """Field values as a CSV grid; row i holds values[i, :] (fixed x = i h)."""
    with open(path, "w", newline="") as fh:
        fh.write(f"# side_m={field.grid.side!r} resolution={field.grid.resolution}\n")
        for row in field.values.tolist():
            fh.write(",".join(repr(v) for v in row) + "\n")


def write_field_pgm(field: FieldMap, path) -> None:
    """|field| as an 8-bit binary PGM; rows run from z = side down to 0."""
    mag = np.abs(field.values)
    img = np.round(255.0 * mag.T[::-1, :]).astype(np.uint8)
    with open(path, "wb") as fh:
        fh.write(f"P5\n{img.shape[1]} {img.shape[0]}\n255\n".encode("ascii"))
        fh.write(img.tobytes())
