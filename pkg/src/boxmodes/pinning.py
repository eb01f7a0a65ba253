"""Antinode pinning: grow a wire layout by repeatedly shorting the strongest
field maxima of the current fundamental mode.

Each iteration solves the cross-section for its dominant mode, finds the
antinode positions, places a wire on each (respecting a minimum separation
and the wire budget), and re-solves.  The loop stops when a target frequency
is reached, the wire budget is exhausted, or the frequency gain has been
below 0.1% for two consecutive iterations (stagnation).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fencing import WireLayout
from .helmholtz import (
    EigenSolution,
    Grid,
    dominant_eigenmode,
    find_antinodes,
    rasterize_wires,
)

MAX_WIRE_BUDGET = 300
STAGNATION_GAIN = 1e-3


@dataclass(frozen=True)
class PinningConfig:
    """Stopping criteria and discretization for a pinning run.

    At least one of target_frequency (Hz) and max_wires must be set.
    min_separation of None applies the default max(wire_diameter, 3 h).
    """

    grid: Grid
    wire_diameter: float
    target_frequency: float | None = None
    max_wires: int | None = None
    threshold: float = 0.9
    min_separation: float | None = None
    relative_permittivity: float = 1.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.wire_diameter <= 0:
            raise ValueError("wire diameter must be positive")
        if self.target_frequency is None and self.max_wires is None:
            raise ValueError("set a target frequency, a wire budget, or both")
        if self.target_frequency is not None and self.target_frequency <= 0:
            raise ValueError("target frequency must be positive")
        if self.max_wires is not None and not 0 <= self.max_wires <= MAX_WIRE_BUDGET:
            raise ValueError(f"wire budget must lie in [0, {MAX_WIRE_BUDGET}]")
        if not 0.0 < self.threshold <= 1.0:
            raise ValueError("threshold must lie in (0, 1]")
        if self.min_separation is not None and self.min_separation <= 0:
            raise ValueError("minimum separation must be positive")

    @property
    def effective_min_separation(self) -> float:
        if self.min_separation is not None:
            return self.min_separation
        return max(self.wire_diameter, 3.0 * self.grid.h)


@dataclass(frozen=True)
class PinningIteration:
    iteration: int
    wires_added: int
    n_total: int
    frequency: float


@dataclass
class PinningReport:
    """Per-iteration history plus the final layout and mode.

    status is one of target_reached, max_wires_reached, stagnated.
    skipped_overlaps counts antinodes dropped because a wire there would
    have touched an existing one.
    """

    iterations: list[PinningIteration]
    layout: WireLayout
    solution: EigenSolution
    status: str
    skipped_overlaps: int = 0

    @property
    def frequency_curve(self) -> np.ndarray:
        return np.array([(it.n_total, it.frequency) for it in self.iterations])


def _solve(cfg: PinningConfig, layout: WireLayout) -> EigenSolution:
    mask = rasterize_wires(cfg.grid, layout) if layout.count else None
    return dominant_eigenmode(
        cfg.grid,
        mask=mask,
        relative_permittivity=cfg.relative_permittivity,
        seed=cfg.seed,
    )


def run_pinning(
    cfg: PinningConfig,
    initial_layout: WireLayout | None = None,
    on_iteration=None,
) -> PinningReport:
    """Run the pinning loop, optionally seeded with an existing layout.

    The seeded state counts as iteration 0; its row reports zero added
    wires and the frequency of the seed configuration (the empty-cavity
    fundamental when no seed is given).  on_iteration, when given, is
    called as on_iteration(iteration, solution) after every solve.
    """
    if initial_layout is not None and initial_layout.diameter != cfg.wire_diameter:
        raise ValueError("seed layout wire diameter differs from the configured one")
    layout = (
        initial_layout
        if initial_layout is not None
        else WireLayout(centers=np.empty((0, 2)), diameter=cfg.wire_diameter)
    )
    sol = _solve(cfg, layout)
    history = [PinningIteration(0, 0, layout.count, sol.frequency)]
    if on_iteration is not None:
        on_iteration(0, sol)
    skipped = 0
    status = None
    while True:
        if cfg.target_frequency is not None and sol.frequency >= cfg.target_frequency:
            status = "target_reached"
            break
        if cfg.max_wires is not None and layout.count >= cfg.max_wires:
            status = "max_wires_reached"
            break
        if (
            len(history) >= 3
            and history[-1].frequency < (1.0 + STAGNATION_GAIN) * history[-2].frequency
            and history[-2].frequency < (1.0 + STAGNATION_GAIN) * history[-3].frequency
        ):
            status = "stagnated"
            break

        points = find_antinodes(
            sol.field,
            threshold=cfg.threshold,
            min_separation=cfg.effective_min_separation,
            exclude=layout.centers,
        )
        # a wire disk must not touch an existing or a just-accepted one
        accepted: list[np.ndarray] = []
        for p in points:
            others = (
                np.vstack([layout.centers] + [q[None, :] for q in accepted])
                if accepted or layout.count
                else np.empty((0, 2))
            )
            if others.size and np.hypot(*(others - p).T).min() < cfg.wire_diameter:
                skipped += 1
                continue
            accepted.append(p)
        if cfg.max_wires is not None:
            room = cfg.max_wires - layout.count
            accepted = accepted[:room]
        if not accepted:
            status = "stagnated"
            break
        layout = WireLayout(
            centers=np.vstack([layout.centers, np.array(accepted)]),
            diameter=cfg.wire_diameter,
        )
        sol = _solve(cfg, layout)
        history.append(
            PinningIteration(len(history), len(accepted), layout.count, sol.frequency)
        )
        if on_iteration is not None:
            on_iteration(history[-1].iteration, sol)
    return PinningReport(
        iterations=history,
        layout=layout,
        solution=sol,
        status=status,
        skipped_overlaps=skipped,
    )


def pinning_frequency_curve(
    cfg: PinningConfig, initial_layout: WireLayout | None = None
) -> np.ndarray:
    """(wire count, frequency) rows of a pinning run, one per iteration."""
    return run_pinning(cfg, initial_layout=initial_layout).frequency_curve


def write_report_csv(report: PinningReport, path) -> None:
    """Iteration history as CSV: iteration, wires_added, N_total, f_c_Hz."""
    with open(path, "w", newline="") as fh:
        fh.write("iteration,wires_added,N_total,f_c_Hz\n")
        for it in report.iterations:
            fh.write(f"{it.iteration},{it.wires_added},{it.n_total},{it.frequency!r}\n")
