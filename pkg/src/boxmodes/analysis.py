"""Leakage budgets, scaling sweeps, and anticrossing fits.

Ties the closed-form cavity quantities, the two-level dynamics, and the
wire-grid frequency laws together into the figures-of-merit used to judge a
package design: depolarizing error versus detuning as wires are added, the
wire count where the error crosses a fault-tolerance threshold, and coupling
extraction from measured or simulated anticrossing branches.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from .bloch import DynamicsConfig, depolarizing_probability
from .fencing import frequency_from_wire_count
from .helmholtz import NonConvergenceError
from .physics import CoupledSystem, QubitParameters, dressed_frequencies, purcell_total_rate
from .pinning import PinningConfig, run_pinning


def coupling_scaling(g0: float, f_tilde: float) -> float:
    """Coupling at scaled frequency f_tilde: g = g0 * f_tilde^(3/2).

    The cell vacuum field grows as f_c^(3/2) at fixed height, so the
    qubit-mode coupling inherits that power law relative to its bare value.
    """
    if g0 < 0:
        raise ValueError("bare coupling must be non-negative")
    if f_tilde <= 0:
        raise ValueError("scaled frequency must be positive")
    return g0 * f_tilde**1.5


@dataclass(frozen=True)
class SweepConfig:
    """Leakage sweep over wire counts.

    Frequencies in Hz, times in seconds.  n_range lists the wire counts to
    evaluate; frequency_source selects the analytic count-to-frequency law
    or a numerical pinning curve (which then requires ``pinning``).
    """

    f_101: float = 3e9
    f_q: float = 6e9
    g0: float = 4e6
    horizon: float = 250e-9
    t1: float = 100e-6
    t2: float = 50e-6
    n_range: tuple[int, ...] = tuple(range(26))
    p_threshold: float = 0.0057
    frequency_source: str = "analytic"
    n_time_points: int = 2000
    pinning: PinningConfig | None = None

    def __post_init__(self) -> None:
        if min(self.f_101, self.f_q, self.g0) <= 0:
            raise ValueError("frequencies and coupling must be positive")
        if self.t1 <= 0 or self.t2 <= 0:
            raise ValueError("coherence times must be positive")
        if self.t2 > 2.0 * self.t1 * (1.0 + 1e-12):
            raise ValueError("t2 cannot exceed 2 t1")
        if not 0.0 < self.p_threshold < 1.0:
            raise ValueError("threshold must lie in (0, 1)")
        if len(self.n_range) == 0:
            raise ValueError("n_range must be non-empty")
        counts = list(self.n_range)
        if any(n < 0 for n in counts) or sorted(set(counts)) != counts:
            raise ValueError("n_range must be strictly increasing and non-negative")
        if self.frequency_source not in ("analytic", "numerical"):
            raise ValueError("frequency_source must be 'analytic' or 'numerical'")
        if self.frequency_source == "numerical" and self.pinning is None:
            raise ValueError("numerical frequency source needs a pinning config")
        object.__setattr__(self, "n_range", tuple(counts))


@dataclass(frozen=True)
class SweepRow:
    n: int
    f_tilde: float
    delta: float
    g: float
    p_undamped: float
    p_damped: float


@dataclass
class SweepResult:
    rows: list[SweepRow]
    threshold_crossing_delta: float | None
    config: SweepConfig = field(repr=False)


def _scaled_frequencies(cfg: SweepConfig) -> np.ndarray:
    if cfg.frequency_source == "analytic":
        return np.array([frequency_from_wire_count(n) for n in cfg.n_range])
    pin_cfg = cfg.pinning
    if pin_cfg.max_wires is None or pin_cfg.max_wires < max(cfg.n_range):
        raise ValueError("pinning budget below the largest requested wire count")
    curve = run_pinning(pin_cfg).frequency_curve
    if curve[-1, 0] < max(cfg.n_range):
        raise NonConvergenceError(
            f"pinning stopped at N={int(curve[-1, 0])}, "
            f"short of the requested N={max(cfg.n_range)}"
        )
    return np.interp(np.array(cfg.n_range, dtype=float), curve[:, 0], curve[:, 1]) / curve[0, 1]


def _row(cfg: SweepConfig, n: int, f_tilde: float) -> SweepRow:
    f_tilde = float(f_tilde)
    f_c = f_tilde * cfg.f_101
    delta = f_c - cfg.f_q
    g = coupling_scaling(cfg.g0, f_tilde)
    base = dict(g=g, delta=delta, horizon=cfg.horizon, n_time_points=cfg.n_time_points)
    p_undamped = depolarizing_probability(DynamicsConfig(**base))
    p_damped = depolarizing_probability(
        DynamicsConfig(**base, gamma_r=1.0 / cfg.t1, gamma_d=1.0 / cfg.t2)
    )
    return SweepRow(
        n=n, f_tilde=f_tilde, delta=delta, g=g,
        p_undamped=p_undamped, p_damped=p_damped,
    )


def _crossing(rows: list[SweepRow], threshold: float) -> float | None:
    """Smallest |delta| where the interpolated undamped curve is below threshold.

    The curve is taken piecewise log-linear in p between consecutive rows
    (rows are ordered by wire count, hence by detuning).  Candidate points
    are rows already below threshold and the crossing points of bracketing
    segments; the smallest |delta| among them is returned, None if the curve
    never dips below threshold.
    """
    tiny = 1e-300
    candidates = [abs(r.delta) for r in rows if r.p_undamped < threshold]
    for a, b in zip(rows, rows[1:]):
        pa, pb = max(a.p_undamped, tiny), max(b.p_undamped, tiny)
        if (pa - threshold) * (pb - threshold) < 0:
            frac = (math.log(threshold) - math.log(pa)) / (math.log(pb) - math.log(pa))
            candidates.append(abs(a.delta + frac * (b.delta - a.delta)))
    return min(candidates) if candidates else None


def leakage_sweep(cfg: SweepConfig, jobs: int = 1) -> SweepResult:
    """Depolarizing error versus wire count, damped and undamped.

    Rows are independent and evaluated in parallel when jobs > 1; assembly
    preserves the n_range order, so results do not depend on jobs.
    """
    if jobs < 1:
        raise ValueError("jobs must be at least 1")
    f_tildes = _scaled_frequencies(cfg)
    if jobs == 1:
        rows = [_row(cfg, n, ft) for n, ft in zip(cfg.n_range, f_tildes)]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(lambda nf: _row(cfg, *nf), zip(cfg.n_range, f_tildes)))
    return SweepResult(
        rows=rows,
        threshold_crossing_delta=_crossing(rows, cfg.p_threshold),
        config=cfg,
    )


def multimode_error(p_values) -> float:
    """Total depolarizing error of independent modes: clamped sum."""
    total = 0.0
    for p in p_values:
        if not 0.0 <= p <= 1.0:
            raise ValueError("mode errors must lie in [0, 1]")
        total += p
    return min(1.0, total)


@dataclass(frozen=True)
class RegimeReport:
    """Coupling-regime label, with the Purcell rate attached when dispersive."""

    label: str
    purcell_rate: float | None = None


def weak_coupling_regime_check(sys: CoupledSystem, qubit: QubitParameters) -> RegimeReport:
    """Label the system strong or weak coupling.

    Strong requires 2 pi g to exceed every loss rate (gamma_r, gamma_d,
    kappa_c); a tie counts as weak.  In the dispersive regime
    (|delta| >= 5 g) the Purcell-limited total rate is attached.
    """
    strong = 2.0 * math.pi * sys.g > max(qubit.gamma_r, qubit.gamma_d, sys.kappa_c)
    rate = None
    if sys.delta != 0.0 and abs(sys.delta) >= 5.0 * sys.g:
        rate = purcell_total_rate(sys, qubit)
    return RegimeReport(label="strong" if strong else "weak", purcell_rate=rate)


@dataclass(frozen=True)
class AnticrossingData:
    """Dressed-branch samples versus bare resonator frequency (all Hz).

    sigma, when given, is the one-point frequency uncertainty used to weight
    the fit (scalar or per-point array applied to both branches).
    """

    f_resonator: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    sigma: np.ndarray | float | None = None

    def __post_init__(self) -> None:
        fr = np.asarray(self.f_resonator, dtype=float)
        lo = np.asarray(self.lower, dtype=float)
        up = np.asarray(self.upper, dtype=float)
        for name, arr in (("f_resonator", fr), ("lower", lo), ("upper", up)):
            if arr.ndim != 1 or arr.size != fr.size:
                raise ValueError(f"{name} must be 1D and of equal length")
        object.__setattr__(self, "f_resonator", fr)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", up)
        if fr.size < 4:
            raise ValueError("at least four sweep points are required")
        if np.ptp(fr) == 0.0:
            raise ValueError("all sweep points coincide; the fit is degenerate")
        if np.any(lo >= up):
            raise ValueError("lower branch must lie strictly below upper branch")


@dataclass(frozen=True)
class FitResult:
    """Best-fit coupling and mode frequency with 95% confidence half-widths."""

    g: float
    f_c: float
    g_ci95: float
    f_c_ci95: float
    residual_rms: float

    def report(self) -> str:
        return (
            "anticrossing fit\n"
            f"  g   = {self.g!r} Hz  (95% CI +/- {self.g_ci95!r})\n"
            f"  f_c = {self.f_c!r} Hz  (95% CI +/- {self.f_c_ci95!r})\n"
            f"  residual rms = {self.residual_rms!r} Hz\n"
        )


def _branches(params: np.ndarray, f_resonator: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    g, f_c = params
    delta = f_c - f_resonator
    half = 0.5 * np.hypot(g, delta)
    return f_c - half - 0.5 * delta, f_c + half - 0.5 * delta


def fit_anticrossing(data: AnticrossingData) -> FitResult:
    """Joint nonlinear least-squares fit of both dressed branches.

    Free parameters are (g, f_c); the minimum observed splitting seeds the
    optimizer.  The confidence half-widths come from the local quadratic
    model at the optimum (1.96 sigma, residual-scaled covariance).
    """
    split = data.upper - data.lower
    k0 = int(np.argmin(split))
    x0 = np.array([max(split[k0], 1e-6), data.f_resonator[k0]])
    weights = None
    if data.sigma is not None:
        weights = np.broadcast_to(
            1.0 / np.asarray(data.sigma, dtype=float), data.f_resonator.shape
        )

    def residuals(params: np.ndarray) -> np.ndarray:
        lo, up = _branches(params, data.f_resonator)
        r = np.concatenate([lo - data.lower, up - data.upper])
        if weights is not None:
            r = r * np.concatenate([weights, weights])
        return r

    scale = np.array([x0[0], x0[1]])
    fit = least_squares(
        residuals,
        x0,
        bounds=([0.0, 0.0], [np.inf, np.inf]),
        x_scale=np.maximum(scale, 1.0),
    )
    if not fit.success:
        raise NonConvergenceError(f"anticrossing fit failed: {fit.message}")

    n_res = 2 * data.f_resonator.size
    dof = max(n_res - 2, 1)
    s2 = 2.0 * fit.cost / dof
    jtj = fit.jac.T @ fit.jac
    try:
        cov = s2 * np.linalg.inv(jtj)
    except np.linalg.LinAlgError:
        cov = s2 * np.linalg.pinv(jtj)
    ci = 1.96 * np.sqrt(np.maximum(np.diag(cov), 0.0))
    lo, up = _branches(fit.x, data.f_resonator)
    raw = np.concatenate([lo - data.lower, up - data.upper])
    return FitResult(
        g=float(fit.x[0]),
        f_c=float(fit.x[1]),
        g_ci95=float(ci[0]),
        f_c_ci95=float(ci[1]),
        residual_rms=float(np.sqrt(np.mean(raw**2))),
    )


def write_sweep_csv(result: SweepResult, path) -> None:
    """Sweep rows as CSV: N, f_tilde_c, delta_Hz, g_Hz, p_undamped, p_damped."""
    with open(path, "w", newline="") as fh:
        fh.write("N,f_tilde_c,delta_Hz,g_Hz,p_undamped,p_damped\n")
        for r in result.rows:
            fh.write(
                f"{r.n},{r.f_tilde!r},{r.delta!r},{r.g!r},"
                f"{r.p_undamped!r},{r.p_damped!r}\n"
            )
