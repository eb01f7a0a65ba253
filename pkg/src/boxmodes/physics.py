"""Closed-form cavity QED quantities for a rectangular microwave package.

Frequencies are linear (Hz) throughout the package; factors of 2*pi appear
only where a rate or an ODE coefficient genuinely needs angular units.
Lengths are metres, dipole moments C*m, damping rates 1/s.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .constants import PLANCK, SPEED_OF_LIGHT, VACUUM_PERMITTIVITY


class DispersiveRegimeWarning(UserWarning):
    """Raised when a dispersive formula is evaluated too close to resonance."""


@dataclass(frozen=True)
class CavityGeometry:
    """Rectangular box of side lengths (a, b, e) along (x, y, z).

    The qubit-facing face is the a x e base; b is the height.  A uniform
    dielectric filling is described by ``relative_permittivity``.
    """

    length_a: float  # m
    height_b: float  # m
    depth_e: float  # m
    relative_permittivity: float = 1.0

    def __post_init__(self) -> None:
        if min(self.length_a, self.height_b, self.depth_e) <= 0:
            raise ValueError("box dimensions must be positive")
        if self.relative_permittivity < 1.0:
            raise ValueError("relative permittivity must be >= 1")

    @property
    def volume(self) -> float:
        return self.length_a * self.height_b * self.depth_e


@dataclass(frozen=True)
class CavityModeIndex:
    """Mode index (n, m, l) along (a, b, e).

    At least two indices must be nonzero: with two zero indices the mode
    field vanishes identically, so such entries are not resonant modes.
    """

    n: int
    m: int
    l: int

    def __post_init__(self) -> None:
        idx = (self.n, self.m, self.l)
        if any(i < 0 for i in idx):
            raise ValueError("mode indices must be non-negative")
        if sum(1 for i in idx if i > 0) < 2:
            raise ValueError("a resonant mode needs at least two nonzero indices")


@dataclass(frozen=True)
class QubitParameters:
    """Transition frequency f_q (Hz), dipole moment p_q (C*m), damping rates (1/s)."""

    f_q: float
    p_q: float
    gamma_r: float = 0.0
    gamma_d: float = 0.0

    def __post_init__(self) -> None:
        if self.f_q <= 0:
            raise ValueError("transition frequency must be positive")
        if self.p_q < 0:
            raise ValueError("dipole moment must be non-negative")
        if self.gamma_r < 0 or self.gamma_d < 0:
            raise ValueError("damping rates must be non-negative")

    @classmethod
    def from_times(
        cls,
        f_q: float,
        p_q: float,
        t1: float,
        t2: float | None = None,
        tau_phi: float = math.inf,
    ) -> "QubitParameters":
        """Build from relaxation/coherence times.

        Either t2 (whole-line coherence, gamma_d = 1/t2) or a pure-dephasing
        time tau_phi (gamma_d = 1/(2 t1) + 1/tau_phi) may be given; t2 wins
        when both are present.  t2 <= 2 t1 is required so gamma_d >= gamma_r/2.
        """
        if t1 <= 0:
            raise ValueError("t1 must be positive")
        gamma_r = 1.0 / t1
        if t2 is not None:
            if t2 <= 0 or t2 > 2.0 * t1 * (1.0 + 1e-12):
                raise ValueError("t2 must satisfy 0 < t2 <= 2*t1")
            gamma_d = 1.0 / t2
        else:
            gamma_d = 0.5 * gamma_r + (0.0 if math.isinf(tau_phi) else 1.0 / tau_phi)
        return cls(f_q=f_q, p_q=p_q, gamma_r=gamma_r, gamma_d=gamma_d)


@dataclass(frozen=True)
class CoupledSystem:
    """One qubit coupled to one cavity mode.

    g: coupling (Hz), delta: cavity-qubit detuning f_c - f_q (Hz),
    kappa_c: cavity energy decay rate (1/s).
    """

    g: float
    delta: float
    kappa_c: float = 0.0

    def __post_init__(self) -> None:
        if self.g < 0:
            raise ValueError("coupling must be non-negative")
        if self.kappa_c < 0:
            raise ValueError("cavity decay rate must be non-negative")


def mode_frequency(geom: CavityGeometry, idx: CavityModeIndex) -> float:
    """Resonance frequency of box mode (n, m, l).

    f = c / (2 sqrt(eps_r)) * sqrt((n/a)^2 + (m/b)^2 + (l/e)^2).
    For a square base a = e this reduces to the usual
    (c/sqrt(eps_r))/2 * sqrt((l^2 + n^2)/L^2 + m^2/H^2).
    """
    root = math.sqrt(
        (idx.n / geom.length_a) ** 2
        + (idx.m / geom.height_b) ** 2
        + (idx.l / geom.depth_e) ** 2
    )
    return 0.5 * SPEED_OF_LIGHT / math.sqrt(geom.relative_permittivity) * root


def dominant_mode_frequency(geom: CavityGeometry) -> float:
    """Frequency of the (1, 0, 1) mode, the lowest mode when a, e > b."""
    return mode_frequency(geom, CavityModeIndex(1, 0, 1))


def zero_point_field(geom: CavityGeometry, f_c: float) -> float:
    """RMS vacuum field E_0 = sqrt(h f_c / (2 eps_0 V)) of a mode at f_c."""
    if f_c <= 0:
        raise ValueError("mode frequency must be positive")
    return math.sqrt(PLANCK * f_c / (2.0 * VACUUM_PERMITTIVITY * geom.volume))


def cell_zero_point_field(cell_side: float, height: float, f_c: float) -> float:
    """Vacuum field of the dominant mode of a square-base cell, as a function
    of its own resonance frequency.

    Substituting a = c / (sqrt(2) f_c) into the volume of an a x H x a cell
    gives E = (1/c) sqrt(h f_c^3 / (eps_0 H)).  The expression is only
    meaningful up to the cutoff set by the smallest cell the caller can
    realize, f_c <= c / (sqrt(2) cell_side).
    """
    if cell_side <= 0 or height <= 0:
        raise ValueError("cell dimensions must be positive")
    if f_c <= 0:
        raise ValueError("mode frequency must be positive")
    cutoff = SPEED_OF_LIGHT / (math.sqrt(2.0) * cell_side)
    if f_c > cutoff * (1.0 + 1e-12):
        raise ValueError(
            f"frequency {f_c:.4g} Hz above the cell cutoff {cutoff:.4g} Hz"
        )
    return math.sqrt(PLANCK * f_c**3 / (VACUUM_PERMITTIVITY * height)) / SPEED_OF_LIGHT


def coupling_from_field(e_field: float, p_q: float) -> float:
    """Qubit-mode coupling g = E p_q / h in Hz."""
    if e_field < 0 or p_q < 0:
        raise ValueError("field and dipole moment must be non-negative")
    return e_field * p_q / PLANCK


def dressed_frequencies(f_c: float, g: float, delta: float) -> tuple[float, float]:
    """Dressed-state branches of the coupled qubit-cavity system.

    Returns (lower, upper) = f_c -/+ sqrt(g^2 + delta^2)/2 - delta/2.
    The splitting at delta = 0 equals g; for |delta| >> g the branches
    approach f_c - delta and f_c.
    """
    if g < 0:
        raise ValueError("coupling must be non-negative")
    half = 0.5 * math.hypot(g, delta)
    return f_c - half - 0.5 * delta, f_c + half - 0.5 * delta


def purcell_total_rate(sys: CoupledSystem, qubit: QubitParameters) -> float:
    """Total qubit decay rate including cavity-induced (Purcell) decay.

    rate = (gamma_r + gamma_d)/2 + (g/delta)^2 kappa_c, valid in the
    dispersive regime.  |delta| < 5 g triggers DispersiveRegimeWarning.
    """
    if sys.delta == 0.0:
        raise ValueError("Purcell rate is undefined at zero detuning")
    if sys.g > 0 and abs(sys.delta) < 5.0 * sys.g:
        warnings.warn(
            f"|delta| = {abs(sys.delta):.4g} Hz < 5 g = {5 * sys.g:.4g} Hz; "
            "dispersive Purcell formula is unreliable here",
            DispersiveRegimeWarning,
            stacklevel=2,
        )
    return 0.5 * (qubit.gamma_r + qubit.gamma_d) + (sys.g / sys.delta) ** 2 * sys.kappa_c


def dispersive_qq_coupling(g: float, delta: float) -> float:
    """Cavity-mediated qubit-qubit coupling g^2 / delta (Hz)."""
    if delta == 0.0:
        raise ValueError("dispersive coupling is undefined at zero detuning")
    return g * g / delta
