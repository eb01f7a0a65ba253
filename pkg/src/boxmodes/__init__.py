"""Cavity-mode leakage estimates and wire-grid mode mitigation for
superconducting qubit packages.

The package splits into closed-form cavity QED quantities (physics),
two-level dynamics and leakage error (bloch), half-wave fence layouts
(fencing), a finite-difference cross-section eigensolver (helmholtz),
adaptive antinode pinning (pinning), and sweep/fit tooling (analysis).
"""
from .analysis import (
    AnticrossingData,
    FitResult,
    RegimeReport,
    SweepConfig,
    SweepResult,
    SweepRow,
    coupling_scaling,
    fit_anticrossing,
    leakage_sweep,
    multimode_error,
    weak_coupling_regime_check,
    write_sweep_csv,
)
from .bloch import (
    BlochState,
    BlochTrace,
    DynamicsConfig,
    IntegrationUnstableError,
    depolarizing_probability,
    excited_probability_trace,
    incoherent_floor,
    integrate_maxwell_bloch,
    write_trace_csv,
)
from .fencing import (
    FencePlan,
    WireLayout,
    cells_of,
    fence_scaled_frequency,
    fence_wire_count,
    frequency_from_wire_count,
    generate_fence_layout,
    read_layout_csv,
    write_layout_csv,
)
from .helmholtz import (
    EigenSolution,
    FieldMap,
    Grid,
    NonConvergenceError,
    dominant_eigenmode,
    eigenmodes,
    find_antinodes,
    rasterize_wires,
    write_field_csv,
    write_field_pgm,
)
from .physics import (
    CavityGeometry,
    CavityModeIndex,
    CoupledSystem,
    DispersiveRegimeWarning,
    QubitParameters,
    cell_zero_point_field,
    coupling_from_field,
    dispersive_qq_coupling,
    dominant_mode_frequency,
    dressed_frequencies,
    mode_frequency,
    purcell_total_rate,
    zero_point_field,
)
from .pinning import (
    PinningConfig,
    PinningIteration,
    PinningReport,
    pinning_frequency_curve,
    run_pinning,
    write_report_csv,
)

__version__ = "0.1.0"
