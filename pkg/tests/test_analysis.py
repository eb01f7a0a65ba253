"""Leakage sweeps, threshold crossings, regime labels, and anticrossing fits."""
import math

import numpy as np
import pytest

from boxmodes.analysis import (
    AnticrossingData,
    RegimeReport,
    SweepConfig,
    SweepRow,
    _crossing,
    coupling_scaling,
    fit_anticrossing,
    leakage_sweep,
    multimode_error,
    weak_coupling_regime_check,
    write_sweep_csv,
)
from boxmodes.bloch import DynamicsConfig, incoherent_floor
from boxmodes.helmholtz import Grid, NonConvergenceError
from boxmodes.physics import CoupledSystem, QubitParameters
from boxmodes.pinning import PinningConfig

# Frozen from a closed-form evaluation of the resonant undamped error at
# N = 5 wires (f_tilde = 2, zero detuning, g = 4 MHz * 2^1.5, 250 ns window).
P_UNDAMPED_N5 = 0.5247873686482305


def branches(g, f_c, fr):
    delta = f_c - fr
    half = 0.5 * np.hypot(g, delta)
    return f_c - half - 0.5 * delta, f_c + half - 0.5 * delta


class TestCouplingScaling:
    def test_bare_coupling_at_unity(self):
        assert coupling_scaling(4e6, 1.0) == 4e6

    def test_three_halves_power(self):
        assert coupling_scaling(4e6, 4.0) == pytest.approx(32e6, rel=1e-15)

    def test_doubled_frequency_near_eleven_megahertz(self):
        assert coupling_scaling(4e6, 2.0) == pytest.approx(11.3e6, rel=3e-2)

    def test_validation(self):
        with pytest.raises(ValueError):
            coupling_scaling(-1.0, 2.0)
        with pytest.raises(ValueError):
            coupling_scaling(4e6, 0.0)


@pytest.fixture(scope="module")
def result():
    return leakage_sweep(SweepConfig(n_range=tuple(range(16))))


class TestLeakageSweep:
    def test_resonant_row_at_five_wires(self, result):
        row = result.rows[5]
        assert row.n == 5
        assert row.f_tilde == 2.0
        assert row.delta == 0.0  # 2 * 3 GHz lands exactly on the qubit
        assert row.p_undamped == pytest.approx(P_UNDAMPED_N5, rel=1e-10)

    def test_rows_cover_requested_counts(self, result):
        assert [r.n for r in result.rows] == list(range(16))

    def test_undamped_error_falls_with_detuning(self, result):
        tail = [r for r in result.rows if r.n >= 5]
        for a, b in zip(tail, tail[1:]):
            assert b.p_undamped <= a.p_undamped * (1 + 1e-12)

    def test_damped_error_never_below_incoherent_floor(self, result):
        cfg = result.config
        floor = incoherent_floor(
            DynamicsConfig(g=0.0, delta=0.0, gamma_r=1.0 / cfg.t1, horizon=cfg.horizon)
        )
        for r in result.rows:
            assert r.p_damped >= floor - 1e-4

    def test_couplings_follow_power_law(self, result):
        for r in result.rows:
            assert r.g == pytest.approx(
                coupling_scaling(result.config.g0, r.f_tilde), rel=1e-15
            )

    def test_parallel_evaluation_matches_serial(self, result):
        parallel = leakage_sweep(SweepConfig(n_range=tuple(range(16))), jobs=4)
        assert parallel.rows == result.rows
        assert parallel.threshold_crossing_delta == result.threshold_crossing_delta

    def test_jobs_validation(self):
        with pytest.raises(ValueError):
            leakage_sweep(SweepConfig(), jobs=0)


class TestCrossing:
    @staticmethod
    def row(delta, p):
        return SweepRow(n=0, f_tilde=1.0, delta=delta, g=1.0, p_undamped=p, p_damped=p)

    def test_log_linear_interpolation(self):
        rows = [self.row(1e8, 1e-1), self.row(2e8, 1e-3)]
        assert _crossing(rows, 1e-2) == pytest.approx(1.5e8, rel=1e-12)

    def test_row_already_below_threshold_wins_when_closer(self):
        rows = [self.row(1e7, 1e-3), self.row(2e8, 1e-1)]
        # the bracketing segment crosses at 1.05e8, farther out than the row
        assert _crossing(rows, 1e-2) == pytest.approx(1e7, rel=1e-12)

    def test_never_below_returns_none(self):
        rows = [self.row(1e8, 0.5), self.row(2e8, 0.3)]
        assert _crossing(rows, 1e-2) is None

    def test_zero_probability_rows_handled(self):
        rows = [self.row(1e8, 0.5), self.row(2e8, 0.0)]
        delta = _crossing(rows, 1e-2)
        assert delta is not None and 1e8 < delta <= 2e8


class TestNumericalFrequencySource:
    def pin_cfg(self, **kw):
        base = dict(
            grid=Grid(side=0.072, resolution=65), wire_diameter=500e-6, max_wires=2
        )
        base.update(kw)
        return PinningConfig(**base)

    def test_small_sweep_runs(self):
        cfg = SweepConfig(
            n_range=(0, 1, 2), frequency_source="numerical", pinning=self.pin_cfg()
        )
        result = leakage_sweep(cfg)
        tildes = [r.f_tilde for r in result.rows]
        assert tildes[0] == 1.0
        assert tildes[0] < tildes[1] < tildes[2]

    def test_budget_below_largest_count_rejected(self):
        cfg = SweepConfig(
            n_range=(0, 1, 2),
            frequency_source="numerical",
            pinning=self.pin_cfg(max_wires=1),
        )
        with pytest.raises(ValueError):
            leakage_sweep(cfg)

    def test_stalled_pinning_reported(self):
        cfg = SweepConfig(
            n_range=(0, 1, 2),
            frequency_source="numerical",
            pinning=self.pin_cfg(max_wires=5, min_separation=0.05),
        )
        with pytest.raises(NonConvergenceError):
            leakage_sweep(cfg)

    def test_numerical_source_requires_pinning_config(self):
        with pytest.raises(ValueError):
            SweepConfig(frequency_source="numerical")


class TestSweepConfigValidation:
    def test_t2_bound(self):
        with pytest.raises(ValueError):
            SweepConfig(t1=1e-6, t2=3e-6)

    def test_n_range_must_increase(self):
        with pytest.raises(ValueError):
            SweepConfig(n_range=(3, 1, 2))
        with pytest.raises(ValueError):
            SweepConfig(n_range=())

    def test_threshold_bounds(self):
        with pytest.raises(ValueError):
            SweepConfig(p_threshold=0.0)

    def test_unknown_source_rejected(self):
        with pytest.raises(ValueError):
            SweepConfig(frequency_source="tabulated")


class TestMultimodeError:
    def test_sum_of_small_errors(self):
        assert multimode_error([1e-3, 2e-3, 3e-3]) == pytest.approx(6e-3, rel=1e-12)

    def test_clamped_at_unity(self):
        assert multimode_error([0.7, 0.7]) == 1.0

    def test_empty_is_zero(self):
        assert multimode_error([]) == 0.0

    def test_invalid_probability_rejected(self):
        with pytest.raises(ValueError):
            multimode_error([0.5, 1.2])


class TestRegimeCheck:
    QUBIT = QubitParameters(f_q=6e9, p_q=1e-27, gamma_r=1e4, gamma_d=2e4)

    def test_strong_coupling(self):
        sys = CoupledSystem(g=4e6, delta=0.0, kappa_c=1e5)
        report = weak_coupling_regime_check(sys, self.QUBIT)
        assert report == RegimeReport(label="strong", purcell_rate=None)

    def test_weak_coupling(self):
        sys = CoupledSystem(g=1e3, delta=0.0, kappa_c=1e5)
        assert weak_coupling_regime_check(sys, self.QUBIT).label == "weak"

    def test_tie_counts_as_weak(self):
        # kappa_c equal to 2 pi g bit for bit: strict inequality fails
        sys = CoupledSystem(g=1.0e6, delta=0.0, kappa_c=2.0 * math.pi * 1.0e6)
        assert weak_coupling_regime_check(sys, self.QUBIT).label == "weak"

    def test_purcell_rate_attached_when_dispersive(self):
        sys = CoupledSystem(g=4e6, delta=5 * 4e6, kappa_c=1e5)
        report = weak_coupling_regime_check(sys, self.QUBIT)
        assert report.purcell_rate is not None and report.purcell_rate > 0

    def test_no_purcell_rate_near_resonance(self):
        sys = CoupledSystem(g=4e6, delta=4 * 4e6, kappa_c=1e5)
        assert weak_coupling_regime_check(sys, self.QUBIT).purcell_rate is None


class TestAnticrossingFit:
    FR = np.linspace(6.2e9, 7.8e9, 33)
    G = 100e6
    FC = 7e9

    def data(self, noise=0.0, seed=0, sigma=None):
        lo, up = branches(self.G, self.FC, self.FR)
        if noise:
            rng = np.random.default_rng(seed)
            lo = lo + rng.normal(0.0, noise, lo.shape)
            up = up + rng.normal(0.0, noise, up.shape)
        return AnticrossingData(f_resonator=self.FR, lower=lo, upper=up, sigma=sigma)

    def test_noiseless_recovery(self):
        fit = fit_anticrossing(self.data())
        assert fit.g == pytest.approx(self.G, rel=1e-3)
        assert fit.f_c == pytest.approx(self.FC, rel=1e-6)
        assert fit.residual_rms < 1.0

    def test_minimum_splitting_equals_coupling(self):
        lo, up = branches(self.G, self.FC, self.FR)
        assert np.min(up - lo) == pytest.approx(self.G, rel=1e-2)

    def test_noisy_recovery_within_two_percent(self):
        fit = fit_anticrossing(self.data(noise=1e6, sigma=1e6))
        assert fit.g == pytest.approx(self.G, rel=2e-2)
        assert fit.g_ci95 > 0 and fit.f_c_ci95 > 0

    def test_grid_offset_does_not_bias_center(self):
        fr = self.FR + 13e6  # no sample exactly at f_c
        lo, up = branches(self.G, self.FC, fr)
        fit = fit_anticrossing(AnticrossingData(f_resonator=fr, lower=lo, upper=up))
        assert fit.f_c == pytest.approx(self.FC, rel=1e-6)

    def test_report_text(self):
        text = fit_anticrossing(self.data()).report()
        assert "g   =" in text and "f_c =" in text and "residual rms" in text

    def test_data_validation(self):
        with pytest.raises(ValueError):
            AnticrossingData(
                f_resonator=self.FR[:3], lower=self.FR[:3], upper=self.FR[:3] + 1.0
            )
        with pytest.raises(ValueError):
            AnticrossingData(
                f_resonator=np.full(5, 7e9),
                lower=np.full(5, 6.9e9),
                upper=np.full(5, 7.1e9),
            )
        lo, up = branches(self.G, self.FC, self.FR)
        with pytest.raises(ValueError):
            AnticrossingData(f_resonator=self.FR, lower=up, upper=lo)


class TestSweepCsv:
    def test_format_and_roundtrip(self, tmp_path):
        result = leakage_sweep(SweepConfig(n_range=(0, 1, 5)))
        path = tmp_path / "sweep.csv"
        write_sweep_csv(result, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "N,f_tilde_c,delta_Hz,g_Hz,p_undamped,p_damped"
        assert len(lines) == 4
        back = np.loadtxt(path, delimiter=",", skiprows=1)
        assert np.array_equal(back[:, 0], [0, 1, 5])
        assert back[2, 4] == result.rows[2].p_undamped
