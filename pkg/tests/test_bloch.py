"""Two-level dynamics: closed forms, a dense matrix-exponential oracle, and
the leakage average."""
import math

import numpy as np
import pytest
from scipy.linalg import expm

from boxmodes.bloch import (
    BlochState,
    DynamicsConfig,
    depolarizing_probability,
    drift_terms,
    excited_probability_trace,
    incoherent_floor,
    integrate_maxwell_bloch,
    write_trace_csv,
)

# g = 0.1/T1 window average, frozen from the closed form 1 + expm1(-x)/x
FLOOR_100US_250NS = 0.0012489589840338766

# trapezoid leakage of the resonant row of the default sweep
# (g = 4 MHz * 2^(3/2), delta = 0, T = 250 ns, 2000 samples), frozen from an
# independent high-resolution integration of cos^2(pi g t)
P_RESONANT_11MHZ = 0.5247873686482305


def undamped_population(g, delta, t):
    # exact solution: P_e = 1 - g^2/(g^2+delta^2) sin^2(pi sqrt(g^2+delta^2) t)
    rabi = math.hypot(g, delta)
    if rabi == 0.0:
        return np.ones_like(t)
    return 1.0 - (g / rabi) ** 2 * np.sin(math.pi * rabi * t) ** 2


class TestClosedForms:
    def test_resonant_oscillation(self):
        cfg = DynamicsConfig(g=5e6, delta=0.0, horizon=400e-9)
        trace = integrate_maxwell_bloch(cfg)
        expect = np.cos(math.pi * 5e6 * trace.times) ** 2
        assert np.abs(trace.rho_ee - expect).max() < 1e-9

    def test_full_swap_period_is_inverse_g(self):
        g = 4e6
        cfg = DynamicsConfig(g=g, delta=0.0, horizon=3.0 / g, n_time_points=3001)
        trace = integrate_maxwell_bloch(cfg)
        for k in (1000, 2000, 3000):  # t = 1/g, 2/g, 3/g
            assert trace.rho_ee[k] == pytest.approx(1.0, abs=1e-9)
        assert trace.rho_ee[500] == pytest.approx(0.0, abs=1e-9)  # t = 1/(2g)

    @pytest.mark.parametrize("g,delta", [(4e6, 1e7), (1e6, -3e8), (2e7, 5e7)])
    def test_detuned_oscillation(self, g, delta):
        cfg = DynamicsConfig(g=g, delta=delta, horizon=250e-9)
        trace = integrate_maxwell_bloch(cfg)
        expect = undamped_population(g, delta, trace.times)
        assert np.abs(trace.rho_ee - expect).max() < 1e-9

    def test_zero_coupling_is_pure_decay(self):
        cfg = DynamicsConfig(g=0.0, delta=0.0, gamma_r=1e4, horizon=250e-9)
        trace = integrate_maxwell_bloch(cfg)
        assert np.abs(trace.rho_ee - np.exp(-1e4 * trace.times)).max() < 1e-12

    def test_ground_start_mirrors_excited_start(self):
        cfg = DynamicsConfig(g=5e6, delta=0.0, horizon=200e-9)
        trace = integrate_maxwell_bloch(cfg, initial=BlochState(rho_ee=0.0))
        expect = np.sin(math.pi * 5e6 * trace.times) ** 2
        assert np.abs(trace.rho_ee - expect).max() < 1e-9


class TestMatrixExponentialOracle:
    def test_trajectories_match_expm(self):
        rng = np.random.default_rng(3)
        for _ in range(5):
            cfg = DynamicsConfig(
                g=rng.uniform(1e5, 2e7),
                delta=rng.uniform(-5e8, 5e8),
                gamma_r=rng.uniform(0, 1e5),
                gamma_d=rng.uniform(0, 1e5),
                horizon=250e-9,
            )
            trace = integrate_maxwell_bloch(cfg)
            a, b = drift_terms(cfg)
            m = np.zeros((4, 4))
            m[:3, :3] = a
            m[:3, 3] = b
            z0 = np.array([1.0, 0.0, 0.0, 1.0])
            for k in rng.integers(0, cfg.n_time_points, 8):
                z = expm(m * trace.times[k]) @ z0
                got = np.array([trace.rho_ee[k], trace.rho_ge_re[k], trace.rho_ge_im[k]])
                assert np.abs(got - z[:3]).max() < 1e-6

    def test_step_refinement_stable(self):
        cfg = DynamicsConfig(g=7e6, delta=3e7, gamma_r=1e4, gamma_d=2e4)
        coarse = integrate_maxwell_bloch(cfg)
        fine = integrate_maxwell_bloch(cfg, step_scale=0.5)
        assert np.abs(coarse.rho_ee - fine.rho_ee).max() < 1e-9

    def test_step_scale_validated(self):
        cfg = DynamicsConfig(g=1e6, delta=0.0)
        with pytest.raises(ValueError):
            integrate_maxwell_bloch(cfg, step_scale=0.0)
        with pytest.raises(ValueError):
            integrate_maxwell_bloch(cfg, step_scale=1.5)


class TestDepolarizingProbability:
    def test_long_resonant_average_is_one_half(self):
        g = 4e6
        p = depolarizing_probability(DynamicsConfig(g=g, delta=0.0, horizon=1000 / g))
        assert p == pytest.approx(0.5, abs=1e-6)

    def test_resonant_default_window(self):
        g = 4e6 * 2.0**1.5
        p = depolarizing_probability(DynamicsConfig(g=g, delta=0.0, horizon=250e-9))
        assert p == pytest.approx(P_RESONANT_11MHZ, rel=1e-10)

    def test_uncoupled_undamped_is_error_free(self):
        assert depolarizing_probability(DynamicsConfig(g=0.0, delta=0.0)) == 0.0

    def test_detuning_suppresses_error(self):
        p0 = depolarizing_probability(DynamicsConfig(g=4e6, delta=0.0))
        p1 = depolarizing_probability(DynamicsConfig(g=4e6, delta=4e8))
        assert p1 < 1e-3 < p0

    def test_incoherent_floor(self):
        cfg = DynamicsConfig(g=0.0, delta=0.0, gamma_r=1e4, horizon=250e-9)
        assert incoherent_floor(cfg) == pytest.approx(FLOOR_100US_250NS, rel=1e-12)
        assert depolarizing_probability(cfg) == pytest.approx(FLOOR_100US_250NS, rel=1e-6)

    def test_floor_zero_without_relaxation(self):
        assert incoherent_floor(DynamicsConfig(g=1e6, delta=0.0)) == 0.0


class TestStateValidation:
    def test_population_bounds(self):
        with pytest.raises(ValueError):
            BlochState(rho_ee=1.5)
        with pytest.raises(ValueError):
            BlochState(rho_ee=-0.1)

    def test_purity_bound(self):
        BlochState(rho_ee=0.5, rho_ge_re=0.5)  # boundary is allowed
        with pytest.raises(ValueError):
            BlochState(rho_ee=0.5, rho_ge_re=0.51)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            DynamicsConfig(g=-1.0, delta=0.0)
        with pytest.raises(ValueError):
            DynamicsConfig(g=1e6, delta=0.0, horizon=0.0)
        with pytest.raises(ValueError):
            DynamicsConfig(g=1e6, delta=0.0, n_time_points=1)

    def test_trace_state_accessor(self):
        trace = integrate_maxwell_bloch(DynamicsConfig(g=1e6, delta=0.0))
        s = trace.state(0)
        assert s.rho_ee == 1.0 and s.rho_ge_im == 0.0


class TestDriftTerms:
    def test_structure(self):
        cfg = DynamicsConfig(g=2e6, delta=-5e6, gamma_r=1e3, gamma_d=4e3)
        a, b = drift_terms(cfg)
        assert a[0, 2] == pytest.approx(2 * math.pi * 2e6, rel=1e-15)
        assert a[2, 0] == -a[0, 2]
        assert a[1, 2] == pytest.approx(2 * math.pi * -5e6, rel=1e-15)
        assert np.trace(a) == pytest.approx(-1e3 - 2 * 4e3, rel=1e-15)
        assert b[2] == pytest.approx(math.pi * 2e6, rel=1e-15)
        assert b[0] == b[1] == 0.0


class TestTraceExport:
    def test_csv_roundtrip(self, tmp_path):
        cfg = DynamicsConfig(g=3e6, delta=1e7, n_time_points=50)
        trace = integrate_maxwell_bloch(cfg)
        path = tmp_path / "trace.csv"
        write_trace_csv(trace, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "time_s,rho_ee,re_rho_ge,im_rho_ge"
        assert len(lines) == 51
        back = np.loadtxt(path, delimiter=",", skiprows=1)
        assert np.array_equal(back[:, 1], trace.rho_ee)  # repr round-trips exactly

    def test_probability_trace_is_population(self):
        trace = integrate_maxwell_bloch(DynamicsConfig(g=3e6, delta=0.0))
        assert np.array_equal(excited_probability_trace(trace), trace.rho_ee)
