import math

import numpy as np
import pytest

from conftest import HEADLINE_SPEC, random_specs
from noblesqueeze.constants import db_from_variance
from noblesqueeze.errors import StepTooLarge, ValidationError
from noblesqueeze.gaussian import ChannelSpec, squeezing_parameter
from noblesqueeze.stochastic import (
    McSettings,
    SpinLightRates,
    adiabatic_deviation,
    adiabatic_scaling,
    fit_gap_decay_rate,
    integrate_rotating_frame,
    kappa_from_trajectories,
    lifetime_decay,
    lifetime_mc,
    sample_io,
    variance_with_stderr,
)


def test_settings_validation():
    with pytest.raises(ValidationError):
        McSettings(n_samples=0, seed=1)
    with pytest.raises(ValidationError):
        McSettings(n_samples=10, seed=1, dt=-0.1)
    with pytest.raises(ValidationError):
        McSettings(n_samples=10, seed=1, dt=1.0, t_final=0.5)


def test_variance_stderr_scaling():
    rng = np.random.default_rng(0)
    x = rng.normal(0, 1, size=40000)
    var, se = variance_with_stderr(x)
    # for gaussians se ~ var sqrt(2/n)
    assert se == pytest.approx(var * math.sqrt(2 / 40000), rel=0.1)


def test_sample_io_vacuum_passthrough():
    stats = sample_io(ChannelSpec(kappa=0.0), McSettings(n_samples=50000, seed=2))
    var = stats.empirical_var["p_b_feedback"]
    se = stats.stderr_var["p_b_feedback"]
    assert abs(var - 0.5) <= 3 * se


def test_sample_io_headline_matches_closed_form():
    stats = sample_io(HEADLINE_SPEC, McSettings(n_samples=100000, seed=42))
    var = stats.empirical_var["p_b_feedback"]
    se = stats.stderr_var["p_b_feedback"]
    assert abs(var - 0.2120087) <= 3 * se
    assert stats.empirical_var["p_b_out"] == pytest.approx(0.5, abs=4 * se)


def test_sample_io_deterministic():
    a = sample_io(HEADLINE_SPEC, McSettings(n_samples=20000, seed=7))
    b = sample_io(HEADLINE_SPEC, McSettings(n_samples=20000, seed=7))
    assert a == b
    c = sample_io(HEADLINE_SPEC, McSettings(n_samples=20000, seed=8))
    assert c.empirical_var["p_b_feedback"] != b.empirical_var["p_b_feedback"]


def _free_rates(gamma_a=0.3, delta=40.0):
    return SpinLightRates(exchange_rate_j=0.0, optical_rate_q=0.0, delta=delta,
                          gamma_a=gamma_a, gamma_b=0.0, omega_b=0.0,
                          duration_s=10.0)


def test_decoupled_damped_precession():
    rates = _free_rates()
    y0 = np.zeros(8)
    y0[0] = 1.0   # f_1y
    res = integrate_rotating_frame(rates, dt=1.0 / (25 * rates.delta),
                                   initial=y0, record_stride=200)
    t = res.times
    expected_y = np.exp(-rates.gamma_a * t) * np.cos(rates.delta * t)
    expected_z = np.exp(-rates.gamma_a * t) * np.sin(rates.delta * t)
    assert np.max(np.abs(res.states[:, 0] - expected_y)) < 1e-4
    assert np.max(np.abs(res.states[:, 1] - expected_z)) < 1e-4
    # the noble gas stays untouched without exchange coupling
    assert np.max(np.abs(res.states[:, 2:4])) == 0.0


def test_step_guard():
    rates = _free_rates(delta=1000.0)
    with pytest.raises(StepTooLarge):
        integrate_rotating_frame(rates, dt=1.0)


def test_rk4_endpoint_convergence_order():
    rates = _free_rates()
    y0 = np.zeros(8)
    y0[0] = 1.0
    ends = []
    for factor in (1.0, 2.0, 4.0):
        dt = 1.0 / (25 * rates.delta * factor)
        res = integrate_rotating_frame(rates, dt=dt, duration=2.0, initial=y0,
                                       record_stride=10 ** 9)
        # recompute endpoint from a dense final record
        ends.append(res.states[0] * 0 + _endpoint(rates, dt))
    d1 = np.linalg.norm(ends[0] - ends[1])
    d2 = np.linalg.norm(ends[1] - ends[2])
    assert 10.0 <= d1 / d2 <= 24.0   # ~2^4 for a fourth-order scheme


def _endpoint(rates, dt):
    y0 = np.zeros(8)
    y0[0] = 1.0
    n = int(round(2.0 / dt))
    res = integrate_rotating_frame(rates, dt=dt, duration=2.0, initial=y0,
                                   record_stride=n)
    return res.states[-1]


def test_adiabatic_deviation_bound_and_scaling():
    dev50 = adiabatic_deviation(1.0, 1.0, 50.0)
    assert dev50 <= 5 * (1.0 + 1.0) / 50.0
    assert dev50 < 0.05
    assert dev50 == pytest.approx(0.020, rel=0.15)   # frozen regression
    dev100 = adiabatic_deviation(1.0, 1.0, 100.0)
    ratio = dev50 / dev100
    assert 2.0 / 1.5 <= ratio <= 2.0 * 1.5           # halving doubles the error
    devs, exponent = adiabatic_scaling(1.0, 1.0, [50.0, 111.0, 247.0, 550.0])
    assert exponent == pytest.approx(-1.0, abs=0.2)


def test_kappa_from_trajectories_headline(headline_params):
    check = kappa_from_trajectories(headline_params)
    assert check.kappa_reference == pytest.approx(headline_params.kappa, rel=1e-9)
    assert abs(check.kappa_empirical / check.kappa_reference - 1) < 0.01
    assert check.self_rotation_fraction < 1e-3


def test_no_signal_without_displacement(headline_params):
    rates = SpinLightRates.from_derived(headline_params)
    dt = 1.0 / (25 * abs(rates.delta))
    res = integrate_rotating_frame(rates, dt, record_stride=10 ** 9)
    assert res.x_l["y"] == 0.0 and res.x_l["z"] == 0.0


def test_adiabatic_twin_tracks_full_model():
    rates = SpinLightRates(exchange_rate_j=1.0, optical_rate_q=0.0, delta=200.0,
                           gamma_a=1.0, gamma_b=0.0, omega_b=0.0, duration_s=6.0)
    y0 = np.zeros(8)
    y0[2] = 1.0
    res = integrate_rotating_frame(rates, dt=1.0 / (25 * 200.0), initial=y0,
                                   include_adiabatic=True)
    late = res.times > 5.0 / rates.gamma_a
    k_full = res.states[late, 2:4]
    k_twin = res.adiabatic_states[late, 2:4]
    assert np.max(np.abs(k_full - k_twin)) < 0.05
    f_twin = res.adiabatic_states[late, 0:2]
    expect = (rates.exchange_rate_j / rates.delta) * k_twin
    assert np.allclose(f_twin, expect, atol=1e-12)


def test_stochastic_mode_reproducible_and_stationary():
    """Pure damping (J = Q = 0): every spin quadrature relaxes to vacuum.

    Euler-Maruyama inflates the variance of an oscillatory mode by
    ~ Delta^2 dt / (2 gamma), so the step is chosen well below the plain
    resolution bound here.
    """
    rates = SpinLightRates(exchange_rate_j=0.0, optical_rate_q=0.0, delta=10.0,
                           gamma_a=4.0, gamma_b=0.0, omega_b=3.0, duration_s=2.0)
    dt = 1e-3
    ends = np.asarray([_final_state(rates, dt, np.zeros(8), stream)
                       for stream in range(400)])
    var, se = variance_with_stderr(ends[:, 0])
    assert abs(var - 0.5) <= 3.5 * se
    again = _final_state(rates, dt, np.zeros(8), 3)
    once = _final_state(rates, dt, np.zeros(8), 3)
    assert np.array_equal(again, once)


def _final_state(rates, dt, y0, stream):
    n = int(round(rates.duration_s / dt))
    res = integrate_rotating_frame(rates, dt, initial=y0, stochastic=True,
                                   seed=5, stream=stream, record_stride=n)
    return res.states[-1]


def test_lifetime_decay_values():
    times = np.array([0.0, 1.0, 5.0])
    flat = lifetime_decay(0.5, 1.0, times)
    assert np.allclose(flat, 0.5, atol=1e-15)
    v = lifetime_decay(0.25, 1.0, np.array([math.log(2) / 2.0]))[0]
    assert v == pytest.approx(0.375, rel=1e-12)
    ten_db = lifetime_decay(0.05, 1.0, np.array([0.5]))[0]
    assert ten_db == pytest.approx(0.5 - 0.45 / math.e, rel=1e-12)
    assert db_from_variance(ten_db) == pytest.approx(1.746, abs=1e-3)
    with pytest.raises(ValidationError):
        lifetime_decay(0.25, 0.0, times)


def test_lifetime_mc_matches_analytic():
    settings = McSettings(n_samples=10000, seed=555, dt=0.0025, t_final=1.5)
    series = lifetime_mc(0.05, 1.0, settings)
    analytic = lifetime_decay(0.05, 1.0, series.times)
    z = (series.variance - analytic) / series.stderr
    assert np.max(np.abs(z)) <= 3.0
    rate = fit_gap_decay_rate(series, fit_horizon=0.6)
    assert rate == pytest.approx(2.0, rel=0.02)


def test_lifetime_mc_stationary_vacuum():
    settings = McSettings(n_samples=10000, seed=14, dt=0.0025, t_final=1.5)
    series = lifetime_mc(0.5, 1.0, settings)
    z = (series.variance - 0.5) / series.stderr
    assert np.max(np.abs(z)) <= 3.0


def test_lifetime_mc_deterministic():
    settings = McSettings(n_samples=2000, seed=9, dt=0.005, t_final=0.5)
    a = lifetime_mc(0.1, 1.0, settings)
    b = lifetime_mc(0.1, 1.0, settings)
    assert np.array_equal(a.variance, b.variance)
    assert np.array_equal(a.stderr, b.stderr)


def test_db_decay_faster_for_deeper_squeezing():
    times = np.linspace(0.0, 0.25, 11)
    deep = lifetime_decay(0.05, 1.0, times)     # 10 dB
    shallow = lifetime_decay(0.25, 1.0, times)  # ~3 dB
    drop_deep = db_from_variance(deep[0]) - db_from_variance(deep[-1])
    drop_shallow = db_from_variance(shallow[0]) - db_from_variance(shallow[-1])
    assert drop_deep > drop_shallow
    # while the linear-variance gap decays at exactly 2 Gamma_b for both
    gap_ratio_deep = (0.5 - deep[-1]) / (0.5 - deep[0])
    gap_ratio_shallow = (0.5 - shallow[-1]) / (0.5 - shallow[0])
    assert gap_ratio_deep == pytest.approx(gap_ratio_shallow, rel=1e-12)


def test_em_variance_bias_is_first_order_in_dt():
    """Euler-Maruyama stationary variance sits Gamma dt / 4 above 1/2."""
    biases = []
    for dt in (0.2, 0.1):
        settings = McSettings(n_samples=20000, seed=77, dt=dt, t_final=30.0)
        series = lifetime_mc(0.5, 1.0, settings, record_every=max(1, int(1 / dt)))
        late = series.times >= 10.0
        biases.append(float(np.mean(series.variance[late])) - 0.5)
    assert biases[0] > 0 and biases[1] > 0
    assert 1.4 <= biases[0] / biases[1] <= 3.0
