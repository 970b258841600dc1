import math

import numpy as np
import pytest
from scipy.linalg import expm

from conftest import HEADLINE_SPEC, random_specs
from noblesqueeze.errors import DegenerateMeasurement, ValidationError
from noblesqueeze.gaussian import (
    SYMPLECTIC_FORM,
    ChannelSpec,
    GaussianSector,
    conditional_variance,
    epr_criterion,
    feedback,
    feedback_matrix,
    feedback_variance,
    ideal_channel,
    ideal_channel_matrix,
    lossy_channel,
    lossy_channel_matrices,
    optimal_gain,
    squeezing_parameter,
)


def random_physical_sector(rng):
    """Thermal state pushed through a random symplectic transformation."""
    h = rng.normal(size=(4, 4))
    generator = SYMPLECTIC_FORM @ (h + h.T) * 0.3
    s = expm(generator)
    nus = 0.5 + rng.exponential(0.5, size=2)
    cov0 = np.diag([nus[0], nus[0], nus[1], nus[1]])
    return GaussianSector(mean=rng.normal(size=4), cov=s @ cov0 @ s.T)


def test_vacuum_is_physical_boundary():
    vac = GaussianSector.vacuum()
    assert vac.is_physical()
    assert np.allclose(vac.symplectic_eigenvalues(), [0.5, 0.5], atol=1e-14)


def test_ideal_channel_identity_and_example():
    vac = GaussianSector.vacuum()
    out0 = ideal_channel(vac, 0.0)
    assert np.array_equal(out0.cov, vac.cov) and np.array_equal(out0.mean, vac.mean)
    out = ideal_channel(vac, 2.0)
    assert out.var_x_l == pytest.approx(2.5, rel=1e-14)
    assert out.var_p_b == pytest.approx(0.5, rel=1e-14)
    x = ideal_channel_matrix(2.0)
    assert np.linalg.det(x) == pytest.approx(1.0, rel=1e-12)
    assert np.allclose(x @ SYMPLECTIC_FORM @ x.T, SYMPLECTIC_FORM, atol=1e-14)


def test_ideal_channel_is_qnd_for_p_b():
    rng = np.random.default_rng(7)
    for _ in range(20):
        sector = random_physical_sector(rng)
        out = ideal_channel(sector, rng.uniform(0, 5))
        assert out.mean[3] == sector.mean[3]
        assert out.cov[3, 3] == sector.cov[3, 3]


def test_lossy_channel_noiseless_limit():
    spec = ChannelSpec(kappa=1.7)
    x, y = lossy_channel_matrices(spec)
    assert np.allclose(x, ideal_channel_matrix(1.7), atol=1e-15)
    assert np.allclose(y, 0.0, atol=1e-15)


def test_lossy_channel_full_thermalization():
    rng = np.random.default_rng(3)
    spec = ChannelSpec(kappa=2.0, epsilon=0.4, eta=1.0, rho=0.5)
    for _ in range(5):
        out = lossy_channel(random_physical_sector(rng), spec)
        assert out.var_p_b == pytest.approx(0.5, rel=1e-12)


def test_lossy_channel_vacuum_variance_example():
    # var(x_L^out) = 0.7 (0.5 + 4*0.5 + 4*0.162*0.5) + 0.3*0.5 on vacuum
    out = lossy_channel(GaussianSector.vacuum(), HEADLINE_SPEC)
    expected = 0.7 * (0.5 + 4 * 0.5 + 4 * 0.162 * 0.5) + 0.3 * 0.5
    assert expected == pytest.approx(2.1268, abs=1e-12)
    assert out.var_x_l == pytest.approx(expected, rel=1e-12)


def test_channel_spec_validation():
    with pytest.raises(ValidationError):
        ChannelSpec(kappa=-1.0)
    with pytest.raises(ValidationError):
        ChannelSpec(kappa=1.0, epsilon=1.2)
    with pytest.raises(ValidationError):
        ChannelSpec(kappa=1.0, rho=-0.1)


def test_optimal_gain_values():
    assert optimal_gain(ChannelSpec(kappa=0.0)) == 0.0
    assert optimal_gain(ChannelSpec(kappa=1.0)) == pytest.approx(-0.5, rel=1e-14)
    assert optimal_gain(HEADLINE_SPEC) == pytest.approx(-0.3679818, rel=1e-6)


def test_gain_is_scan_minimum():
    for spec in random_specs(20, seed=11):
        g_star = optimal_gain(spec)
        closed = feedback_variance(spec, g_star)
        grid = np.linspace(2 * g_star, 0.0, 40001) if g_star != 0 \
            else np.linspace(-1.0, 1.0, 40001)
        values = feedback_variance(spec, grid)
        assert values.min() >= closed - 1e-9
        assert abs(grid[np.argmin(values)] - g_star) <= 1e-4


def test_feedback_identity_and_mean():
    rng = np.random.default_rng(5)
    sector = random_physical_sector(rng)
    same = feedback(sector, 0.0)
    assert np.array_equal(same.cov, sector.cov)
    # linearity: zero-mean in, zero-mean out through channel + feedback
    vac = GaussianSector.vacuum()
    out = feedback(lossy_channel(vac, HEADLINE_SPEC), optimal_gain(HEADLINE_SPEC))
    assert np.allclose(out.mean, 0.0, atol=1e-15)
    assert np.allclose(feedback_matrix(0.3) @ SYMPLECTIC_FORM
                       @ feedback_matrix(0.3).T, SYMPLECTIC_FORM, atol=1e-14)


def test_post_feedback_variance_matches_closed_form():
    for spec in random_specs(40, seed=21):
        out = feedback(lossy_channel(GaussianSector.vacuum(), spec),
                       optimal_gain(spec))
        c = spec.kappa ** 2 * (1 - spec.epsilon)
        closed = 0.5 * (c * (spec.eta + spec.rho) + 1) / (c * (1 + spec.rho) + 1)
        assert out.var_p_b == pytest.approx(closed, rel=1e-12)
        assert squeezing_parameter(spec).var_out == pytest.approx(closed, rel=1e-12)


def test_squeezing_parameter_noiseless():
    result = squeezing_parameter(ChannelSpec(kappa=2.0))
    assert result.xi == pytest.approx(math.log(5.0) / 2.0, rel=1e-14)
    assert result.var_out == pytest.approx(0.1, rel=1e-12)
    assert result.var_out == pytest.approx(1.0 / (2.0 + 2.0 * 4.0), rel=1e-12)
    zero = squeezing_parameter(ChannelSpec(kappa=0.0))
    assert zero.xi == 0.0 and not zero.entangled and zero.epr_value == 2.0


@pytest.mark.parametrize("spec, xi, db", [
    (ChannelSpec(2.0, 0.3, 0.125, 0.162), 0.428990, 3.7262),
    (ChannelSpec(2.9, 0.3, 0.12, 0.02), 0.672728, 5.8432),
    (ChannelSpec(1.8, 0.28, 0.22, 0.17), 0.334623, 2.9065),
])
def test_squeezing_parameter_working_points(spec, xi, db):
    result = squeezing_parameter(spec)
    assert result.xi == pytest.approx(xi, abs=1e-5)
    assert result.squeezing_db == pytest.approx(db, abs=1e-3)
    assert result.entangled


def test_xi_vanishes_at_full_decoherence():
    rng = np.random.default_rng(17)
    for _ in range(20):
        spec = ChannelSpec(kappa=rng.uniform(0, 5), epsilon=rng.uniform(0, 1),
                           eta=1.0, rho=rng.uniform(0, 2))
        assert squeezing_parameter(spec).xi == pytest.approx(0.0, abs=1e-14)


def test_xi_monotonicity():
    base = HEADLINE_SPEC
    xi0 = squeezing_parameter(base).xi
    assert squeezing_parameter(ChannelSpec(2.2, 0.3, 0.125, 0.162)).xi > xi0
    assert squeezing_parameter(ChannelSpec(2.0, 0.35, 0.125, 0.162)).xi < xi0
    assert squeezing_parameter(ChannelSpec(2.0, 0.3, 0.2, 0.162)).xi < xi0
    assert squeezing_parameter(ChannelSpec(2.0, 0.3, 0.125, 0.3)).xi < xi0


def test_epr_criterion():
    vac_y, vac_z = GaussianSector.vacuum("y"), GaussianSector.vacuum("z")
    value, entangled = epr_criterion(vac_y, vac_z)
    assert value == pytest.approx(2.0, rel=1e-14) and not entangled
    squeezed = GaussianSector.vacuum()
    squeezed.cov[3, 3] = 0.1
    value, entangled = epr_criterion(squeezed, squeezed)
    assert value == pytest.approx(0.4, rel=1e-14) and entangled


def test_epr_headline_composition():
    result = squeezing_parameter(HEADLINE_SPEC)
    assert result.epr_value == pytest.approx(4 * math.exp(-2 * 0.428990) / 2,
                                             abs=1e-4)
    assert result.epr_value == pytest.approx(0.848, abs=1e-3)
    assert result.entangled


def test_conditional_variance():
    vac = GaussianSector.vacuum()
    assert conditional_variance(vac) == pytest.approx(0.5, rel=1e-14)
    out = ideal_channel(vac, 2.0)
    assert conditional_variance(out) == pytest.approx(0.1, rel=1e-12)
    degenerate = GaussianSector.vacuum()
    degenerate.cov[0, 0] = 0.0
    with pytest.raises(DegenerateMeasurement):
        conditional_variance(degenerate)


def test_conditional_variance_equals_optimal_feedback():
    for spec in random_specs(40, seed=31):
        out = lossy_channel(GaussianSector.vacuum(), spec)
        fb = feedback(out, optimal_gain(spec))
        assert conditional_variance(out) == pytest.approx(fb.var_p_b, rel=1e-12)


def test_channels_preserve_physicality():
    rng = np.random.default_rng(101)
    specs = random_specs(10, seed=41)
    for i in range(300):
        sector = random_physical_sector(rng)
        choice = i % 3
        if choice == 0:
            out = ideal_channel(sector, rng.uniform(0, 5))
        elif choice == 1:
            out = lossy_channel(sector, specs[i % len(specs)])
        else:
            out = feedback(sector, rng.uniform(-2, 2))
        assert out.symplectic_eigenvalues().min() >= 0.5 - 1e-10
