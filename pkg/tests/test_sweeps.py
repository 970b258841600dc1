import numpy as np
import pytest

from noblesqueeze.errors import ValidationError
from noblesqueeze.sweeps import (
    Axis,
    SweepGrid,
    lifetime_curves,
    squeezing_map,
    working_points,
)


def small_grid(eta, nx=21, ny=15):
    return SweepGrid(x_axis=Axis("kappa_eff", 0.0, 5.0, nx),
                     y_axis=Axis("rho", 1e-3, 1.0, ny, log=True),
                     fixed={"eta": eta})


def test_axis_validation():
    with pytest.raises(ValidationError):
        Axis("bogus", 0.0, 1.0, 5)
    with pytest.raises(ValidationError):
        Axis("rho", 1.0, 0.5, 5)
    with pytest.raises(ValidationError):
        Axis("rho", 0.0, 1.0, 5, log=True)
    with pytest.raises(ValidationError):
        Axis("rho", 0.0, 1.0, 1)


def test_map_shape_and_zero_column():
    result = squeezing_map(small_grid(eta=0.12))
    assert result.values_db.shape == (15, 21)
    assert np.allclose(result.values_db[:, 0], 0.0, atol=1e-14)
    assert np.all(result.values_db >= 0.0)


def test_map_monotone_in_rho():
    result = squeezing_map(small_grid(eta=0.12))
    diffs = np.diff(result.values_db[:, 1:], axis=0)
    assert np.all(diffs < 0.0)


def test_lower_eta_dominates_nodewise():
    low = squeezing_map(small_grid(eta=0.12))
    high = squeezing_map(small_grid(eta=0.22))
    assert np.all(low.values_db[:, 1:] > high.values_db[:, 1:])
    assert np.allclose(low.values_db[:, 0], high.values_db[:, 0])


def test_map_matches_working_point_node():
    """Default grid node nearest the low-pressure He-K cross reads ~5.85 dB."""
    result = squeezing_map(SweepGrid(fixed={"eta": 0.12}))
    x_target = 2.9 * np.sqrt(1 - 0.3)
    ix = int(np.argmin(np.abs(result.x_values - x_target)))
    iy = int(np.argmin(np.abs(result.y_values - 0.02)))
    assert result.values_db[iy, ix] == pytest.approx(5.85, abs=0.15)


def test_map_with_explicit_kappa_epsilon_axes():
    grid = SweepGrid(x_axis=Axis("kappa", 0.1, 3.0, 11),
                     y_axis=Axis("epsilon", 0.0, 0.6, 7),
                     fixed={"eta": 0.1, "rho": 0.05})
    result = squeezing_map(grid)
    # more loss, less squeezing, column by column
    assert np.all(np.diff(result.values_db, axis=0) < 0)


def test_working_points_table():
    rows = working_points()
    assert len(rows) == 3
    assert [r.kappa for r in rows] == [2.0, 2.9, 1.8]
    for row in rows:
        assert row.abs_deviation <= 0.05
    assert rows[0].xi_computed == pytest.approx(0.428990, abs=1e-5)
    assert rows[1].xi_computed == pytest.approx(0.672728, abs=1e-5)
    assert rows[2].xi_computed == pytest.approx(0.334623, abs=1e-5)


def test_lifetime_curves_shapes_and_limits():
    curves = lifetime_curves([0.0, 10.0], big_gamma_b=1.0, t_max=2.5, steps=101)
    flat, deep = curves
    assert np.allclose(flat.squeezing_db, 0.0, atol=1e-12)
    assert deep.squeezing_db[0] == pytest.approx(10.0, rel=1e-12)
    # 2 Gamma_b t = 1 lands on the grid: ~1.75 dB left of the initial 10
    node = int(np.argmin(np.abs(deep.times - 0.5)))
    assert deep.times[node] == pytest.approx(0.5, abs=1e-12)
    assert deep.squeezing_db[node] == pytest.approx(1.746, abs=1e-3)
    assert deep.squeezing_db[-1] < 0.1         # decays toward vacuum
    assert np.all(np.diff(deep.squeezing_db) < 0)


def test_lifetime_curna_validation():
    with pytest.raises(ValidationError):
        lifetime_curves([-1.0], 1.0, 1.0, 11)
    with pytest.raises(ValidationError):
        lifetime_curves([3.0], 1.0, 1.0, 1)


def test_map_bitwise_reproducible():
    a = squeezing_map(small_grid(eta=0.12))
    b = squeezing_map(small_grid(eta=0.12))
    assert np.array_equal(a.values_db, b.values_db)
    assert np.array_equal(a.x_values, b.x_values)
