"""Batch evaluation: squeezing maps, working points, lifetime curves.

The squeezing map evaluates the closed-form two-mode squeezing over a
rectangular grid of channel parameters.  The canonical axes follow the
noise-budget picture of the measurement: the effective coupling
kappa sqrt(1-eps) is the noble-gas signal over photon shot noise and rho
is the alkali-over-noble projection-noise ratio, so the default map is
kappa sqrt(1-eps) in [0, 5] against rho in [1e-3, 1] (log), at fixed
eta.  All evaluations are analytic and seed-free, hence bitwise
reproducible.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .constants import db_from_variance, variance_from_db
from .errors import ValidationError
from .gaussian import ChannelSpec, squeezing_parameter
from .stochastic import lifetime_decay

AXIS_NAMES = ("kappa_eff", "rho", "eta", "kappa", "epsilon")

# proposed working points: (label, kappa, epsilon, eta, rho, quoted xi)
WORKING_POINTS = (
    ("He3-K 880Torr", 2.0, 0.3, 0.125, 0.162, 0.45),
    ("He3-K 50Torr", 2.9, 0.3, 0.12, 0.02, 0.68),
    ("Xe129-Rb87", 1.8, 0.28, 0.22, 0.17, 0.34),
)

DEFAULT_LIFETIME_DBS = (1.0, 3.0, 5.0, 7.0, 10.0)


@dataclass(frozen=True)
class Axis:
    name: str
    minimum: float
    maximum: float
    steps: int
    log: bool = False

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise ValidationError(
                f"axis name {self.name!r} not in {AXIS_NAMES}")
        if self.steps < 2:
            raise ValidationError(f"axis needs >= 2 steps, got {self.steps}")
        if not (self.minimum < self.maximum):
            raise ValidationError("axis requires min < max")
        if self.log and self.minimum <= 0:
            raise ValidationError("log axis requires min > 0")

    def values(self):
        if self.log:
            return np.geomspace(self.minimum, self.maximum, self.steps)
        return np.linspace(self.minimum, self.maximum, self.steps)


@dataclass(frozen=True)
class SweepGrid:
    x_axis: Axis = field(default=Axis("kappa_eff", 0.0, 5.0, 101))
    y_axis: Axis = field(default=Axis("rho", 1.0e-3, 1.0, 101, log=True))
    fixed: dict = field(default_factory=dict)


@dataclass(frozen=True)
class SweepResult:
    grid: SweepGrid
    x_values: np.ndarray
    y_values: np.ndarray
    values_db: np.ndarray      # shape (len(y_values), len(x_values))
    metadata: dict


def _spec_from_node(names_to_values):
    """Build a ChannelSpec from axis/fixed assignments.

    ``kappa_eff`` (= kappa sqrt(1-eps)) is translated to kappa using the
    epsilon of the node; the squeezing depends on kappa^2 (1-eps) only,
    so the translation is exact whatever epsilon is in force.
    """
    eps = names_to_values.get("epsilon", 0.0)
    eta = names_to_values.get("eta", 0.0)
    rho = names_to_values.get("rho", 0.0)
    if "kappa" in names_to_values and "kappa_eff" in names_to_values:
        raise ValidationError("give kappa or kappa_eff, not both")
    if "kappa_eff" in names_to_values:
        kappa = names_to_values["kappa_eff"] / math.sqrt(1.0 - eps)
    else:
        kappa = names_to_values.get("kappa", 0.0)
    return ChannelSpec(kappa=kappa, epsilon=eps, eta=eta, rho=rho)


def squeezing_map(grid):
    """Squeezing in dB over the grid, row-major in (y, x)."""
    xs = grid.x_axis.values()
    ys = grid.y_axis.values()
    values = np.empty((ys.size, xs.size))
    for iy, y in enumerate(ys):
        for ix, x in enumerate(xs):
            node = dict(grid.fixed)
            node[grid.x_axis.name] = float(x)
            node[grid.y_axis.name] = float(y)
            result = squeezing_parameter(_spec_from_node(node))
            values[iy, ix] = result.squeezing_db
    metadata = {
        "x_axis": grid.x_axis.name,
        "y_axis": grid.y_axis.name,
        "fixed": dict(grid.fixed),
    }
    return SweepResult(grid=grid, x_values=xs, y_values=ys,
                       values_db=values, metadata=metadata)


@dataclass(frozen=True)
class WorkingPointRow:
    label: str
    kappa: float
    epsilon: float
    eta: float
    rho: float
    xi_computed: float
    db_computed: float
    xi_quoted: float
    abs_deviation: float


def working_points():
    """The three proposed experimental operating points, evaluated."""
    rows = []
    for label, kappa, eps, eta, rho, xi_quoted in WORKING_POINTS:
        result = squeezing_parameter(
            ChannelSpec(kappa=kappa, epsilon=eps, eta=eta, rho=rho))
        rows.append(WorkingPointRow(
            label=label, kappa=kappa, epsilon=eps, eta=eta, rho=rho,
            xi_computed=result.xi, db_computed=result.squeezing_db,
            xi_quoted=xi_quoted,
            abs_deviation=abs(result.xi - xi_quoted)))
    return rows


@dataclass(frozen=True)
class LifetimeCurve:
    initial_db: float
    times: np.ndarray
    variance: np.ndarray
    squeezing_db: np.ndarray


def lifetime_curves(initial_dbs, big_gamma_b, t_max, steps):
    """Analytic decay curves for a family of initial squeezing levels."""
    if steps < 2:
        raise ValidationError("steps must be >= 2")
    curves = []
    times = np.linspace(0.0, t_max, steps)
    for db0 in initial_dbs:
        if db0 < 0:
            raise ValidationError(f"initial squeezing must be >= 0 dB, got {db0}")
        var0 = variance_from_db(db0)
        var = lifetime_decay(var0, big_gamma_b, times)
        dbs = np.array([db_from_variance(v) for v in var])
        curves.append(LifetimeCurve(initial_db=db0, times=times,
                                    variance=var, squeezing_db=dbs))
    return curves
