"""Entanglement of noble-gas nuclear-spin ensembles by coherent light.

Two distant vapor cells hold hyperpolarized noble-gas spins coupled to
alkali vapor by spin-exchange collisions; a far-detuned probe reading
the alkali Faraday rotation measures the nonlocal noble-gas spin
difference without exciting the mediators.  This package derives the
dimensionless couplings of that measurement from a physical cell
configuration, evaluates the closed-form Gaussian theory of the
resulting two-mode squeezing, and verifies it against stochastic
Langevin simulation.
"""

__version__ = "0.1.0"

from .species import (
    AlkaliSpecies,
    ExchangePair,
    NobleSpecies,
    alkali_density,
    lookup_pair,
    photon_number,
)
from .params import (
    DerivedParams,
    FieldMatch,
    PhysicalConfig,
    coupling_rates,
    derive,
    field_matching,
    magnetizations,
    optical_depth_identity,
    precession_frequencies,
)
from .gaussian import (
    ChannelSpec,
    GaussianSector,
    SqueezeResult,
    conditional_variance,
    epr_criterion,
    feedback,
    ideal_channel,
    lossy_channel,
    optimal_gain,
    squeezing_parameter,
)
from .stochastic import (
    KappaTrajectoryCheck,
    LifetimeSeries,
    McSettings,
    RotatingFrameResult,
    SpinLightRates,
    TrajectoryStats,
    adiabatic_deviation,
    adiabatic_scaling,
    integrate_rotating_frame,
    kappa_from_trajectories,
    lifetime_decay,
    lifetime_mc,
    sample_io,
)
from .sweeps import (
    Axis,
    LifetimeCurve,
    SweepGrid,
    SweepResult,
    lifetime_curves,
    squeezing_map,
    working_points,
)

__all__ = [name for name in dir() if not name.startswith("_")]
