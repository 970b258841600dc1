"""Closed-form Gaussian theory of the measurement-feedback protocol.

One quadrature sector holds the four modes (x_L, p_L, x_b, p_b): the two
probe quadratures and the two nonlocal spin quadratures of the dual-cell
system.  Vacuum convention: variance 1/2 per quadrature, so a coherent
probe on coherent spin states is cov = I/2.

The measurement pulse is the QND channel

    x_L -> x_L + kappa p_b,    x_b -> x_b + kappa p_L,

with the lossy version attenuating light by epsilon, spins by eta, and
injecting alkali projection noise of relative weight rho into the light
record:

    x_L' = sqrt(1-eps) (x_L + kappa p_b + kappa sqrt(rho) w0) + sqrt(eps) w1
    p_L' = sqrt(1-eps) p_L + sqrt(eps) w2
    x_b' = sqrt(1-eta) (x_b + kappa p_L) + sqrt(eta) w3
    p_b' = sqrt(1-eta) p_b + sqrt(eta) w4

where w0..w4 are independent vacuum noises of variance 1/2.  Feedback
p_b -> p_b + G x_L with the optimal gain leaves

    var(p_b) = (kappa^2 (1-eps)(eta+rho) + 1)
               / (2 kappa^2 (1-eps)(1+rho) + 2)

and the two-mode squeezing parameter follows from
var = exp(-2 xi) / 2.  Both quadrature sectors (y and z) evolve under
the same channel independently, so the EPR sum is 4 var for a symmetric
pair of sectors; entanglement is certified by EPR < 2.
"""

import math
from dataclasses import dataclass

import numpy as np

from .constants import db_from_variance
from .errors import DegenerateMeasurement, ValidationError

VACUUM_VARIANCE = 0.5

# mode ordering (x_L, p_L, x_b, p_b); symplectic form with [x, p] = i
SYMPLECTIC_FORM = np.array([
    [0.0, 1.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
    [0.0, 0.0, -1.0, 0.0],
])

_IDX_XL, _IDX_PL, _IDX_XB, _IDX_PB = 0, 1, 2, 3


@dataclass(frozen=True)
class ChannelSpec:
    """Dimensionless channel parameters (kappa, epsilon, eta, rho)."""

    kappa: float
    epsilon: float = 0.0
    eta: float = 0.0
    rho: float = 0.0

    def __post_init__(self):
        if self.kappa < 0:
            raise ValidationError(f"kappa must be >= 0, got {self.kappa}")
        if not (0.0 <= self.epsilon <= 1.0):
            raise ValidationError(f"epsilon must be in [0, 1], got {self.epsilon}")
        if not (0.0 <= self.eta <= 1.0):
            raise ValidationError(f"eta must be in [0, 1], got {self.eta}")
        if self.rho < 0:
            raise ValidationError(f"rho must be >= 0, got {self.rho}")


@dataclass
class GaussianSector:
    """Mean vector and covariance of one (light, spin) quadrature sector."""

    mean: np.ndarray
    cov: np.ndarray
    label: str = "y"

    @classmethod
    def vacuum(cls, label="y"):
        return cls(mean=np.zeros(4), cov=VACUUM_VARIANCE * np.eye(4), label=label)

    def copy(self):
        return GaussianSector(self.mean.copy(), self.cov.copy(), self.label)

    def var(self, index):
        return float(self.cov[index, index])

    @property
    def var_p_b(self):
        return self.var(_IDX_PB)

    @property
    def var_x_l(self):
        return self.var(_IDX_XL)

    def symplectic_eigenvalues(self):
        """Moduli of the eigenvalues of (Omega cov); physical iff all >= 1/2.

        The eigenvalues come in +-i nu pairs, so sorting the moduli and
        taking every other entry yields each nu once.
        """
        ev = np.linalg.eigvals(SYMPLECTIC_FORM @ self.cov)
        return np.sort(np.abs(ev))[::2]

    def is_physical(self, tol=1e-10):
        sym = np.abs(self.cov - self.cov.T).max()
        if sym > 1e-12:
            return False
        return bool(self.symplectic_eigenvalues().min() >= VACUUM_VARIANCE - tol)


def apply_gaussian_map(sector, transform, added_noise=None):
    """mean -> X mean, cov -> X cov X^T + Y."""
    cov = transform @ sector.cov @ transform.T
    if added_noise is not None:
        cov = cov + added_noise
    return GaussianSector(transform @ sector.mean, cov, sector.label)


def ideal_channel_matrix(kappa):
    """Symplectic matrix of the lossless QND measurement pulse."""
    if kappa < 0:
        raise ValidationError(f"kappa must be >= 0, got {kappa}")
    x = np.eye(4)
    x[_IDX_XL, _IDX_PB] = kappa
    x[_IDX_XB, _IDX_PL] = kappa
    return x


def ideal_channel(sector, kappa):
    return apply_gaussian_map(sector, ideal_channel_matrix(kappa))


def lossy_channel_matrices(spec):
    """(X, Y) of the noisy measurement channel."""
    se, sh = math.sqrt(1.0 - spec.epsilon), math.sqrt(1.0 - spec.eta)
    x = np.array([
        [se, 0.0, 0.0, se * spec.kappa],
        [0.0, se, 0.0, 0.0],
        [0.0, sh * spec.kappa, sh, 0.0],
        [0.0, 0.0, 0.0, sh],
    ])
    y = VACUUM_VARIANCE * np.diag([
        (1.0 - spec.epsilon) * spec.kappa ** 2 * spec.rho + spec.epsilon,
        spec.epsilon,
        spec.eta,
        spec.eta,
    ])
    return x, y


def lossy_channel(sector, spec):
    x, y = lossy_channel_matrices(spec)
    return apply_gaussian_map(sector, x, y)


def feedback_matrix(gain):
    """Shear p_b -> p_b + G x_L (a rotation of the spins by the light record).

    Implemented as the symplectic completion generated by -G x_L x_b,
    which also shears p_L -> p_L + G x_b.  The companion shear touches no
    spin observable (p_b and x_b rows are exactly the bare feedback) but
    keeps the four-mode bookkeeping a physical Gaussian map; a bare
    one-sided shear would violate the uncertainty relation on correlated
    inputs.
    """
    x = np.eye(4)
    x[_IDX_PB, _IDX_XL] = gain
    x[_IDX_PL, _IDX_XB] = gain
    return x


def feedback(sector, gain):
    return apply_gaussian_map(sector, feedback_matrix(gain))


def optimal_gain(spec):
    """Feedback gain minimizing var(p_b + G x_L) after the lossy channel:

    G = -kappa sqrt(1-eps) sqrt(1-eta) / (1 + kappa^2 (1+rho)(1-eps)).
    """
    num = spec.kappa * math.sqrt(1.0 - spec.epsilon) * math.sqrt(1.0 - spec.eta)
    den = 1.0 + spec.kappa ** 2 * (1.0 + spec.rho) * (1.0 - spec.epsilon)
    return -num / den


def feedback_variance(spec, gain):
    """var(p_b + G x_L) on vacuum inputs, as an explicit function of G."""
    c = spec.kappa * math.sqrt(1.0 - spec.epsilon)
    h = 1.0 + spec.kappa ** 2 * (1.0 - spec.epsilon) * spec.rho
    return VACUUM_VARIANCE * ((math.sqrt(1.0 - spec.eta) + gain * c) ** 2
                              + spec.eta + gain ** 2 * h)


@dataclass(frozen=True)
class SqueezeResult:
    xi: float
    var_out: float
    squeezing_db: float
    gain: float
    epr_value: float
    entangled: bool


def squeezing_parameter(spec):
    """Best attainable two-mode squeezing for a channel spec.

    xi = ln[(kappa^2(1-eps)(1+rho) + 1) / (kappa^2(1-eps)(eta+rho) + 1)] / 2
    and var_out = exp(-2 xi)/2; the EPR sum over the two symmetric
    sectors is 4 var_out, entangled iff strictly below 2.
    """
    c = spec.kappa ** 2 * (1.0 - spec.epsilon)
    xi = 0.5 * math.log((c * (1.0 + spec.rho) + 1.0)
                        / (c * (spec.eta + spec.rho) + 1.0))
    var_out = 0.5 * math.exp(-2.0 * xi)
    epr = 4.0 * var_out
    return SqueezeResult(
        xi=xi,
        var_out=var_out,
        squeezing_db=db_from_variance(var_out),
        gain=optimal_gain(spec),
        epr_value=epr,
        entangled=bool(epr < 2.0),
    )


def epr_criterion(sector_y, sector_z):
    """(EPR value, entangled) from the two post-protocol sectors.

    The certified quantity is 2 var(p_b,y) + 2 var(p_b,z); strict
    inequality against 2 declares entanglement (vacuum sits exactly on
    the boundary).
    """
    value = 2.0 * sector_y.var_p_b + 2.0 * sector_z.var_p_b
    return value, bool(value < 2.0)


def conditional_variance(sector):
    """var(p_b | measured x_L) = var(p_b) - cov(p_b, x_L)^2 / var(x_L).

    For Gaussian states this equals the post-feedback variance at the
    optimal gain, which is how the closed-form minimum is cross-checked.
    """
    vx = sector.var_x_l
    if vx <= 1e-15:
        raise DegenerateMeasurement(
            f"var(x_L) = {vx} is too small to condition on")
    c = float(sector.cov[_IDX_PB, _IDX_XL])
    return sector.var_p_b - c * c / vx
