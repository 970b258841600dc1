"""Derivation of the dimensionless theory parameters from a physical setup.

A :class:`PhysicalConfig` is a complete description of one dual-cell
experiment: species pair, cell geometry, gas pressures, temperature,
probe and pump drive, relaxation rates and magnetic field.
:func:`derive` turns it into a :class:`DerivedParams` carrying every
symbol the Gaussian theory consumes:

* magnetizations M_a = P_a N_a (I + 1/2), M_b = P_b N_b / 2 and the
  pulse photon number M_L,
* the collective spin-exchange rate J = g sqrt(M_a M_b) / (A L) and the
  optical coupling rate Q = (a/T) sqrt(M_a M_L) with
  a = 2 r_e c f / (A delta_e (2I+1)),
* precession frequencies including the mutual exchange shifts, their
  mismatch Delta, and the alkali-following angle psi = atan(gamma_a/Delta),
* the measurement strength kappa = J Q T / sqrt(Delta^2 + gamma_a^2) and
  the loss budget epsilon = 4 gamma_L L, eta = 2 Gamma_b T,
  rho = 4 q gamma_a / (J^2 T).

Two 'much greater than' conditions underpin the adiabatic theory.  They
are enforced as hard guards with explicit escape hatches:
|delta_e| >= 10 Gamma_e (dispersive optical coupling) and
|Delta| >= 5 max(gamma_a, J, Q) (off-resonant spin coupling).

All functions are pure; configs and derived bundles are frozen.
"""

import math
from dataclasses import dataclass, field, replace

from . import species as sp
from .constants import (
    DEFAULT_FILL_TEMPERATURE_K,
    ELECTRON_RADIUS_CM,
    SPEED_OF_LIGHT_CM_S,
    torr_to_number_density,
)
from .errors import OffResonanceViolation, DispersiveRegimeViolation, ValidationError

DISPERSIVE_GUARD_FACTOR = 10.0
OFF_RESONANCE_GUARD_FACTOR = 5.0


@dataclass(frozen=True)
class PhysicalConfig:
    """One dual-cell experiment, in cgs units (cm, s, Gauss, W for power).

    ``pump_rate`` and ``spin_destruction_rate`` define the alkali
    polarization through the closure P_a = R_op / (R_op + gamma_sd);
    parse-time helpers can instead accept a target P_a and solve for
    R_op (see :func:`pump_rate_for_polarization`).
    """

    pair: sp.ExchangePair
    cell_length_cm: float
    cell_area_cm2: float
    temperature_k: float
    noble_pressure_torr: float
    buffer_pressures_torr: tuple = ()        # ((gas_name, torr), ...)
    fill_temperature_k: float = DEFAULT_FILL_TEMPERATURE_K
    alkali_density_override_cm3: float = None
    probe_power_w: float = 0.0
    probe_detuning_rad_s: float = 0.0        # delta_e, sign = side of line
    excited_linewidth_rad_s: float = 0.0     # Gamma_e, pressure broadened
    pulse_duration_s: float = 0.0            # T
    pump_rate_s: float = 0.0                 # R_op
    spin_destruction_rate_s: float = 0.0     # gamma_sd
    wall_gradient_rate_s: float = 0.0        # gamma_b, bare noble-gas decay
    noble_polarization: float = 1.0          # P_b
    alkali_q_factor: float = 1.0             # q(I, P_a) >= 1
    field_gauss: float = 0.0                 # B_1
    pump_light_shift_rad_s: float = 0.0      # Omega_1
    delta_override_rad_s: float = None       # bypass the B_1 route to Delta

    @property
    def alkali_decoherence_rate_s(self):
        """gamma_a = gamma_sd + R_op (probe absorption counted in gamma_sd)."""
        return self.spin_destruction_rate_s + self.pump_rate_s

    @property
    def alkali_polarization(self):
        """P_a = R_op / gamma_a."""
        return self.pump_rate_s / self.alkali_decoherence_rate_s

    def validate(self, allow_regime_violation=False):
        """Check invariants; returns a list of warning strings.

        Plain violations raise :class:`ValidationError`.  The dispersive
        guard raises :class:`DispersiveRegimeViolation` unless explicitly
        overridden, in which case it is demoted to a returned warning.
        """
        def positive(value, name):
            if not (value > 0):
                raise ValidationError(f"{name} must be > 0, got {value}", field=name)

        positive(self.cell_length_cm, "cell.length_cm")
        positive(self.cell_area_cm2, "cell.area_cm2")
        positive(self.temperature_k, "cell.temperature_k")
        positive(self.noble_pressure_torr, "cell.noble_pressure_torr")
        positive(self.fill_temperature_k, "cell.fill_temperature_k")
        positive(self.probe_power_w, "probe.power_w")
        positive(self.excited_linewidth_rad_s, "probe.excited_linewidth_rad_s")
        positive(self.pulse_duration_s, "probe.duration_s")
        positive(self.pump_rate_s, "pump.rate_op_s")
        positive(self.spin_destruction_rate_s, "rates.spin_destruction_s")
        positive(self.wall_gradient_rate_s, "rates.wall_gradient_s")
        positive(self.field_gauss, "field.b1_gauss")
        for gas, torr in self.buffer_pressures_torr:
            positive(torr, f"cell.buffer_gases.{gas}")
        if self.alkali_density_override_cm3 is not None:
            positive(self.alkali_density_override_cm3, "cell.alkali_density_cm3")
        if self.probe_detuning_rad_s == 0:
            raise ValidationError("probe.detuning_rad_s must be nonzero",
                                  field="probe.detuning_rad_s")
        if not (0.0 < self.noble_polarization <= 1.0):
            raise ValidationError(
                f"noble_polarization must be in (0, 1], got {self.noble_polarization}",
                field="spins.noble_polarization")
        if self.alkali_q_factor < 1.0:
            raise ValidationError(
                f"q_factor must be >= 1, got {self.alkali_q_factor}",
                field="spins.q_factor")
        if not (0.0 < self.alkali_polarization < 1.0):
            raise ValidationError(
                f"pump closure gives P_a = {self.alkali_polarization}, "
                "need 0 < P_a < 1", field="pump")

        warnings = []
        guard = DISPERSIVE_GUARD_FACTOR * self.excited_linewidth_rad_s
        if abs(self.probe_detuning_rad_s) < guard:
            msg = (f"|detuning| = {abs(self.probe_detuning_rad_s):.3e} rad/s is below "
                   f"{DISPERSIVE_GUARD_FACTOR:g} x Gamma_e = {guard:.3e} rad/s; "
                   "the dispersive coupling model is marginal here")
            if not allow_regime_violation:
                raise DispersiveRegimeViolation(msg)
            warnings.append(msg)
        return warnings


def pump_rate_for_polarization(p_a_target, spin_destruction_rate_s):
    """Solve R_op from a target P_a through R_op = P_a (gamma_sd + R_op)."""
    if not (0.0 < p_a_target < 1.0):
        raise ValidationError(f"P_a target must be in (0, 1), got {p_a_target}",
                              field="pump.pa_target")
    return p_a_target * spin_destruction_rate_s / (1.0 - p_a_target)


@dataclass(frozen=True)
class DerivedParams:
    """Every symbol of the two-ensemble measurement theory for one setup."""

    # densities and ensemble sizes
    n_a_cm3: float
    n_b_cm3: float
    m_a: float
    m_b: float
    m_l: float
    p_a: float
    # rates (1/s unless noted)
    gamma_a: float
    gamma_b: float
    gamma_l_cm: float          # probe attenuation per unit length, 1/cm
    big_gamma_b: float         # total noble-gas decoherence rate
    exchange_rate_j: float
    optical_coupling_a: float  # dimensionless, sign follows detuning
    optical_rate_q: float      # magnitude
    # frequencies (rad/s)
    omega_a: float
    omega_b: float
    delta: float
    delta_omega_b: float       # exchange-induced shift of omega_b
    psi: float                 # alkali following angle, rad
    # dimensionless couplings and losses
    kappa: float
    epsilon: float
    eta: float
    rho: float
    # optical depth bookkeeping
    cross_section_cm2: float
    optical_depth: float
    # carried-through inputs needed downstream
    pulse_duration_s: float
    warnings: tuple = field(default=())

    def channel_spec(self):
        from .gaussian import ChannelSpec
        return ChannelSpec(kappa=self.kappa, epsilon=self.epsilon,
                           eta=self.eta, rho=self.rho)

    def as_report(self):
        """Flat key/value view, insertion-ordered for serialization."""
        return {
            "n_a_cm3": self.n_a_cm3, "n_b_cm3": self.n_b_cm3,
            "m_a": self.m_a, "m_b": self.m_b, "m_l": self.m_l,
            "p_a": self.p_a,
            "gamma_a_s": self.gamma_a, "gamma_b_s": self.gamma_b,
            "gamma_l_cm": self.gamma_l_cm, "big_gamma_b_s": self.big_gamma_b,
            "j_s": self.exchange_rate_j, "a_coupling": self.optical_coupling_a,
            "q_s": self.optical_rate_q,
            "omega_a_rad_s": self.omega_a, "omega_b_rad_s": self.omega_b,
            "delta_rad_s": self.delta, "delta_omega_b_rad_s": self.delta_omega_b,
            "psi_rad": self.psi,
            "kappa": self.kappa, "epsilon": self.epsilon,
            "eta": self.eta, "rho": self.rho,
            "cross_section_cm2": self.cross_section_cm2,
            "optical_depth": self.optical_depth,
            "pulse_duration_s": self.pulse_duration_s,
        }


def alkali_number_density(config):
    if config.alkali_density_override_cm3 is not None:
        return config.alkali_density_override_cm3
    return sp.alkali_density(config.pair.alkali, config.temperature_k)


def noble_number_density(config):
    """Fill pressure to density at the fill temperature (ideal gas)."""
    return torr_to_number_density(config.noble_pressure_torr,
                                  config.fill_temperature_k)


def magnetizations(config):
    """(M_a, M_b, M_L, P_a) for one cell.

    M_a = P_a N_a (I + 1/2); M_b = P_b N_b / 2 for spin-1/2 noble gas;
    M_L is the pulse photon number at the D1 wavelength (the detuning
    shifts the photon energy by < 1e-3 and is ignored here).
    """
    volume = config.cell_area_cm2 * config.cell_length_cm
    n_a = alkali_number_density(config) * volume
    n_b = noble_number_density(config) * volume
    p_a = config.alkali_polarization
    m_a = p_a * n_a * (config.pair.alkali.nuclear_spin + 0.5)
    m_b = config.noble_polarization * n_b / 2.0
    m_l = sp.photon_number(config.probe_power_w, config.pulse_duration_s,
                           config.pair.alkali.d1_wavelength_cm)
    return m_a, m_b, m_l, p_a


def coupling_rates(config, m_a, m_b, m_l, electron_radius_cm=ELECTRON_RADIUS_CM):
    """(J, a, Q): collective exchange rate and optical coupling.

    J = g sqrt(M_a M_b) / (A L);
    a = 2 r_e c f / (A delta_e (2I+1)), carrying the sign of delta_e;
    Q = (|a| / T) sqrt(M_a M_L).
    """
    volume = config.cell_area_cm2 * config.cell_length_cm
    j = config.pair.exchange_rate_cm3_s * math.sqrt(m_a * m_b) / volume
    alk = config.pair.alkali
    a = (2.0 * electron_radius_cm * SPEED_OF_LIGHT_CM_S * alk.oscillator_strength
         / (config.cell_area_cm2 * config.probe_detuning_rad_s * alk.slowing_factor))
    q = (abs(a) / config.pulse_duration_s) * math.sqrt(m_a * m_l)
    return j, a, q


def precession_frequencies(config, j, m_a, m_b, cell_index=1):
    """(omega_a, omega_b, Delta) for one cell.

    omega_a = g_a B + Omega +- J sqrt(M_b/M_a) and
    omega_b = g_b B +- J sqrt(M_a/M_b), the exchange terms entering with
    '+' in cell 1 and '-' in cell 2 (opposite polarization orientations).
    """
    if cell_index not in (1, 2):
        raise ValueError("cell_index must be 1 or 2")
    sign = 1.0 if cell_index == 1 else -1.0
    g_a = config.pair.alkali.gyromagnetic_rad_s_gauss
    g_b = config.pair.noble.gyromagnetic_rad_s_gauss
    omega_a = (g_a * config.field_gauss + config.pump_light_shift_rad_s
               + sign * j * math.sqrt(m_b / m_a))
    omega_b = g_b * config.field_gauss + sign * j * math.sqrt(m_a / m_b)
    return omega_a, omega_b, omega_a - omega_b


@dataclass(frozen=True)
class FieldMatch:
    """Cell-2 settings that synchronize the two cells' precession."""

    b2_gauss: float
    pump_shift_difference_rad_s: float    # Omega_2 - Omega_1


def field_matching(config, j, m_a, m_b):
    """Solve B_2 and (Omega_2 - Omega_1) so both cells share (omega_a, omega_b).

    The noble-gas condition fixes B_2 = B_1 + 2 (J/g_b) sqrt(M_a/M_b);
    the alkali condition then fixes
    Omega_2 - Omega_1 = g_a (B_1 - B_2) + 2 J sqrt(M_b/M_a).
    """
    g_a = config.pair.alkali.gyromagnetic_rad_s_gauss
    g_b = config.pair.noble.gyromagnetic_rad_s_gauss
    b2 = config.field_gauss + 2.0 * (j / g_b) * math.sqrt(m_a / m_b)
    shift = g_a * (config.field_gauss - b2) + 2.0 * j * math.sqrt(m_b / m_a)
    return FieldMatch(b2_gauss=b2, pump_shift_difference_rad_s=shift)


def derive(config, allow_regime_violation=False,
           electron_radius_cm=ELECTRON_RADIUS_CM):
    """Full pipeline from a physical setup to the theory parameters."""
    warnings = list(config.validate(allow_regime_violation))

    volume = config.cell_area_cm2 * config.cell_length_cm
    n_a = alkali_number_density(config)
    n_b = noble_number_density(config)
    m_a, m_b, m_l, p_a = magnetizations(config)
    j, a, q = coupling_rates(config, m_a, m_b, m_l, electron_radius_cm)
    gamma_a = config.alkali_decoherence_rate_s
    gamma_b = config.wall_gradient_rate_s

    if config.delta_override_rad_s is not None:
        # keep the bookkeeping frequencies from B_1 but impose the mismatch
        omega_a, omega_b, _ = precession_frequencies(config, j, m_a, m_b, 1)
        delta = config.delta_override_rad_s
        omega_a = omega_b + delta
    else:
        omega_a, omega_b, delta = precession_frequencies(config, j, m_a, m_b, 1)

    guard = OFF_RESONANCE_GUARD_FACTOR * max(gamma_a, j, q)
    if abs(delta) < guard:
        msg = (f"|Delta| = {abs(delta):.3e} rad/s below "
               f"{OFF_RESONANCE_GUARD_FACTOR:g} x max(gamma_a, J, Q) = {guard:.3e}; "
               "adiabatic elimination of the alkali is unreliable here")
        if not allow_regime_violation:
            raise OffResonanceViolation(msg)
        warnings.append(msg)

    alk = config.pair.alkali
    sigma = (2.0 * electron_radius_cm * SPEED_OF_LIGHT_CM_S
             * alk.oscillator_strength / config.excited_linewidth_rad_s)
    optical_depth = n_a * sigma * config.cell_length_cm
    # far-wing Lorentzian attenuation of the probe
    gamma_l = (n_a * sigma * config.excited_linewidth_rad_s ** 2
               / (4.0 * config.probe_detuning_rad_s ** 2))
    epsilon = 4.0 * gamma_l * config.cell_length_cm

    denom_sq = delta ** 2 + gamma_a ** 2
    big_gamma_b = gamma_b + gamma_a * j ** 2 / denom_sq
    delta_omega_b = delta * j ** 2 / denom_sq
    psi = math.atan2(gamma_a, delta)
    t = config.pulse_duration_s
    kappa = j * q * t / math.sqrt(denom_sq)
    eta = 2.0 * big_gamma_b * t
    rho = 4.0 * config.alkali_q_factor * gamma_a / (j ** 2 * t)

    if epsilon >= 1.0:
        raise ValidationError(
            f"probe scattering fraction epsilon = {epsilon:.3f} >= 1; "
            "the linearized loss model has broken down", field="probe")
    if eta > 1.0:
        raise ValidationError(
            f"noble-gas decoherence fraction eta = {eta:.3f} > 1 over the pulse; "
            "shorten the pulse or reduce Gamma_b", field="probe.duration_s")

    return DerivedParams(
        n_a_cm3=n_a, n_b_cm3=n_b, m_a=m_a, m_b=m_b, m_l=m_l, p_a=p_a,
        gamma_a=gamma_a, gamma_b=gamma_b, gamma_l_cm=gamma_l,
        big_gamma_b=big_gamma_b, exchange_rate_j=j, optical_coupling_a=a,
        optical_rate_q=q, omega_a=omega_a, omega_b=omega_b, delta=delta,
        delta_omega_b=delta_omega_b, psi=psi, kappa=kappa, epsilon=epsilon,
        eta=eta, rho=rho, cross_section_cm2=sigma, optical_depth=optical_depth,
        pulse_duration_s=t, warnings=tuple(warnings),
    )


@dataclass(frozen=True)
class OpticalDepthIdentity:
    """Both sides of kappa^2 ~ 2 Gamma_b T d plus the exact correction.

    The chain kappa^2 = 2 (gamma_absp / gamma_a)
    (J^2 gamma_a / (Delta^2 + gamma_a^2)) T d holds for a fully polarized
    alkali ensemble; at partial polarization the left side carries one
    extra factor of P_a, so ratio = P_a * correction identically.
    """

    lhs_kappa_sq: float
    rhs: float
    ratio: float
    correction: float
    gamma_absp: float


def optical_depth_identity(params, config):
    """Evaluate kappa^2 against 2 Gamma_b T d for a derived setup."""
    alk = config.pair.alkali
    t = params.pulse_duration_s
    r_a = (params.m_l * params.cross_section_cm2
           / (t * alk.slowing_factor * config.cell_area_cm2))
    gamma_absp = (r_a * config.excited_linewidth_rad_s ** 2
                  / (4.0 * config.probe_detuning_rad_s ** 2))
    lhs = params.kappa ** 2
    rhs = 2.0 * params.big_gamma_b * t * params.optical_depth
    correction = ((gamma_absp / params.gamma_a)
                  * (params.exchange_rate_j ** 2 * params.gamma_a
                     / (params.delta ** 2 + params.gamma_a ** 2))
                  / params.big_gamma_b)
    return OpticalDepthIdentity(lhs_kappa_sq=lhs, rhs=rhs, ratio=lhs / rhs,
                                correction=correction, gamma_absp=gamma_absp)


def force_dominance_assumptions(config, params):
    """Rebuild a config under the assumptions that make the identity exact.

    Probe absorption dominates the alkali relaxation (gamma_a = gamma_absp),
    the coupling to the alkali dominates the noble-gas decoherence
    (gamma_b -> 0, approximated by a negligible wall rate) and the alkali
    ensemble is fully pumped (P_a -> 1, approximated to machine tolerance;
    the identity's derivation silently assumes it).
    """
    identity = optical_depth_identity(params, config)
    p_a_limit = 1.0 - 1e-13
    gamma_a_target = identity.gamma_absp
    gamma_sd = gamma_a_target * (1.0 - p_a_limit)
    return replace(
        config,
        spin_destruction_rate_s=gamma_sd,
        pump_rate_s=gamma_a_target - gamma_sd,
        wall_gradient_rate_s=params.gamma_b * 1e-30 + 1e-300,
    )
