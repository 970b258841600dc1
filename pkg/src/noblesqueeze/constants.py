"""Physical constants and unit conversions.

Everything internal runs in cgs-Gaussian units: cm, s, Gauss, erg.
Configuration files accept laboratory units (Torr, degrees Celsius, mW,
nm, mG) which are converted once at the parsing boundary by the helpers
below.  Rationale: the atomic-collision constants of this problem
(electron radius in cm, spin-exchange rate coefficients in cm^3/s) are
tabulated in cgs.
"""

import math

# fundamental constants (CODATA 2018, converted to cgs)
PLANCK_ERG_S = 6.62607015e-27          # erg s
SPEED_OF_LIGHT_CM_S = 2.99792458e10    # cm / s
BOLTZMANN_ERG_K = 1.380649e-16         # erg / K

# Classical electron radius.  CODATA: 2.8179403262e-13 cm.  An alternate
# value of 2.8e-17 cm circulates in at least one published table of this
# problem's coupling coefficient; it is off by 1e4 from the accepted
# value and is kept here only so the discrepancy can be reproduced
# explicitly.  All derivations default to the physical value.
ELECTRON_RADIUS_CM = 2.8179403262e-13
ELECTRON_RADIUS_MISPRINT_CM = 2.8e-17

# pressure
BARYE_PER_TORR = 1333.22387415         # 1 Torr in dyn/cm^2
BARYE_PER_ATM = 1.01325e6

# default temperature at which quoted fill pressures are converted to
# number densityes (cells are usually filled near room temperature)
DEFAULT_FILL_TEMPERATURE_K = 293.15


def celsius_to_kelvin(t_c):
    return t_c + 273.15


def torr_to_number_density(pressure_torr, temperature_k):
    """Ideal-gas number density in cm^-3 for a pressure in Torr."""
    return pressure_torr * BARYE_PER_TORR / (BOLTZMANN_ERG_K * temperature_k)


def number_density_to_torr(density_cm3, temperature_k):
    """Inverse of :func:`torr_to_number_density`."""
    return density_cm3 * BOLTZMANN_ERG_K * temperature_k / BARYE_PER_TORR


def gauss_to_angular_frequency(field_gauss, gyromagnetic_rad_s_gauss):
    """Larmor precession rate (rad/s) of a spin in a magnetic field."""
    return gyromagnetic_rad_s_gauss * field_gauss


def angular_frequency_to_gauss(omega_rad_s, gyromagnetic_rad_s_gauss):
    return omega_rad_s / gyromagnetic_rad_s_gauss


def photon_energy_erg(wavelength_cm):
    return PLANCK_ERG_S * SPEED_OF_LIGHT_CM_S / wavelength_cm


def db_from_variance(variance):
    """Squeezing in dB relative to vacuum: -10 log10(2 var).

    Vacuum (var = 1/2) maps to 0 dB and squeezed states to positive dB,
    so 'more squeezing' reads as a larger number.  The +0.0 normalizes
    the negative zero that log10 hands back exactly at vacuum.
    """
    return -10.0 * math.log10(2.0 * variance) + 0.0


def variance_from_db(squeezing_db):
    return 0.5 * 10.0 ** (-squeezing_db / 10.0)
