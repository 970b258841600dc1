"""Atomic constants for the supported alkali / noble-gas mixtures.

Two pairs are supported: potassium with helium-3 and rubidium-87 with
xenon-129.  The spin-exchange rate coefficients are the collisional
values for these mixtures; everything else (D1 wavelengths, oscillator
strengths, gyromagnetic ratios, vapor-pressure correlations) is standard
handbook data, each constant annotated with its source.  Handbook values
carry a few-percent spread between sources, which is why downstream
acceptance bands on absolute quantities are deliberately loose.

All tables are immutable after import and safe to share across threads.
"""

import math
from dataclasses import dataclass, field

from .constants import (
    BARYE_PER_ATM,
    BOLTZMANN_ERG_K,
    PLANCK_ERG_S,
    SPEED_OF_LIGHT_CM_S,
)
from .errors import OutOfRangeTemperature, UnsupportedPair

_TWO_PI = 2.0 * math.pi

VAPOR_MODEL_T_MIN_K = 300.0
VAPOR_MODEL_T_MAX_K = 700.0


@dataclass(frozen=True)
class VaporPressureModel:
    """Saturated-vapor correlation log10(p/atm) = a - b/T, split at the melt.

    Coefficients from Alcock, Itkin and Horrigan, Canadian Metallurgical
    Quarterly 23, 309 (1984); quoted accuracy is about +-5% which is far
    below the cell-to-cell spread seen in practice.
    """

    a_solid: float
    b_solid: float
    a_liquid: float
    b_liquid: float
    melting_point_k: float

    def pressure_atm(self, temperature_k):
        if temperature_k < self.melting_point_k:
            return 10.0 ** (self.a_solid - self.b_solid / temperature_k)
        return 10.0 ** (self.a_liquid - self.b_liquid / temperature_k)

    def number_density_cm3(self, temperature_k):
        p_barye = self.pressure_atm(temperature_k) * BARYE_PER_ATM
        return p_barye / (BOLTZMANN_ERG_K * temperature_k)


@dataclass(frozen=True)
class AlkaliSpecies:
    name: str
    nuclear_spin: float                 # I, in units of hbar
    oscillator_strength: float          # D1 line, dimensionless
    gyromagnetic_rad_s_gauss: float     # low-field, includes 1/(2I+1) slowing
    d1_wavelength_cm: float
    vapor_model: VaporPressureModel

    @property
    def slowing_factor(self):
        """[I] = 2I + 1, the hyperfine slowing-down of the electron spin."""
        return 2.0 * self.nuclear_spin + 1.0


@dataclass(frozen=True)
class NobleSpecies:
    name: str
    gyromagnetic_rad_s_gauss: float
    spin: float = field(default=0.5)


@dataclass(frozen=True)
class ExchangePair:
    alkali: AlkaliSpecies
    noble: NobleSpecies
    exchange_rate_cm3_s: float          # coherent spin-exchange coefficient


# --- alkali tables ---------------------------------------------------------
# gyromagnetic ratios: g_s mu_B / ((2I+1) hbar) ~ 2pi * 2.8 MHz/G / 4 for
# I = 3/2, i.e. the familiar 700 kHz/G low-field ground-state value.
# oscillator strengths: Tiecke, "Properties of Potassium" (f_D1 = 0.334);
# Steck, "Rubidium 87 D Line Data" (f_D1 = 0.342).

POTASSIUM = AlkaliSpecies(
    name="K",
    nuclear_spin=1.5,
    oscillator_strength=0.334,
    gyromagnetic_rad_s_gauss=_TWO_PI * 700.0e3,
    d1_wavelength_cm=770.108e-7,
    vapor_model=VaporPressureModel(
        a_solid=4.961, b_solid=4646.0,
        a_liquid=4.402, b_liquid=4453.0,
        melting_point_k=336.65,
    ),
)

RUBIDIUM_87 = AlkaliSpecies(
    name="Rb87",
    nuclear_spin=1.5,
    oscillator_strength=0.342,
    gyromagnetic_rad_s_gauss=_TWO_PI * 700.0e3,
    d1_wavelength_cm=794.979e-7,
    vapor_model=VaporPressureModel(
        a_solid=4.857, b_solid=4215.0,
        a_liquid=4.312, b_liquid=4040.0,
        melting_point_k=312.45,
    ),
)

# --- noble-gas tables ------------------------------------------------------
# nuclear gyromagnetic ratios (magnitudes): 3He 3.24341 kHz/G,
# 129Xe 1.17772 kHz/G (CODATA / NMR tables).

HELIUM_3 = NobleSpecies(name="He3", gyromagnetic_rad_s_gauss=_TWO_PI * 3243.41)
XENON_129 = NobleSpecies(name="Xe129", gyromagnetic_rad_s_gauss=_TWO_PI * 1177.72)

_ALKALIS = {"K": POTASSIUM, "Rb87": RUBIDIUM_87}
_NOBLES = {"He3": HELIUM_3, "Xe129": XENON_129}

# coherent spin-exchange rate coefficients (cm^3/s) for the supported
# collisional mixtures
_PAIRS = {
    ("K", "He3"): 4.9e-15,
    ("Rb87", "Xe129"): 1.9e-13,
}


def alkali_names():
    return tuple(_ALKALIS)


def noble_names():
    return tuple(_NOBLES)


def lookup_pair(alkali_name, noble_name):
    """Return the :class:`ExchangePair` for a supported mixture.

    Raises :class:`UnsupportedPair` for any combination without a
    tabulated exchange coefficient (including unknown species names).
    """
    key = (alkali_name, noble_name)
    if key not in _PAIRS:
        raise UnsupportedPair(
            f"no spin-exchange constants for {alkali_name}-{noble_name}; "
            f"supported pairs: {sorted(_PAIRS)}"
        )
    return ExchangePair(
        alkali=_ALKALIS[alkali_name],
        noble=_NOBLES[noble_name],
        exchange_rate_cm3_s=_PAIRS[key],
    )


def alkali_density(species, temperature_k):
    """Saturated alkali number density (cm^-3) at a cell temperature.

    Valid only inside the vapor-model window 300-700 K; outside it the
    correlation coefficients are extrapolations and we refuse to guess.
    """
    if not (VAPOR_MODEL_T_MIN_K <= temperature_k <= VAPOR_MODEL_T_MAX_K):
        raise OutOfRangeTemperature(
            f"temperature {temperature_k} K outside vapor model range "
            f"[{VAPOR_MODEL_T_MIN_K}, {VAPOR_MODEL_T_MAX_K}] K"
        )
    return species.vapor_model.number_density_cm3(temperature_k)


def photon_number(power_w, duration_s, wavelength_cm):
    """Total photon count of a square pulse: P T lambda / (h c)."""
    if power_w < 0 or duration_s <= 0 or wavelength_cm <= 0:
        raise ValueError("power must be >= 0, duration and wavelength > 0")
    energy_erg = power_w * 1.0e7 * duration_s
    return energy_erg * wavelength_cm / (PLANCK_ERG_S * SPEED_OF_LIGHT_CM_S)
