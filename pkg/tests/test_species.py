import math

import numpy as np
import pytest

from noblesqueeze import constants as cn
from noblesqueeze import species as sp
from noblesqueeze.errors import OutOfRangeTemperature, UnsupportedPair

ALL_ALKALIS = ("K", "Rb87")
ALL_NOBLES = ("He3", "Xe129")


def test_supported_pair_constants():
    assert sp.lookup_pair("K", "He3").exchange_rate_cm3_s == 4.9e-15
    assert sp.lookup_pair("Rb87", "Xe129").exchange_rate_cm3_s == 1.9e-13


def test_lookup_total_over_enum_product():
    supported = {("K", "He3"), ("Rb87", "Xe129")}
    for a in ALL_ALKALIS:
        for b in ALL_NOBLES:
            if (a, b) in supported:
                pair = sp.lookup_pair(a, b)
                assert pair.alkali.name == a and pair.noble.name == b
            else:
                with pytest.raises(UnsupportedPair):
                    sp.lookup_pair(a, b)
    with pytest.raises(UnsupportedPair):
        sp.lookup_pair("Cs", "He3")


def test_species_table_sanity():
    for alk in (sp.POTASSIUM, sp.RUBIDIUM_87):
        assert 0.0 < alk.oscillator_strength <= 1.0
        assert alk.nuclear_spin in (0.5, 1.0, 1.5, 2.5)
        assert alk.gyromagnetic_rad_s_gauss > 0
        assert alk.d1_wavelength_cm > 0
    for pair in (sp.lookup_pair("K", "He3"), sp.lookup_pair("Rb87", "Xe129")):
        assert pair.noble.spin == 0.5
        assert pair.noble.gyromagnetic_rad_s_gauss > 0
        ratio = (pair.alkali.gyromagnetic_rad_s_gauss
                 / pair.noble.gyromagnetic_rad_s_gauss)
        assert 100.0 <= ratio <= 1000.0
        assert pair.exchange_rate_cm3_s > 0


def test_vapor_models_monotone_300_700():
    grid = np.linspace(300.0, 700.0, 401)
    for alk in (sp.POTASSIUM, sp.RUBIDIUM_87):
        densities = [alk.vapor_model.number_density_cm3(t) for t in grid]
        assert all(b > a for a, b in zip(densities, densities[1:]))


def test_alkali_density_examples():
    assert sp.alkali_density(sp.POTASSIUM, 423.0) < sp.alkali_density(sp.POTASSIUM, 523.0)
    # frozen regression of the chosen correlation at 250 C
    assert sp.alkali_density(sp.POTASSIUM, 523.15) == pytest.approx(1.0892e15, rel=1e-3)
    n_rb = sp.alkali_density(sp.RUBIDIUM_87, 448.0)
    assert math.isfinite(n_rb) and n_rb > 0


def test_alkali_density_range_guard():
    for bad_t in (299.0, 701.0):
        with pytest.raises(OutOfRangeTemperature):
            sp.alkali_density(sp.POTASSIUM, bad_t)


def test_photon_number_examples():
    assert sp.photon_number(0.0, 0.2, 770e-7) == 0.0
    one = sp.photon_number(0.4, 0.2, 770e-7)
    assert sp.photon_number(0.4, 0.4, 770e-7) == pytest.approx(2 * one, rel=1e-14)
    # independent hand value, P T lambda / (h c), cross-checked in SI units
    si = 0.4 * 0.2 * 770e-9 / (6.62607015e-34 * 2.99792458e8)
    assert one == pytest.approx(si, rel=1e-12)
    assert one == pytest.approx(3.101e17, rel=1e-3)


def test_photon_number_rejects_bad_inputs():
    with pytest.raises(ValueError):
        sp.photon_number(0.4, -1.0, 770e-7)
    with pytest.raises(ValueError):
        sp.photon_number(0.4, 0.2, 0.0)


def test_unit_round_trips():
    t_ref = 293.15
    for torr in (1e-3, 0.07, 880.0, 2.5e4):
        n = cn.torr_to_number_density(torr, t_ref)
        assert cn.number_density_to_torr(n, t_ref) == pytest.approx(torr, rel=1e-12)
    g = sp.POTASSIUM.gyromagnetic_rad_s_gauss
    for b in (1e-3, 0.01, 10.0):
        w = cn.gauss_to_angular_frequency(b, g)
        assert cn.angular_frequency_to_gauss(w, g) == pytest.approx(b, rel=1e-12)


def test_db_conversions():
    assert cn.db_from_variance(0.5) == 0.0
    assert cn.variance_from_db(10.0) == pytest.approx(0.05, rel=1e-12)
    assert cn.db_from_variance(cn.variance_from_db(3.7)) == pytest.approx(3.7, rel=1e-12)
