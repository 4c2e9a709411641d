"""Unit tests for parameter handling, unit conversion, and derived scalars."""

import math

import pytest

from comtool.errors import ComToolError
from comtool.params import (CONFIG_DEFAULTS, PhysicalParams, drive_amplitude,
                            emit_config, g1_to_rad_per_s, mechanical_quality,
                            parse_config, thermal_occupancy)

TWO_PI = 2.0 * math.pi

# Frozen oracle: eps_d = sqrt(2 P kappa_1 / (hbar * 2 pi c / lambda)) for
# P = 5 mW, kappa_1 = 2 pi * 1.5 MHz, lambda = 810 nm, evaluated once with
# CODATA constants and pinned here.
EPS_D_REFERENCE = 6.199257942246e11

# Frozen oracles: n_m = 1/(exp(hbar w/kT) - 1) at w = 2 pi * 10 MHz.
N_M_10MK = 20.34061835180
N_M_1MK = 1.623502915638


def test_drive_amplitude_reference_value():
    eps = drive_amplitude(5e-3, TWO_PI * 1.5e6, 810e-9)
    assert eps == pytest.approx(EPS_D_REFERENCE, rel=1e-11)


def test_drive_amplitude_scalings():
    eps = drive_amplitude(5e-3, TWO_PI * 1.5e6, 810e-9)
    # sqrt in power and in kappa_1, sqrt in wavelength.
    assert drive_amplitude(20e-3, TWO_PI * 1.5e6, 810e-9) == pytest.approx(2 * eps)
    assert drive_amplitude(5e-3, TWO_PI * 6.0e6, 810e-9) == pytest.approx(2 * eps)
    assert drive_amplitude(5e-3, TWO_PI * 1.5e6, 4 * 810e-9) == pytest.approx(2 * eps)
    assert drive_amplitude(0.0, TWO_PI * 1.5e6, 810e-9) == 0.0


def test_drive_amplitude_validation():
    with pytest.raises(ComToolError):
        drive_amplitude(-1e-3, TWO_PI * 1.5e6, 810e-9)
    with pytest.raises(ComToolError):
        drive_amplitude(5e-3, 0.0, 810e-9)
    with pytest.raises(ComToolError):
        drive_amplitude(5e-3, TWO_PI * 1.5e6, 0.0)


def test_thermal_occupancy_reference_values():
    omega_m = TWO_PI * 10e6
    assert thermal_occupancy(10e-3, omega_m) == pytest.approx(N_M_10MK, rel=1e-10)
    assert thermal_occupancy(1e-3, omega_m) == pytest.approx(N_M_1MK, rel=1e-10)


def test_thermal_occupancy_limits():
    omega_m = TWO_PI * 10e6
    assert thermal_occupancy(0.0, omega_m) == 0.0
    # Deep cryogenic limit underflows cleanly to zero occupancy.
    assert thermal_occupancy(1e-12, omega_m) == 0.0
    # Hot bath: n_m ~ kT / (hbar w) >> 1.
    hot = thermal_occupancy(1.0, omega_m)
    assert hot > 1e3
    with pytest.raises(ComToolError):
        thermal_occupancy(-1.0, omega_m)
    with pytest.raises(ComToolError):
        thermal_occupancy(1e-3, 0.0)


def test_mechanical_quality():
    assert mechanical_quality(TWO_PI * 10e6, TWO_PI * 100.0) == pytest.approx(1e5)
    with pytest.raises(ComToolError):
        mechanical_quality(TWO_PI * 10e6, 0.0)


def test_parse_config_defaults():
    params, mode = parse_config({})
    assert mode == "delta_c"
    assert params.omega_m == pytest.approx(TWO_PI * 10e6)
    assert params.gamma_m == pytest.approx(TWO_PI * 100.0)
    assert params.kappa_1 == pytest.approx(TWO_PI * 1.5e6)
    assert params.kappa_2 == pytest.approx(TWO_PI * 1.5e6)
    assert params.kappa_tot == pytest.approx(TWO_PI * 3.0e6)
    assert params.drive_wavelength == pytest.approx(810e-9)
    assert params.drive_power == pytest.approx(5e-3)
    assert params.temperature == pytest.approx(10e-3)
    assert params.delta_c == pytest.approx(0.5 * TWO_PI * 10e6)
    assert params.n_m == pytest.approx(N_M_10MK, rel=1e-10)
    assert params.epsilon_d == pytest.approx(EPS_D_REFERENCE, rel=1e-11)


def test_g1_conventions():
    assert g1_to_rad_per_s(1351.38, "hz_times_2pi") == pytest.approx(TWO_PI * 1351.38)
    assert g1_to_rad_per_s(1351.38, "rad_per_s") == pytest.approx(1351.38)
    with pytest.raises(ComToolError):
        g1_to_rad_per_s(1.0, "bogus")

    params_a, _ = parse_config({"g1_convention": "hz_times_2pi"})
    params_b, _ = parse_config({"g1_convention": "rad_per_s"})
    assert params_a.g_1 == pytest.approx(TWO_PI * params_b.g_1)


def test_g2_is_ratio_times_g1():
    params, _ = parse_config({"g2_over_g1": -1e-3, "g1_convention": "rad_per_s"})
    assert params.g_2 == pytest.approx(-1e-3 * 1351.38)


def test_parse_config_rejects_unknown_key():
    with pytest.raises(ComToolError, match="kapa1_hz"):
        parse_config({"kapa1_hz": 1.5e6})


def test_parse_config_rejects_bad_detuning_mode():
    with pytest.raises(ComToolError, match="detuning_mode"):
        parse_config({"detuning_mode": "delta_x"})


def test_config_round_trip():
    doc = dict(CONFIG_DEFAULTS)
    doc.update(g1_convention="rad_per_s", g2_over_g1=-1.5e-2, r_b=0.8,
               theta_rad=0.37, delta_over_omega_m=0.1, temperature_mk=1.0)
    params, mode = parse_config(doc)
    emitted = emit_config(params, detuning_mode=mode,
                          g1_convention="rad_per_s")
    for key, value in doc.items():
        if isinstance(value, str):
            assert emitted[key] == value
        else:
            assert emitted[key] == pytest.approx(value, rel=1e-12), key
    params2, mode2 = parse_config(emitted)
    assert mode2 == mode
    assert params2.g_1 == pytest.approx(params.g_1, rel=1e-12)
    assert params2.delta_c == pytest.approx(params.delta_c, rel=1e-12)


def test_physical_params_validation():
    good = parse_config({})[0]
    with pytest.raises(ComToolError):
        good.with_(omega_m=0.0)
    with pytest.raises(ComToolError):
        good.with_(gamma_m=-1.0)
    with pytest.raises(ComToolError):
        good.with_(kappa_1=0.0)
    with pytest.raises(ComToolError):
        good.with_(r_b=1.0)
    with pytest.raises(ComToolError):
        good.with_(drive_power=-1e-3)


def test_thermal_environment_markov_flag():
    params = parse_config({})[0]
    env = params.thermal_environment()
    assert env.q_factor == pytest.approx(1e5)
    assert env.markovian_ok
    low_q = params.with_(gamma_m=params.omega_m / 10.0).thermal_environment()
    assert not low_q.markovian_ok
