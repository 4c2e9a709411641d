"""Adiabatic cavity frequency profile of the membrane and its expansion.

The odd half-wavelength cavity resonance follows the membrane position
adiabatically; expanding it to second order around the equilibrium position
gives the cavity frequency omega_c and the linear/quadratic coupling rates
g1, g2 used by the rest of the toolkit.
"""

import math
import warnings
from dataclasses import dataclass

from .constants import C_LIGHT
from .errors import DegenerateExpansionError, InvalidParameterError


@dataclass(frozen=True)
class MembraneGeometry:
    """Membrane reflectivity and placement inside a half-cavity of length L."""

    reflectivity: float        # R_m, power reflectivity in [0, 1]
    equilibrium_position: float  # q0, m
    half_cavity_length: float  # L, m
    mode_number: int           # n >= 1

    def __post_init__(self):
        if not 0.0 <= self.reflectivity <= 1.0:
            raise InvalidParameterError("reflectivity must be in [0, 1]")
        if self.half_cavity_length <= 0.0:
            raise InvalidParameterError("half_cavity_length must be positive")
        if self.mode_number < 1:
            raise InvalidParameterError("mode_number must be >= 1")
        if abs(self.equilibrium_position) >= self.wavelength / 10.0:
            warnings.warn("equilibrium position is not small against the "
                          "optical wavelength; the expansion may be poor")

    @property
    def omega_n(self):
        """Degenerate subcavity frequency n*pi*c/L, rad/s."""
        return self.mode_number * math.pi * C_LIGHT / self.half_cavity_length

    @property
    def k_n(self):
        return self.omega_n / C_LIGHT

    @property
    def round_trip_time(self):
        """tau = 2L/c, s."""
        return 2.0 * self.half_cavity_length / C_LIGHT

    @property
    def wavelength(self):
        return 2.0 * self.half_cavity_length / self.mode_number

    def check_adiabatic(self, omega_m):
        """Warn unless omega_m * tau << 1 (profile follows the membrane)."""
        ok = omega_m * self.round_trip_time < 0.01
        if not ok:
            warnings.warn("omega_m * tau is not small; the adiabatic "
                          "frequency profile is questionable")
        return ok


def cavity_frequency_profile(q1, geometry):
    """Cavity resonance omega_{n,o}(q1) in rad/s at membrane position q1 (m)."""
    sqrt_r = math.sqrt(geometry.reflectivity)
    tau = geometry.round_trip_time
    return (geometry.omega_n + math.pi / tau
            - (math.asin(sqrt_r * math.cos(2.0 * geometry.k_n * q1))
               + math.asin(sqrt_r)) / tau)


@dataclass(frozen=True)
class CouplingExpansion:
    omega_c: float   # rad/s
    g_1: float       # rad/s per unit displacement
    g_2: float       # rad/s per unit displacement squared
    sigma: float     # dimensionless


def expand_couplings(geometry):
    """Second-order expansion coefficients (omega_c, g1, g2, sigma) at q0.

    g1 carries the sign of sin(2 k_n q0), g2 the sign of cos(2 k_n q0).
    Degenerates (sigma = 0) only for a perfect mirror sitting exactly at a
    node or antinode.
    """
    r_m = geometry.reflectivity
    k_n = geometry.k_n
    tau = geometry.round_trip_time
    phase = 2.0 * k_n * geometry.equilibrium_position
    sin_ph = math.sin(phase)
    cos_ph = math.cos(phase)
    sigma_sq = sin_ph * sin_ph + (1.0 - r_m) * cos_ph * cos_ph
    if sigma_sq == 0.0:
        raise DegenerateExpansionError(
            "expansion is singular: R_m = 1 at a node/antinode")
    sigma = math.sqrt(sigma_sq)
    sqrt_r = math.sqrt(r_m)
    g_1 = 2.0 * k_n * sqrt_r * sin_ph / (tau * sigma)
    g_2 = 2.0 * k_n * k_n * sqrt_r * (1.0 - r_m) * cos_ph / (tau * sigma ** 3)
    omega_c = cavity_frequency_profile(geometry.equilibrium_position, geometry)
    return CouplingExpansion(omega_c=omega_c, g_1=g_1, g_2=g_2, sigma=sigma)


def profile_derivatives_fd(geometry, rel_step=1e-4):
    """First and second derivatives of the profile at q0 by central
    differences with one Richardson extrapolation step.

    Independent cross-check for expand_couplings; step is relative to the
    optical wavelength. Only the position-dependent asin term is
    differenced: the profile itself sits at ~1e15 rad/s while its second
    difference is O(1), so differencing the full profile would lose every
    significant digit to cancellation.
    """
    q0 = geometry.equilibrium_position
    h = geometry.wavelength * rel_step
    sqrt_r = math.sqrt(geometry.reflectivity)
    tau = geometry.round_trip_time
    k_n = geometry.k_n

    def variable_part(q1):
        return -math.asin(sqrt_r * math.cos(2.0 * k_n * q1)) / tau

    def d1(step):
        return (variable_part(q0 + step)
                - variable_part(q0 - step)) / (2.0 * step)

    def d2(step):
        return (variable_part(q0 + step)
                - 2.0 * variable_part(q0)
                + variable_part(q0 - step)) / step ** 2

    first = (4.0 * d1(h / 2.0) - d1(h)) / 3.0
    second = (4.0 * d2(h / 2.0) - d2(h)) / 3.0
    return first, second
