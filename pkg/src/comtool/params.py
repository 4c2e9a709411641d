"""Physical parameter records, unit conventions, and derived scalars.

Config files state every rate as an ordinary frequency f = omega/2pi in Hz
(power in mW, temperature in mK, wavelength in nm); everything is converted
to angular frequencies / SI at parse time and kept that way. The linear
coupling g1 is the one deliberate exception: its convention is ambiguous in
the source material, so the config carries an explicit `g1_convention` flag.
"""

import math
from dataclasses import dataclass, replace

from .constants import C_LIGHT, HBAR, K_B, TWO_PI
from .errors import ConfigError, InvalidParameterError

G1_CONVENTIONS = ("hz_times_2pi", "rad_per_s")
DETUNING_MODES = ("delta_c", "delta_bar", "delta_tilde")

# Minimum mechanical quality factor for the delta-correlated thermal noise
# model to be trustworthy.
MARKOV_Q_THRESHOLD = 1.0e3


def drive_amplitude(drive_power, kappa_1, drive_wavelength):
    """Laser drive amplitude eps_d = sqrt(2 P kappa_1 / (hbar omega_d)) in 1/s.

    `drive_power` in W, `kappa_1` in rad/s, `drive_wavelength` in m.
    """
    if drive_wavelength <= 0.0:
        raise InvalidParameterError("drive_wavelength must be positive")
    if kappa_1 <= 0.0:
        raise InvalidParameterError("kappa_1 must be positive")
    if drive_power < 0.0:
        raise InvalidParameterError("drive_power must be nonnegative")
    omega_d = TWO_PI * C_LIGHT / drive_wavelength
    return math.sqrt(2.0 * drive_power * kappa_1 / (HBAR * omega_d))


def thermal_occupancy(temperature, omega_m):
    """Mean thermal phonon number n_m = 1/(exp(hbar w_m / k_B T) - 1).

    T = 0 is handled as the limit n_m = 0, not as an error.
    """
    if omega_m <= 0.0:
        raise InvalidParameterError("omega_m must be positive")
    if temperature < 0.0:
        raise InvalidParameterError("temperature must be nonnegative")
    if temperature == 0.0:
        return 0.0
    x = HBAR * omega_m / (K_B * temperature)
    # expm1 keeps precision for small x (hot bath) and overflows cleanly to
    # n_m = 0 for very cold baths.
    if x > 700.0:
        return 0.0
    return 1.0 / math.expm1(x)


def mechanical_quality(omega_m, gamma_m):
    """Mechanical quality factor Q_m = omega_m / gamma_m."""
    if omega_m <= 0.0 or gamma_m <= 0.0:
        raise InvalidParameterError("omega_m and gamma_m must be positive")
    return omega_m / gamma_m


@dataclass(frozen=True)
class ThermalEnvironment:
    """Bath occupancy and quality factor, with a Markov-validity flag."""

    n_m: float
    q_factor: float

    @property
    def markovian_ok(self):
        return self.q_factor >= MARKOV_Q_THRESHOLD


@dataclass(frozen=True)
class PhysicalParams:
    """All bare system inputs, in coherent internal units (rad/s, SI).

    `delta_c` holds the bare detuning Delta_c = omega_c - omega_d in the
    default `delta_c` detuning mode; in the `delta_bar`/`delta_tilde` modes
    the steady-state solver interprets the same slot as the effective
    detuning being fixed directly.
    """

    omega_m: float            # mechanical angular frequency, rad/s
    gamma_m: float            # mechanical damping rate, rad/s
    kappa_1: float            # left-mirror decay rate, rad/s
    kappa_2: float            # right-mirror decay rate, rad/s
    g_1: float                # linear coupling, rad/s
    g_2: float                # quadratic coupling, rad/s, signed
    drive_wavelength: float   # laser wavelength, m
    drive_power: float        # input power, W
    temperature: float        # bath temperature, K
    delta_c: float            # detuning, rad/s (see class docstring)
    r_b: float = 0.0          # feedback reflection coefficient
    theta: float = 0.0        # feedback phase, rad

    def __post_init__(self):
        if self.omega_m <= 0.0:
            raise InvalidParameterError("omega_m must be positive")
        if self.gamma_m <= 0.0:
            raise InvalidParameterError("gamma_m must be positive")
        if self.kappa_1 <= 0.0 or self.kappa_2 <= 0.0:
            raise InvalidParameterError("kappa_1 and kappa_2 must be positive")
        if self.drive_power < 0.0:
            raise InvalidParameterError("drive_power must be nonnegative")
        if self.temperature < 0.0:
            raise InvalidParameterError("temperature must be nonnegative")
        if self.drive_wavelength <= 0.0:
            raise InvalidParameterError("drive_wavelength must be positive")
        if not 0.0 <= self.r_b < 1.0:
            raise InvalidParameterError("r_b must satisfy 0 <= r_b < 1")

    @property
    def kappa_tot(self):
        return self.kappa_1 + self.kappa_2

    @property
    def epsilon_d(self):
        return drive_amplitude(self.drive_power, self.kappa_1,
                               self.drive_wavelength)

    @property
    def n_m(self):
        return thermal_occupancy(self.temperature, self.omega_m)

    def thermal_environment(self):
        return ThermalEnvironment(
            n_m=self.n_m,
            q_factor=mechanical_quality(self.omega_m, self.gamma_m),
        )

    def with_(self, **changes):
        """Return a copy with the given fields replaced."""
        return replace(self, **changes)


# ---------------------------------------------------------------------------
# Config ingestion: a flat key-value document with exactly these keys.
# ---------------------------------------------------------------------------

CONFIG_DEFAULTS = {
    "omega_m_hz": 10.0e6,
    "gamma_m_hz": 100.0,
    "kappa1_hz": 1.5e6,
    "kappa2_hz": 1.5e6,
    "g1": 1351.38,
    "g1_convention": "hz_times_2pi",
    "g2_over_g1": 0.0,
    "wavelength_nm": 810.0,
    "power_mw": 5.0,
    "temperature_mk": 10.0,
    "delta_over_omega_m": 0.5,
    "detuning_mode": "delta_c",
    "r_b": 0.0,
    "theta_rad": 0.0,
}

CONFIG_KEYS = tuple(CONFIG_DEFAULTS)


def g1_to_rad_per_s(g1, convention):
    if convention == "hz_times_2pi":
        return TWO_PI * g1
    if convention == "rad_per_s":
        return float(g1)
    raise ConfigError(f"unknown g1_convention: {convention!r}")


def parse_config(doc):
    """Parse a flat config mapping into (PhysicalParams, detuning_mode).

    Unknown keys are rejected with the offending key named; missing keys
    fall back to the defaults above.
    """
    for key in doc:
        if key not in CONFIG_DEFAULTS:
            raise ConfigError(f"unknown config key: {key!r}")
    merged = dict(CONFIG_DEFAULTS)
    merged.update(doc)

    mode = merged["detuning_mode"]
    if mode not in DETUNING_MODES:
        raise ConfigError(f"unknown detuning_mode: {mode!r}")

    omega_m = TWO_PI * float(merged["omega_m_hz"])
    g_1 = g1_to_rad_per_s(float(merged["g1"]), merged["g1_convention"])
    params = PhysicalParams(
        omega_m=omega_m,
        gamma_m=TWO_PI * float(merged["gamma_m_hz"]),
        kappa_1=TWO_PI * float(merged["kappa1_hz"]),
        kappa_2=TWO_PI * float(merged["kappa2_hz"]),
        g_1=g_1,
        g_2=float(merged["g2_over_g1"]) * g_1,
        drive_wavelength=float(merged["wavelength_nm"]) * 1e-9,
        drive_power=float(merged["power_mw"]) * 1e-3,
        temperature=float(merged["temperature_mk"]) * 1e-3,
        delta_c=float(merged["delta_over_omega_m"]) * omega_m,
        r_b=float(merged["r_b"]),
        theta=float(merged["theta_rad"]),
    )
    return params, mode


def emit_config(params, detuning_mode="delta_c", g1_convention="hz_times_2pi"):
    """Re-emit a PhysicalParams record as a config document.

    Round-trips with parse_config to better than 12 significant digits.
    """
    if g1_convention == "hz_times_2pi":
        g1 = params.g_1 / TWO_PI
    elif g1_convention == "rad_per_s":
        g1 = params.g_1
    else:
        raise ConfigError(f"unknown g1_convention: {g1_convention!r}")
    return {
        "omega_m_hz": params.omega_m / TWO_PI,
        "gamma_m_hz": params.gamma_m / TWO_PI,
        "kappa1_hz": params.kappa_1 / TWO_PI,
        "kappa2_hz": params.kappa_2 / TWO_PI,
        "g1": g1,
        "g1_convention": g1_convention,
        "g2_over_g1": params.g_2 / params.g_1 if params.g_1 != 0.0 else 0.0,
        "wavelength_nm": params.drive_wavelength * 1e9,
        "power_mw": params.drive_power * 1e3,
        "temperature_mk": params.temperature * 1e3,
        "delta_over_omega_m": params.delta_c / params.omega_m,
        "detuning_mode": detuning_mode,
        "r_b": params.r_b,
        "theta_rad": params.theta,
    }
