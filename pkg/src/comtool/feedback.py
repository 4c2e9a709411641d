"""Coherent feedback loop: effective cavity decay, detuning, and noise checks.

Routing the right-mirror output back into the left mirror through a beam
splitter replaces the bare cavity decay and detuning with

    kappa_tilde = kappa_1 + kappa_2 - 2 sqrt(kappa_1 kappa_2) r_B cos(theta)
    delta_tilde = delta_bar    - 2 sqrt(kappa_1 kappa_2) r_B sin(theta)

while the recombined input noise stays vacuum-normalized.
"""

import cmath
import math
from dataclasses import dataclass

from .constants import C_LIGHT
from .errors import InvalidParameterError


@dataclass(frozen=True)
class FeedbackLoop:
    """Lossless beam-splitter loop; loop losses are folded into r_b."""

    r_b: float
    theta: float

    def __post_init__(self):
        if not 0.0 <= self.r_b < 1.0:
            raise InvalidParameterError("r_b must satisfy 0 <= r_b < 1")

    @property
    def t_b(self):
        return math.sqrt(1.0 - self.r_b * self.r_b)


@dataclass(frozen=True)
class EffectiveCavity:
    kappa_tilde: float   # rad/s
    delta_tilde: float   # rad/s
    eta: float           # decay ratio kappa_tilde / kappa_tot


def effective_cavity(kappa_1, kappa_2, loop, delta_bar):
    """Feedback-modified cavity decay/detuning and the decay ratio eta.

    kappa_tilde > 0 is guaranteed for r_b < 1 since
    2 sqrt(kappa_1 kappa_2) <= kappa_1 + kappa_2.
    """
    if kappa_1 <= 0.0 or kappa_2 <= 0.0:
        raise InvalidParameterError("decay rates must be positive")
    shift = 2.0 * math.sqrt(kappa_1 * kappa_2) * loop.r_b
    kappa_tot = kappa_1 + kappa_2
    kappa_tilde = kappa_tot - shift * math.cos(loop.theta)
    delta_tilde = delta_bar - shift * math.sin(loop.theta)
    return EffectiveCavity(kappa_tilde=kappa_tilde, delta_tilde=delta_tilde,
                           eta=kappa_tilde / kappa_tot)


def noise_normalization_residual(kappa_1, kappa_2, loop):
    """Residual of the vacuum normalization of the recombined input noise.

    |t_B^2 k1 + |sqrt(k2) - sqrt(k1) r_B e^{i theta}|^2 - kappa_tilde| /
    kappa_tilde; an algebraic identity, so it must vanish to rounding for
    every input.
    """
    kappa_tilde = effective_cavity(kappa_1, kappa_2, loop, 0.0).kappa_tilde
    mix = math.sqrt(kappa_2) - math.sqrt(kappa_1) * loop.r_b * cmath.exp(1j * loop.theta)
    total = loop.t_b ** 2 * kappa_1 + abs(mix) ** 2
    return abs(total - kappa_tilde) / kappa_tilde


@dataclass(frozen=True)
class DelayReport:
    delay: float      # s
    lifetime: float   # s
    valid: bool


def delay_validity(loop_length, kappa_tilde, refractive_index=1.0):
    """Check the instantaneous-feedback approximation.

    The loop delay must be small against the effective cavity lifetime;
    flagged invalid when delay > 0.01 / kappa_tilde. Advisory only.
    """
    if loop_length < 0.0:
        raise InvalidParameterError("loop_length must be nonnegative")
    delay = refractive_index * loop_length / C_LIGHT
    lifetime = 1.0 / kappa_tilde
    return DelayReport(delay=delay, lifetime=lifetime,
                       valid=delay <= 0.01 * lifetime)
