"""Entanglement and squeezing measures on a two-mode covariance matrix.

All formulas use the zpf = 1/2 convention: vacuum variance 1/2, physical
symplectic eigenvalues >= 1/2.
"""

import math
from dataclasses import dataclass

import numpy as np

from .constants import SYMPLECTIC_FORM
from .errors import InternalConsistencyError, InvalidCovarianceError

# Sigma^2 - 4 det V values in [-CLAMP, 0) are rounding noise near pure
# states and are clamped to zero; anything more negative is an error.
DISCRIMINANT_CLAMP = 1e-12
DISCRIMINANT_ERROR = 1e-9

PHYSICALITY_SLACK = 1e-9


def split_blocks(v):
    """(mechanical block, optical block, cross block) of a 4x4 covariance."""
    v = np.asarray(v)
    return v[:2, :2], v[2:, 2:], v[:2, 2:]


def _check_symmetric(v):
    v = np.asarray(v, dtype=float)
    if v.shape != (4, 4):
        raise InvalidCovarianceError("covariance matrix must be 4x4")
    if np.max(np.abs(v - v.T)) > 1e-9 * max(1.0, float(np.max(np.abs(v)))):
        raise InvalidCovarianceError("covariance matrix is not symmetric")
    return 0.5 * (v + v.T)


@dataclass(frozen=True)
class EntanglementResult:
    nu_minus: float   # minimum symplectic eigenvalue of the partial transpose
    e_n: float        # logarithmic negativity
    sigma_v: float    # det A + det B - 2 det C


def log_negativity(v):
    """Logarithmic negativity E_N = max(0, -ln 2 nu_minus) of a two-mode
    covariance matrix.

    nu_minus is the smaller symplectic eigenvalue of the partial transpose;
    the modes are entangled iff nu_minus < 1/2.
    """
    v = _check_symmetric(v)
    block_a, block_b, block_c = split_blocks(v)
    sigma = (np.linalg.det(block_a) + np.linalg.det(block_b)
             - 2.0 * np.linalg.det(block_c))
    det_v = np.linalg.det(v)
    disc = sigma * sigma - 4.0 * det_v
    if disc < 0.0:
        if disc < -DISCRIMINANT_ERROR:
            raise InvalidCovarianceError(
                f"Sigma^2 - 4 det V = {disc:g} is significantly negative")
        disc = 0.0
    nu_minus = math.sqrt((sigma - math.sqrt(disc)) / 2.0)
    e_n = max(0.0, -math.log(2.0 * nu_minus))
    return EntanglementResult(nu_minus=nu_minus, e_n=e_n, sigma_v=float(sigma))


@dataclass(frozen=True)
class SqueezingResult:
    s_q: float       # dB
    s_p: float       # dB
    sigma_q: float   # mechanical position variance
    sigma_p: float   # mechanical momentum variance


def squeezing_degrees(v):
    """Mechanical quadrature squeezing degrees S_j = -10 log10(sigma_j / (1/2)).

    S_j > 0 means squeezing below the zero-point fluctuation; S_j > 3 beats
    the 3 dB limit (variance below a quarter).
    """
    v = _check_symmetric(v)
    sigma_q = float(v[0, 0])
    sigma_p = float(v[1, 1])
    if sigma_q <= 0.0 or sigma_p <= 0.0:
        raise InvalidCovarianceError("nonpositive mechanical variance")
    s_q = -10.0 * math.log10(sigma_q / 0.5)
    s_p = -10.0 * math.log10(sigma_p / 0.5)
    return SqueezingResult(s_q=s_q, s_p=s_p, sigma_q=sigma_q, sigma_p=sigma_p)


@dataclass(frozen=True)
class PhysicalityReport:
    nu_tilde_min: float   # minimum symplectic eigenvalue of V itself
    physical: bool


def physicality(v):
    """Heisenberg check: the symplectic eigenvalues of V must be >= 1/2.

    The spectrum of i Omega V is the primary value (accurate to rounding
    even for pure states sitting exactly on the boundary); the two-mode
    block-determinant formula (with + 2 det C, i.e. no partial transpose)
    is kept as a cross-check. The formula loses up to ~1e-7 near
    degenerate symplectic spectra because of the Sigma^2 - 4 det V
    cancellation, hence the looser agreement tolerance.
    """
    v = _check_symmetric(v)
    spectrum = np.abs(np.linalg.eigvals(1j * SYMPLECTIC_FORM @ v))
    nu_min = float(np.min(spectrum))

    block_a, block_b, block_c = split_blocks(v)
    sigma = (np.linalg.det(block_a) + np.linalg.det(block_b)
             + 2.0 * np.linalg.det(block_c))
    det_v = np.linalg.det(v)
    disc = max(sigma * sigma - 4.0 * det_v, 0.0)
    nu_min_formula = math.sqrt(max((sigma - math.sqrt(disc)) / 2.0, 0.0))
    if abs(nu_min - nu_min_formula) > 1e-6 * max(1.0, abs(sigma)):
        raise InternalConsistencyError(
            f"symplectic eigenvalue mismatch: {nu_min:g} vs "
            f"{nu_min_formula:g}")

    return PhysicalityReport(nu_tilde_min=nu_min,
                             physical=nu_min >= 0.5 - PHYSICALITY_SLACK)
