"""Mean-field fixed point and effective linearized parameters.

The steady state of the nonlinear mean-field equations reduces, after
eliminating q_s and the cavity phase, to a single polynomial in the
intracavity photon number n = |alpha_s|^2 (degree 5 for g2 != 0, the
familiar bistability cubic for g2 = 0). Roots are found via the companion
matrix, filtered to the physical set, and Newton-polished on the exact
fixed-point relation.

A noise-free integrator of the full nonlinear mean-field ODEs is provided
as an independent oracle for the algebraic solution.
"""

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial
from scipy.integrate import solve_ivp

from .errors import (InvalidParameterError, NearSingularSofteningError,
                     NoPhysicalRootError)

# Relative distance to the softening pole omega_m/(2 g_2) below which a
# root is rejected as numerically meaningless.
POLE_GUARD = 1e-6

# Both lines of the fixed-point algebra must hold to this relative tolerance.
ROOT_RTOL = 1e-10


@dataclass(frozen=True)
class EffectiveModel:
    """Steady-state means and the effective linearized parameters."""

    alpha_s: float        # intracavity amplitude, re-phased real nonnegative
    photon_number: float  # n = |alpha_s|^2
    q_s: float            # static membrane displacement (quadrature units)
    p_s: float            # static momentum, exactly 0
    delta_bar: float      # effective detuning, rad/s
    delta_c: float        # bare detuning consistent with delta_bar, rad/s
    omega_eff: float      # Omega_m = omega_m - 2 g_2 n, rad/s
    lambda_eff: float     # lambda = (g_1 + 2 g_2 q_s) alpha_s, rad/s
    branch_count: int     # number of admissible fixed-point branches
    branches: tuple       # all admissible photon numbers, ascending


def effective_frequency(omega_m, g_2, photon_number):
    """Effective membrane frequency Omega_m = omega_m - 2 g_2 n.

    Stiffens the membrane for g_2 < 0, softens it for g_2 > 0; may go
    negative, in which case the drift matrix is flagged unstable downstream.
    """
    return omega_m - 2.0 * g_2 * photon_number


def _mean_field_cavity(params, feedback_in_mean_field):
    """(kappa, detuning offset) seen by the mean field.

    The fluctuation dynamics always use the feedback-modified cavity; the
    mean field uses the bare one unless the sensitivity flag is set.
    """
    if not feedback_in_mean_field:
        return params.kappa_tot, 0.0
    shift = 2.0 * math.sqrt(params.kappa_1 * params.kappa_2) * params.r_b
    return (params.kappa_tot - shift * math.cos(params.theta),
            shift * math.sin(params.theta))


def _fixed_point_residual(n, params, kappa, delta_drive):
    """n * (delta_eff(n)^2 + kappa^2) - eps^2, and delta_bar(n)."""
    w = params.omega_m - 2.0 * params.g_2 * n
    q_s = params.g_1 * n / w
    delta_bar = params.delta_c - params.g_1 * q_s - params.g_2 * q_s * q_s
    eps = params.epsilon_d
    return n * ((delta_bar - delta_drive) ** 2 + kappa ** 2) - eps * eps, delta_bar


def enumerate_photon_branches(params, feedback_in_mean_field=False):
    """All admissible photon-number roots of the fixed-point polynomial,
    ascending.

    Admissible: real, nonnegative, away from the softening pole
    n = omega_m / (2 g_2).
    """
    kappa, delta_drive = _mean_field_cavity(params, feedback_in_mean_field)
    eps = params.epsilon_d
    if eps == 0.0:
        return [0.0]

    # Nondimensionalize: rates in units of omega_m, n in units of n0.
    u = params.omega_m
    kp = kappa / u
    dc = (params.delta_c - delta_drive) / u
    g1 = params.g_1 / u
    g2 = params.g_2 / u
    ep = eps / u
    n0 = ep * ep / (kp * kp)   # photon number at zero effective detuning

    x = Polynomial([0.0, 1.0])
    w = Polynomial([1.0, -2.0 * g2 * n0])
    b = dc * w ** 2 - (g1 * g1 * n0) * x * w - (g2 * g1 * g1 * n0 * n0) * x ** 2
    p = (n0 * x) * (b ** 2 + (kp * kp) * w ** 4) - (ep * ep) * w ** 4
    coeffs = p.coef.copy()
    # Drop numerically-vanished leading coefficients (exactly zero for g2=0).
    scale = np.max(np.abs(coeffs))
    while len(coeffs) > 1 and abs(coeffs[-1]) <= 1e-14 * scale:
        coeffs = coeffs[:-1]
    roots = Polynomial(coeffs).roots()

    n_pole = params.omega_m / (2.0 * params.g_2) if params.g_2 != 0.0 else None
    found = []
    for r in roots:
        if abs(r.imag) > 1e-7 * max(1.0, abs(r.real)):
            continue
        n = r.real * n0
        if n < -1e-12 * n0:
            continue
        n = max(n, 0.0)
        # Newton polish on the exact residual (the companion matrix is only
        # a starting point; the acceptance bar is 1e-10 relative).
        for _ in range(60):
            f, _ = _fixed_point_residual(n, params, kappa, delta_drive)
            h = max(abs(n), n0) * 1e-8
            fp, _ = _fixed_point_residual(n + h, params, kappa, delta_drive)
            fm, _ = _fixed_point_residual(n - h, params, kappa, delta_drive)
            deriv = (fp - fm) / (2.0 * h)
            if deriv == 0.0:
                break
            step = f / deriv
            n -= step
            if abs(step) <= 1e-15 * max(abs(n), 1.0):
                break
        if n < 0.0:
            continue
        if n_pole is not None and abs(n - n_pole) <= POLE_GUARD * abs(n_pole):
            continue
        f, _ = _fixed_point_residual(n, params, kappa, delta_drive)
        if abs(f) > ROOT_RTOL * eps * eps:
            continue
        found.append(n)

    found.sort()
    deduped = []
    for n in found:
        if deduped and abs(n - deduped[-1]) <= 1e-8 * max(deduped[-1], n0):
            continue
        deduped.append(n)
    return deduped


def _model_from_photon_number(n, params, delta_c, branches):
    w = params.omega_m - 2.0 * params.g_2 * n
    if params.g_2 != 0.0:
        n_pole = params.omega_m / (2.0 * params.g_2)
        if abs(n - n_pole) <= POLE_GUARD * abs(n_pole):
            raise NearSingularSofteningError(
                "photon number sits on the softening pole omega_m/(2 g_2)")
    q_s = params.g_1 * n / w
    delta_bar = delta_c - params.g_1 * q_s - params.g_2 * q_s * q_s
    alpha_s = math.sqrt(n)
    return EffectiveModel(
        alpha_s=alpha_s,
        photon_number=n,
        q_s=q_s,
        p_s=0.0,
        delta_bar=delta_bar,
        delta_c=delta_c,
        omega_eff=effective_frequency(params.omega_m, params.g_2, n),
        lambda_eff=(params.g_1 + 2.0 * params.g_2 * q_s) * alpha_s,
        branch_count=len(branches),
        branches=tuple(branches),
    )


def solve_mean_field(params, detuning_mode="delta_c", branch="lowest",
                     feedback_in_mean_field=False):
    """Solve the steady-state mean field and return an EffectiveModel.

    In `delta_c` mode params.delta_c is the bare detuning and the fixed
    point is solved self-consistently; in `delta_bar` / `delta_tilde` modes
    the effective detuning is fixed directly and the bare detuning is
    back-computed. `branch` selects among multiple admissible roots:
    "lowest" (default, the branch continuously connected to zero drive),
    "highest", or an integer index into the ascending root list.
    """
    if detuning_mode == "delta_c":
        branches = enumerate_photon_branches(params, feedback_in_mean_field)
        if not branches:
            raise NoPhysicalRootError(
                "mean-field polynomial has no admissible root")
        if branch == "lowest":
            n = branches[0]
        elif branch == "highest":
            n = branches[-1]
        else:
            try:
                n = branches[int(branch)]
            except (IndexError, ValueError) as exc:
                raise InvalidParameterError(
                    f"bad branch selector: {branch!r}") from exc
        return _model_from_photon_number(n, params, params.delta_c, branches)

    if detuning_mode == "delta_bar":
        delta_bar = params.delta_c
    elif detuning_mode == "delta_tilde":
        delta_bar = params.delta_c + (2.0
                                      * math.sqrt(params.kappa_1 * params.kappa_2)
                                      * params.r_b * math.sin(params.theta))
    else:
        raise InvalidParameterError(f"unknown detuning_mode: {detuning_mode!r}")

    kappa, delta_drive = _mean_field_cavity(params, feedback_in_mean_field)
    n = params.epsilon_d ** 2 / ((delta_bar - delta_drive) ** 2 + kappa ** 2)
    w = params.omega_m - 2.0 * params.g_2 * n
    if params.g_2 != 0.0:
        n_pole = params.omega_m / (2.0 * params.g_2)
        if abs(n - n_pole) <= POLE_GUARD * abs(n_pole):
            raise NearSingularSofteningError(
                "photon number sits on the softening pole omega_m/(2 g_2)")
    q_s = params.g_1 * n / w
    delta_c = delta_bar + params.g_1 * q_s + params.g_2 * q_s * q_s
    alpha_s = math.sqrt(n)
    return EffectiveModel(
        alpha_s=alpha_s,
        photon_number=n,
        q_s=q_s,
        p_s=0.0,
        delta_bar=delta_bar,
        delta_c=delta_c,
        omega_eff=effective_frequency(params.omega_m, params.g_2, n),
        lambda_eff=(params.g_1 + 2.0 * params.g_2 * q_s) * alpha_s,
        branch_count=1,
        branches=(n,),
    )


@dataclass(frozen=True)
class Trajectory:
    """Noise-free mean-field trajectory (oracle for solve_mean_field)."""

    t: np.ndarray
    q: np.ndarray
    p: np.ndarray
    alpha: np.ndarray
    converged: bool
    final_state: tuple    # (q, p, Re alpha, Im alpha)

    @property
    def final_photon_number(self):
        return abs(self.alpha[-1]) ** 2


def mean_field_trajectory(params, t_end, initial=(0.0, 0.0, 0.0, 0.0),
                          n_samples=400, rtol=1e-10):
    """Integrate the deterministic nonlinear mean-field ODEs.

    Convergence is declared when the state changes by less than 1e-10
    (relative) over the final mechanical period; non-convergence is
    reported, not raised.
    """
    if t_end <= 0.0:
        raise InvalidParameterError("t_end must be positive")
    om, gm = params.omega_m, params.gamma_m
    g1, g2 = params.g_1, params.g_2
    dc, kt = params.delta_c, params.kappa_tot
    eps = params.epsilon_d

    def rhs(_t, y):
        q, p = y[0], y[1]
        alpha = y[2] + 1j * y[3]
        n = (alpha * alpha.conjugate()).real
        dq = om * p
        dp = -om * q - gm * p + g1 * n + 2.0 * g2 * n * q
        da = (-(1j * dc + kt) * alpha + 1j * g1 * alpha * q
              + 1j * g2 * alpha * q * q + eps)
        return [dq, dp, da.real, da.imag]

    period = 2.0 * math.pi / om
    t_eval = np.unique(np.concatenate([
        np.linspace(0.0, t_end, n_samples),
        [max(t_end - period, 0.0), t_end],
    ]))
    sol = solve_ivp(rhs, (0.0, t_end), list(initial), method="LSODA",
                    t_eval=t_eval, rtol=rtol, atol=1e-12 * max(1.0, eps / kt))
    y = sol.y
    alpha = y[2] + 1j * y[3]

    final = np.array([y[0, -1], y[1, -1], y[2, -1], y[3, -1]])
    prev_idx = int(np.searchsorted(sol.t, max(t_end - period, 0.0)))
    prev = y[:, prev_idx]
    scale = max(float(np.max(np.abs(final))), 1.0)
    converged = bool(np.max(np.abs(final - prev)) <= 1e-10 * scale)

    return Trajectory(t=sol.t, q=y[0], p=y[1], alpha=alpha,
                      converged=converged, final_state=tuple(final))
