"""Drift/diffusion assembly, stability, and the steady-state Lyapunov solve.

Basis ordering is the shared (dq, dp, dX, dY) constant: mechanical
quadratures first, optical second. The drift matrix is

        [  0       omega_m   0             0          ]
    A = [ -Omega_m -gamma_m  sqrt(2) lam   0          ]
        [  0        0       -kappa_tilde  delta_tilde ]
        [ sqrt(2) lam  0    -delta_tilde -kappa_tilde ]

i.e. the optical block is the usual damped rotation at delta_tilde; this
follows from writing the linearized cavity equation in quadratures.
"""

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import InternalConsistencyError, NoSteadyStateError

# Stability margins within this relative band of the frequency scale are
# treated as marginal and classified unstable (Lyapunov conditioning
# explodes at marginality).
MARGINAL_BAND = 1e-9
# Outside this band the Routh-Hurwitz and eigenvalue verdicts must agree.
AGREEMENT_BAND = 1e-6


def build_drift(model, cavity, gamma_m, omega_m):
    """4x4 drift matrix from the effective model and feedback cavity."""
    lam = np.sqrt(2.0) * model.lambda_eff
    return np.array([
        [0.0, omega_m, 0.0, 0.0],
        [-model.omega_eff, -gamma_m, lam, 0.0],
        [0.0, 0.0, -cavity.kappa_tilde, cavity.delta_tilde],
        [lam, 0.0, -cavity.delta_tilde, -cavity.kappa_tilde],
    ])


def build_diffusion(gamma_m, n_m, kappa_tilde):
    """Diffusion matrix diag[0, gamma_m (2 n_m + 1), kappa_tilde, kappa_tilde]."""
    return np.diag([0.0, gamma_m * (2.0 * n_m + 1.0), kappa_tilde, kappa_tilde])


def characteristic_coefficients(a):
    """Monic characteristic polynomial coefficients [1, c1, c2, c3, c4]
    via Faddeev-LeVerrier (trace recursion; no eigensolver involved)."""
    n = a.shape[0]
    coeffs = [1.0]
    m = np.array(a, dtype=float)
    for k in range(1, n + 1):
        ck = -np.trace(m) / k
        coeffs.append(ck)
        if k < n:
            m = a @ (m + ck * np.eye(n))
    return np.array(coeffs)


def routh_hurwitz_quartic(coeffs):
    """Hurwitz verdict for s^4 + b3 s^3 + b2 s^2 + b1 s + b0."""
    _, b3, b2, b1, b0 = (float(c) for c in coeffs)
    if min(b3, b2, b1, b0) <= 0.0:
        return False
    return b1 * (b3 * b2 - b1) > b3 * b3 * b0


@dataclass(frozen=True)
class StabilityReport:
    stable: bool
    margin: float            # max real part of the drift eigenvalues, rad/s
    method_agreement: bool


def assess_stability(a, freq_scale=None):
    """Stability of the drift matrix by two independent methods.

    Routh-Hurwitz on the (balanced) characteristic quartic is the primary
    verdict; eigenvalues provide the margin and the cross-check. Marginal
    spectra (|margin| < 1e-9 of the frequency scale) are conservatively
    classified unstable.
    """
    if freq_scale is None:
        freq_scale = max(float(np.max(np.abs(a))), 1.0)
    scaled = np.asarray(a, dtype=float) / freq_scale

    rh_stable = routh_hurwitz_quartic(characteristic_coefficients(scaled))
    margin_scaled = float(np.max(np.linalg.eigvals(scaled).real))
    eig_stable = margin_scaled < -MARGINAL_BAND

    if abs(margin_scaled) > AGREEMENT_BAND and rh_stable != eig_stable:
        raise InternalConsistencyError(
            f"Routh-Hurwitz ({rh_stable}) and eigenvalue ({eig_stable}) "
            f"stability verdicts disagree at margin {margin_scaled * freq_scale:g}")

    stable = bool(rh_stable and eig_stable)
    return StabilityReport(stable=stable, margin=margin_scaled * freq_scale,
                           method_agreement=bool(rh_stable == eig_stable
                           or abs(margin_scaled) <= AGREEMENT_BAND))


def lyapunov_residual(a, d, v):
    """Relative Frobenius residual ||A V + V A^T + D|| / ||D||."""
    return float(np.linalg.norm(a @ v + v @ a.T + d)
                 / np.linalg.norm(d))


def solve_lyapunov(a, d, stability=None):
    """Steady-state covariance matrix: A V + V A^T = -D, via the 16x16
    Kronecker-sum linear system with dense LU.

    Raises NoSteadyStateError for non-Hurwitz A; warns when the vectorized
    system is badly conditioned.
    """
    if stability is None:
        stability = assess_stability(a)
    if not stability.stable:
        raise NoSteadyStateError(
            f"drift is not Hurwitz (margin {stability.margin:g} rad/s)")
    n = a.shape[0]
    eye = np.eye(n)
    k = np.kron(eye, a) + np.kron(a, eye)
    if np.linalg.cond(k) > 1e12:
        warnings.warn("Lyapunov system is ill-conditioned; covariance may "
                      "be inaccurate")
    v = np.linalg.solve(k, -d.ravel()).reshape(n, n)
    return 0.5 * (v + v.T)


def integrate_cm(a, d, v0, t_end):
    """Time-integrate the covariance flow dV/dt = A V + V A^T + D to t_end.

    Uses the exact one-step discretization V(h) = F V F^T + Q with
    F = expm(A h) and Q from the Van Loan block exponential, then doubles
    the step up to t_end. Independent of solve_lyapunov by construction.

    For stable A and t_end much longer than 1/|margin| the result converges
    to the steady-state covariance regardless of v0.
    """
    n = a.shape[0]
    norm = float(np.linalg.norm(a, 2))
    doublings = max(0, int(np.ceil(np.log2(max(norm * t_end, 1e-30) / 0.1))))
    h = t_end / (2.0 ** doublings)

    block = np.zeros((2 * n, 2 * n))
    block[:n, :n] = -a
    block[:n, n:] = d
    block[n:, n:] = a.T
    f = expm(block * h)
    phi = f[n:, n:].T                 # expm(A h)
    q = phi @ f[:n, n:]               # int_0^h expm(A s) D expm(A^T s) ds

    for _ in range(doublings):
        q = phi @ q @ phi.T + q
        phi = phi @ phi

    v = phi @ v0 @ phi.T + q
    return 0.5 * (v + v.T)
