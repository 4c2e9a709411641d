"""Unit tests for drift/diffusion assembly, stability, and Lyapunov solves."""

import math
from types import SimpleNamespace

import numpy as np
import pytest
import scipy.linalg

from comtool.dynamics import (assess_stability, build_diffusion, build_drift,
                              characteristic_coefficients, integrate_cm,
                              lyapunov_residual, routh_hurwitz_quartic,
                              solve_lyapunov)
from comtool.errors import NoSteadyStateError

TWO_PI = 2.0 * math.pi
OMEGA_M = TWO_PI * 10e6


def make_drift(omega_eff=OMEGA_M, lam=0.3 * OMEGA_M, gamma=TWO_PI * 100.0,
               kappa=0.3 * OMEGA_M, delta=0.5 * OMEGA_M):
    model = SimpleNamespace(omega_eff=omega_eff, lambda_eff=lam)
    cavity = SimpleNamespace(kappa_tilde=kappa, delta_tilde=delta)
    return build_drift(model, cavity, gamma, OMEGA_M)


def test_drift_layout():
    a = make_drift()
    lam = math.sqrt(2.0) * 0.3 * OMEGA_M
    expected = np.array([
        [0.0, OMEGA_M, 0.0, 0.0],
        [-OMEGA_M, -TWO_PI * 100.0, lam, 0.0],
        [0.0, 0.0, -0.3 * OMEGA_M, 0.5 * OMEGA_M],
        [lam, 0.0, -0.5 * OMEGA_M, -0.3 * OMEGA_M],
    ])
    np.testing.assert_allclose(a, expected, rtol=1e-14)


def test_decoupled_optical_block_rotates_stably():
    """With lambda = 0 the optical block is a damped rotation: eigenvalues
    -kappa +/- i delta, stable for any detuning sign."""
    for delta in (0.5 * OMEGA_M, -0.5 * OMEGA_M, 2.0 * OMEGA_M):
        a = make_drift(lam=0.0, delta=delta)
        eigs = np.linalg.eigvals(a[2:, 2:])
        np.testing.assert_allclose(sorted(eigs.real),
                                   [-0.3 * OMEGA_M] * 2, rtol=1e-12)
        np.testing.assert_allclose(sorted(eigs.imag),
                                   sorted([delta, -delta]), rtol=1e-12)
        assert assess_stability(a, freq_scale=OMEGA_M).stable


def test_diffusion_layout():
    d = build_diffusion(TWO_PI * 100.0, 20.0, 0.6 * OMEGA_M)
    np.testing.assert_allclose(
        d, np.diag([0.0, TWO_PI * 100.0 * 41.0, 0.6 * OMEGA_M, 0.6 * OMEGA_M]))


def test_characteristic_coefficients_against_numpy():
    rng = np.random.default_rng(42)
    for _ in range(50):
        a = rng.normal(size=(4, 4))
        coeffs = characteristic_coefficients(a)
        np.testing.assert_allclose(coeffs, np.poly(a), rtol=1e-9, atol=1e-9)


def test_routh_hurwitz_against_eigenvalues():
    rng = np.random.default_rng(7)
    for _ in range(150):
        raw = rng.normal(size=(4, 4))
        margin = float(np.max(np.linalg.eigvals(raw).real))
        # The raw draw (usually non-Hurwitz) and a shifted Hurwitz copy.
        for a in (raw, raw - (margin + 0.5) * np.eye(4)):
            m = float(np.max(np.linalg.eigvals(a).real))
            if abs(m) < 1e-6:
                continue
            verdict = routh_hurwitz_quartic(characteristic_coefficients(a))
            assert verdict == (m < 0.0)


def test_assess_stability_margin_and_agreement():
    a = make_drift()
    report = assess_stability(a, freq_scale=OMEGA_M)
    assert report.method_agreement
    assert report.margin == pytest.approx(
        float(np.max(np.linalg.eigvals(a).real)), rel=1e-9)
    # Blue detuning with strong coupling parametrically amplifies the
    # mechanics: not Hurwitz.
    unstable = make_drift(lam=0.5 * OMEGA_M, delta=-0.5 * OMEGA_M)
    report = assess_stability(unstable, freq_scale=OMEGA_M)
    assert not report.stable
    assert report.margin > 0.0


def test_lyapunov_against_scipy():
    rng = np.random.default_rng(11)
    for _ in range(30):
        raw = rng.normal(size=(4, 4))
        a = raw - (np.max(np.linalg.eigvals(raw).real) + 0.5) * np.eye(4)
        g = rng.normal(size=(4, 4))
        d = g @ g.T + 1e-3 * np.eye(4)
        v = solve_lyapunov(a, d)
        v_ref = scipy.linalg.solve_lyapunov(a, -d)
        np.testing.assert_allclose(v, v_ref, rtol=1e-8, atol=1e-10)
        assert lyapunov_residual(a, d, v) < 1e-10


def test_lyapunov_analytic_decoupled_limit():
    """lambda = 0: optical variances are exactly vacuum (1/2) and the
    mechanical block has the closed-form thermal solution."""
    gamma = TWO_PI * 100.0
    n_m = 20.0
    for omega_eff in (OMEGA_M, 1.7 * OMEGA_M, 0.4 * OMEGA_M):
        a = make_drift(omega_eff=omega_eff, lam=0.0, gamma=gamma)
        d = build_diffusion(gamma, n_m, 0.3 * OMEGA_M)
        v = solve_lyapunov(a, d)
        assert v[2, 2] == pytest.approx(0.5, rel=1e-10)
        assert v[3, 3] == pytest.approx(0.5, rel=1e-10)
        assert v[0, 0] == pytest.approx(
            (OMEGA_M / omega_eff) * (n_m + 0.5), rel=1e-10)
        assert v[1, 1] == pytest.approx(n_m + 0.5, rel=1e-10)
        assert abs(v[0, 1]) < 1e-6 * v[0, 0]


def test_lyapunov_rejects_unstable_drift():
    a = np.diag([1.0, -1.0, -2.0, -3.0])
    with pytest.raises(NoSteadyStateError):
        solve_lyapunov(a, np.eye(4))


def test_integrate_cm_matches_lyapunov():
    a = make_drift()
    d = build_diffusion(TWO_PI * 100.0, 20.0, 0.3 * OMEGA_M)
    report = assess_stability(a, freq_scale=OMEGA_M)
    assert report.stable
    v_direct = solve_lyapunov(a, d)
    t_end = 60.0 / abs(report.margin)
    v_ode = integrate_cm(a, d, np.zeros((4, 4)), t_end)
    np.testing.assert_allclose(v_ode, v_direct, rtol=1e-8, atol=1e-12)
    # Steady state is independent of the initial covariance.
    v_ode2 = integrate_cm(a, d, np.diag([5.0, 5.0, 0.5, 0.5]), t_end)
    np.testing.assert_allclose(v_ode2, v_direct, rtol=1e-8, atol=1e-12)


def test_integrate_cm_finite_time_homogeneous():
    """With D = 0 the flow is exactly V(t) = e^{At} V0 e^{A^T t}."""
    a = make_drift()
    v0 = np.diag([2.0, 1.0, 0.5, 0.5])
    t = 3.0 / OMEGA_M
    v = integrate_cm(a, np.zeros((4, 4)), v0, t)
    phi = scipy.linalg.expm(a * t)
    np.testing.assert_allclose(v, phi @ v0 @ phi.T, rtol=1e-9, atol=1e-12)
