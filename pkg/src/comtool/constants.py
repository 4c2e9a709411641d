"""Physical constants (CODATA 2018) and shared conventions.

All frequencies are stored internally as angular frequencies (rad/s).
Config files state frequencies as f = omega/2pi in Hz; conversion happens
exactly once, at config parse time.
"""

import numpy as np

HBAR = 1.054571817e-34   # reduced Planck constant, J s
K_B = 1.380649e-23       # Boltzmann constant, J/K (exact)
C_LIGHT = 299792458.0    # speed of light, m/s (exact)

TWO_PI = 2.0 * np.pi

# Quadrature basis shared by every module: mechanical first, optical second.
QUADRATURE_BASIS = ("dq", "dp", "dX", "dY")

# Symplectic form for the basis above, [q_j, p_j] = i in zpf = 1/2 units.
SYMPLECTIC_FORM = np.array([
    [0.0, 1.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
    [0.0, 0.0, -1.0, 0.0],
])
