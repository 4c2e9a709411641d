"""Steady-state entanglement and mechanical squeezing for a membrane cavity
with linear + quadratic optomechanical coupling and coherent feedback."""

from .constants import QUADRATURE_BASIS
from .dynamics import (assess_stability, build_diffusion, build_drift,
                       integrate_cm, lyapunov_residual, solve_lyapunov)
from .errors import ComToolError
from .feedback import (FeedbackLoop, delay_validity, effective_cavity,
                       noise_normalization_residual)
from .measures import log_negativity, physicality, squeezing_degrees
from .membrane import (MembraneGeometry, cavity_frequency_profile,
                       expand_couplings)
from .params import (PhysicalParams, drive_amplitude, emit_config,
                     mechanical_quality, parse_config, thermal_occupancy)
from .steady import (EffectiveModel, effective_frequency,
                     enumerate_photon_branches, mean_field_trajectory,
                     solve_mean_field)
from .sweep import (Axis, ResultRecord, SweepSpec, emit, grid_argmax, preset,
                    run_point, run_sweep)

__version__ = "0.1.0"
