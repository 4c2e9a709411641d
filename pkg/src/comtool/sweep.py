"""Parameter sweeps: grids, figure presets, stability gating, CSV/JSON output.

A sweep point runs the whole pipeline (mean field -> feedback -> drift and
diffusion -> stability -> Lyapunov -> measures). Unstable or errored points
are emitted with a flag and empty measure fields rather than dropped: the
instability boundary is part of the result.
"""

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import dynamics, measures
from .errors import ComToolError, ConfigError
from .feedback import FeedbackLoop, effective_cavity
from .params import parse_config
from .steady import solve_mean_field

TWO_PI = 2.0 * math.pi

# Sweepable parameter name -> config key.
AXIS_KEYS = {
    "delta": "delta_over_omega_m",
    "g2_over_g1": "g2_over_g1",
    "r_b": "r_b",
    "theta": "theta_rad",
    "power_mw": "power_mw",
    "temperature_mk": "temperature_mk",
}

RECORD_FIELDS = (
    "stable", "e_n", "s_q", "s_p", "nu_minus", "nu_tilde_min", "eta",
    "omega_eff_over_omega_m", "photon_number", "lyapunov_residual",
    "stability_margin", "error",
)


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if self.name not in AXIS_KEYS:
            raise ConfigError(f"unknown sweep parameter: {self.name!r}")
        if self.count < 2:
            raise ConfigError("axis count must be >= 2")

    def values(self):
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class SweepSpec:
    base: dict                 # config document (see params.parse_config)
    axis1: Axis
    axis2: Axis = None
    outputs: str = "full"      # "full" | "eta" | "omega_eff"
    notes: str = ""

    def axis_names(self):
        names = [self.axis1.name]
        if self.axis2 is not None:
            names.append(self.axis2.name)
        return names


@dataclass
class ResultRecord:
    """One sweep point; measures are None when unstable or errored."""

    axes: dict = field(default_factory=dict)
    stable: bool = None
    e_n: float = None
    s_q: float = None
    s_p: float = None
    nu_minus: float = None
    nu_tilde_min: float = None
    eta: float = None
    omega_eff_over_omega_m: float = None
    photon_number: float = None
    lyapunov_residual: float = None
    stability_margin: float = None
    error: str = None

    def as_row(self, axis_names):
        row = {name: self.axes.get(name) for name in axis_names}
        for name in RECORD_FIELDS:
            row[name] = getattr(self, name)
        return row


def run_point(params, detuning_mode="delta_c", outputs="full",
              branch="lowest"):
    """Evaluate the full pipeline at one parameter point.

    Never raises for physics-level failures (instability, no admissible
    root): those are captured in the record. Programming errors propagate.
    """
    record = ResultRecord()
    loop = FeedbackLoop(r_b=params.r_b, theta=params.theta)
    try:
        model = solve_mean_field(params, detuning_mode=detuning_mode,
                                 branch=branch)
        cavity = effective_cavity(params.kappa_1, params.kappa_2, loop,
                                  model.delta_bar)
        record.eta = cavity.eta
        record.photon_number = model.photon_number
        record.omega_eff_over_omega_m = model.omega_eff / params.omega_m
        if outputs in ("eta", "omega_eff"):
            record.stable = True
            return record

        a = dynamics.build_drift(model, cavity, params.gamma_m, params.omega_m)
        d = dynamics.build_diffusion(params.gamma_m, params.n_m,
                                     cavity.kappa_tilde)
        stability = dynamics.assess_stability(a, freq_scale=params.omega_m)
        record.stability_margin = stability.margin
        record.stable = stability.stable
        if not stability.stable:
            return record

        v = dynamics.solve_lyapunov(a, d, stability=stability)
        record.lyapunov_residual = dynamics.lyapunov_residual(a, d, v)
        phys = measures.physicality(v)
        record.nu_tilde_min = phys.nu_tilde_min
        ent = measures.log_negativity(v)
        record.e_n = ent.e_n
        record.nu_minus = ent.nu_minus
        sq = measures.squeezing_degrees(v)
        record.s_q = sq.s_q
        record.s_p = sq.s_p
    except ComToolError as exc:
        record.error = f"{type(exc).__name__}: {exc}"
        record.stable = False
    return record


def _eval_config(task):
    """Worker entry point: (config doc, outputs, axes dict) -> ResultRecord."""
    doc, outputs, axes = task
    if outputs == "eta":
        # Closed form; skip the mean-field solve entirely.
        params, _mode = parse_config(doc)
        loop = FeedbackLoop(r_b=params.r_b, theta=params.theta)
        cavity = effective_cavity(params.kappa_1, params.kappa_2, loop, 0.0)
        record = ResultRecord(stable=True, eta=cavity.eta)
    else:
        params, mode = parse_config(doc)
        record = run_point(params, detuning_mode=mode, outputs=outputs)
    record.axes = axes
    return record


def _grid_tasks(spec):
    values1 = spec.axis1.values()
    values2 = spec.axis2.values() if spec.axis2 is not None else [None]
    tasks = []
    for v1 in values1:
        for v2 in values2:
            doc = dict(spec.base)
            axes = {spec.axis1.name: float(v1)}
            doc[AXIS_KEYS[spec.axis1.name]] = float(v1)
            if spec.axis2 is not None:
                axes[spec.axis2.name] = float(v2)
                doc[AXIS_KEYS[spec.axis2.name]] = float(v2)
            tasks.append((doc, spec.outputs, axes))
    return tasks


def run_sweep(spec, workers=1):
    """Evaluate the grid in deterministic row-major order (axis1 outer).

    Worker parallelism changes neither the values nor the row order.
    """
    tasks = _grid_tasks(spec)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunk = max(1, len(tasks) // (4 * workers))
            records = list(pool.map(_eval_config, tasks, chunksize=chunk))
    else:
        records = [_eval_config(task) for task in tasks]
    return records


def grid_argmax(records, key="e_n"):
    """(best record, value) over records where `key` is present."""
    best, best_value = None, -math.inf
    for record in records:
        value = getattr(record, key)
        if value is not None and value > best_value:
            best, best_value = record, value
    return best, best_value


# ---------------------------------------------------------------------------
# Emission
# ---------------------------------------------------------------------------

def _format_cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "%.17g" % value
    return str(value)


def emit(records, spec, fmt, path):
    """Write records as CSV (fixed header, 17 significant digits) or JSON.

    Reruns produce byte-identical files.
    """
    axis_names = spec.axis_names()
    rows = [record.as_row(axis_names) for record in records]
    header = axis_names + list(RECORD_FIELDS)
    if fmt == "csv":
        lines = [",".join(header)]
        for row in rows:
            lines.append(",".join(_format_cell(row[name]) for name in header))
        text = "\n".join(lines) + "\n"
    elif fmt == "json":
        text = json.dumps(rows, indent=1) + "\n"
    else:
        raise ConfigError(f"unknown output format: {fmt!r}")
    with open(path, "w") as handle:
        handle.write(text)
    return path


# ---------------------------------------------------------------------------
# Figure presets
# ---------------------------------------------------------------------------

# Calibrated conventions (see README): the g1 value is an angular frequency
# and the figure detuning axis is the bare detuning Delta_c.
CALIBRATED_G1_CONVENTION = "rad_per_s"
CALIBRATED_DETUNING_MODE = "delta_c"

BASE_ENTANGLEMENT = {
    "omega_m_hz": 10.0e6,
    "gamma_m_hz": 100.0,
    "kappa1_hz": 1.5e6,
    "kappa2_hz": 1.5e6,
    "g1": 1351.38,
    "g1_convention": CALIBRATED_G1_CONVENTION,
    "g2_over_g1": 0.0,
    "wavelength_nm": 810.0,
    "power_mw": 5.0,
    "temperature_mk": 10.0,
    "delta_over_omega_m": 0.5,
    "detuning_mode": CALIBRATED_DETUNING_MODE,
    "r_b": 0.0,
    "theta_rad": 0.0,
}

# The squeezing study uses an asymmetric cavity and a colder bath.
BASE_SQUEEZING = dict(BASE_ENTANGLEMENT, kappa1_hz=2.25e6, kappa2_hz=0.75e6,
                      temperature_mk=1.0)

PRESET_IDS = ("fig2a", "fig2b", "fig3a", "fig3b", "fig3c", "fig3d", "fig3e",
              "fig3f", "fig4a", "fig4b", "fig4c", "fig4d", "fig4e", "fig4f")


def preset(preset_id, count1=None, count2=None):
    """SweepSpec reproducing one of the parameter-study panels.

    count1/count2 override the default grid resolution (401 for 1D sweeps,
    101 x 101 for 2D maps).
    """
    def n1(default):
        return count1 if count1 is not None else default

    def n2(default):
        return count2 if count2 is not None else default

    base = dict(BASE_ENTANGLEMENT)
    if preset_id == "fig2a":
        base["delta_over_omega_m"] = 0.25
        return SweepSpec(base=base, outputs="omega_eff",
                         axis1=Axis("g2_over_g1", -1e-3, 1e-3, n1(401)),
                         notes="axis span and evaluation point are "
                               "unanchored defaults")
    if preset_id == "fig2b":
        return SweepSpec(base=base, outputs="eta",
                         axis1=Axis("r_b", 0.0, 0.99, n1(101)),
                         axis2=Axis("theta", 0.0, TWO_PI, n2(101)))
    if preset_id in ("fig3a", "fig3b"):
        if preset_id == "fig3b":
            base["r_b"], base["theta_rad"] = 0.2, 1.5 * math.pi
        return SweepSpec(base=base,
                         axis1=Axis("delta", 0.01, 1.2, n1(401)),
                         axis2=Axis("g2_over_g1", 0.0, 6e-5, n2(4)))
    if preset_id == "fig3c":
        base["r_b"], base["g2_over_g1"] = 0.5, 3e-5
        return SweepSpec(base=base,
                         axis1=Axis("delta", 0.01, 1.2, n1(101)),
                         axis2=Axis("theta", 0.0, TWO_PI, n2(101)))
    if preset_id == "fig3d":
        base["delta_over_omega_m"], base["theta_rad"] = 0.25, 1.5 * math.pi
        return SweepSpec(base=base,
                         axis1=Axis("g2_over_g1", 0.0, 1e-4, n1(101)),
                         axis2=Axis("r_b", 0.0, 0.9, n2(101)))
    if preset_id == "fig3e":
        base["delta_over_omega_m"], base["g2_over_g1"] = 0.25, 1.5e-5
        return SweepSpec(base=base,
                         axis1=Axis("r_b", 0.0, 0.9, n1(101)),
                         axis2=Axis("theta", 0.0, TWO_PI, n2(101)))
    if preset_id == "fig3f":
        base["delta_over_omega_m"], base["r_b"] = 0.25, 0.7
        return SweepSpec(base=base,
                         axis1=Axis("g2_over_g1", 0.0, 1e-4, n1(101)),
                         axis2=Axis("theta", 0.0, TWO_PI, n2(101)))

    base = dict(BASE_SQUEEZING)
    if preset_id in ("fig4a", "fig4b"):
        if preset_id == "fig4b":
            base["r_b"], base["theta_rad"] = 0.8, 0.0
        return SweepSpec(base=base,
                         axis1=Axis("delta", 0.01, 1.0, n1(401)),
                         axis2=Axis("g2_over_g1", -1e-3, 0.0, n2(2)))
    if preset_id == "fig4c":
        base["delta_over_omega_m"] = 0.1
        return SweepSpec(base=base,
                         axis1=Axis("g2_over_g1", -2e-2, 1.5e-5, n1(401)),
                         axis2=Axis("r_b", 0.0, 0.8, n2(2)))
    if preset_id == "fig4d":
        base["delta_over_omega_m"], base["g2_over_g1"] = 0.1, -1e-3
        return SweepSpec(base=base,
                         axis1=Axis("r_b", 0.0, 0.95, n1(101)),
                         axis2=Axis("theta", 0.0, TWO_PI, n2(101)))
    if preset_id == "fig4e":
        base["r_b"], base["g2_over_g1"] = 0.8, -1e-3
        return SweepSpec(base=base,
                         axis1=Axis("delta", 0.01, 1.0, n1(101)),
                         axis2=Axis("theta", 0.0, TWO_PI, n2(101)))
    if preset_id == "fig4f":
        base["r_b"], base["theta_rad"] = 0.8, 0.0
        return SweepSpec(base=base,
                         axis1=Axis("delta", 0.01, 1.0, n1(101)),
                         axis2=Axis("g2_over_g1", -2e-2, 0.0, n2(101)))
    raise ConfigError(f"unknown preset: {preset_id!r}")
