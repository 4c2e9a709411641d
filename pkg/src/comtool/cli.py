"""Command-line interface.

    comtool couplings --reflectivity 0.9 --q0 1e-9 --length 0.025 --mode-number 61728
    comtool steady   --config params.json
    comtool feedback --config params.json [--eta-grid eta.csv]
    comtool point    --config params.json [--dump-matrices]
    comtool sweep    --config sweep.json --out table.csv --format csv
    comtool preset   fig3a --out fig3a.csv --workers 4

Exit codes: 0 success, 1 configuration error, 2 I/O error,
3 internal-consistency failure.
"""

import argparse
import dataclasses
import json
import sys

from . import dynamics, measures, sweep as sweep_mod
from .errors import ComToolError, ConfigError, InternalConsistencyError, \
    InvalidParameterError
from .feedback import FeedbackLoop, effective_cavity
from .membrane import MembraneGeometry, expand_couplings
from .params import parse_config
from .steady import solve_mean_field


def _load_config(path, args):
    if path is None:
        doc = {}
    else:
        with open(path) as handle:
            doc = json.load(handle)
    if getattr(args, "detuning_mode", None):
        doc["detuning_mode"] = args.detuning_mode
    if getattr(args, "g1_convention", None):
        doc["g1_convention"] = args.g1_convention
    return doc


def _print_json(obj):
    json.dump(obj, sys.stdout, indent=1, default=str)
    sys.stdout.write("\n")


def cmd_couplings(args):
    geometry = MembraneGeometry(reflectivity=args.reflectivity,
                                equilibrium_position=args.q0,
                                half_cavity_length=args.length,
                                mode_number=args.mode_number)
    exp = expand_couplings(geometry)
    _print_json({"omega_c": exp.omega_c, "g_1": exp.g_1, "g_2": exp.g_2,
                 "sigma": exp.sigma})
    return 0


def cmd_steady(args):
    params, mode = parse_config(_load_config(args.config, args))
    model = solve_mean_field(params, detuning_mode=mode, branch=args.branch)
    _print_json(dataclasses.asdict(model))
    return 0


def cmd_feedback(args):
    params, mode = parse_config(_load_config(args.config, args))
    loop = FeedbackLoop(r_b=params.r_b, theta=params.theta)
    delta_bar = solve_mean_field(params, detuning_mode=mode).delta_bar
    cavity = effective_cavity(params.kappa_1, params.kappa_2, loop, delta_bar)
    _print_json(dataclasses.asdict(cavity))
    if args.eta_grid:
        spec = sweep_mod.preset("fig2b")
        spec = dataclasses.replace(spec, base=dict(spec.base, **{
            "kappa1_hz": params.kappa_1 / (2.0 * 3.141592653589793),
        }))
        records = sweep_mod.run_sweep(spec, workers=args.workers)
        sweep_mod.emit(records, spec, "csv", args.eta_grid)
    return 0


def cmd_point(args):
    params, mode = parse_config(_load_config(args.config, args))
    record = sweep_mod.run_point(params, detuning_mode=mode)
    _print_json(record.as_row([]))
    if args.dump_matrices:
        model = solve_mean_field(params, detuning_mode=mode)
        loop = FeedbackLoop(r_b=params.r_b, theta=params.theta)
        cavity = effective_cavity(params.kappa_1, params.kappa_2, loop,
                                  model.delta_bar)
        a = dynamics.build_drift(model, cavity, params.gamma_m, params.omega_m)
        d = dynamics.build_diffusion(params.gamma_m, params.n_m,
                                     cavity.kappa_tilde)
        out = {"A": a.tolist(), "D": d.tolist()}
        stability = dynamics.assess_stability(a, freq_scale=params.omega_m)
        if stability.stable:
            v = dynamics.solve_lyapunov(a, d, stability=stability)
            out["V"] = v.tolist()
        _print_json(out)
    return 0


def _parse_axis(doc):
    return sweep_mod.Axis(name=doc["name"], start=float(doc["start"]),
                          stop=float(doc["stop"]), count=int(doc["count"]))


def cmd_sweep(args):
    with open(args.config) as handle:
        doc = json.load(handle)
    unknown = set(doc) - {"base", "axis1", "axis2", "outputs"}
    if unknown:
        raise ConfigError(f"unknown sweep key: {sorted(unknown)[0]!r}")
    base = doc.get("base", {})
    if args.detuning_mode:
        base["detuning_mode"] = args.detuning_mode
    if args.g1_convention:
        base["g1_convention"] = args.g1_convention
    spec = sweep_mod.SweepSpec(
        base=base,
        axis1=_parse_axis(doc["axis1"]),
        axis2=_parse_axis(doc["axis2"]) if doc.get("axis2") else None,
        outputs=doc.get("outputs", "full"),
    )
    records = sweep_mod.run_sweep(spec, workers=args.workers)
    return _emit_or_print(records, spec, args)


def cmd_preset(args):
    spec = sweep_mod.preset(args.id, count1=args.count1, count2=args.count2)
    if args.detuning_mode or args.g1_convention:
        base = dict(spec.base)
        if args.detuning_mode:
            base["detuning_mode"] = args.detuning_mode
        if args.g1_convention:
            base["g1_convention"] = args.g1_convention
        spec = dataclasses.replace(spec, base=base)
    if spec.notes:
        print(f"note: {spec.notes}", file=sys.stderr)
    records = sweep_mod.run_sweep(spec, workers=args.workers)
    return _emit_or_print(records, spec, args)


def _emit_or_print(records, spec, args):
    if args.out:
        sweep_mod.emit(records, spec, args.format, args.out)
        best, value = sweep_mod.grid_argmax(records, key=args.argmax)
        if best is not None:
            print(f"argmax {args.argmax} = {value:.6g} at {best.axes}",
                  file=sys.stderr)
    else:
        axis_names = spec.axis_names()
        _print_json([record.as_row(axis_names) for record in records])
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="comtool", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config_required=True):
        p.add_argument("--config", required=False, default=None,
                       help="JSON config file (defaults used when omitted)")
        p.add_argument("--detuning-mode", dest="detuning_mode",
                       choices=["delta_c", "delta_bar", "delta_tilde"])
        p.add_argument("--g1-convention", dest="g1_convention",
                       choices=["hz_times_2pi", "rad_per_s"])
        p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("couplings", help="membrane coupling expansion")
    p.add_argument("--reflectivity", type=float, required=True)
    p.add_argument("--q0", type=float, required=True)
    p.add_argument("--length", type=float, required=True)
    p.add_argument("--mode-number", dest="mode_number", type=int, required=True)
    p.set_defaults(func=cmd_couplings)

    p = sub.add_parser("steady", help="mean-field fixed point")
    common(p)
    p.add_argument("--branch", default="lowest")
    p.set_defaults(func=cmd_steady)

    p = sub.add_parser("feedback", help="feedback-modified cavity")
    common(p)
    p.add_argument("--eta-grid", dest="eta_grid", default=None,
                   help="write the (r_b, theta) -> eta surface as CSV")
    p.set_defaults(func=cmd_feedback)

    p = sub.add_parser("point", help="full pipeline at one point")
    common(p)
    p.add_argument("--dump-matrices", action="store_true")
    p.set_defaults(func=cmd_point)

    p = sub.add_parser("sweep", help="run a sweep spec file")
    common(p)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--argmax", default="e_n")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("preset", help="run a figure-reproduction preset")
    p.add_argument("id", choices=list(sweep_mod.PRESET_IDS))
    common(p)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--argmax", default="e_n")
    p.add_argument("--count1", type=int, default=None)
    p.add_argument("--count2", type=int, default=None)
    p.set_defaults(func=cmd_preset)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InternalConsistencyError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return 3
    except (ConfigError, InvalidParameterError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    except ComToolError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
