"""Command-line interface.

Subcommands::

    derive     physical config -> full parameter report (derived.csv)
    squeeze    config -> squeezing / entanglement figures (squeeze.csv)
    map        squeezing heatmap over a channel-parameter grid (map.csv)
    mc         Monte-Carlo check of the measurement channel (mc.csv)
    adiabatic  elimination-error sweep over the frequency mismatch
    lifetime   analytic (and optionally Monte-Carlo) decay curves
    points     the three proposed working points (points.csv)

Exit codes: 0 success, 1 config/validation errors, 2 numerical guard
failures.  Every run writes a ``run_manifest.json`` beside its
artifacts; all artifact writes are atomic.
"""

import argparse
import math
import os
import sys

import numpy as np

from . import __version__
from .constants import db_from_variance
from .errors import (
    DegenerateMeasurement,
    NobleSqueezeError,
    OutOfRangeTemperature,
    ParseError,
    RegimeViolation,
    StepTooLarge,
    UnsupportedPair,
    ValidationError,
)
from .gaussian import ChannelSpec, optimal_gain, squeezing_parameter
from .io_utils import (
    RunManifest,
    config_digest,
    diagnostic,
    parse_config,
    write_csv,
    write_key_value_csv,
    write_manifest,
)
from .params import derive, optical_depth_identity
from .stochastic import (
    McSettings,
    adiabatic_scaling,
    lifetime_mc,
    sample_io,
)
from .sweeps import (
    Axis,
    SweepGrid,
    WORKING_POINTS,
    DEFAULT_LIFETIME_DBS,
    lifetime_curves,
    squeezing_map,
    working_points,
)

HEADLINE_SPEC = ChannelSpec(kappa=2.0, epsilon=0.3, eta=0.125, rho=0.162)


def _parse_axis_ranges(grid_arg):
    """'XMIN:XMAX:STEPS[,YMIN:YMAX:STEPS]' -> list of (min, max, steps)."""
    ranges = []
    for part in grid_arg.split(","):
        fields = part.split(":")
        if len(fields) != 3:
            raise ParseError(f"bad --grid fragment {part!r}, want MIN:MAX:STEPS")
        try:
            ranges.append((float(fields[0]), float(fields[1]), int(fields[2])))
        except ValueError as exc:
            raise ParseError(f"bad --grid fragment {part!r}: {exc}") from exc
    return ranges


def _load(args):
    if not args.config:
        raise ParseError("this subcommand requires -c/--config")
    config = parse_config(args.config)
    params = derive(config, allow_regime_violation=args.allow_regime_violation)
    return config, params


def _manifest(args, subcommand, config=None, seed=None, warnings=()):
    return RunManifest(
        tool_version=__version__,
        subcommand=subcommand,
        config_digest=config_digest(config) if config is not None else None,
        seed=seed,
        warnings=tuple(warnings),
    )


def cmd_derive(args):
    config, params = _load(args)
    report = params.as_report()
    identity = optical_depth_identity(params, config)
    report["optical_depth_identity_ratio"] = identity.ratio
    report["gamma_absp_s"] = identity.gamma_absp
    write_key_value_csv(os.path.join(args.out, "derived.csv"), report)
    write_manifest(args.out, _manifest(args, "derive", config,
                                       warnings=params.warnings))
    diagnostic("info", "derived",
               f"kappa={params.kappa:.4f} epsilon={params.epsilon:.4f} "
               f"eta={params.eta:.4f} rho={params.rho:.4f}")
    return 0


def cmd_squeeze(args):
    config, params = _load(args)
    spec = params.channel_spec()
    result = squeezing_parameter(spec)
    report = {
        "kappa": spec.kappa, "epsilon": spec.epsilon,
        "eta": spec.eta, "rho": spec.rho,
        "xi": result.xi, "var_out": result.var_out,
        "squeezing_db": result.squeezing_db, "gain": result.gain,
        "epr_value": result.epr_value, "entangled": result.entangled,
    }
    write_key_value_csv(os.path.join(args.out, "squeeze.csv"), report)
    write_manifest(args.out, _manifest(args, "squeeze", config,
                                       warnings=params.warnings))
    diagnostic("info", "squeeze",
               f"xi={result.xi:.4f} ({result.squeezing_db:.2f} dB), "
               f"EPR={result.epr_value:.4f}, entangled={result.entangled}")
    return 0


def cmd_map(args):
    x_axis = Axis("kappa_eff", 0.0, 5.0, 101)
    y_axis = Axis("rho", 1e-3, 1.0, 101, log=True)
    if args.grid:
        ranges = _parse_axis_ranges(args.grid)
        if len(ranges) not in (1, 2):
            raise ParseError("--grid takes one or two MIN:MAX:STEPS fragments")
        x_axis = Axis("kappa_eff", *ranges[0])
        if len(ranges) == 2:
            y_axis = Axis("rho", *ranges[1], log=ranges[1][0] > 0)
    result = squeezing_map(SweepGrid(x_axis=x_axis, y_axis=y_axis,
                                     fixed={"eta": args.eta}))
    rows = []
    for iy, y in enumerate(result.y_values):
        for ix, x in enumerate(result.x_values):
            rows.append((float(x), float(y), float(result.values_db[iy, ix])))
    write_csv(os.path.join(args.out, "map.csv"),
              ["x_label", "y_label", "value_db"], rows)
    if args.refine:
        flat = int(np.argmax(result.values_db))
        iy, ix = divmod(flat, result.x_values.size)
        diagnostic("info", "map_argmax",
                   f"best node: {x_axis.name}={result.x_values[ix]!r}, "
                   f"{y_axis.name}={result.y_values[iy]!r}, "
                   f"{result.values_db[iy, ix]!r} dB")
    write_manifest(args.out, _manifest(args, "map"))
    return 0


def cmd_mc(args):
    config = None
    warnings = ()
    if args.config:
        config, params = _load(args)
        spec = params.channel_spec()
        warnings = params.warnings
    else:
        spec = HEADLINE_SPEC
    settings = McSettings(n_samples=args.samples, seed=args.seed)
    stats = sample_io(spec, settings)
    theory = {
        "x_l_out": 0.5 * (1.0 + spec.kappa ** 2 * (1.0 - spec.epsilon)
                          * (1.0 + spec.rho)),
        "p_b_out": 0.5,
        "p_b_feedback": squeezing_parameter(spec).var_out,
    }
    rows = []
    for name in stats.empirical_var:
        rows.append((name, stats.n_samples, stats.empirical_mean[name],
                     stats.empirical_var[name], stats.stderr_var[name],
                     theory[name]))
    write_csv(os.path.join(args.out, "mc.csv"),
              ["observable", "n_samples", "empirical_mean", "empirical_var",
               "stderr_var", "closed_form"], rows)
    write_manifest(args.out, _manifest(args, "mc", config, seed=args.seed,
                                       warnings=warnings))
    z = ((stats.empirical_var["p_b_feedback"] - theory["p_b_feedback"])
         / stats.stderr_var["p_b_feedback"])
    diagnostic("info", "mc",
               f"post-feedback var {stats.empirical_var['p_b_feedback']:.6f} "
               f"vs closed form {theory['p_b_feedback']:.6f} (z={z:+.2f})")
    return 0


def cmd_adiabatic(args):
    lo, hi, steps = 50.0, 500.0, 8
    if args.grid:
        ranges = _parse_axis_ranges(args.grid)
        if len(ranges) != 1:
            raise ParseError("--grid takes one MIN:MAX:STEPS fragment here")
        lo, hi, steps = ranges[0]
    deltas = np.geomspace(lo, hi, int(steps))
    devs, exponent = adiabatic_scaling(1.0, 1.0, deltas)
    write_csv(os.path.join(args.out, "adiabatic.csv"),
              ["delta_rad_s", "rel_deviation"],
              list(zip(deltas.tolist(), devs.tolist())))
    write_manifest(args.out, _manifest(args, "adiabatic"))
    diagnostic("info", "adiabatic",
               f"fitted deviation exponent {exponent:.3f} over "
               f"Delta/gamma_a in [{lo:g}, {hi:g}]")
    return 0


def cmd_lifetime(args):
    dbs = DEFAULT_LIFETIME_DBS
    if args.db:
        dbs = tuple(float(x) for x in args.db.split(","))
    t_max = args.t_max if args.t_max else 2.5 / args.gamma_b
    curves = lifetime_curves(dbs, args.gamma_b, t_max, args.steps)
    rows = []
    for curve in curves:
        for t, v, db in zip(curve.times, curve.variance, curve.squeezing_db):
            rows.append((float(t), float(v), float(db)))
    write_csv(os.path.join(args.out, "series.csv"),
              ["t_seconds", "variance", "db"], rows)
    if args.mc:
        settings = McSettings(n_samples=args.samples, seed=args.seed,
                              dt=args.dt or t_max / 2000.0, t_final=t_max)
        mc_rows = []
        for curve in curves:
            var0 = curve.variance[0]
            series = lifetime_mc(var0, args.gamma_b, settings)
            for t, v, se in zip(series.times, series.variance, series.stderr):
                mc_rows.append((float(t), float(v),
                                db_from_variance(float(v)), float(se)))
        write_csv(os.path.join(args.out, "series_mc.csv"),
                  ["t_seconds", "variance", "db", "stderr_variance"], mc_rows)
    write_manifest(args.out, _manifest(args, "lifetime",
                                       seed=args.seed if args.mc else None))
    return 0


def cmd_points(args):
    rows = [(r.label, r.kappa, r.epsilon, r.eta, r.rho, r.xi_computed,
             r.db_computed, r.xi_quoted, r.abs_deviation)
            for r in working_points()]
    write_csv(os.path.join(args.out, "points.csv"),
              ["label", "kappa", "epsilon", "eta", "rho", "xi_computed",
               "db_computed", "xi_paper", "abs_dev"], rows)
    write_manifest(args.out, _manifest(args, "points"))
    for row in rows:
        diagnostic("info", "working_point",
                   f"{row[0]}: xi={row[5]:.4f} vs quoted {row[7]:.2f}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="noblesqueeze",
        description="Measurement-induced squeezing and entanglement of "
                    "noble-gas nuclear-spin ensembles")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, needs_seed=False):
        p.add_argument("-c", "--config", help="YAML config path")
        p.add_argument("-o", "--out", default="out", help="output directory")
        p.add_argument("--allow-regime-violation", action="store_true",
                       help="demote working-point guards to warnings")
        if needs_seed:
            p.add_argument("--seed", type=int, default=12345)
            p.add_argument("--samples", type=int, default=100000)
            p.add_argument("--dt", type=float, default=None,
                           help="integrator step, seconds")

    common(sub.add_parser("derive", help="derive theory parameters"))
    common(sub.add_parser("squeeze", help="closed-form squeezing figures"))
    p_map = sub.add_parser("map", help="squeezing heatmap grid")
    common(p_map)
    p_map.add_argument("--grid", help="XMIN:XMAX:STEPS[,YMIN:YMAX:STEPS]")
    p_map.add_argument("--eta", type=float, default=0.12)
    p_map.add_argument("--refine", action="store_true",
                       help="report the argmax node")
    p_mc = sub.add_parser("mc", help="Monte-Carlo channel check")
    common(p_mc, needs_seed=True)
    p_ad = sub.add_parser("adiabatic", help="elimination-error sweep")
    common(p_ad)
    p_ad.add_argument("--grid", help="DMIN:DMAX:STEPS in units of gamma_a")
    p_lt = sub.add_parser("lifetime", help="squeezing decay curves")
    common(p_lt, needs_seed=True)
    p_lt.add_argument("--db", help="comma list of initial squeezing in dB")
    p_lt.add_argument("--gamma-b", type=float, default=0.5,
                      help="total decoherence rate Gamma_b, 1/s")
    p_lt.add_argument("--t-max", type=float, default=None)
    p_lt.add_argument("--steps", type=int, default=101)
    p_lt.add_argument("--mc", action="store_true",
                      help="also write Monte-Carlo series")
    common(sub.add_parser("points", help="proposed working points"))
    return parser


_HANDLERS = {
    "derive": cmd_derive,
    "squeeze": cmd_squeeze,
    "map": cmd_map,
    "mc": cmd_mc,
    "adiabatic": cmd_adiabatic,
    "lifetime": cmd_lifetime,
    "points": cmd_points,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    os.makedirs(args.out, exist_ok=True)
    try:
        return _HANDLERS[args.subcommand](args)
    except (ParseError, ValidationError, UnsupportedPair,
            OutOfRangeTemperature) as exc:
        diagnostic("error", type(exc).__name__, str(exc),
                   field=getattr(exc, "field", None))
        return 1
    except (RegimeViolation, StepTooLarge, DegenerateMeasurement) as exc:
        diagnostic("error", type(exc).__name__, str(exc))
        return 2


if __name__ == "__main__":
    sys.exit(main())
