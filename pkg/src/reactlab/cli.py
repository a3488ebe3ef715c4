"""Command-line interface.

Subcommands: dispersion, envelope, scan, simulate, classify.  Parameters
resolve with precedence command-line flag > config-file key > built-in
default (the baseline parameter set), so zero-flag invocations reproduce
the reference setup.  Outputs are written atomically and each run leaves
a JSON manifest sufficient to reproduce it.
"""

import argparse
import csv
import io
import json
import os
import sys
import time

import numpy as np

from . import __version__
from .dispersion import dispersion_point
from .errors import BlowUpError, DegenerateMatrixError, ParameterError
from .model import ModelParams
from .pde import SimConfig, run as run_simulation, save_grid
from .scanner import (
    DEFAULT_CHI_THRESHOLD,
    DEFAULT_LOG_INV_H_THRESHOLD,
    ScanConfig,
    classify_point,
    region_counts,
    scan,
)
from .transient import amplification_envelope
from .dispersion import eigen, jk

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_USAGE = 64

SUBCOMMANDS = ("dispersion", "envelope", "scan", "simulate", "classify")

MODEL_KEYS = {"d_u": "D_u", "d_v": "D_v", "beta": "beta", "k1": "k1", "k2": "k2", "q": "q", "c": "c"}
SIM_KEYS = ("dim", "L", "nx", "dt", "T", "eta", "bc", "seed", "snapshot_every")


class ConfigError(Exception):
    pass


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, float):
        return f"{x:.9g}"
    return str(x)


def load_config(path):
    """Flat key=value file; '#' starts a comment."""
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, val = line.partition("=")
            values[key.strip()] = val.strip()
    return values


def atomic_write(path, data):
    tmp = f"{path}.tmp.{os.getpid()}"
    mode = "wb" if isinstance(data, bytes) else "w"
    with open(tmp, mode) as fh:
        fh.write(data)
    os.replace(tmp, path)


def write_manifest(path, subcommand, resolved, config_path, outputs, seed, duration):
    manifest = {
        "subcommand": subcommand,
        "parameters": resolved,
        "config_file": config_path,
        "outputs": outputs,
        "seed": seed,
        "tool_version": __version__,
        "duration_seconds": round(duration, 6),
    }
    atomic_write(path, json.dumps(manifest, indent=2, default=str) + "\n")


def resolve_params(args, config) -> ModelParams:
    kwargs = {}
    for key, field in MODEL_KEYS.items():
        if key in config:
            try:
                kwargs[field] = float(config[key])
            except ValueError as exc:
                raise ConfigError(f"config key {key!r}: {exc}") from exc
        flag = getattr(args, field, None)
        if flag is not None:
            kwargs[field] = flag
    return ModelParams(**kwargs)


def resolved_dict(params: ModelParams) -> dict:
    return {
        "d_u": params.D_u,
        "d_v": params.D_v,
        "beta": params.beta,
        "k1": params.k1,
        "k2": params.k2,
        "q": params.q,
        "c": params.c,
    }


def add_model_flags(parser, exclude=()):
    parser.add_argument("--config", default=None, help="flat key=value config file")
    parser.add_argument("--d-u", dest="D_u", type=float, default=None)
    parser.add_argument("--d-v", dest="D_v", type=float, default=None)
    if "beta" not in exclude:
        parser.add_argument("--beta", type=float, default=None)
    parser.add_argument("--k1", type=float, default=None)
    if "k2" not in exclude:
        parser.add_argument("--k2", dest="k2", type=float, default=None)
    if "q" not in exclude:
        parser.add_argument("--q", type=float, default=None)
    parser.add_argument("--c", type=float, default=None)


def _csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def _emit(out_path, text):
    if out_path:
        atomic_write(out_path, text)
    else:
        sys.stdout.write(text)


def cmd_dispersion(args, config):
    params = resolve_params(args, config)
    if args.spacing == "log":
        if args.k2_min <= 0:
            raise ConfigError("k2-min must be positive for log spacing")
        grid = np.geomspace(args.k2_min, args.k2_max, args.k2_steps)
    else:
        grid = np.linspace(args.k2_min, args.k2_max, args.k2_steps)
    rows = []
    for k2 in grid:
        pt = dispersion_point(params, float(k2))
        rows.append(
            (
                pt.k2,
                pt.h,
                pt.h_tilde,
                pt.lambda_plus.real,
                pt.lambda_plus.imag,
                pt.lambda_minus.real,
                pt.lambda_minus.imag,
                pt.delta,
                pt.unstable,
                pt.reactive,
            )
        )
    header = [
        "k2",
        "h",
        "h_tilde",
        "re_lambda_plus",
        "im_lambda_plus",
        "re_lambda_minus",
        "im_lambda_minus",
        "delta",
        "unstable",
        "reactive",
    ]
    _emit(args.out, _csv_text(header, rows))
    return [args.out] if args.out else []


def cmd_envelope(args, config):
    params = resolve_params(args, config)
    M = jk(params, args.k2_value)
    series, summary = amplification_envelope(M, t_max=args.t_max, n=args.n)
    rows = list(zip(series.times, series.values, series.chi_values))
    _emit(args.out, _csv_text(["t", "rho", "chi"], rows))
    line = (
        f"max_rho={_fmt(summary.max_rho)} t_at_max={_fmt(summary.t_at_max)} "
        f"return_time={_fmt(summary.return_time)} chi_star={_fmt(summary.chi_star)} "
        f"t_star={_fmt(summary.t_star)} kreiss={_fmt(summary.kreiss)}"
        + (" truncated=1" if summary.truncated else "")
    )
    print(line)
    return [args.out] if args.out else []


def _parse_range(spec, name):
    parts = spec.split(":")
    if len(parts) != 3:
        raise ConfigError(f"--{name} must be a:b:n, got {spec!r}")
    try:
        return float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"--{name}: {exc}") from exc


def cmd_scan(args, config):
    params = resolve_params(args, config)
    q_lo, q_hi, q_n = _parse_range(args.q_range, "q-range")
    b_lo, b_hi, b_n = _parse_range(args.beta_range, "beta-range")
    cfg = ScanConfig(
        q_min=q_lo,
        q_max=q_hi,
        q_steps=q_n,
        beta_min=b_lo,
        beta_max=b_hi,
        beta_steps=b_n,
        fixed=params,
        spacing=args.spacing,
        chi_threshold=args.chi_threshold,
        log_inv_h_threshold=args.log_inv_h_threshold,
    )
    rows = scan(cfg, workers=args.workers)
    table = [
        (
            r.q,
            r.beta,
            r.region.value,
            r.k2_selected,
            r.chi_star,
            r.log_inv_h,
            r.flag_chi,
            r.flag_h,
        )
        for r in rows
    ]
    header = ["q", "beta", "region", "k2", "chi_star", "log_inv_h", "flag_chi", "flag_h"]
    _emit(args.out, _csv_text(header, table))
    if args.summary:
        for region, count in region_counts(rows).items():
            print(f"{region}: {count}")
    return [args.out] if args.out else []


def cmd_simulate(args, config):
    params = resolve_params(args, config)
    kwargs = {}
    for key in SIM_KEYS:
        if key in config:
            kwargs[key] = config[key]
        flag = getattr(args, key, None)
        if flag is not None:
            kwargs[key] = flag
    for key in ("dim", "nx", "seed", "snapshot_every"):
        if key in kwargs:
            kwargs[key] = int(kwargs[key])
    for key in ("L", "dt", "T", "eta"):
        if key in kwargs:
            kwargs[key] = float(kwargs[key])
    cfg = SimConfig(**kwargs)
    result = run_simulation(params, cfg)
    e_path = f"{args.out_prefix}_E.csv"
    grid_path = f"{args.out_prefix}_final.grid"
    _emit(e_path, _csv_text(["t", "E"], list(zip(result.times, result.E_values))))
    tmp = f"{grid_path}.tmp.{os.getpid()}"
    save_grid(tmp, result.final_fields)
    os.replace(tmp, grid_path)
    print(
        f"verdict={result.verdict.value} final_E={_fmt(float(result.E_values[-1]))} "
        f"threshold={_fmt(result.threshold)} plateau_rel_slope={_fmt(result.plateau_rel_slope)}"
    )
    return [e_path, grid_path]


def cmd_classify(args, config):
    params = resolve_params(args, config)
    q = args.q if args.q is not None else params.q
    beta = args.beta if args.beta is not None else params.beta
    row = classify_point(
        q, beta, params, args.chi_threshold, args.log_inv_h_threshold
    )
    print(
        f"region={row.region.value} k2={_fmt(row.k2_selected)} "
        f"chi_star={_fmt(row.chi_star)} log_inv_h={_fmt(row.log_inv_h)} "
        f"flag_chi={_fmt(row.flag_chi)} flag_h={_fmt(row.flag_h)}"
    )
    return []


def build_parser():
    parser = argparse.ArgumentParser(prog="reactlab", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand")

    p = sub.add_parser("dispersion", help="per-wavenumber diagnostics CSV")
    add_model_flags(p)
    p.add_argument("--k2-min", type=float, default=0.0)
    p.add_argument("--k2-max", type=float, default=2.0)
    p.add_argument("--k2-steps", type=int, default=200)
    p.add_argument("--spacing", choices=("linear", "log"), default="linear")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_dispersion)

    p = sub.add_parser("envelope", help="amplification envelope at one wavenumber")
    add_model_flags(p, exclude=("k2",))
    p.add_argument("--k2", dest="k2_value", type=float, required=True,
                   help="squared wavenumber of the perturbation mode")
    p.add_argument("--t-max", type=float, default=None)
    p.add_argument("--n", type=int, default=256)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_envelope)

    p = sub.add_parser("scan", help="classify a (q, beta) grid")
    add_model_flags(p)
    p.add_argument("--q-range", required=True, help="a:b:n")
    p.add_argument("--beta-range", required=True, help="a:b:n")
    p.add_argument("--spacing", choices=("linear", "log"), default="linear")
    p.add_argument("--out", default=None)
    p.add_argument("--summary", action="store_true")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--chi-threshold", type=float, default=DEFAULT_CHI_THRESHOLD)
    p.add_argument(
        "--log-inv-h-threshold", type=float, default=DEFAULT_LOG_INV_H_THRESHOLD
    )
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("simulate", help="time integration of the full PDE")
    add_model_flags(p)
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--L", type=float, default=None)
    p.add_argument("--nx", type=int, default=None)
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--T", type=float, default=None)
    p.add_argument("--eta", type=float, default=None)
    p.add_argument("--bc", choices=("periodic", "neumann"), default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--snapshot-every", dest="snapshot_every", type=int, default=None)
    p.add_argument("--out-prefix", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("classify", help="one-line report for a single (q, beta)")
    add_model_flags(p, exclude=("q", "beta"))
    p.add_argument("--q", type=float, default=None)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--chi-threshold", type=float, default=DEFAULT_CHI_THRESHOLD)
    p.add_argument(
        "--log-inv-h-threshold", type=float, default=DEFAULT_LOG_INV_H_THRESHOLD
    )
    p.set_defaults(func=cmd_classify)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and not argv[0].startswith("-") and argv[0] not in SUBCOMMANDS:
        print(f"unknown subcommand: {argv[0]}", file=sys.stderr)
        build_parser().print_usage(sys.stderr)
        return EXIT_USAGE
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "subcommand", None) is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE

    started = time.monotonic()
    try:
        config = load_config(args.config) if args.config else {}
        outputs = args.func(args, config)
    except (ConfigError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (BlowUpError, DegenerateMatrixError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    if outputs:
        params = resolve_params(args, config)
        manifest_path = f"{outputs[0]}.manifest.json"
        cli_args = {
            k: v
            for k, v in vars(args).items()
            if k not in ("func", "subcommand") and v is not None
        }
        write_manifest(
            manifest_path,
            args.subcommand,
            {"model": resolved_dict(params), "args": cli_args},
            args.config,
            outputs,
            getattr(args, "seed", None),
            time.monotonic() - started,
        )
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
