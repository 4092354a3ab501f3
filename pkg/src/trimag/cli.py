"""Command-line front end.

Subcommands: ep3, reproduce, sweep, spectrum, report.  All flag and file
values are ordinary frequencies in MHz (plus dB and tesla); the angular
internals never leak.  Exit codes: 0 success, 2 validation error,
3 numerical failure (pole or lost branch).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from . import figures
from .core import eigenvalues_on_manifold, locate_ep3
from .params import DriveParams, SymmetricParams, ValidationError, mhz, to_mhz
from .sensing import (
    BranchTrackingError,
    Perturbation,
    detectable_b_min,
    exact_eigenshift,
    g_cpa_factor,
    g_ep3_factor,
    sensitivity_report,
    synthetic_sensitivity,
)
from .spectrum import (
    DEFAULT_FLOOR_DB,
    FlatTraceError,
    ScatteringPoleError,
    cpa_drive,
    default_grid,
    find_dip,
    perturbed_system,
    spectrum_dip,
    total_output,
    total_output_spectrum,
    trace_to_csv,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

QUANTITIES = ("eigenvalues", "dip", "sensitivity")
AXES = ("g", "delta", "delta_b")


def _load_defaults() -> dict:
    text = resources.files("trimag").joinpath("data/defaults.json").read_text()
    return json.loads(text)


def _merge_config(path: str | None, overrides: dict) -> dict:
    config = _load_defaults()
    if path:
        try:
            user = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"config file {path}: {exc}") from exc
        for section, content in user.items():
            if isinstance(content, dict) and isinstance(config.get(section), dict):
                config[section].update(content)
            else:
                config[section] = content
    for key, value in overrides.items():
        if value is None:
            continue
        section, _, leaf = key.partition(".")
        if leaf:
            config.setdefault(section, {})[leaf] = value
        else:
            config[section] = value
    return config


def _require(config: dict, section: str, key: str, kind=float):
    try:
        raw = config[section][key]
    except KeyError as exc:
        raise ValidationError(f"config: missing {section}.{key}") from exc
    try:
        value = kind(raw)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"config: {section}.{key}={raw!r} is not "
                              f"a valid {kind.__name__}") from exc
    if isinstance(value, float) and not math.isfinite(value):
        raise ValidationError(f"config: {section}.{key} must be finite")
    return value


def _symmetric_from_config(config: dict) -> SymmetricParams:
    gamma = _require(config, "system", "gamma_mhz")
    g = _require(config, "system", "g_mhz")
    delta_raw = config.get("system", {}).get("delta_mhz")
    if delta_raw is None:
        return SymmetricParams.manifold_point(mhz(gamma), mhz(g))
    return SymmetricParams(gamma=mhz(gamma), g=mhz(g), delta=mhz(float(delta_raw)))


def _drive_from_spec(spec, params) -> DriveParams:
    if spec == "cpa" or spec is None:
        return cpa_drive(params)
    if isinstance(spec, str):
        try:
            p_str, phi_str = spec.split(",")
            p, phi = float(p_str), float(phi_str)
        except ValueError as exc:
            raise ValidationError(
                f"drive must be 'cpa' or 'p,phi', got {spec!r}") from exc
        return DriveParams(p=p, phi=phi)
    if isinstance(spec, dict):
        return DriveParams(p=float(spec.get("p", 1.0)),
                           phi=float(spec.get("phi", 0.0)))
    raise ValidationError(f"unrecognized drive spec {spec!r}")


def _emit(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------- commands

def cmd_ep3(args) -> int:
    if args.gamma_mhz is None or args.gamma_mhz <= 0:
        raise ValidationError("--gamma-mhz must be > 0")
    point = locate_ep3(mhz(args.gamma_mhz))
    payload = {
        "gamma_mhz": args.gamma_mhz,
        "g_ep3_mhz": to_mhz(point.g_ep3),
        "delta_ep3_mhz": to_mhz(point.delta_ep3),
    }
    print(f"third-order degeneracy at gamma = {args.gamma_mhz:g} MHz: "
          f"g = {payload['g_ep3_mhz']:.4f} MHz, "
          f"delta = {payload['delta_ep3_mhz']:.4f} MHz")
    print(json.dumps(payload, indent=2))
    return EXIT_OK


def cmd_reproduce(args) -> int:
    paths = figures.generate(args.figure, args.outdir)
    for p in paths:
        print(p)
    return EXIT_OK


def _sweep_axis_values(config: dict) -> np.ndarray:
    start = _require(config, "sweep", "start_mhz")
    stop = _require(config, "sweep", "stop_mhz")
    points = _require(config, "sweep", "points", int)
    if points < 2:
        raise ValidationError("config: sweep.points must be >= 2")
    if not (math.isfinite(start) and math.isfinite(stop)) or stop <= start:
        raise ValidationError("config: sweep range must be finite with "
                              "stop > start")
    return np.linspace(start, stop, points)


def _sweep_rows(config: dict) -> tuple[list[str], list[list[float]]]:
    axis = _require(config, "sweep", "axis", str)
    if axis not in AXES:
        raise ValidationError(f"config: sweep.axis must be one of {AXES}")
    quantity = str(config.get("quantity", "eigenvalues"))
    if quantity not in QUANTITIES:
        raise ValidationError(f"config: quantity must be one of {QUANTITIES}")
    gamma_mhz = _require(config, "system", "gamma_mhz")
    gamma = mhz(gamma_mhz)
    values = _sweep_axis_values(config)
    floor_db = float(config.get("floor_db", DEFAULT_FLOOR_DB))
    kappa1 = mhz(_require(config, "system", "kappa1_mhz"))
    kappa2 = mhz(_require(config, "system", "kappa2_mhz"))

    if quantity == "eigenvalues":
        if axis == "delta_b":
            raise ValidationError("eigenvalue sweeps use axis 'g' or 'delta'")
        header = [axis + "_mhz", "re0_mhz", "im0_mhz", "re_plus_mhz",
                  "im_plus_mhz", "re_minus_mhz", "im_minus_mhz"]
        rows = []
        for v in values:
            if axis == "g":
                if mhz(v) < gamma:
                    rows.append([v] + [math.nan] * 6)
                    continue
                sym = SymmetricParams.manifold_point(gamma, mhz(v))
            else:
                g = math.sqrt(mhz(v) ** 2 + gamma ** 2)
                sym = SymmetricParams(gamma=gamma, g=g, delta=mhz(v))
            ev = eigenvalues_on_manifold(sym).as_array()
            rows.append([v] + [to_mhz(x)
                               for pair in ev for x in (pair.real, pair.imag)])
        return header, rows

    if axis != "delta_b":
        raise ValidationError(f"quantity {quantity!r} sweeps axis 'delta_b'")
    sym = _symmetric_from_config(config)
    sym.require_manifold()

    if quantity == "dip":
        header = ["delta_b_mhz", "dip_mhz", "dip_db", "delta_omega_mhz"]
        rows = []
        for b in values:
            dip = spectrum_dip(sym, kappa1, kappa2, mhz(b), floor_db=floor_db)
            shift = exact_eigenshift(sym, Perturbation(mhz(b)))
            rows.append([b, dip.dip_location, dip.dip_value_db, shift])
        return header, rows

    header = ["delta_b_mhz", "delta_omega_mhz", "g_ep3", "g_cpa_db_per_mhz",
              "g_syn_db_per_mhz", "delta_b_min_tesla"]
    rows = []
    for b in values:
        if b <= 0:
            raise ValidationError("sensitivity sweep requires delta_b > 0")
        dip = spectrum_dip(sym, kappa1, kappa2, mhz(b), floor_db=floor_db)
        shift = exact_eigenshift(sym, Perturbation(mhz(b)))
        gep3 = g_ep3_factor(sym.g, mhz(b))
        gcpa = g_cpa_factor(floor_db, dip.dip_value_db, shift)
        gsyn = synthetic_sensitivity(gcpa, gep3)
        rows.append([b, shift, gep3, gcpa, gsyn, detectable_b_min(1e-13, gsyn)])
    return header, rows


def cmd_sweep(args) -> int:
    overrides = {
        "sweep.axis": args.axis,
        "sweep.start_mhz": args.start_mhz,
        "sweep.stop_mhz": args.stop_mhz,
        "sweep.points": args.points,
        "quantity": args.quantity,
        "system.gamma_mhz": args.gamma_mhz,
        "system.g_mhz": args.g_mhz,
        "system.kappa1_mhz": args.kappa1_mhz,
        "system.kappa2_mhz": args.kappa2_mhz,
        "floor_db": args.floor_db,
        "output.path": args.out,
        "output.format": args.format,
    }
    config = _merge_config(args.config, overrides)
    header, rows = _sweep_rows(config)
    fmt = str(config.get("output", {}).get("format", "csv"))
    path = config.get("output", {}).get("path")
    if fmt == "csv":
        lines = [",".join(header)]
        lines += [",".join(figures._fmt(v) for v in row) for row in rows]
        _emit(path, "\n".join(lines) + "\n")
    elif fmt == "json":
        payload = [dict(zip(header, row)) for row in rows]
        _emit(path, json.dumps(payload, indent=2) + "\n")
    else:
        raise ValidationError(f"output.format must be csv or json, got {fmt!r}")
    return EXIT_OK


def cmd_spectrum(args) -> int:
    gamma = mhz(args.gamma_mhz)
    if args.delta_mhz is None:
        sym = SymmetricParams.manifold_point(gamma, mhz(args.g_mhz))
    else:
        sym = SymmetricParams(gamma=gamma, g=mhz(args.g_mhz),
                              delta=mhz(args.delta_mhz))
    if args.delta_b_mhz == 0.0:
        # unperturbed spectra are allowed off the manifold
        params = sym.to_system(mhz(args.kappa1_mhz), mhz(args.kappa2_mhz))
    else:
        params = perturbed_system(sym, mhz(args.kappa1_mhz),
                                  mhz(args.kappa2_mhz), mhz(args.delta_b_mhz))
    drive = _drive_from_spec(args.drive, params)
    grid = default_grid(span_mhz=args.span_mhz, points=args.points)
    trace = total_output_spectrum(params, drive, grid, floor_db=args.floor_db)
    _emit(args.out, trace_to_csv(trace))
    if args.dip:
        dip = find_dip(trace,
                       lambda nu: float(total_output(params, drive, mhz(nu))))
        print(f"dip: {dip.dip_location:.6f} MHz at {dip.dip_value_db:.3f} dB",
              file=sys.stderr)
    return EXIT_OK


def cmd_report(args) -> int:
    if args.delta_b_mhz is None or args.delta_b_mhz <= 0:
        raise ValidationError("--delta-b-mhz must be > 0")
    report = sensitivity_report(args.delta_b_mhz, floor_db=args.floor_db)
    text = report.to_json()
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(text)
    return EXIT_OK


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trimag",
        description="Three-mode cavity-magnonic spectra, degeneracies, "
                    "absorption dips and sensitivity factors.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ep3", help="locate the third-order degeneracy")
    p.add_argument("--gamma-mhz", type=float, required=True)
    p.set_defaults(func=cmd_ep3)

    p = sub.add_parser("reproduce", help="write figure data files")
    p.add_argument("figure", choices=figures.FIGURES)
    p.add_argument("--outdir", default="figure_data")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("sweep", help="sweep one axis and tabulate a quantity")
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--axis", choices=AXES)
    p.add_argument("--start-mhz", type=float)
    p.add_argument("--stop-mhz", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--quantity", choices=QUANTITIES)
    p.add_argument("--gamma-mhz", type=float)
    p.add_argument("--g-mhz", type=float)
    p.add_argument("--kappa1-mhz", type=float)
    p.add_argument("--kappa2-mhz", type=float)
    p.add_argument("--floor-db", type=float)
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"))
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("spectrum", help="total output power over a probe grid")
    p.add_argument("--gamma-mhz", type=float, default=figures.GAMMA_MHZ)
    p.add_argument("--g-mhz", type=float, required=True)
    p.add_argument("--delta-mhz", type=float,
                   help="detuning; defaults to the manifold value")
    p.add_argument("--kappa1-mhz", type=float, default=figures.KAPPA1_MHZ)
    p.add_argument("--kappa2-mhz", type=float, default=figures.KAPPA2_MHZ)
    p.add_argument("--drive", default="cpa", help="'cpa' or 'p,phi'")
    p.add_argument("--delta-b-mhz", type=float, default=0.0)
    p.add_argument("--span-mhz", type=float, default=10.0)
    p.add_argument("--points", type=int, default=2001)
    p.add_argument("--floor-db", type=float, default=DEFAULT_FLOOR_DB)
    p.add_argument("--dip", action="store_true",
                   help="also print the refined dip to stderr")
    p.add_argument("--out")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("report", help="sensitivity factors at the degeneracy")
    p.add_argument("--delta-b-mhz", type=float, required=True)
    p.add_argument("--floor-db", type=float, default=-91.5)
    p.add_argument("--out")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ScatteringPoleError, FlatTraceError, BranchTrackingError,
            ZeroDivisionError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
