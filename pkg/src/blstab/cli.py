"""Command-line front end for the boundary-layer stability pipeline.

Five subcommands cover the pipeline stages:

    profile   evolve the wall layer to time t and tabulate V, V'' (profile.csv)
    spectrum  dense Rayleigh spectrum with a stability verdict (spectrum.csv)
    shoot     Newton-refined eigenpair from a seed (eigenpair.csv, c.json)
    sweep     growth rate Im c over a time range (sweep.csv)
    os        viscous eigenvalue study over a nu_hat grid (expansion.json)

Exit codes: 0 success (for spectrum: an unstable mode was found), 2 usage
error, 3 stable spectrum (no eigenvalue above the threshold), 4 numerical
failure (eigensolver breakdown, Newton divergence, pole proximity,
stiffness).

Flags may be collected in a JSON config file passed with --config; keys
mirror the long flag names (dashes or underscores).  Explicit flags win
over config values, config values win over built-in defaults, and unknown
keys are rejected.  All floats are written with 17 significant digits, so
identical configurations produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .heat import HalfLineGrid, build_profile, write_profile_csv, WALL_ANCHORED, CONVENTIONS
from .spectral import (ALPHA_RAY_DEFAULT, IM_THRESHOLD_DEFAULT, RayleighProblem,
                       assemble_rayleigh_matrix, compute_spectrum, most_unstable,
                       sweep_growth, write_spectrum_csv, write_sweep_csv)
from .shooting import ShootingConfig, newton_refine, write_eigenpair_csv
from .orrsommerfeld import NU_HATS_DEFAULT, scaling_study, write_expansion_json

# Per-command fallback values, applied after the config file merge.  Flag
# defaults are all None so that "flag beats config beats default" is a plain
# three-way cascade.
_DEFAULTS = {
    "profile": {"Y0": 30.0, "h": 0.01, "alpha": 1.0,
                "convention": WALL_ANCHORED, "out": "out"},
    "spectrum": {"Y0": 30.0, "h": 0.02, "alpha": 1.0, "alpha_ray": ALPHA_RAY_DEFAULT,
                 "threshold": IM_THRESHOLD_DEFAULT,
                 "convention": WALL_ANCHORED, "out": "out"},
    "shoot": {"Y0": 30.0, "h": 0.02, "alpha": 1.0, "alpha_ray": ALPHA_RAY_DEFAULT,
              "threshold": IM_THRESHOLD_DEFAULT, "steps": 30000, "seed": "matrix",
              "convention": WALL_ANCHORED, "out": "out"},
    "sweep": {"t_min": 0.5, "t_max": 16.0, "t_step": 0.1, "Y0": 30.0, "h": 0.02,
              "alpha": 1.0, "alpha_ray": ALPHA_RAY_DEFAULT,
              "threshold": IM_THRESHOLD_DEFAULT, "jobs": 1,
              "convention": WALL_ANCHORED, "out": "out"},
    "os": {"Y0": 30.0, "h": 0.02, "alpha": 1.0, "alpha_ray": ALPHA_RAY_DEFAULT,
           "threshold": IM_THRESHOLD_DEFAULT, "nu_hat": list(NU_HATS_DEFAULT),
           "convention": WALL_ANCHORED, "out": "out"},
}


def _fmt(value):
    """17-significant-digit rendering for floats; str() for everything else."""
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _fmt_c(c):
    return f"{c.real:.17g}{c.imag:+.17g}j"


def _add_common(sub, with_t=True):
    if with_t:
        sub.add_argument("--t", type=float, help="evolution time of the layer")
    sub.add_argument("--Y0", type=float, help="truncation height (default 30)")
    sub.add_argument("--h", type=float, help="grid spacing")
    sub.add_argument("--alpha", type=float,
                     help="wall-trace wavenumber of the driving wave (default 1)")
    sub.add_argument("--convention", choices=sorted(CONVENTIONS),
                     help="profile normalization (default wall-anchored)")
    sub.add_argument("--out", help="output directory (default out)")
    sub.add_argument("--config", help="JSON file with flag values")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blstab",
        description="Couette boundary-layer profiles and their shear instability.")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("profile", help="tabulate V(t, Y) and V''(t, Y)")
    _add_common(p)

    p = subs.add_parser("spectrum", help="dense Rayleigh spectrum at time t")
    _add_common(p)
    p.add_argument("--alpha-ray", type=float, dest="alpha_ray",
                   help="perturbation wavenumber (default sqrt(0.1))")
    p.add_argument("--threshold", type=float,
                   help="|Im c| cut separating discrete from continuous")

    p = subs.add_parser("shoot", help="refine one eigenvalue by shooting")
    _add_common(p)
    p.add_argument("--alpha-ray", type=float, dest="alpha_ray",
                   help="perturbation wavenumber (default sqrt(0.1))")
    p.add_argument("--threshold", type=float,
                   help="instability cut used when seeding from the matrix")
    p.add_argument("--steps", type=int, help="RK4 step count (default 30000)")
    p.add_argument("--seed",
                   help="'matrix' (dense eigenvalue) or a complex literal "
                        "such as 0.15+0.15j")

    p = subs.add_parser("sweep", help="growth rate over a range of times")
    _add_common(p, with_t=False)
    p.add_argument("--t-min", type=float, dest="t_min", help="first time (default 0.5)")
    p.add_argument("--t-max", type=float, dest="t_max", help="last time (default 16)")
    p.add_argument("--t-step", type=float, dest="t_step", help="time step (default 0.1)")
    p.add_argument("--alpha-ray", type=float, dest="alpha_ray",
                   help="perturbation wavenumber (default sqrt(0.1))")
    p.add_argument("--threshold", type=float,
                   help="|Im c| cut below which a point counts as stable")
    p.add_argument("--jobs", type=int, help="worker processes (default 1)")

    p = subs.add_parser("os", help="viscous eigenvalue against the inviscid one")
    _add_common(p)
    p.add_argument("--alpha-ray", type=float, dest="alpha_ray",
                   help="perturbation wavenumber (default sqrt(0.1))")
    p.add_argument("--threshold", type=float,
                   help="instability cut used when seeding from the matrix")
    p.add_argument("--nu-hat", type=float, nargs="+", dest="nu_hat",
                   help="decreasing viscosity values (default 1e-3 2.5e-4 6.25e-5)")

    return parser


def _apply_config(ns, parser):
    """Three-way merge: explicit flag > config file > built-in default."""
    known = set(vars(ns)) - {"command", "config"}
    if ns.config is not None:
        try:
            with open(ns.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            parser.error(f"cannot read config {ns.config}: {exc}")
        if not isinstance(data, dict):
            parser.error("config must be a JSON object")
        for key, value in data.items():
            dest = key.replace("-", "_")
            if dest not in known:
                parser.error(f"unknown config key {key!r} for "
                             f"'{ns.command}' (expected one of: "
                             f"{', '.join(sorted(known))})")
            if getattr(ns, dest) is None:
                setattr(ns, dest, value)
    for key, value in _DEFAULTS[ns.command].items():
        if getattr(ns, key) is None:
            setattr(ns, key, value)


def _validate(ns, parser):
    """Range checks shared by the subcommands; argparse exit code 2 on failure."""
    def positive(name):
        if hasattr(ns, name):
            try:
                value = float(getattr(ns, name))
            except (TypeError, ValueError):
                parser.error(f"--{name.replace('_', '-')} must be a number")
            if not math.isfinite(value) or value <= 0:
                parser.error(f"--{name.replace('_', '-')} must be positive")
            setattr(ns, name, value)

    if hasattr(ns, "t") and ns.t is None:
        parser.error("the --t flag is required")
    for name in ("t", "Y0", "h", "alpha", "alpha_ray", "threshold",
                 "t_min", "t_max", "t_step"):
        positive(name)
    if hasattr(ns, "t_max") and ns.t_max < ns.t_min:
        parser.error("--t-max must be >= --t-min")
    for name in ("steps", "jobs"):
        if hasattr(ns, name):
            try:
                value = int(getattr(ns, name))
            except (TypeError, ValueError):
                parser.error(f"--{name} must be an integer")
            if value < 1:
                parser.error(f"--{name} must be >= 1")
            setattr(ns, name, value)
    if hasattr(ns, "nu_hat"):
        try:
            values = [float(v) for v in np.atleast_1d(ns.nu_hat)]
        except (TypeError, ValueError):
            parser.error("--nu-hat must be a list of numbers")
        if len(values) < 2:
            parser.error("--nu-hat needs at least two values to fit a slope")
        if any(not math.isfinite(v) or v <= 0 for v in values):
            parser.error("--nu-hat values must be positive")
        ns.nu_hat = values
    ns.out = Path(ns.out)


def _build_problem(ns):
    grid = HalfLineGrid(Y0=ns.Y0, h=ns.h)
    prof = build_profile(ns.t, grid, convention=ns.convention, alpha=ns.alpha)
    return RayleighProblem(prof, ns.alpha_ray)


def _grid_meta(ns):
    meta = {"t": _fmt(ns.t), "h": _fmt(ns.h), "Y0": _fmt(ns.Y0),
            "alpha": _fmt(ns.alpha), "convention": ns.convention}
    if hasattr(ns, "alpha_ray"):
        meta["alpha_ray"] = _fmt(ns.alpha_ray)
    if hasattr(ns, "threshold"):
        meta["threshold"] = _fmt(ns.threshold)
    return meta


def cmd_profile(ns) -> int:
    grid = HalfLineGrid(Y0=ns.Y0, h=ns.h)
    prof = build_profile(ns.t, grid, convention=ns.convention, alpha=ns.alpha)
    path = ns.out / "profile.csv"
    write_profile_csv(prof, path)
    print(f"far-field V = {prof.far_field:.17g}")
    print(f"V range = [{float(prof.V.min()):.17g}, {float(prof.V.max()):.17g}]")
    print(f"wrote {path}")
    return 0


def cmd_spectrum(ns) -> int:
    problem = _build_problem(ns)
    matrix = assemble_rayleigh_matrix(problem)
    spectrum = compute_spectrum(matrix, threshold=ns.threshold, meta=_grid_meta(ns))
    path = ns.out / "spectrum.csv"
    write_spectrum_csv(spectrum, path)
    print(f"wrote {path}")
    c = most_unstable(spectrum)
    if c is None:
        print("STABLE")
        return 3
    print(f"UNSTABLE c = {_fmt_c(c)}")
    return 0


def cmd_shoot(ns) -> int:
    problem = _build_problem(ns)
    if ns.seed == "matrix":
        matrix = assemble_rayleigh_matrix(problem)
        seed = most_unstable(compute_spectrum(matrix, threshold=ns.threshold))
        if seed is None:
            print("STABLE: no matrix eigenvalue above the threshold to seed from")
            return 3
    else:
        try:
            seed = complex(ns.seed)
        except ValueError:
            print(f"error: --seed must be 'matrix' or a complex literal, "
                  f"got {ns.seed!r}", file=sys.stderr)
            return 2
    config = ShootingConfig(Y0=ns.Y0, steps=ns.steps)
    pair = newton_refine(seed, problem, config)
    meta = _grid_meta(ns)
    meta["steps"] = str(ns.steps)
    meta["seed"] = _fmt_c(seed)
    csv_path = ns.out / "eigenpair.csv"
    write_eigenpair_csv(pair, csv_path, meta=meta)
    payload = {"t": ns.t, "h": ns.h, "Y0": ns.Y0, "alpha": ns.alpha,
               "alpha_ray": ns.alpha_ray, "convention": ns.convention,
               "steps": ns.steps, "seed": [seed.real, seed.imag],
               "c": [pair.c.real, pair.c.imag],
               "residual": pair.residual, "iterations": pair.iterations}
    json_path = ns.out / "c.json"
    with open(json_path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    print(f"c = {_fmt_c(pair.c)}")
    print(f"wall residual = {pair.residual:.3g} after {pair.iterations} iterations")
    print(f"wrote {csv_path} and {json_path}")
    return 0


def cmd_sweep(ns) -> int:
    count = int(math.floor((ns.t_max - ns.t_min) / ns.t_step + 1e-9)) + 1
    t_grid = ns.t_min + ns.t_step * np.arange(count)
    result = sweep_growth(t_grid, alpha_ray=ns.alpha_ray, Y0=ns.Y0, h=ns.h,
                          convention=ns.convention, alpha=ns.alpha,
                          threshold=ns.threshold, jobs=ns.jobs)
    meta = {"t_min": _fmt(ns.t_min), "t_max": _fmt(ns.t_max),
            "t_step": _fmt(ns.t_step), "h": _fmt(ns.h), "Y0": _fmt(ns.Y0),
            "alpha": _fmt(ns.alpha), "alpha_ray": _fmt(ns.alpha_ray),
            "threshold": _fmt(ns.threshold), "convention": ns.convention}
    path = ns.out / "sweep.csv"
    write_sweep_csv(result, path, meta=meta)
    print(f"wrote {path}")
    failed = int(np.sum(np.isnan(result.im_c_max)))
    if failed:
        print(f"warning: {failed} of {count} sweep points failed", file=sys.stderr)
    if failed == count:
        print("error: every sweep point failed", file=sys.stderr)
        return 4
    idx = int(np.nanargmax(result.im_c_max))
    print(f"max Im c = {result.im_c_max[idx]:.17g} at t = {result.t[idx]:.17g}")
    return 0


def cmd_os(ns) -> int:
    problem = _build_problem(ns)
    matrix = assemble_rayleigh_matrix(problem)
    seed = most_unstable(compute_spectrum(matrix, threshold=ns.threshold))
    if seed is None:
        print("STABLE: no inviscid instability to track")
        return 3
    pair = newton_refine(seed, problem, ShootingConfig(Y0=ns.Y0))
    report = scaling_study(problem, pair.c, nu_hats=ns.nu_hat)
    path = ns.out / "expansion.json"
    write_expansion_json(report, path)
    print(f"c_ray = {_fmt_c(report.c_ray)}")
    for nu, c_os in zip(report.nu_hats, report.c_os):
        print(f"nu_hat = {nu:.6g}  c_os = {_fmt_c(c_os)}  "
              f"gap = {abs(c_os - report.c_ray):.6g}")
    print(f"fitted exponent = {report.exponent:.17g}")
    print(f"wrote {path}")
    return 0


_COMMANDS = {"profile": cmd_profile, "spectrum": cmd_spectrum,
             "shoot": cmd_shoot, "sweep": cmd_sweep, "os": cmd_os}


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    _apply_config(ns, parser)
    _validate(ns, parser)
    ns.out.mkdir(parents=True, exist_ok=True)
    try:
        return _COMMANDS[ns.command](ns)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        # EigensolverError, PoleProximityError, NewtonDivergenceError and
        # StiffnessError all derive from RuntimeError
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
