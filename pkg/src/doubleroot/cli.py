"""Command-line front end.

    doubleroot solve|integrate|compare|period [--preset NAME | --config PATH]
        [--out DIR] [--format csv|json] [--rel-tol X] [--seed N] [--perturb-initial X]

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 collision or singular configuration.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import sys
from pathlib import Path

import numpy as np

from . import config as cfgmod
from .analysis import compare, detect_period, successive_residuals
from .errors import ConfigError, DoubleRootError
from .integrator import integrate
from .io import trajectory_dict, write_csv, write_json
from .laws import LawKind, asymptotic_period, period_multiple
from .polynomial import ZeroState
from .presets import get_preset, preset_names
from .printed import CATALOG, integrate_printed, preset_params
from .solver import SolveRequest, solve

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_SINGULAR = 0, 2, 3, 4


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", metavar="NAME", help="compiled-in configuration")
    src.add_argument("--config", metavar="PATH", help="JSON run configuration")
    common.add_argument("--out", metavar="DIR", help="output directory")
    common.add_argument("--format", choices=cfgmod.FORMATS, help="trajectory file format")
    common.add_argument("--rel-tol", type=float, metavar="X", help="integrator rel_tol")
    common.add_argument("--seed", type=int, default=0, metavar="N",
                        help="seed for randomized perturbations (default 0)")
    common.add_argument("--perturb-initial", type=float, default=0.0, metavar="X",
                        help="shift the initial data by random offsets of size X")

    parser = argparse.ArgumentParser(
        prog="doubleroot",
        description="Zeros of a polynomial with a double zero: algebraic solution, "
                    "direct integration and period analysis.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="algebraic solution")
    p = sub.add_parser("integrate", parents=[common], help="direct numerical integration")
    p.add_argument("--printed", action="store_true",
                   help="use the hand-expanded right-hand side of the preset's system")
    p.add_argument("--verbatim", action="store_true",
                   help="with --printed, keep known misprints instead of the corrected form")
    sub.add_parser("compare", parents=[common], help="algebraic vs direct")
    p = sub.add_parser("period", parents=[common], help="period detection")
    p.add_argument("--algebraic", action="store_true",
                   help="analyse the algebraic solution instead of the integrated one")
    p.add_argument("--k-max", type=int, help="number of periods to test")
    p.add_argument("--tol", type=float, help="return tolerance")
    return parser


def _load(args) -> cfgmod.RunConfig:
    if args.preset is not None:
        try:
            cfg = cfgmod.from_preset(get_preset(args.preset))
        except KeyError:
            raise ConfigError(
                f"unknown preset {args.preset!r}; available presets:\n  "
                + "\n  ".join(preset_names()), field="preset") from None
    else:
        cfg = cfgmod.load(args.config)
    changes = {}
    if args.out is not None:
        changes["out_dir"] = args.out
    if args.format is not None:
        changes["fmt"] = args.format
    if args.rel_tol is not None:
        if not args.rel_tol > 0:
            raise ConfigError("--rel-tol must be positive", field="rel_tol")
        changes["integrator"] = cfg.integrator.with_rel_tol(args.rel_tol)
    return dataclasses.replace(cfg, **changes) if changes else cfg


def _perturbed(initial: ZeroState, size: float, seed: int) -> ZeroState:
    if size == 0:
        return initial
    rng = np.random.default_rng(seed)
    n = initial.N
    dx = size * (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / math.sqrt(2)
    return ZeroState.from_arrays(initial.positions + dx, initial.velocities)


def _write_trajectory(cfg, traj, stem) -> Path:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if cfg.fmt == "csv":
        return write_csv(traj, out / f"{stem}.csv")
    return write_json(trajectory_dict(traj), out / f"{stem}.json")


def _reference_period(spec):
    """(shift, is_asymptotic): the coefficient period, or its undamped part."""
    damped = any(law.kind is LawKind.DAMPED for law in spec.laws.values())
    if damped:
        return asymptotic_period(spec), True
    return spec.basic_period, False


def _period_residuals(cfg, traj) -> dict:
    shift, asym = _reference_period(cfg.model)
    if asym:
        k = int(math.floor(cfg.t_end / shift + 1e-9))
        if k >= 2:
            return {"period": shift, "successive": successive_residuals(traj, shift, k)}
    return {}


def cmd_solve(args, cfg) -> int:
    initial = _perturbed(cfg.initial, args.perturb_initial, args.seed)
    traj = solve(SolveRequest(cfg.model, initial, cfg.t_grid))
    path = _write_trajectory(cfg, traj, f"{cfg.name}-algebraic")
    d = traj.diagnostics
    report = {
        "name": cfg.name, "source": traj.source, "samples": len(traj),
        "double_root_separation": d["separation"],
        "p_residual": d["p_residual"], "dp_residual": d["dp_residual"],
        "double_root_discrepancy": d["discrepancy"], "bisections": d["bisections"],
        "ybar": traj.ybar,
    }
    residuals = _period_residuals(cfg, traj)
    if residuals:
        report["period_residuals"] = residuals
    write_json(report, Path(cfg.out_dir) / f"{cfg.name}-diagnostics.json")
    print(f"{cfg.name}: {len(traj)} samples -> {path}")
    return EXIT_OK


def _integrate(args, cfg, t_grid, initial):
    if getattr(args, "printed", False):
        if cfg.name not in CATALOG:
            raise ConfigError(f"no hand-expanded system for {cfg.name!r}; "
                              f"available: {', '.join(CATALOG)}", field="preset")
        return integrate_printed(cfg.name, preset_params(cfg.model), initial, t_grid,
                                 cfg.integrator, verbatim=args.verbatim)
    return integrate(cfg.model, initial, t_grid, cfg.integrator)


def cmd_integrate(args, cfg) -> int:
    initial = _perturbed(cfg.initial, args.perturb_initial, args.seed)
    traj = _integrate(args, cfg, cfg.t_grid, initial)
    path = _write_trajectory(cfg, traj, f"{cfg.name}-{traj.source}")
    report = {"name": cfg.name, "source": traj.source, "samples": len(traj),
              **traj.diagnostics}
    residuals = _period_residuals(cfg, traj)
    if residuals:
        report["period_residuals"] = residuals
    write_json(report, Path(cfg.out_dir) / f"{cfg.name}-{traj.source}-diagnostics.json")
    print(f"{cfg.name}: {len(traj)} samples -> {path}")
    return EXIT_OK


def cmd_compare(args, cfg) -> int:
    algebraic = solve(SolveRequest(cfg.model, cfg.initial, cfg.t_grid))
    initial = _perturbed(cfg.initial, args.perturb_initial, args.seed)
    direct = integrate(cfg.model, initial, cfg.t_grid, cfg.integrator)
    report = compare(algebraic, direct)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_json({"name": cfg.name, "perturb_initial": args.perturb_initial,
                **dataclasses.asdict(report)}, out / f"{cfg.name}-comparison.json")
    print(f"{cfg.name}: {report.summary()}")
    return EXIT_OK


def cmd_period(args, cfg) -> int:
    shift, asym = _reference_period(cfg.model)
    shift = cfg.period.T or shift
    if args.k_max is not None:
        k_max = args.k_max
    elif cfg.period.k_max is not None:
        k_max = cfg.period.k_max
    elif asym:
        k_max = 21
    else:
        mult = period_multiple(cfg.model) or 1
        k_max = max(16, 3 * math.ceil(mult))
    if k_max < 1:
        raise ConfigError("k_max must be positive", field="period.k_max")
    tol = args.tol if args.tol is not None else cfg.period.tol
    step = cfg.t_end / (cfg.samples - 1)
    n = int(math.ceil(k_max * shift / step - 1e-9))
    t_grid = np.linspace(0.0, n * step, n + 1)
    initial = _perturbed(cfg.initial, args.perturb_initial, args.seed)
    if args.algebraic:
        traj = solve(SolveRequest(cfg.model, initial, t_grid))
    else:
        traj = integrate(cfg.model, initial, t_grid, cfg.integrator)
    report = detect_period(traj, shift, k_max, tol)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_json({"name": cfg.name, "T": shift, "k_max": k_max, "tol": tol,
                "source": traj.source, **dataclasses.asdict(report)},
               out / f"{cfg.name}-period.json")
    print(f"{cfg.name}: {report.verdict}, k={report.multiple_of_T} "
          f"(period {report.candidate_period:.6g}, residual {report.residual:.3e})")
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "integrate": cmd_integrate,
            "compare": cmd_compare, "period": cmd_period}


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = _load(args)
        return COMMANDS[args.command](args, cfg)
    except ConfigError as exc:
        where = f" [{exc.field}]" if exc.field else ""
        print(f"config error{where}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DoubleRootError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
