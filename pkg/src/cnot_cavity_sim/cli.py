"""Command-line front end: point evaluation, sweeps, convention search, cross-checks.

All rates are taken as ratios to the main cavity decay rate kappa, which is
fixed at 1 internally; the physics depends only on such ratios, so this
removes any unit ambiguity from the interface.

Exit codes: 0 success, 1 check failed or no convention matched, 2 usage
error, 3 I/O error.

The comparison convention used by ``point`` and ``sweep`` resolves in this
order: an explicit ``--convention`` flag, then a ``cnotsim.defaults`` file in
the current directory (written by ``conventions --pin``), then the built-in
default.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .cavity import CavityParams, coefficients
from .circuit import closed_form_output, propagate_pipeline
from .components import ClonerModel, ControlState, TargetState
from .fidelity import (
    DEFAULT_CONVENTION,
    AveragingMethod,
    AveragingSpec,
    FidelityConvention,
    average_fidelity,
    convention_search,
)
from .report import render_heatmap
from .sweep import (
    SweepConfig,
    axis_points,
    locate_max,
    run_sweep,
    write_csv,
    write_heatmap,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3

DEFAULTS_FILENAME = "cnotsim.defaults"
THREADS_ENV_VAR = "CNOTSIM_THREADS"


class CliError(Exception):
    """Usage-level failure; the message names the offending flag."""


@dataclass(frozen=True)
class CliConfig:
    """Validated shared flags for the single-point subcommands."""

    ks_ratio: float
    g_ratio: float
    rho_ratio: float
    f_uc: float
    convention: FidelityConvention
    averaging: AveragingSpec

    def cavity_params(self) -> CavityParams:
        return CavityParams(kappa=1.0, kappa_s=self.ks_ratio, g=self.g_ratio,
                            rho=self.rho_ratio)

    def cloner(self) -> ClonerModel:
        return ClonerModel(self.f_uc)


def _check_positive(flag: str, value: float) -> float:
    if not (math.isfinite(value) and value > 0.0):
        raise CliError(f"{flag} must be a finite positive number, got {value!r}")
    return float(value)


def _check_f_uc(value: float) -> float:
    if not (math.isfinite(value) and 0.0 < value <= 1.0):
        raise CliError(f"--f-uc must be in (0, 1], got {value!r}")
    return float(value)


def _check_seed(value: int) -> int:
    if not 0 <= value < 2**64:
        raise CliError(f"--seed must be an unsigned 64-bit integer, got {value!r}")
    return value


def _load_pinned_convention() -> FidelityConvention | None:
    path = Path(DEFAULTS_FILENAME)
    if not path.is_file():
        return None
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            try:
                return FidelityConvention.parse(line)
            except ValueError as exc:
                raise CliError(f"{DEFAULTS_FILENAME}: {exc}") from exc
    return None


def _resolve_convention(flag_value: str | None) -> FidelityConvention:
    if flag_value is not None:
        try:
            return FidelityConvention.parse(flag_value)
        except ValueError as exc:
            raise CliError(f"--convention: {exc}") from exc
    pinned = _load_pinned_convention()
    return pinned if pinned is not None else DEFAULT_CONVENTION


def _averaging_from(args: argparse.Namespace) -> AveragingSpec:
    if args.points < 8:
        raise CliError(f"--points must be >= 8, got {args.points}")
    if args.samples < 1000:
        raise CliError(f"--samples must be >= 1000, got {args.samples}")
    return AveragingSpec(
        method=AveragingMethod(args.avg),
        quadrature_points=args.points,
        mc_samples=args.samples,
        seed=_check_seed(args.seed),
    )


def _cli_config(args: argparse.Namespace) -> CliConfig:
    return CliConfig(
        ks_ratio=_check_positive("--ks-ratio", args.ks_ratio),
        g_ratio=_check_positive("--g-ratio", args.g_ratio),
        rho_ratio=_check_positive("--rho-ratio", args.rho_ratio),
        f_uc=_check_f_uc(args.f_uc),
        convention=_resolve_convention(args.convention),
        averaging=_averaging_from(args),
    )


def _worker_count(serial: bool) -> int:
    if serial:
        return 1
    workers = os.cpu_count() or 1
    cap_text = os.environ.get(THREADS_ENV_VAR)
    if cap_text is not None:
        try:
            cap = int(cap_text)
        except ValueError:
            cap = 0
        if cap < 1:
            raise CliError(
                f"{THREADS_ENV_VAR} must be a positive integer, got {cap_text!r}"
            )
        workers = min(workers, cap)
    return workers


def _cmd_point(args: argparse.Namespace) -> int:
    cfg = _cli_config(args)
    co = coefficients(cfg.cavity_params())
    p_r = abs(co.t0) ** 2 + abs(co.r0) ** 2
    p_l = cfg.f_uc * (abs(co.t1) ** 2 + abs(co.r1) ** 2)
    estimate = average_fidelity(co, cfg.cloner(), cfg.convention, cfg.averaging)
    print(f"coefficients: t0={co.t0:.12g} r0={co.r0:.12g} "
          f"t1={co.t1:.12g} r1={co.r1:.12g}")
    print(f"p_success_control_R={p_r:.6f} p_success_control_L={p_l:.6f}")
    line = f"convention={cfg.convention.canonical()} avg_fidelity={estimate.value:.4f}"
    if estimate.std_error is not None:
        line += f" std_error={estimate.std_error:.2e}"
    print(line)
    return EXIT_OK


def _build_axis(prefix: str, args: argparse.Namespace) -> tuple[float, ...]:
    lo = getattr(args, f"{prefix}_min")
    hi = getattr(args, f"{prefix}_max")
    count = getattr(args, f"{prefix}_count")
    scale = getattr(args, f"{prefix}_scale")
    try:
        return axis_points(lo, hi, count, scale)
    except ValueError as exc:
        raise CliError(f"--{prefix}-min/--{prefix}-max/--{prefix}-count: {exc}") from exc


def _cmd_sweep(args: argparse.Namespace) -> int:
    config = SweepConfig(
        kappa_s_ratios=_build_axis("ks", args),
        g_ratios=_build_axis("g", args),
        rho_ratio=_check_positive("--rho-ratio", args.rho_ratio),
        f_uc=_check_f_uc(args.f_uc),
        convention=_resolve_convention(args.convention),
        averaging=_averaging_from(args),
    )
    grid = run_sweep(config, workers=_worker_count(args.serial))
    write_csv(grid, args.out)
    if args.pgm is not None:
        write_heatmap(grid, args.pgm)
    if args.png is not None:
        render_heatmap(grid, args.png)
    best = locate_max(grid)
    print(f"max={best.value:.4f} at ks={best.kappa_s_ratio:.6g} "
          f"g={best.g_ratio:.6g} regime={best.regime.value}")
    return EXIT_OK


def _cmd_conventions(args: argparse.Namespace) -> int:
    ks = _check_positive("--ks-ratio", args.ks_ratio)
    g = _check_positive("--g-ratio", args.g_ratio)
    rho = _check_positive("--rho-ratio", args.rho_ratio)
    f_uc = _check_f_uc(args.f_uc)
    if args.points < 8:
        raise CliError(f"--points must be >= 8, got {args.points}")
    if not (math.isfinite(args.target) and 0.0 < args.target <= 1.0):
        raise CliError(f"--target must be in (0, 1], got {args.target!r}")
    if not (math.isfinite(args.tol) and args.tol > 0.0):
        raise CliError(f"--tol must be > 0, got {args.tol!r}")

    params = CavityParams(kappa=1.0, kappa_s=ks, g=g, rho=rho)
    results = convention_search(coefficients(params), ClonerModel(f_uc),
                                args.target, args.tol,
                                quadrature_points=args.points)
    for res in results:
        flag = "  match" if res.matched else ""
        print(f"{res.convention.canonical():<36} {res.value:.6f} "
              f"{res.deviation:.6f}{flag}")
    matches = [res for res in results if res.matched]
    print(f"matched={len(matches)} target={args.target:.4f} tol={args.tol:g}")
    if not matches:
        return EXIT_CHECK_FAILED
    if args.pin:
        winner = matches[0].convention.canonical()
        text = (f"# pinned comparison convention (target={args.target:.4f} "
                f"tol={args.tol:g})\n{winner}\n")
        try:
            Path(DEFAULTS_FILENAME).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise OSError(f"cannot write {DEFAULTS_FILENAME}: {exc}") from exc
        print(f"pinned {winner} to {DEFAULTS_FILENAME}")
    return EXIT_OK


def _random_qubit(rng: np.random.Generator) -> tuple[complex, complex]:
    v = rng.normal(size=4)
    norm = math.sqrt(float(np.dot(v, v)))
    if norm < 1e-12:
        return 1.0 + 0.0j, 0.0 + 0.0j
    return complex(v[0], v[1]) / norm, complex(v[2], v[3]) / norm


def _random_params(rng: np.random.Generator) -> tuple[CavityParams, ClonerModel]:
    params = CavityParams(
        kappa=1.0,
        kappa_s=float(10.0 ** rng.uniform(-3.0, 0.5)),
        g=float(10.0 ** rng.uniform(-3.0, 0.5)),
        rho=float(rng.uniform(0.0, 0.5)),
        delta_c=float(rng.uniform(-1.0, 1.0)),
        delta_x=float(rng.uniform(-1.0, 1.0)),
    )
    return params, ClonerModel(float(rng.uniform(0.3, 1.0)))


def _cmd_crosscheck(args: argparse.Namespace) -> int:
    if args.trials < 1:
        raise CliError(f"--trials must be >= 1, got {args.trials}")
    if args.param_sets < 1:
        raise CliError(f"--param-sets must be >= 1, got {args.param_sets}")
    seed = _check_seed(args.seed)

    rng = np.random.Generator(np.random.PCG64(seed))
    worst = 0.0
    worst_case = None
    for _ in range(args.param_sets):
        params, cloner = _random_params(rng)
        coeffs = coefficients(params)
        for _ in range(args.trials):
            control = ControlState(*_random_qubit(rng))
            target = TargetState(*_random_qubit(rng))
            staged = propagate_pipeline(control, target, params, cloner)
            direct = closed_form_output(control, target, coeffs, cloner)
            deviation = float(
                np.max(np.abs(staged.as_array() - direct.as_array()))
            )
            if deviation > worst:
                worst = deviation
                worst_case = (params, cloner, control, target)
    print(f"max_deviation={worst:.3e} over trials={args.trials} "
          f"param_sets={args.param_sets} seed={seed}")
    if worst < 1e-12:
        return EXIT_OK
    params, cloner, control, target = worst_case
    print(f"FAIL at params={params} f_uc={cloner.f_uc!r} "
          f"control=({control.a_r!r}, {control.a_l!r}) "
          f"target=({target.a_r!r}, {target.a_l!r})")
    return EXIT_CHECK_FAILED


def _add_cavity_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--ks-ratio", type=float, default=0.01,
                        help="side leakage over kappa (default 0.01)")
    parser.add_argument("--g-ratio", type=float, default=0.01,
                        help="dot-cavity coupling over kappa (default 0.01)")
    _add_model_flags(parser)


def _add_model_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--rho-ratio", type=float, default=0.1,
                        help="exciton decay over kappa (default 0.1)")
    parser.add_argument("--f-uc", type=float, default=5.0 / 6.0,
                        help="cloner copy fidelity in (0, 1] (default 5/6)")


def _add_averaging_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--convention", type=str, default=None,
                        help="comparison convention string such as "
                             "flipboth/aswritten/raw/uniform")
    parser.add_argument("--avg", choices=[m.value for m in AveragingMethod],
                        default=AveragingMethod.QUADRATURE.value,
                        help="averaging method (default quadrature)")
    parser.add_argument("--points", type=int, default=64,
                        help="quadrature points per angle (default 64)")
    parser.add_argument("--samples", type=int, default=100_000,
                        help="Monte Carlo sample count (default 100000)")
    parser.add_argument("--seed", type=int, default=0,
                        help="Monte Carlo seed (default 0)")


def _add_axis_flags(parser: argparse.ArgumentParser, prefix: str,
                    label: str) -> None:
    parser.add_argument(f"--{prefix}-min", type=float, default=0.01,
                        help=f"smallest {label} (default 0.01)")
    parser.add_argument(f"--{prefix}-max", type=float, default=3.0,
                        help=f"largest {label} (default 3.0)")
    parser.add_argument(f"--{prefix}-count", type=int, default=60,
                        help="number of axis points (default 60)")
    parser.add_argument(f"--{prefix}-scale", choices=("log", "lin"),
                        default="log", help="axis spacing (default log)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cnot-cavity-sim",
        description="Simulator of a cavity-mediated photonic CNOT gate with a "
                    "cloner-assisted control arm.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    point = sub.add_parser(
        "point", help="evaluate coefficients and average fidelity at one point")
    _add_cavity_flags(point)
    _add_averaging_flags(point)
    point.set_defaults(handler=_cmd_point)

    sweep = sub.add_parser(
        "sweep", help="scan the (kappa_s/kappa, g/kappa) plane and export files")
    _add_axis_flags(sweep, "ks", "kappa_s/kappa value")
    _add_axis_flags(sweep, "g", "g/kappa value")
    _add_model_flags(sweep)
    _add_averaging_flags(sweep)
    sweep.add_argument("--out", type=str, default="sweep.csv",
                       help="CSV destination (default sweep.csv)")
    sweep.add_argument("--pgm", type=str, default=None,
                       help="also write a plain PGM heatmap here")
    sweep.add_argument("--png", type=str, default=None,
                       help="also render a figure here")
    sweep.add_argument("--serial", action="store_true",
                       help="force single-worker evaluation")
    sweep.set_defaults(handler=_cmd_sweep)

    conv = sub.add_parser(
        "conventions", help="score all 36 comparison conventions against a target")
    _add_cavity_flags(conv)
    conv.add_argument("--points", type=int, default=64,
                      help="quadrature points per angle (default 64)")
    conv.add_argument("--target", type=float, default=0.9043,
                      help="target average fidelity (default 0.9043)")
    conv.add_argument("--tol", type=float, default=0.005,
                      help="match tolerance (default 0.005)")
    conv.add_argument("--pin", action="store_true",
                      help=f"write the best match to {DEFAULTS_FILENAME}")
    conv.set_defaults(handler=_cmd_conventions)

    cross = sub.add_parser(
        "crosscheck",
        help="verify the staged pipeline against the closed form on random inputs")
    cross.add_argument("--trials", type=int, default=1000,
                       help="random input pairs per parameter set (default 1000)")
    cross.add_argument("--param-sets", type=int, default=20,
                       help="random parameter sets (default 20)")
    cross.add_argument("--seed", type=int, default=0,
                       help="random seed (default 0)")
    cross.set_defaults(handler=_cmd_crosscheck)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.handler(args)
    except (CliError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


def entry() -> None:
    sys.exit(main())
