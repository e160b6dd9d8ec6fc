"""Command-line front end: sweeps, bifurcation histograms, oracle verification.

Exit codes: 0 success, 2 usage error, 3 numerical failure (including a
failed verification run).  Flag values may also come from a flat
``key = value`` config file via --config; explicit flags win over the file,
which wins over built-in defaults.  The resolved configuration is echoed
into the run manifest, and reruns with the same seed produce byte-identical
CSVs for any --workers value.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from .ensemble import (HAMILTONIAN, MEASUREMENT_ONLY, GridPoint, sweep)
from .errors import SimulationError
from .output import (ensure_out_dir, write_bifurcation_csv, write_ensemble_csv,
                     write_hist_csv, write_manifest, write_series_csv)
from .stats import (DEFAULT_BINS, accumulate_trajectory, peak_diagnostics)
from .trajectory import (DEFAULT_DT, DEFAULT_MEASUREMENT_ONLY_GAMMA_DT,
                         TrajectoryConfig)

USAGE_EXIT = 2
NUMERICAL_EXIT = 3


def _read_config_file(path: str) -> dict[str, str]:
    values = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line is not key = value: {raw!r}")
        key, value = line.split("=", 1)
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def _apply_config_defaults(subparser: argparse.ArgumentParser,
                           argv: list[str]) -> None:
    """Load --config values as defaults of the chosen subcommand parser."""
    probe = argparse.ArgumentParser(add_help=False)
    probe.add_argument("--config")
    known, _ = probe.parse_known_args(argv)
    if not known.config:
        return
    raw = _read_config_file(known.config)
    defaults = {}
    for action in subparser._actions:
        if action.dest in raw:
            text = raw[action.dest]
            if action.nargs in ("+", "*"):
                defaults[action.dest] = [action.type(v) for v in text.split()]
            elif isinstance(action, argparse._StoreTrueAction):
                defaults[action.dest] = text.lower() in ("1", "true", "yes")
            elif action.type is not None:
                defaults[action.dest] = action.type(text)
            else:
                defaults[action.dest] = text
    subparser.set_defaults(**defaults)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=12345,
                        help="master seed of the reproducible stream family")
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--workers", type=int, default=1,
                        help="trajectory worker processes")
    parser.add_argument("--force", action="store_true",
                        help="overwrite an existing run directory")
    parser.add_argument("--config", help="flat key = value file with defaults")


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(
        prog="kitaev-qsd",
        description="Monitored Kitaev-chain quantum-state-diffusion simulator")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    sw = sub.add_parser("entropy-sweep",
                        help="ensemble-averaged asymptotic entanglement entropy")
    sw.add_argument("--N", type=int, nargs="+", required=True,
                    help="system sizes")
    sw.add_argument("--alpha", type=float, nargs="+", required=True,
                    help="power-law exponents")
    sw.add_argument("--gamma", type=float, default=0.1,
                    help="measurement coupling strength")
    sw.add_argument("--measurement-only", action="store_true",
                    help="drop the Hamiltonian (J = h = 0 during evolution)")
    sw.add_argument("--nr", type=int, default=48, help="realizations per point")
    sw.add_argument("--dt", type=float, default=None,
                    help="time step (default 5e-3; measurement-only runs use "
                         "gamma*dt = 5e-4)")
    sw.add_argument("--steps", type=int, default=5000, help="steps per trajectory")
    sw.add_argument("--tstar", default="auto",
                    help="averaging window start, or 'auto' for half the horizon")
    sw.add_argument("--record-stride", type=int, default=10,
                    help="steps between recorded samples")
    _add_common(sw)

    bf = sub.add_parser("bifurcation",
                        help="expectation histograms from one long trajectory")
    bf.add_argument("--N", type=int, nargs="+", required=True)
    bf.add_argument("--alpha", type=float, nargs="+", required=True)
    bf.add_argument("--gamma", type=float, default=0.1)
    bf.add_argument("--horizon", type=float, default=1e4,
                    help="trajectory length in time units")
    bf.add_argument("--bins", type=int, default=DEFAULT_BINS)
    bf.add_argument("--dt", type=float, default=DEFAULT_DT)
    bf.add_argument("--tstar", default="auto",
                    help="burn-in before samples count (default: horizon/2)")
    _add_common(bf)

    vf = sub.add_parser("verify",
                        help="cross-validate the Gaussian engine against the "
                             "dense Fock-space oracle")
    vf.add_argument("--n", type=int, default=6, help="sites (at most 8 here)")
    vf.add_argument("--steps", type=int, default=200)
    vf.add_argument("--gamma", type=float, default=0.1)
    vf.add_argument("--alpha", type=float, default=2.0)
    vf.add_argument("--seed", type=int, default=12345)
    vf.add_argument("--corrupt-sign", action="store_true",
                    help=argparse.SUPPRESS)   # negative control for tests
    return parser, {"entropy-sweep": sw, "bifurcation": bf, "verify": vf}


def _parse_tstar(text: str, horizon: float, parser: argparse.ArgumentParser) -> float:
    if text == "auto":
        return 0.5 * horizon
    try:
        value = float(text)
    except ValueError:
        parser.error(f"--tstar must be a number or 'auto', got {text!r}")
    if value >= horizon:
        parser.error(f"--tstar {value} is past the simulated horizon {horizon}")
    return value


def _cmd_entropy_sweep(args, parser) -> int:
    started = time.perf_counter()
    mode = MEASUREMENT_ONLY if args.measurement_only else HAMILTONIAN
    mo_gamma_dt = DEFAULT_MEASUREMENT_ONLY_GAMMA_DT
    if args.measurement_only:
        dt = mo_gamma_dt if args.dt is None else args.dt
        mo_gamma_dt = dt
        time_unit = dt          # recorded times are gamma*t with gamma = 1
    else:
        dt = DEFAULT_DT if args.dt is None else args.dt
        time_unit = dt
    horizon = args.steps * time_unit
    t_star = _parse_tstar(args.tstar, horizon, parser)

    out = ensure_out_dir(args.out, args.force)
    grid = [GridPoint(n=n, alpha=a, gamma=args.gamma, mode=mode)
            for n in args.N for a in args.alpha]
    base = TrajectoryConfig(n_sites=grid[0].n, n_steps=args.steps, dt=dt,
                            gamma=args.gamma, record_stride=args.record_stride)
    results = sweep(grid, base, args.nr, args.seed, t_star=t_star,
                    workers=args.workers, mo_gamma_dt=mo_gamma_dt)

    outputs = []
    write_ensemble_csv(out / "ensemble.csv", results, args.seed)
    outputs.append("ensemble.csv")
    for point, stats in results:
        name = f"series_{point.tag}.csv"
        write_series_csv(out / name, stats)
        outputs.append(name)
        if not stats.plateau_ok:
            print(f"warning: {point.tag}: averaging window not converged "
                  f"(plateau check failed)", file=sys.stderr)
    write_manifest(out, command="entropy-sweep",
                   config={**_echo_args(args), "dt": dt, "t_star": t_star},
                   grid=[p.tag for p, _ in results], master_seed=args.seed,
                   outputs=outputs,
                   wall_time_s=time.perf_counter() - started)
    print(f"wrote {len(outputs)} files to {out}")
    return 0


def _cmd_bifurcation(args, parser) -> int:
    started = time.perf_counter()
    if args.horizon <= 0:
        parser.error(f"--horizon must be positive, got {args.horizon}")
    n_steps = int(round(args.horizon / args.dt))
    t_star = _parse_tstar(args.tstar, args.horizon, parser)
    out = ensure_out_dir(args.out, args.force)

    rows = []
    outputs = []
    for n in args.N:
        for alpha in args.alpha:
            point = GridPoint(n=n, alpha=alpha, gamma=args.gamma)
            cfg = TrajectoryConfig(n_sites=n, n_steps=n_steps, dt=args.dt,
                                   gamma=args.gamma, alpha=alpha,
                                   record_stride=1, seed=args.seed)
            hist = accumulate_trajectory(cfg, t_star=t_star, n_bins=args.bins)
            diag = peak_diagnostics(hist)
            rows.append((point, diag))
            name = f"hist_{point.tag}.csv"
            write_hist_csv(out / name, hist)
            outputs.append(name)
    write_bifurcation_csv(out / "bifurcation.csv", rows)
    outputs.append("bifurcation.csv")
    write_manifest(out, command="bifurcation",
                   config={**_echo_args(args), "n_steps": n_steps,
                           "t_star": t_star},
                   grid=[p.tag for p, _ in rows], master_seed=args.seed,
                   outputs=outputs,
                   wall_time_s=time.perf_counter() - started)
    print(f"wrote {len(outputs)} files to {out}")
    return 0


def _cmd_verify(args, parser) -> int:
    from .oracle import cross_validate

    if args.n > 8:
        parser.error(f"--n is capped at 8 for the verification run, got {args.n}")
    override = +2.0 if args.corrupt_sign else None
    report = cross_validate(n=args.n, n_steps=args.steps, gamma=args.gamma,
                            alpha=args.alpha, seed=args.seed,
                            measurement_prefactor_override=override)
    print(f"n={report.n_sites} steps={report.n_steps} gamma={report.gamma} "
          f"alpha={report.alpha} seed={report.seed}")
    print(f"max entropy deviation:     {report.max_entropy_dev:.3e}")
    print(f"max expectation deviation: {report.max_expectation_dev:.3e}")
    if report.passes(1e-6):
        print("PASS (all deviations below 1e-06)")
        return 0
    print("FAIL (deviations exceed 1e-06)")
    return NUMERICAL_EXIT


def _echo_args(args) -> dict:
    skip = {"subcommand", "config", "force"}
    return {k: v for k, v in vars(args).items() if k not in skip}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subparsers = build_parser()
    if argv and argv[0] in subparsers:
        _apply_config_defaults(subparsers[argv[0]], argv)
    args = parser.parse_args(argv)
    try:
        if args.subcommand == "entropy-sweep":
            return _cmd_entropy_sweep(args, parser)
        if args.subcommand == "bifurcation":
            return _cmd_bifurcation(args, parser)
        return _cmd_verify(args, parser)
    except (SimulationError, FileExistsError) as err:
        print(f"error: {err}", file=sys.stderr)
        return NUMERICAL_EXIT if isinstance(err, SimulationError) else USAGE_EXIT


if __name__ == "__main__":
    raise SystemExit(main())
