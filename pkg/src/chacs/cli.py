"""Command-line surface: demos, single reconstructions, and sweeps.

Exit codes: 0 success, 1 validation/usage error, 2 numerical failure.
All output files are written atomically (temp file + rename). The default
master seed is 0, overridable through the CHACS_SEED environment variable.
"""

import argparse
import os
import sys

import numpy as np

from chacs import __version__
from chacs.dictionary import (DISTRIBUTIONS, build_real_fourier_dictionary,
                              choose_scale, sample_sparse_coefficients,
                              synthesize_signal)
from chacs.errors import ChacsError, EmptyMeasurementError
from chacs.fileio import format_float, write_text_atomic
from chacs.harness import (SweepGrid, derive_seed, relative_error, run_sweep)
from chacs.henon import (HenonParams, MeasurementRecord, PlanarState,
                         finite_difference_jacobian, measure,
                         run_excited_slave, run_impulsive_slave_free,
                         run_master)
from chacs.reconstruction import (IRNLSConfig, l1_objective,
                                  reconstruct_with_restarts)


def _int_list(text: str):
    values = [int(part) for part in text.split(",") if part != ""]
    if not values:
        raise argparse.ArgumentTypeError("expected a comma-separated int list")
    return values


def _str_list(text: str):
    values = [part for part in text.split(",") if part != ""]
    for value in values:
        if value not in DISTRIBUTIONS:
            raise argparse.ArgumentTypeError(f"unknown distribution {value!r}")
    return values


def _add_dynamics_flags(p):
    p.add_argument("--a", type=float, default=1.4, help="map parameter a")
    p.add_argument("--b", type=float, default=0.3, help="map parameter b")
    p.add_argument("--x0", type=float, default=0.25, help="initial x")
    p.add_argument("--y0", type=float, default=0.25, help="initial y")


def _add_solver_flags(p):
    p.add_argument("--mu", type=float, default=1e-6,
                   help="sparsity regularization weight")
    p.add_argument("--eps", type=float, default=1e-14,
                   help="reweighting floor")
    p.add_argument("--tol", type=float, default=1e-5,
                   help="relative-change stopping threshold")
    p.add_argument("--max-outer", type=int, default=50)
    p.add_argument("--max-inner", type=int, default=200)


def _config_from(args) -> IRNLSConfig:
    return IRNLSConfig(mu=args.mu, eps=args.eps, outer_tol=args.tol,
                       max_outer=args.max_outer, max_inner=args.max_inner)


def _params_from(args) -> HenonParams:
    return HenonParams(args.a, args.b)


def _init_from(args) -> PlanarState:
    return PlanarState(args.x0, args.y0)


def _resolve_seed(seed):
    if seed is not None:
        return seed
    return int(os.environ.get("CHACS_SEED", "0"))


def _truth_csv_text(samples) -> str:
    lines = ["n,value"]
    lines.extend(f"{i},{format_float(v)}" for i, v in enumerate(samples))
    return "\n".join(lines) + "\n"


def _read_truth_csv(path) -> np.ndarray:
    with open(path) as handle:
        lines = [line.strip() for line in handle if line.strip()]
    if not lines or lines[0] != "n,value":
        raise ValueError(f"{path} is not a signal CSV (expected 'n,value')")
    return np.array([float(line.split(",")[1]) for line in lines[1:]])


def cmd_attractor(args) -> int:
    traj = run_master(_params_from(args), _init_from(args), args.steps)
    lines = ["n,x,y"]
    lines.extend(
        f"{i},{format_float(x)},{format_float(y)}"
        for i, (x, y) in enumerate(traj.states)
    )
    write_text_atomic(args.out, "\n".join(lines) + "\n")
    print(f"wrote {args.out} ({len(traj)} states)")
    return 0


def cmd_sync_demo(args) -> int:
    params = _params_from(args)
    master = run_master(params, _init_from(args), args.steps)
    _, err = run_impulsive_slave_free(
        master, args.lam, params, PlanarState(args.slave_x0, args.slave_y0))
    lines = ["n,abs_error"]
    lines.extend(f"{i},{format_float(e)}" for i, e in enumerate(err))
    write_text_atomic(args.out, "\n".join(lines) + "\n")
    tail = float(np.max(err[len(err) // 2:]))
    print(f"wrote {args.out} (lambda={args.lam}, max error over final half: "
          f"{format_float(tail)})")
    return 0


def cmd_measure(args) -> int:
    seed = _resolve_seed(args.seed)
    params = _params_from(args)
    init = _init_from(args)
    dictionary = build_real_fourier_dictionary(args.n)
    coeffs = sample_sparse_coefficients(args.n, args.k, args.distribution,
                                        derive_seed(seed, "coefficients"))
    scale = choose_scale(dictionary, coeffs, params, init,
                         args.target_amplitude)
    signal = synthesize_signal(dictionary, coeffs, scale)
    record = measure(params, init, args.lam, signal)
    write_text_atomic(args.out, record.to_json() + "\n")
    if args.truth_out is not None:
        write_text_atomic(args.truth_out, _truth_csv_text(signal.samples))
    print(f"wrote {args.out} (n={record.n}, m={record.m}, "
          f"scale={format_float(record.scale)})")
    return 0


def cmd_reconstruct(args) -> int:
    seed = _resolve_seed(args.seed)
    with open(args.record) as handle:
        record = MeasurementRecord.from_json(handle.read())
    dictionary = build_real_fourier_dictionary(record.n)
    config = _config_from(args)
    seeds = [derive_seed(seed, "start", i) for i in range(args.restarts)]
    results = reconstruct_with_restarts(record, dictionary, config, seeds)

    def objective_of(result):
        try:
            return l1_objective(record, dictionary, result.alpha_hat, config.mu)
        except ChacsError:
            return float("inf")

    objectives = [objective_of(result) for result in results]
    best_index = int(np.argmin(objectives))
    best = results[best_index]
    write_text_atomic(args.out, best.to_json() + "\n")
    print(f"wrote {args.out} (restarts={args.restarts}, "
          f"best_objective={format_float(objectives[best_index])}, "
          f"converged={str(best.converged).lower()}, "
          f"outer_iterations={best.outer_iterations})")
    if args.truth is not None:
        truth = _read_truth_csv(args.truth)
        best_err = float("inf")
        for result in results:
            s_hat = synthesize_signal(dictionary, result.alpha_hat,
                                      record.scale)
            best_err = min(best_err, relative_error(truth, s_hat.samples))
        print(f"Err={format_float(best_err)}")
    return 0


def _run_sweep_command(args, methods, filter_lengths=()) -> int:
    grid = SweepGrid(methods=methods,
                     distributions=tuple(args.distribution_list),
                     lambdas=tuple(args.lambda_list),
                     sparsities=tuple(args.k_list),
                     filter_lengths=tuple(filter_lengths),
                     n=args.n)
    kwargs = {}
    if methods == ("chacs",):
        kwargs = {"params": _params_from(args), "init": _init_from(args),
                  "target_amplitude": args.target_amplitude}
    table = run_sweep(grid, args.realizations, _resolve_seed(args.seed),
                      config=_config_from(args), max_workers=args.threads,
                      trials_csv=args.trials_out, summary_csv=args.summary_out,
                      **kwargs)
    print(f"wrote {args.trials_out} ({len(table.trials)} trials) and "
          f"{args.summary_out} ({len(table.summary)} rows)")
    return 0


def cmd_chacs_sweep(args) -> int:
    return _run_sweep_command(args, ("chacs",))


def cmd_rancs_sweep(args) -> int:
    return _run_sweep_command(args, ("rancs",), args.filter_length_list)


def cmd_jacobian_check(args) -> int:
    seed = _resolve_seed(args.seed)
    params = _params_from(args)
    init = _init_from(args)
    dictionary = build_real_fourier_dictionary(args.n)
    coeffs = sample_sparse_coefficients(args.n, args.k, "gaussian",
                                        derive_seed(seed, "coefficients"))
    scale = choose_scale(dictionary, coeffs, params, init,
                         args.target_amplitude)
    signal = synthesize_signal(dictionary, coeffs, scale)
    record = measure(params, init, args.lam, signal)
    rng = np.random.default_rng(derive_seed(seed, "points"))
    worst = 0.0
    for i in range(args.points):
        alpha = rng.uniform(-1.0, 1.0, args.n)
        analytic = run_excited_slave(record, alpha, dictionary,
                                     want_jacobian=True).jacobian
        numeric = finite_difference_jacobian(record, dictionary, alpha,
                                             args.step)
        # margin <= 1 means |diff| <= abs_floor + rel_tol*|fd| everywhere
        allowance = args.abs_floor + args.rel_tol * np.abs(numeric)
        margin = float(np.max(np.abs(analytic - numeric) / allowance))
        worst = max(worst, margin)
        print(f"point {i}: tolerance_margin={format_float(margin)}")
    ok = worst <= 1.0
    print(f"verdict: {'ok' if ok else 'MISMATCH'} "
          f"(worst margin {format_float(worst)}; tolerance rel "
          f"{format_float(args.rel_tol)} + abs {format_float(args.abs_floor)})")
    return 0 if ok else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chacs",
        description="Chaos-based compressed sensing demos, reconstructions, "
                    "and Monte-Carlo sweeps.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("attractor", help="dump a free orbit as CSV")
    _add_dynamics_flags(p)
    p.add_argument("--steps", type=int, default=10_000)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_attractor)

    p = sub.add_parser("sync-demo",
                       help="impulsive synchronization error trace")
    _add_dynamics_flags(p)
    p.add_argument("--lambda", dest="lam", type=int, default=2,
                   help="downsampling / injection rate")
    p.add_argument("--steps", type=int, default=1_000)
    p.add_argument("--slave-x0", type=float, default=0.0)
    p.add_argument("--slave-y0", type=float, default=0.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sync_demo)

    p = sub.add_parser("measure",
                       help="generate a sparse signal and measure it")
    _add_dynamics_flags(p)
    p.add_argument("--n", type=int, default=128)
    p.add_argument("--k", type=int, default=15)
    p.add_argument("--distribution", choices=DISTRIBUTIONS,
                   default="gaussian")
    p.add_argument("--lambda", dest="lam", type=int, default=2)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--target-amplitude", type=float, default=0.1)
    p.add_argument("--out", required=True, help="measurement record JSON")
    p.add_argument("--truth-out", default=None,
                   help="also dump the true signal as CSV")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("reconstruct",
                       help="estimate coefficients from a record JSON")
    p.add_argument("--record", required=True)
    p.add_argument("--out", required=True, help="reconstruction result JSON")
    p.add_argument("--restarts", type=int, default=1)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--truth", default=None,
                   help="signal CSV to score the reconstruction against")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("chacs-sweep", help="Monte-Carlo sweep, chaotic pipeline")
    _add_dynamics_flags(p)
    _add_solver_flags(p)
    p.add_argument("--n", type=int, default=128)
    p.add_argument("--k-list", dest="k_list", type=_int_list,
                   default=[5, 15, 25])
    p.add_argument("--lambda-list", dest="lambda_list", type=_int_list,
                   default=[2])
    p.add_argument("--distribution-list", dest="distribution_list",
                   type=_str_list, default=["gaussian"])
    p.add_argument("--realizations", type=int, default=20)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--target-amplitude", type=float, default=0.1)
    p.add_argument("--threads", type=int, default=os.cpu_count(),
                   help="trial parallelism (default: available cores)")
    p.add_argument("--trials-out", required=True)
    p.add_argument("--summary-out", required=True)
    p.set_defaults(func=cmd_chacs_sweep)

    p = sub.add_parser("rancs-sweep",
                       help="Monte-Carlo sweep, random-filter baseline")
    _add_solver_flags(p)
    p.add_argument("--n", type=int, default=128)
    p.add_argument("--k-list", dest="k_list", type=_int_list,
                   default=[5, 15, 25])
    p.add_argument("--lambda-list", dest="lambda_list", type=_int_list,
                   default=[2])
    p.add_argument("--distribution-list", dest="distribution_list",
                   type=_str_list, default=["gaussian"])
    p.add_argument("--filter-length-list", dest="filter_length_list",
                   type=_int_list, default=[64])
    p.add_argument("--realizations", type=int, default=20)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--threads", type=int, default=os.cpu_count())
    p.add_argument("--trials-out", required=True)
    p.add_argument("--summary-out", required=True)
    p.set_defaults(func=cmd_rancs_sweep)

    p = sub.add_parser("jacobian-check",
                       help="sensitivity vs. finite-difference report")
    _add_dynamics_flags(p)
    p.add_argument("--n", type=int, default=32)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--lambda", dest="lam", type=int, default=2)
    p.add_argument("--points", type=int, default=5)
    p.add_argument("--step", type=float, default=1e-6)
    p.add_argument("--rel-tol", type=float, default=1e-5)
    p.add_argument("--abs-floor", type=float, default=1e-8)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--target-amplitude", type=float, default=0.1)
    p.set_defaults(func=cmd_jacobian_check)

    return parser


def run_command(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 1
        return 0 if code == 0 else 1
    try:
        return args.func(args)
    except EmptyMeasurementError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ChacsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except np.linalg.LinAlgError as exc:
        print(f"error: linear algebra failure: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
