"""Command-line entry point: ``dominantset cluster | game analyze | game simulate | hypercluster``.

Exit codes: 0 on success, 1 on bad input, 2 when ``--strict`` is set and a
run did not converge. JSON goes to stdout unless ``--output`` is given;
diagnostics go to stderr.
"""

import argparse
import sys
import time
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__
from ._validation import SUPPORT_EPS, barycenter, check_simplex
from .clustering import OVERLAP, PEEL, enumerate_overlapping, peel_partition
from .dynamics import CONTINUOUS, DISCRETE, DynamicsConfig, run
from .equilibria import DEFAULT_MAX_N, DEFAULT_TOL, enumerate_candidates
from .formats import (RunManifest, emit_result, load_matrix, parse_hyperedges,
                      parse_vector, trajectory_csv)
from .hypergraph import peel_hyper_partition

EXIT_INPUT = 1
EXIT_NONCONVERGED = 2


def _add_dynamics_flags(p):
    p.add_argument("--tol", type=float, default=1e-10, help="convergence tolerance")
    p.add_argument("--max-iter", type=int, default=100_000)
    p.add_argument("--support-eps", type=float, default=SUPPORT_EPS)
    p.add_argument("--min-size", type=int, default=1)
    p.add_argument("--min-cohesiveness", type=float, default=0.0)
    p.add_argument("--output", type=Path)
    p.add_argument("--strict", action="store_true",
                   help="exit with status 2 if any run fails to converge")


def build_parser():
    parser = argparse.ArgumentParser(prog="dominantset", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cluster", help="dominant-set clustering of an affinity matrix")
    p.add_argument("--input", required=True, type=Path)
    p.add_argument("--format", choices=["csv", "mtx"])
    p.add_argument("--mode", choices=[PEEL, OVERLAP], default=PEEL)
    p.add_argument("--restarts", type=int, help="biased starts in overlap mode (default n)")
    p.add_argument("--trajectory", type=Path, help="write replicator states as CSV")
    _add_dynamics_flags(p)

    g = sub.add_parser("game", help="symmetric game analysis").add_subparsers(
        dest="game_command", required=True)
    a = g.add_parser("analyze", help="support enumeration and equilibrium classification")
    a.add_argument("--payoff", required=True, type=Path)
    a.add_argument("--format", choices=["csv", "mtx"])
    a.add_argument("--max-n", type=int, default=DEFAULT_MAX_N)
    a.add_argument("--tol", type=float, default=DEFAULT_TOL)
    a.add_argument("--output", type=Path)

    s = g.add_parser("simulate", help="run replicator dynamics and record the trajectory")
    s.add_argument("--payoff", required=True, type=Path)
    s.add_argument("--format", choices=["csv", "mtx"])
    s.add_argument("--x0", default="barycenter", help="'barycenter' or a file of weights")
    s.add_argument("--dynamics", choices=[DISCRETE, CONTINUOUS], default=CONTINUOUS)
    s.add_argument("--dt", type=float, default=0.01)
    s.add_argument("--steps", type=int, default=10_000)
    s.add_argument("--tol", type=float, default=1e-10)
    s.add_argument("--record-every", type=int, default=1)
    s.add_argument("--trajectory", required=True, type=Path)
    s.add_argument("--output", type=Path)
    s.add_argument("--strict", action="store_true")

    h = sub.add_parser("hypercluster", help="peel-off clustering of a k-uniform hypergraph")
    h.add_argument("--input", required=True, type=Path)
    _add_dynamics_flags(h)
    return parser


def _write(text, path):
    if path is None:
        sys.stdout.write(text)
    else:
        path.write_text(text)


def _embedded_trace(trace, n):
    times, states, offset = [], [], 0.0
    for idx, t, st in trace:
        full = np.zeros((len(st), n))
        full[:, idx] = st
        times.append(t + offset)
        states.append(full)
        offset += t[-1] + 1.0
    return np.concatenate(times), np.vstack(states)


def _cluster(args, start):
    fmt = args.format or ("mtx" if args.input.suffix.lower() == ".mtx" else "csv")
    W = load_matrix(args.input, fmt)
    cfg = DynamicsConfig(tol_convergence=args.tol, max_iters=args.max_iter,
                         record_every=1 if args.trajectory else 0)
    trace = [] if args.trajectory else None
    if args.mode == PEEL:
        res = peel_partition(W, cfg, args.min_size, args.min_cohesiveness,
                             args.support_eps, trace=trace)
    else:
        res = enumerate_overlapping(W, cfg, args.restarts, args.min_size,
                                    args.min_cohesiveness, args.support_eps, trace=trace)
    if trace is not None:
        args.trajectory.write_text(trajectory_csv(*_embedded_trace(trace, W.shape[0])))
    manifest = RunManifest(str(args.input), fmt, "cluster", res.config,
                           res.shift_applied, __version__, time.perf_counter() - start)
    _write(emit_result(res, manifest), args.output)
    return res.converged


def _hypercluster(args, start):
    T = parse_hyperedges(args.input.read_text())
    cfg = DynamicsConfig(tol_convergence=args.tol, max_iters=args.max_iter, record_every=0)
    res = peel_hyper_partition(T, cfg, args.min_size, args.min_cohesiveness, args.support_eps)
    manifest = RunManifest(str(args.input), "hyperedges", "hypercluster", res.config,
                           0.0, __version__, time.perf_counter() - start)
    _write(emit_result(res, manifest), args.output)
    return res.converged


def _analyze(args, start):
    fmt = args.format or ("mtx" if args.payoff.suffix.lower() == ".mtx" else "csv")
    A = load_matrix(args.payoff, fmt)
    reports = enumerate_candidates(A, max_n=args.max_n, tol=args.tol)
    manifest = RunManifest(str(args.payoff), fmt, "game analyze",
                           {"max_n": args.max_n, "tol": args.tol}, 0.0, __version__,
                           time.perf_counter() - start)
    _write(emit_result(reports, manifest), args.output)
    return True


def _simulate(args, start):
    fmt = args.format or ("mtx" if args.payoff.suffix.lower() == ".mtx" else "csv")
    A = load_matrix(args.payoff, fmt)
    n = A.shape[0]
    if args.x0 == "barycenter":
        x0 = barycenter(n)
    else:
        x0 = check_simplex(parse_vector(Path(args.x0).read_text()), n)
    cfg = DynamicsConfig(mode=args.dynamics, dt=args.dt, tol_convergence=args.tol,
                         max_iters=args.steps, record_every=args.record_every)
    traj = run(A, x0, cfg)
    args.trajectory.write_text(trajectory_csv(traj.times, traj.states))
    manifest = RunManifest(str(args.payoff), fmt, "game simulate",
                           {**asdict(cfg), "x0": args.x0}, traj.shift, __version__,
                           time.perf_counter() - start)
    _write(emit_result(traj, manifest), args.output)
    return traj.converged


def main(argv=None):
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    if args.command == "cluster":
        handler = _cluster
    elif args.command == "hypercluster":
        handler = _hypercluster
    elif args.game_command == "analyze":
        handler = _analyze
    else:
        handler = _simulate
    try:
        converged = handler(args, start)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if getattr(args, "strict", False) and not converged:
        print("error: dynamics did not converge", file=sys.stderr)
        return EXIT_NONCONVERGED
    return 0


if __name__ == "__main__":
    sys.exit(main())
