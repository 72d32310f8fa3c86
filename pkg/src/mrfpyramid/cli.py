"""Command line entry point: ``generate``, ``solve``, ``eval`` and ``bench``.

Exit codes: 0 success, 1 usage error, 2 data error.
"""
from __future__ import annotations

import argparse
import sys

from .bench import BenchConfig, run_benchmark
from .coarsen import CoarseningParams
from .energy import evaluate, validate
from .icm import IcmParams
from .io import (
    FormatError,
    fmt_real,
    read_energy,
    read_labeling,
    write_bench_report,
    write_energy,
    write_labeling,
    write_solve_report,
)
from .pyramid import LevelRecord, PyramidParams, SolveReport, solve_multiscale, solve_single_scale
from .synth import SyntheticParams, generate_synthetic

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _seed(text):
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _solver_flags(p):
    d_c, d_i = CoarseningParams(), IcmParams()
    p.add_argument("--beta", type=float, default=d_c.beta)
    p.add_argument("--delta", type=int, default=d_c.delta)
    p.add_argument("--samples", type=int, default=d_i.restarts, help="ICM restarts K")
    p.add_argument("--sample-sweeps", type=int, default=d_i.sweeps_per_sample, help="sweeps per sample t")
    p.add_argument("--max-sweeps", type=int, default=d_i.max_sweeps)
    p.add_argument("--coarsest-size", type=int, default=PyramidParams().coarsest_size)
    p.add_argument("--sigma-scale", type=float, default=d_c.sigma_scale)


def _pyramid_params(args) -> PyramidParams:
    icm = IcmParams(max_sweeps=args.max_sweeps, restarts=args.samples, sweeps_per_sample=args.sample_sweeps, seed=args.seed)
    coarsen = CoarseningParams(beta=args.beta, delta=args.delta, sigma_scale=args.sigma_scale, icm=icm)
    return PyramidParams(coarsest_size=args.coarsest_size, coarsen=coarsen, refine=icm, seed=args.seed)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mrfpyramid", description="Multiscale pairwise energy minimization.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="write a synthetic grid energy")
    g.add_argument("--rows", type=int, required=True)
    g.add_argument("--cols", type=int, required=True)
    g.add_argument("--labels", type=int, required=True)
    g.add_argument("--lambda", dest="lam", type=float, required=True)
    g.add_argument("--seed", type=_seed, default=0)
    g.add_argument("-o", "--output", required=True)

    s = sub.add_parser("solve", help="minimize an energy file")
    s.add_argument("-i", "--input", required=True)
    s.add_argument("--method", choices=["multiscale", "icm"], default="multiscale")
    s.add_argument("--seed", type=_seed, default=0)
    _solver_flags(s)
    s.add_argument("-o", "--output", help="label file")
    s.add_argument("--report", help="report file")

    e = sub.add_parser("eval", help="print the energy of a labeling")
    e.add_argument("-i", "--input", required=True)
    e.add_argument("--labels", required=True, help="label file")

    b = sub.add_parser("bench", help="compare methods on synthetic energies")
    b.add_argument("--instances", type=int, required=True)
    b.add_argument("--rows", type=int, required=True)
    b.add_argument("--cols", type=int, required=True)
    b.add_argument("--labels", type=int, required=True)
    b.add_argument("--lambda", dest="lam", type=float, required=True)
    b.add_argument("--seed", type=_seed, default=0)
    b.add_argument("--oracle", action="store_true", help="also compute the brute-force optimum")
    b.add_argument("--timing", action="store_true", help="include wall-clock times (breaks byte-identical reruns)")
    _solver_flags(b)
    b.add_argument("--report", required=True)
    return parser


def _load_energy(path):
    energy = read_energy(path)
    problems = validate(energy)
    if problems:
        raise FormatError("; ".join(problems))
    return energy


def _cmd_generate(args):
    try:
        params = SyntheticParams(args.rows, args.cols, args.labels, args.lam, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    energy = generate_synthetic(params)
    write_energy(energy, args.output)
    print(f"n {energy.n} l {energy.l} m {energy.num_edges}")


def _cmd_solve(args):
    try:
        params = _pyramid_params(args)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    energy = _load_energy(args.input)
    if args.method == "multiscale":
        report = solve_multiscale(energy, params)
    else:
        labels, sweeps = solve_single_scale(energy, params.refine)
        value = evaluate(energy, labels)
        report = SolveReport(labels, value, [LevelRecord(0, energy.n, value, value, sweeps)], "single_scale", sweeps)
    if args.output:
        write_labeling(report.final, args.output)
    if args.report:
        write_solve_report(report, args.report, meta={"method": args.method, "seed": args.seed})
    print(fmt_real(report.final_energy))


def _cmd_eval(args):
    energy = _load_energy(args.input)
    labels = read_labeling(args.labels, energy=energy)
    print(fmt_real(evaluate(energy, labels)))


def _cmd_bench(args):
    try:
        config = BenchConfig(
            instances=args.instances,
            template=SyntheticParams(args.rows, args.cols, args.labels, args.lam, args.seed),
            pyramid=_pyramid_params(args),
            oracle=args.oracle,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = run_benchmark(config)
    write_bench_report(report, args.report, include_timing=args.timing)
    for key, value in report.summary().items():
        print(key, "none" if value is None else fmt_real(value))


COMMANDS = {"generate": _cmd_generate, "solve": _cmd_solve, "eval": _cmd_eval, "bench": _cmd_bench}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (FormatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
