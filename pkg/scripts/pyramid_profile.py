"""Level sizes, operator sparsity and per-level energies of one multiscale solve."""
import argparse
import time

import numpy as np

from mrfpyramid.pyramid import PyramidParams, build_pyramid, solve_multiscale
from mrfpyramid.coarsen import CoarseningParams
from mrfpyramid.synth import SyntheticParams, generate_synthetic


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--size", type=int, default=50)
    ap.add_argument("--labels", type=int, default=5)
    ap.add_argument("--lam", type=float, default=10.0)
    ap.add_argument("--beta", type=float, default=0.2)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    energy = generate_synthetic(SyntheticParams(args.size, args.size, args.labels, args.lam, args.seed))
    params = PyramidParams(coarsen=CoarseningParams(beta=args.beta), seed=args.seed)
    t0 = time.perf_counter()
    pyr = build_pyramid(energy, params)
    t1 = time.perf_counter()
    print(f"pyramid built in {t1 - t0:.2f}s, termination: {pyr.termination_reason}")
    print(f"{'level':>5} {'n':>6} {'edges':>7} {'ratio':>6} {'nnz/row':>8}")
    for s, level in enumerate(pyr.levels):
        ratio = level.n / pyr.levels[s - 1].n if s else 1.0
        nnz = np.diff(pyr.interps[s - 1].P.indptr).mean() if s else float("nan")
        print(f"{s:5d} {level.n:6d} {level.num_edges:7d} {ratio:6.2f} {nnz:8.2f}")

    report = solve_multiscale(energy, params, pyramid=pyr)
    print(f"\nsolve in {time.perf_counter() - t1:.2f}s, final energy {report.final_energy:.4f}")
    for rec in report.per_level:
        print(f"  level {rec.level:2d}  n={rec.n:5d}  interpolated {rec.start_energy:11.3f}  refined {rec.energy:11.3f}  sweeps {rec.sweeps}")


if __name__ == "__main__":
    main()
