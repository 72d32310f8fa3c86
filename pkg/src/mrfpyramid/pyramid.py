"""Energy pyramid construction and coarse-to-fine optimization."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .coarsen import (
    CoarseningParams,
    Interpolation,
    build_interpolation,
    coarsen_energy,
    estimate_agreements,
    select_coarse_vars,
)
from .energy import Energy, assignment_to_labeling, evaluate, labeling_to_assignment
from .icm import IcmParams, icm_optimize, sample_low_energy
from .synth import brute_force_min

__all__ = [
    "PyramidParams",
    "Pyramid",
    "LevelRecord",
    "SolveReport",
    "build_pyramid",
    "solve_coarsest",
    "solve_multiscale",
    "solve_single_scale",
]

log = logging.getLogger(__name__)

REACHED_COARSEST = "reached_coarsest_size"
STALLED = "stalled"
MAX_LEVELS = "max_levels"

# (energy, init, params) -> (labeling, per-sweep energy trace)
Refiner = Callable[[Energy, np.ndarray, IcmParams], "tuple[np.ndarray, list[float]]"]


@dataclass(frozen=True)
class PyramidParams:
    coarsest_size: int = 10
    max_levels: int = 20
    stall_ratio: float = 0.9
    coarsen: CoarseningParams = field(default_factory=CoarseningParams)
    refine: IcmParams = field(default_factory=IcmParams)
    exhaustive_limit: int = 2**20
    seed: int = 0

    def __post_init__(self):
        if self.coarsest_size < 1:
            raise ValueError("coarsest_size must be >= 1")
        if self.max_levels < 1:
            raise ValueError("max_levels must be >= 1")
        if not 0.0 < self.stall_ratio < 1.0:
            raise ValueError("stall_ratio must lie in (0, 1)")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")


@dataclass
class Pyramid:
    """Energies ``levels[0]`` (finest) .. ``levels[S]`` (coarsest).

    ``interps[s - 1]`` interpolates level ``s`` onto level ``s - 1``.
    """

    levels: list[Energy]
    interps: list[Interpolation]
    termination_reason: str
    sample_sweeps: int = 0

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    @property
    def sizes(self) -> list[int]:
        return [e.n for e in self.levels]


@dataclass(frozen=True)
class LevelRecord:
    level: int
    n: int
    start_energy: float  # energy of the rounded interpolated labeling (coarsest: of the coarse solve)
    energy: float  # after refinement
    sweeps: int


@dataclass
class SolveReport:
    final: np.ndarray
    final_energy: float
    per_level: list[LevelRecord]  # coarsest first, level 0 last
    termination_reason: str
    total_sweeps: int  # sampling + coarsest + refinement sweeps


def _level_seed(seed: int, level: int) -> int:
    return (seed ^ level) & (2**64 - 1)


def build_pyramid(energy: Energy, params: PyramidParams = PyramidParams()) -> Pyramid:
    """Coarsen repeatedly until the coarsest level is small enough.

    Each step draws fresh ICM samples on the current level (seeded with
    ``seed ^ level``), estimates agreements, selects coarse variables and
    forms the Galerkin coarse energy.  Stops when ``n <= coarsest_size``,
    when a step would keep more than ``stall_ratio`` of the variables, or
    when ``max_levels`` levels exist.
    """
    levels, interps = [energy], []
    sweeps = 0
    while True:
        cur = levels[-1]
        if cur.n <= params.coarsest_size:
            reason = REACHED_COARSEST
            break
        if len(levels) >= params.max_levels:
            reason = MAX_LEVELS
            break
        s = len(levels) - 1
        icm = replace(params.coarsen.icm, seed=_level_seed(params.seed, s))
        samples = sample_low_energy(cur, icm)
        sweeps += samples.sweeps
        agreements = estimate_agreements(cur, samples, params.coarsen)
        coarse = select_coarse_vars(cur, agreements, params.coarsen.beta)
        if coarse.size > params.stall_ratio * cur.n:
            reason = STALLED
            break
        interp = build_interpolation(cur, agreements, coarse, params.coarsen.delta)
        interps.append(interp)
        levels.append(coarsen_energy(cur, interp))
        log.debug("level %d: %d -> %d variables", s, cur.n, interp.n_c)
    return Pyramid(levels, interps, reason, sweeps)


def solve_single_scale(energy: Energy, params: IcmParams) -> tuple[np.ndarray, int]:
    """Best of ``params.restarts`` ICM runs from seeded uniform random labelings.

    Returns the labeling and the number of sweeps spent.  Ties between
    restarts go to the earliest one.
    """
    rng = np.random.default_rng(params.seed)
    best, best_e, sweeps = None, np.inf, 0
    for _ in range(params.restarts):
        init = rng.integers(0, energy.l, size=energy.n)
        labels, trace = icm_optimize(energy, init, params)
        sweeps += len(trace)
        if trace[-1] < best_e:
            best, best_e = labels, trace[-1]
    return best, sweeps


def solve_coarsest(energy: Energy, params: PyramidParams = PyramidParams()) -> np.ndarray:
    """Exact minimum when ``l**n <= exhaustive_limit``, else best ICM restart."""
    return _solve_coarsest(energy, params)[0]


def _solve_coarsest(energy, params):
    if energy.l**energy.n <= params.exhaustive_limit:
        return brute_force_min(energy, limit=params.exhaustive_limit)[0], 0
    return solve_single_scale(energy, replace(params.refine, seed=params.seed))


def solve_multiscale(
    energy: Energy,
    params: PyramidParams = PyramidParams(),
    refine: Refiner = icm_optimize,
    pyramid: Pyramid | None = None,
) -> SolveReport:
    """Coarse-to-fine optimization over the energy pyramid.

    The coarsest level is solved directly.  Going down, the binary coarse
    solution is interpolated with ``P``, rounded by row argmax and refined
    with ``refine`` (ICM by default, ``params.refine.max_sweeps`` sweeps).
    """
    if pyramid is None:
        pyramid = build_pyramid(energy, params)
    S = pyramid.depth
    coarsest = pyramid.levels[S]
    labels, sweeps = _solve_coarsest(coarsest, params)
    e = evaluate(coarsest, labels)
    records = [LevelRecord(S, coarsest.n, e, e, sweeps)]
    total = pyramid.sample_sweeps + sweeps
    for s in range(S, 0, -1):
        fine = pyramid.levels[s - 1]
        U = pyramid.interps[s - 1].P @ labeling_to_assignment(labels, coarsest.l)
        labels = assignment_to_labeling(U)
        start = evaluate(fine, labels)
        labels, trace = refine(fine, labels, params.refine)
        labels = np.asarray(labels, dtype=np.int64)
        records.append(LevelRecord(s - 1, fine.n, start, evaluate(fine, labels), len(trace)))
        total += len(trace)
    return SolveReport(labels, records[-1].energy, records, pyramid.termination_reason, total)
