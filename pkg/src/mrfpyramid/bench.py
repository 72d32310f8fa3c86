"""Seeded method comparison on synthetic grid energies."""
from __future__ import annotations

import time
from dataclasses import dataclass, field, replace

import numpy as np

from .energy import Energy, evaluate
from .icm import IcmParams
from .pyramid import PyramidParams, solve_multiscale, solve_single_scale
from .synth import SyntheticParams, brute_force_min, generate_synthetic

__all__ = ["BenchConfig", "InstanceRecord", "BenchReport", "run_benchmark", "instance_seeds", "METHODS"]

METHODS = ("multiscale", "icm")


@dataclass(frozen=True)
class BenchConfig:
    instances: int = 100
    template: SyntheticParams = field(default_factory=SyntheticParams)
    pyramid: PyramidParams = field(default_factory=PyramidParams)
    methods: tuple[str, ...] = METHODS
    oracle: bool = False
    oracle_limit: int = 2**24

    def __post_init__(self):
        unknown = set(self.methods) - set(METHODS)
        if unknown:
            raise ValueError(f"unknown methods: {sorted(unknown)}")
        if self.instances < 0:
            raise ValueError("instances must be non-negative")


@dataclass
class InstanceRecord:
    seed: int
    energies: dict[str, float]
    sweeps: dict[str, int]
    seconds: dict[str, float]
    optimum: float | None = None

    def gap(self, method: str) -> float | None:
        if self.optimum is None:
            return None
        return (self.energies[method] - self.optimum) / (1.0 + abs(self.optimum))


@dataclass
class BenchReport:
    config: BenchConfig
    records: list[InstanceRecord]

    @property
    def methods(self):
        return self.config.methods

    def mean_energy(self, method: str) -> float:
        return float(np.mean([r.energies[method] for r in self.records]))

    def mean_gap(self, method: str) -> float | None:
        gaps = [r.gap(method) for r in self.records]
        if not gaps or any(g is None for g in gaps):
            return None
        return float(np.mean(gaps))

    def mean_gap_to_best(self, method: str) -> float:
        """Mean ``(E - E_best) / (1 + |E_best|)`` against the best method per instance."""
        out = []
        for r in self.records:
            best = min(r.energies.values())
            out.append((r.energies[method] - best) / (1.0 + abs(best)))
        return float(np.mean(out))

    def optimum_rate(self, method: str) -> float | None:
        if not self.records or any(r.optimum is None for r in self.records):
            return None
        tol = [1e-9 * (1 + abs(r.optimum)) for r in self.records]
        return float(np.mean([r.energies[method] <= r.optimum + t for r, t in zip(self.records, tol)]))

    def total_seconds(self, method: str) -> float:
        return float(sum(r.seconds[method] for r in self.records))

    def summary(self) -> dict[str, float | None]:
        out: dict[str, float | None] = {}
        for m in self.methods:
            out[f"mean_energy.{m}"] = self.mean_energy(m) if self.records else None
            out[f"mean_gap_to_best.{m}"] = self.mean_gap_to_best(m) if self.records else None
            if self.config.oracle:
                out[f"mean_gap.{m}"] = self.mean_gap(m)
                out[f"optimum_rate.{m}"] = self.optimum_rate(m)
        if set(METHODS) <= set(self.methods) and self.records:
            out["energy_margin"] = self.mean_energy("icm") - self.mean_energy("multiscale")
            out["gap_to_best_reduction"] = self.mean_gap_to_best("icm") - self.mean_gap_to_best("multiscale")
            if self.config.oracle:
                out["gap_reduction"] = self.mean_gap("icm") - self.mean_gap("multiscale")
        return out


def instance_seeds(master_seed: int, count: int) -> list[int]:
    """Independent 64-bit instance seeds derived from a master seed."""
    return [int(s) for s in np.random.SeedSequence(master_seed).generate_state(count, dtype=np.uint64)]


def _run_instance(energy: Energy, seed: int, config: BenchConfig) -> InstanceRecord:
    energies, sweeps, seconds = {}, {}, {}
    ms_sweeps = None
    pyr = replace(config.pyramid, seed=seed)
    if "multiscale" in config.methods:
        t0 = time.perf_counter()
        report = solve_multiscale(energy, pyr)
        seconds["multiscale"] = time.perf_counter() - t0
        energies["multiscale"] = report.final_energy
        sweeps["multiscale"] = ms_sweeps = report.total_sweeps
    if "icm" in config.methods:
        base = pyr.coarsen.icm
        if ms_sweeps is None:
            # no multiscale run to match, the same per-run budget as refinement
            ms_sweeps = base.restarts * pyr.refine.max_sweeps
        # same restart count, total sweep budget matched to the multiscale run
        params = IcmParams(max_sweeps=max(1, -(-ms_sweeps // base.restarts)), restarts=base.restarts, seed=seed)
        t0 = time.perf_counter()
        labels, used = solve_single_scale(energy, params)
        seconds["icm"] = time.perf_counter() - t0
        energies["icm"] = evaluate(energy, labels)
        sweeps["icm"] = used
    optimum = None
    if config.oracle:
        optimum = brute_force_min(energy, limit=config.oracle_limit)[1]
    return InstanceRecord(seed, energies, sweeps, seconds, optimum)


def run_benchmark(config: BenchConfig) -> BenchReport:
    """Generate ``config.instances`` energies from the template and run every method.

    Instance seeds come from ``config.template.seed`` as master seed; the
    same seed drives both the generator and the solvers of that instance.
    """
    records = []
    for seed in instance_seeds(config.template.seed, config.instances):
        energy = generate_synthetic(replace(config.template, seed=seed))
        records.append(_run_instance(energy, seed, config))
    return BenchReport(config, records)
