"""Iterated conditional modes and zero-temperature sampling."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .energy import Energy, check_labeling, evaluate

__all__ = ["IcmParams", "SampleSet", "icm_sweep", "icm_optimize", "sample_low_energy", "neighborhoods"]

# how a neighbor entry enters the local cost of label a
_ROW = 0  # stored (i, j): w * V[a, L_j]
_COL = 1  # stored (j, i): w * V[L_j, a]
_DIAG = 2  # stored (i, i): w * V[a, a]


@dataclass(frozen=True)
class IcmParams:
    max_sweeps: int = 10
    restarts: int = 10
    sweeps_per_sample: int = 10
    seed: int = 0

    def __post_init__(self):
        for name in ("max_sweeps", "restarts", "sweeps_per_sample"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True, eq=False)
class SampleSet:
    samples: np.ndarray  # (K, n) int64
    energies: np.ndarray  # (K,)
    sweeps: int = 0  # total sweeps spent producing the set

    def __len__(self):
        return self.samples.shape[0]

    def __eq__(self, other):
        if not isinstance(other, SampleSet):
            return NotImplemented
        return (
            np.array_equal(self.samples, other.samples)
            and np.array_equal(self.energies, other.energies)
            and self.sweeps == other.sweeps
        )

    __hash__ = None


def neighborhoods(energy: Energy):
    """Per-variable adjacency in CSR form: ``(indptr, nbr, weight, kind)``.

    Every stored entry ``(i, j)`` appears in the lists of both endpoints,
    tagged with the side of ``V`` the variable sits on.
    """
    cached = energy.__dict__.get("_neighborhoods")
    if cached is not None:
        return cached
    rows, cols, w = energy.edges
    off = rows != cols
    owner = np.concatenate([rows[off], cols[off], rows[~off]])
    nbr = np.concatenate([cols[off], rows[off], rows[~off]])
    weight = np.concatenate([w[off], w[off], w[~off]])
    kind = np.concatenate([
        np.full(off.sum(), _ROW), np.full(off.sum(), _COL), np.full((~off).sum(), _DIAG)
    ]).astype(np.int8)
    order = np.argsort(owner, kind="stable")
    indptr = np.zeros(energy.n + 1, dtype=np.int64)
    np.cumsum(np.bincount(owner, minlength=energy.n), out=indptr[1:])
    result = (indptr, nbr[order].astype(np.int64), weight[order], kind[order])
    energy.__dict__["_neighborhoods"] = result
    return result


@njit(cache=True)
def _sweep(labels, D, V, indptr, nbr, weight, kind):
    n, l = D.shape
    cost = np.empty(l)
    changed = False
    for i in range(n):
        for a in range(l):
            cost[a] = D[i, a]
        for p in range(indptr[i], indptr[i + 1]):
            w = weight[p]
            k = kind[p]
            lj = labels[nbr[p]]
            if k == 0:
                for a in range(l):
                    cost[a] += w * V[a, lj]
            elif k == 1:
                for a in range(l):
                    cost[a] += w * V[lj, a]
            else:
                for a in range(l):
                    cost[a] += w * V[a, a]
        best = 0
        for a in range(1, l):
            if cost[a] < cost[best]:
                best = a
        if best != labels[i]:
            labels[i] = best
            changed = True
    return changed


def icm_sweep(energy: Energy, labeling) -> tuple[np.ndarray, bool]:
    """One Gauss-Seidel pass in ascending variable order.

    Each variable takes the label minimizing its conditional cost given the
    current labels of its neighbors, ties to the smallest label.  Returns a
    new labeling and whether anything changed.
    """
    labels = check_labeling(energy, labeling).copy()
    changed = _sweep(labels, energy.D, energy.V, *neighborhoods(energy))
    return labels, bool(changed)


def icm_optimize(energy: Energy, init, params: IcmParams = IcmParams()) -> tuple[np.ndarray, list[float]]:
    """Sweep until a fixed point or ``params.max_sweeps``.

    Returns the final labeling and the energy after every sweep performed,
    so ``len(trace)`` is the number of sweeps used.
    """
    labels = check_labeling(energy, init).copy()
    adj = neighborhoods(energy)
    trace = []
    for _ in range(params.max_sweeps):
        changed = _sweep(labels, energy.D, energy.V, *adj)
        trace.append(evaluate(energy, labels))
        if not changed:
            break
    return labels, trace


def sample_low_energy(energy: Energy, params: IcmParams = IcmParams()) -> SampleSet:
    """``params.restarts`` ICM runs of ``params.sweeps_per_sample`` sweeps from uniform random labelings."""
    rng = np.random.default_rng(params.seed)
    run = IcmParams(max_sweeps=params.sweeps_per_sample, restarts=1, seed=params.seed)
    samples = np.empty((params.restarts, energy.n), dtype=np.int64)
    energies = np.empty(params.restarts)
    sweeps = 0
    for k in range(params.restarts):
        init = rng.integers(0, energy.l, size=energy.n)
        samples[k], trace = icm_optimize(energy, init, run)
        energies[k] = trace[-1]
        sweeps += len(trace)
    return SampleSet(samples, energies, sweeps)
