"""Synthetic contrast-enhancing grid energies and the exhaustive oracle."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .energy import Energy, evaluate

__all__ = ["SyntheticParams", "grid_edges", "generate_synthetic", "brute_force_min", "StateSpaceTooLarge"]

BRUTE_FORCE_LIMIT = 2**24


class StateSpaceTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class SyntheticParams:
    rows: int = 50
    cols: int = 50
    labels: int = 5
    lam: float = 10.0
    seed: int = 0

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("grid must have at least one cell")
        if self.labels < 1:
            raise ValueError("need at least one label")
        if self.lam < 0:
            raise ValueError("lambda must be non-negative")


def grid_edges(rows: int, cols: int) -> tuple[np.ndarray, np.ndarray]:
    """4-neighbor edges of a row-major grid, each as ``(i, j)`` with ``i < j``."""
    idx = np.arange(rows * cols).reshape(rows, cols)
    i = np.concatenate([idx[:, :-1].ravel(), idx[:-1, :].ravel()])
    j = np.concatenate([idx[:, 1:].ravel(), idx[1:, :].ravel()])
    return i, j


def generate_synthetic(params: SyntheticParams) -> Energy:
    """Random grid energy: normal unaries, symmetric zero-diagonal uniform V,
    edge weights uniform in ``[-lam, lam]``."""
    rng = np.random.default_rng(params.seed)
    n, l = params.rows * params.cols, params.labels
    D = rng.standard_normal((n, l))
    V = np.zeros((l, l))
    upper = np.triu_indices(l, k=1)
    V[upper] = rng.uniform(0.0, 1.0, size=upper[0].size)
    V = V + V.T
    i, j = grid_edges(params.rows, params.cols)
    w = rng.uniform(-params.lam, params.lam, size=i.size)
    return Energy(D, sp.coo_matrix((w, (i, j)), shape=(n, n)), V)


def _batch_energies(energy: Energy, L: np.ndarray) -> np.ndarray:
    rows, cols, w = energy.edges
    e = energy.D[np.arange(energy.n), L].sum(axis=1)
    if rows.size:
        e = e + energy.V[L[:, rows], L[:, cols]] @ w
    return e


def brute_force_min(energy: Energy, limit: int = BRUTE_FORCE_LIMIT, chunk: int = 1 << 16) -> tuple[np.ndarray, float]:
    """Exhaustive minimum over all ``l**n`` labelings.

    Labelings are enumerated in lexicographic order (variable 0 most
    significant), so ties resolve to the lexicographically smallest one.
    """
    n, l = energy.n, energy.l
    total = l**n
    if total > limit:
        raise StateSpaceTooLarge(f"{l}^{n} = {total} labelings exceeds the limit of {limit}")
    place = l ** np.arange(n - 1, -1, -1, dtype=np.int64)
    best_code, best_val = 0, np.inf
    for start in range(0, total, chunk):
        codes = np.arange(start, min(start + chunk, total), dtype=np.int64)
        L = (codes[:, None] // place) % l
        e = _batch_energies(energy, L)
        k = int(np.argmin(e))
        if e[k] < best_val:
            best_val, best_code = e[k], start + k
    labels = (best_code // place) % l
    return labels.astype(np.int64), evaluate(energy, labels)
