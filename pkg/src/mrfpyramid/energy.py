"""Pairwise discrete energies and their exact evaluation.

An energy over ``n`` variables and ``l`` labels is the tuple ``(D, W, V)``:

* ``D`` -- dense ``n x l`` unary costs, ``D[i, a]`` is the cost of giving
  variable ``i`` label ``a``;
* ``W`` -- sparse ``n x n`` edge weights.  Every undirected edge is stored
  exactly once at ``(i, j)`` with ``i < j``; diagonal entries are allowed;
* ``V`` -- dense ``l x l`` label interaction costs.

The energy of a labeling ``L`` is::

    E(L) = sum_i D[i, L_i] + sum_{(i, j) stored} W[i, j] * V[L_i, L_j]

Coarsening with an asymmetric ``V`` produces *oriented* energies, in which
``(i, j)`` and ``(j, i)`` are distinct stored entries.  Evaluation is the same
formula over all stored entries.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse as sp

__all__ = [
    "Energy",
    "evaluate",
    "evaluate_assignment",
    "labeling_to_assignment",
    "assignment_to_labeling",
    "check_labeling",
    "validate",
]


@dataclass(frozen=True, eq=False)
class Energy:
    """Pairwise energy ``(n, l, D, W, V)``.

    Construction only normalizes types; use :func:`validate` to check the
    storage conventions.
    """

    D: np.ndarray
    W: sp.csr_matrix
    V: np.ndarray
    oriented: bool = False

    def __post_init__(self):
        D = np.array(self.D, dtype=float, ndmin=2)
        V = np.array(self.V, dtype=float, ndmin=2)
        W = sp.csr_matrix(self.W, dtype=float)
        W.sum_duplicates()
        W.sort_indices()
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "V", V)
        object.__setattr__(self, "W", W)
        object.__setattr__(self, "oriented", bool(self.oriented))

    @classmethod
    def from_edges(cls, D, edges, V, oriented=False):
        """Build an energy from ``(i, j, w)`` triples."""
        D = np.asarray(D, dtype=float)
        n = D.shape[0]
        edges = list(edges)
        if edges:
            i, j, w = (np.asarray(col) for col in zip(*edges))
        else:
            i = j = np.zeros(0, dtype=np.int64)
            w = np.zeros(0)
        W = sp.coo_matrix((w.astype(float), (i.astype(np.int64), j.astype(np.int64))), shape=(n, n))
        return cls(D, W, V, oriented=oriented)

    @property
    def n(self) -> int:
        return self.D.shape[0]

    @property
    def l(self) -> int:  # noqa: E743
        return self.D.shape[1]

    @cached_property
    def edges(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Stored entries of ``W`` as ``(rows, cols, weights)`` in row-major order."""
        coo = self.W.tocoo()
        return (
            coo.row.astype(np.int64),
            coo.col.astype(np.int64),
            coo.data.astype(float),
        )

    @property
    def num_edges(self) -> int:
        return self.W.nnz

    @cached_property
    def v_symmetric(self) -> bool:
        return bool(np.array_equal(self.V, self.V.T))

    def __eq__(self, other):
        if not isinstance(other, Energy):
            return NotImplemented
        if self.D.shape != other.D.shape or self.V.shape != other.V.shape:
            return False
        if self.W.shape != other.W.shape or self.oriented != other.oriented:
            return False
        a, b = self.edges, other.edges
        return (
            np.array_equal(self.D, other.D)
            and np.array_equal(self.V, other.V)
            and all(np.array_equal(x, y) for x, y in zip(a, b))
        )

    __hash__ = None


def check_labeling(energy: Energy, labeling) -> np.ndarray:
    """Return ``labeling`` as an int64 array, raising if it does not fit ``energy``."""
    labels = np.asarray(labeling)
    if labels.ndim != 1 or labels.shape[0] != energy.n:
        raise ValueError(f"labeling has shape {labels.shape}, expected ({energy.n},)")
    if labels.size and not np.issubdtype(labels.dtype, np.integer):
        if not np.all(np.equal(np.mod(labels, 1), 0)):
            raise ValueError("labeling must contain integers")
    labels = labels.astype(np.int64)
    if labels.size and (labels.min() < 0 or labels.max() >= energy.l):
        bad = int(np.flatnonzero((labels < 0) | (labels >= energy.l))[0])
        raise ValueError(f"label {labels[bad]} at variable {bad} is outside 0..{energy.l - 1}")
    return labels


def evaluate(energy: Energy, labeling) -> float:
    """Energy of an integer labeling, each stored ``W`` entry counted once."""
    labels = check_labeling(energy, labeling)
    unary = energy.D[np.arange(energy.n), labels].sum()
    rows, cols, w = energy.edges
    pairwise = np.dot(w, energy.V[labels[rows], labels[cols]])
    return float(unary + pairwise)


def evaluate_assignment(energy: Energy, U) -> float:
    """Quadratic form of the energy for a real ``n x l`` assignment matrix.

    The pairwise term is ``sum_{(i, j) stored} W[i, j] * U[i] V U[j]^T``,
    i.e. ``Tr(W^T U V U^T)``.  For symmetric ``V`` this equals
    ``Tr(W U V U^T)``; the transposed form keeps stored edge orientation so
    that binary ``U`` agrees with :func:`evaluate` for any ``V``.
    """
    U = np.asarray(U, dtype=float)
    if U.shape != (energy.n, energy.l):
        raise ValueError(f"assignment has shape {U.shape}, expected {(energy.n, energy.l)}")
    unary = np.sum(energy.D * U)
    rows, cols, w = energy.edges
    pairwise = np.dot(w, np.einsum("ea,ea->e", U[rows] @ energy.V, U[cols]))
    return float(unary + pairwise)


def labeling_to_assignment(labeling, l: int) -> np.ndarray:  # noqa: E741
    """Binary indicator matrix with a single 1 per row at the variable's label."""
    labels = np.asarray(labeling, dtype=np.int64)
    if labels.ndim != 1:
        raise ValueError("labeling must be one-dimensional")
    if labels.size and (labels.min() < 0 or labels.max() >= l):
        raise ValueError(f"labels must lie in 0..{l - 1}")
    U = np.zeros((labels.size, l))
    U[np.arange(labels.size), labels] = 1.0
    return U


def assignment_to_labeling(U) -> np.ndarray:
    """Round an assignment matrix by per-row argmax, ties to the smallest label."""
    U = np.asarray(U, dtype=float)
    if U.ndim != 2 or U.shape[1] == 0:
        raise ValueError("assignment must be a 2-d matrix with at least one column")
    # np.argmax returns the first maximal index
    return np.argmax(U, axis=1).astype(np.int64)


def validate(energy: Energy) -> list[str]:
    """List every violated storage or shape invariant of ``energy``.

    An empty list means the energy is well formed.  Oriented energies may
    store entries below the diagonal.
    """
    problems = []
    n, l = energy.D.shape
    if n < 1:
        problems.append("D: need at least one variable")
    if l < 1:
        problems.append("D: need at least one label")
    if energy.V.shape != (l, l):
        problems.append(f"V: shape {energy.V.shape}, expected {(l, l)}")
    if energy.W.shape != (n, n):
        problems.append(f"W: shape {energy.W.shape}, expected {(n, n)}")
    for i, a in zip(*np.nonzero(~np.isfinite(energy.D))):
        problems.append(f"D: non-finite value at ({i},{a})")
    for a, b in zip(*np.nonzero(~np.isfinite(energy.V))):
        problems.append(f"V: non-finite value at ({a},{b})")
    rows, cols, w = energy.edges
    for k in np.flatnonzero(~np.isfinite(w)):
        problems.append(f"W: non-finite value at ({rows[k]},{cols[k]})")
    if not energy.oriented:
        for k in np.flatnonzero(rows > cols):
            problems.append(f"W: lower-triangular storage at ({rows[k]},{cols[k]})")
    return problems
