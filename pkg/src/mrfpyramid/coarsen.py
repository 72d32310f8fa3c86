"""Energy-aware interpolation and algebraic coarsening of variables and labels.

Variables are coarsened with a row-stochastic interpolation ``P`` (fine x
coarse)::

    D_c = P^T D        W_c = P^T W P

and labels with a row-stochastic ``Q`` (fine labels x coarse labels)::

    D_c = D Q          V_c = Q^T V Q

Both are exact: the coarse energy of ``U_c`` equals the fine energy of the
interpolated assignment.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .energy import Energy
from .icm import IcmParams, SampleSet

__all__ = [
    "AgreementMap",
    "CoarseningParams",
    "Interpolation",
    "estimate_agreements",
    "select_coarse_vars",
    "build_interpolation",
    "coarsen_energy",
    "coarsen_labels",
]


@dataclass(frozen=True)
class CoarseningParams:
    beta: float = 0.2
    delta: int = 3
    sigma_scale: float = 1.0
    icm: IcmParams = field(default_factory=IcmParams)

    def __post_init__(self):
        if not 0.0 < self.beta < 1.0:
            raise ValueError("beta must lie in (0, 1)")
        if self.delta < 1:
            raise ValueError("delta must be >= 1")
        if not self.sigma_scale > 0:
            raise ValueError("sigma_scale must be positive")


@dataclass(frozen=True, eq=False)
class AgreementMap:
    """Disagreement ``d`` and agreement ``c = exp(-d / sigma)`` per stored edge.

    ``rows``/``cols`` follow the stored order of the source energy's ``W``.
    """

    rows: np.ndarray
    cols: np.ndarray
    d: np.ndarray
    c: np.ndarray
    sigma: float

    def as_dict(self) -> dict[tuple[int, int], tuple[float, float]]:
        return {
            (int(i), int(j)): (float(dd), float(cc))
            for i, j, dd, cc in zip(self.rows, self.cols, self.d, self.c)
        }

    def strength(self, n: int) -> sp.csr_matrix:
        """Symmetric ``n x n`` agreement matrix between distinct neighbors.

        Diagonal entries are dropped; both orientations of an oriented pair
        add up.
        """
        off = self.rows != self.cols
        C = sp.coo_matrix((self.c[off], (self.rows[off], self.cols[off])), shape=(n, n)).tocsr()
        C = (C + C.T).tocsr()
        C.sort_indices()
        return C


@dataclass(frozen=True, eq=False)
class Interpolation:
    """Row-stochastic ``n_f x n_c`` matrix and the selected coarse variables.

    ``coarse[k]`` is the fine index of coarse variable ``k``; ``coarse_of``
    maps fine indices back to coarse ones (``-1`` for non-selected).
    """

    P: sp.csr_matrix
    coarse: np.ndarray
    coarse_of: np.ndarray

    @property
    def n_f(self) -> int:
        return self.P.shape[0]

    @property
    def n_c(self) -> int:
        return self.P.shape[1]


def estimate_agreements(energy: Energy, samples: SampleSet, params: CoarseningParams = CoarseningParams()) -> AgreementMap:
    """Average pairwise cost of each edge over the samples, mapped to an agreement."""
    if len(samples) == 0:
        raise ValueError("cannot estimate agreements from an empty sample set")
    rows, cols, _ = energy.edges
    L = samples.samples
    d = energy.V[L[:, rows], L[:, cols]].mean(axis=0) if rows.size else np.zeros(0)
    vmax = float(energy.V.max())
    # sigma is proportional to max V; guard the degenerate non-positive case
    sigma = params.sigma_scale * vmax if vmax > 0 else 1.0
    return AgreementMap(rows, cols, d, np.exp(-d / sigma), sigma)


def select_coarse_vars(energy: Energy, agreements: AgreementMap, beta: float = 0.2) -> np.ndarray:
    """Greedy sequential choice of coarse representatives.

    Variables are scanned in ascending order; ``i`` joins the coarse set
    unless its agreement with already chosen neighbors reaches ``beta`` times
    its total agreement.  Isolated variables always join.  Returns the fine
    indices of the chosen variables in selection order.
    """
    C = agreements.strength(energy.n)
    total = np.asarray(C.sum(axis=1)).ravel()
    to_coarse = np.zeros(energy.n)
    indptr, indices, data = C.indptr, C.indices, C.data
    chosen = []
    for i in range(energy.n):
        if total[i] > 0 and to_coarse[i] >= beta * total[i]:
            continue
        chosen.append(i)
        lo, hi = indptr[i], indptr[i + 1]
        to_coarse[indices[lo:hi]] += data[lo:hi]
    return np.asarray(chosen, dtype=np.int64)


def build_interpolation(energy: Energy, agreements: AgreementMap, coarse, delta: int = 3) -> Interpolation:
    """Soft aggregation of every fine variable onto its best agreeing coarse neighbors.

    A coarse variable interpolates from itself only.  Any other variable
    takes its agreements with coarse neighbors, keeps the ``delta`` largest
    (ties to the smaller coarse index) and normalizes them to sum to one.
    """
    coarse = np.asarray(coarse, dtype=np.int64)
    n = energy.n
    if coarse.size == 0:
        raise ValueError("coarse set is empty")
    coarse_of = np.full(n, -1, dtype=np.int64)
    coarse_of[coarse] = np.arange(coarse.size)
    C = agreements.strength(n)

    rows, cols, vals = [], [], []
    for i in range(n):
        if coarse_of[i] >= 0:
            rows.append(i)
            cols.append(coarse_of[i])
            vals.append(1.0)
            continue
        lo, hi = C.indptr[i], C.indptr[i + 1]
        J = coarse_of[C.indices[lo:hi]]
        c = C.data[lo:hi]
        keep = (J >= 0) & (c > 0)
        J, c = J[keep], c[keep]
        if J.size == 0:
            raise ValueError(f"variable {i} has no coarse neighbor with positive agreement")
        order = np.lexsort((J, -c))[:delta]
        J, c = J[order], c[order]
        rows.extend([i] * J.size)
        cols.extend(J.tolist())
        vals.extend((c / c.sum()).tolist())
    P = sp.csr_matrix((vals, (rows, cols)), shape=(n, coarse.size))
    P.sort_indices()
    return Interpolation(P, coarse, coarse_of)


def _canonical(W: sp.spmatrix, v_symmetric: bool) -> tuple[sp.csr_matrix, bool]:
    """Fold ``W`` into single-entry upper storage when ``V`` allows it."""
    W = sp.csr_matrix(W)
    if not v_symmetric:
        return W, bool(sp.tril(W, k=-1).nnz)
    folded = sp.triu(W, k=1) + sp.triu(W.T, k=1) + sp.diags(W.diagonal())
    folded = sp.csr_matrix(folded)
    folded.eliminate_zeros()
    return folded, False


def coarsen_energy(fine: Energy, interp: Interpolation) -> Energy:
    """Galerkin coarse energy ``(P^T D, P^T W P, V)``.

    With symmetric ``V`` the triple product is folded back to upper storage.
    Otherwise both orientations are kept and the result is an oriented
    energy.
    """
    P = interp.P
    if P.shape[0] != fine.n:
        raise ValueError(f"interpolation has {P.shape[0]} fine rows, energy has {fine.n} variables")
    D_c = np.asarray(P.T @ fine.D)
    W_c, oriented = _canonical(P.T @ fine.W @ P, fine.v_symmetric)
    return Energy(D_c, W_c, fine.V.copy(), oriented=oriented)


def coarsen_labels(energy: Energy, label_interp) -> Energy:
    """Label-coarse energy ``(D Q, W, Q^T V Q)`` for a row-stochastic ``Q``."""
    Q = np.asarray(label_interp, dtype=float)
    if Q.ndim != 2 or Q.shape[0] != energy.l or Q.shape[1] < 1:
        raise ValueError(f"label interpolation has shape {Q.shape}, expected ({energy.l}, l_c>=1)")
    if not np.allclose(Q.sum(axis=1), 1.0, rtol=0, atol=1e-9) or Q.min() < 0:
        raise ValueError("label interpolation must be row-stochastic")
    return Energy(energy.D @ Q, energy.W.copy(), Q.T @ energy.V @ Q, oriented=energy.oriented)
