import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings, strategies as st

from mrfpyramid.energy import (
    Energy,
    assignment_to_labeling,
    evaluate,
    evaluate_assignment,
    labeling_to_assignment,
    validate,
)

from conftest import dense_energy, random_energy


def test_unary_only_zero():
    E = Energy.from_edges([[0.0, 5.0]], [], np.zeros((2, 2)))
    assert evaluate(E, [0]) == 0.0


@pytest.mark.parametrize("labels, expected", [([0, 1], 7.0), ([0, 0], 4.0), ([1, 0], 7.0), ([1, 1], 6.0)])
def test_hand_example(hand_energy, labels, expected):
    assert evaluate(hand_energy, labels) == expected


def test_assignment_matches_labeling(hand_energy):
    U = labeling_to_assignment([0, 1], 2)
    assert evaluate_assignment(hand_energy, U) == 7.0


def test_fractional_assignment(hand_energy):
    # unary 0.5 * (1+2+3+4) = 5, pairwise 2 * 0.5 = 1
    assert evaluate_assignment(hand_energy, np.full((2, 2), 0.5)) == pytest.approx(6.0, abs=1e-15)


def test_no_edges_is_sum_of_first_column():
    rng = np.random.default_rng(0)
    D = rng.normal(size=(5, 3))
    E = Energy(D, sp.csr_matrix((5, 5)), np.ones((3, 3)))
    U = labeling_to_assignment(np.zeros(5, dtype=int), 3)
    assert evaluate_assignment(E, U) == pytest.approx(D[:, 0].sum(), rel=1e-15)


def test_diagonal_entries_use_v_diagonal():
    V = [[0.5, 1.0], [1.0, 2.0]]
    E = Energy.from_edges(np.zeros((2, 2)), [(0, 0, 3.0), (0, 1, 1.0)], V)
    assert evaluate(E, [1, 0]) == 3.0 * 2.0 + 1.0
    assert evaluate_assignment(E, labeling_to_assignment([1, 0], 2)) == 7.0


def test_asymmetric_v_follows_stored_orientation():
    V = [[0.0, 1.0], [5.0, 0.0]]
    E = Energy.from_edges(np.zeros((2, 2)), [(0, 1, 1.0)], V)
    assert evaluate(E, [0, 1]) == 1.0
    assert evaluate(E, [1, 0]) == 5.0
    assert evaluate_assignment(E, labeling_to_assignment([1, 0], 2)) == 5.0


@pytest.mark.parametrize("bad", [[0, 2], [-1, 0], [0]])
def test_evaluate_rejects_bad_labeling(hand_energy, bad):
    with pytest.raises(ValueError):
        evaluate(hand_energy, bad)


def test_evaluate_assignment_rejects_shape(hand_energy):
    with pytest.raises(ValueError):
        evaluate_assignment(hand_energy, np.ones((2, 3)))


def test_labeling_to_assignment():
    assert labeling_to_assignment([0], 2).tolist() == [[1, 0]]
    assert labeling_to_assignment([1, 0], 2).tolist() == [[0, 1], [1, 0]]
    with pytest.raises(ValueError):
        labeling_to_assignment([2], 2)


def test_rounding():
    assert assignment_to_labeling([[0.7, 0.3]]).tolist() == [0]
    assert assignment_to_labeling([[0.5, 0.5]]).tolist() == [0]
    assert assignment_to_labeling([[0.2, 0.8], [1, 0]]).tolist() == [1, 0]


def test_validate_ok(hand_energy):
    assert validate(hand_energy) == []


def test_validate_lower_triangle():
    E = Energy(np.zeros((2, 2)), sp.coo_matrix(([1.0], ([1], [0])), shape=(2, 2)), np.eye(2))
    problems = validate(E)
    assert len(problems) == 1 and "lower-triangular storage" in problems[0]
    assert validate(Energy(E.D, E.W, E.V, oriented=True)) == []


def test_validate_nan():
    D = np.zeros((2, 2))
    D[1, 0] = np.nan
    problems = validate(Energy(D, sp.csr_matrix((2, 2)), np.eye(2)))
    assert problems == ["D: non-finite value at (1,0)"]


def test_validate_shapes():
    E = Energy(np.zeros((2, 3)), sp.csr_matrix((2, 2)), np.eye(2))
    assert any(p.startswith("V: shape") for p in validate(E))


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 8), l=st.integers(1, 4), sym=st.booleans())
def test_label_and_trace_forms_agree(seed, n, l, sym):
    rng = np.random.default_rng(seed)
    E = random_energy(rng, n, l, symmetric_v=sym, diagonal=True)
    L = rng.integers(0, l, size=n)
    U = labeling_to_assignment(L, l)
    a, b = evaluate(E, L), evaluate_assignment(E, U)
    assert abs(a - b) <= 1e-9 * (1 + abs(a))
    assert abs(a - dense_energy(E.D, E.W, E.V, U)) <= 1e-9 * (1 + abs(a))


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 10), l=st.integers(1, 5))
def test_round_trip_identity(seed, n, l):
    L = np.random.default_rng(seed).integers(0, l, size=n)
    assert np.array_equal(assignment_to_labeling(labeling_to_assignment(L, l)), L)


def test_evaluate_invariant_to_storage_order():
    rng = np.random.default_rng(3)
    E = random_energy(rng, 12, 4, density=0.6)
    rows, cols, w = E.edges
    perm = rng.permutation(rows.size)
    # COO in shuffled order; the constructor canonicalizes, so also sum by hand
    shuffled = Energy(E.D, sp.coo_matrix((w[perm], (rows[perm], cols[perm])), shape=E.W.shape), E.V)
    L = rng.integers(0, 4, size=12)
    by_hand = E.D[np.arange(12), L].sum() + sum(w[k] * E.V[L[rows[k]], L[cols[k]]] for k in perm)
    assert evaluate(shuffled, L) == pytest.approx(evaluate(E, L), rel=1e-12)
    assert evaluate(E, L) == pytest.approx(by_hand, rel=1e-12)
