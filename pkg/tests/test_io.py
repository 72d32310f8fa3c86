import io

import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings, strategies as st

from mrfpyramid.coarsen import Interpolation, coarsen_energy
from mrfpyramid.energy import Energy
from mrfpyramid.io import (
    FormatError,
    read_energy,
    read_labeling,
    read_report,
    write_energy,
    write_labeling,
    write_solve_report,
)
from mrfpyramid.pyramid import PyramidParams, solve_multiscale
from mrfpyramid.synth import SyntheticParams, generate_synthetic

from conftest import random_energy, random_row_stochastic

HAND = """MSE 1
2 2 1 0
1 2
3 4
0 1 2
0 1
1 0
"""


def roundtrip(E):
    buf = io.StringIO()
    write_energy(E, buf)
    buf.seek(0)
    return read_energy(buf)


def test_read_hand(hand_energy):
    assert read_energy(io.StringIO(HAND)) == hand_energy


def test_roundtrip_hand(hand_energy, tmp_path):
    write_energy(hand_energy, tmp_path / "e.txt")
    assert read_energy(tmp_path / "e.txt") == hand_energy


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 12), l=st.integers(1, 4))
def test_roundtrip_exact(seed, n, l):
    rng = np.random.default_rng(seed)
    E = random_energy(rng, n, l, diagonal=True)
    E = Energy(E.D * 10.0 ** rng.integers(-20, 20), E.W, E.V / 3.0)
    assert roundtrip(E) == E


def test_roundtrip_oriented():
    rng = np.random.default_rng(0)
    E = random_energy(rng, 10, 3, density=0.5, symmetric_v=False)
    Ec = coarsen_energy(E, Interpolation(sp.csr_matrix(random_row_stochastic(rng, 10, 4)), np.arange(4), np.full(10, -1)))
    assert Ec.oriented
    assert roundtrip(Ec) == Ec


@pytest.mark.parametrize(
    "text, match",
    [
        (HAND.replace("MSE 1", "MSE 2"), "magic"),
        (HAND.replace("2 2 1 0", "2 2 2 0").replace("0 1 2\n", "0 1 2\n0 1 3\n"), "duplicate"),
        (HAND.replace("0 1 2\n", "1 0 2\n"), "storage convention"),
        (HAND.replace("3 4", "3 nan"), "non-finite"),
        (HAND.replace("3 4", "3"), "expected 2 values"),
        (HAND.replace("0 1 2\n", "0 5 2\n"), "out of range"),
        (HAND + "9\n", "trailing"),
        ("\n".join(HAND.splitlines()[:4]), "end of file"),
    ],
)
def test_read_errors(text, match):
    with pytest.raises(FormatError, match=match):
        read_energy(io.StringIO(text))


def test_oriented_file_allows_lower_entries():
    text = HAND.replace("2 2 1 0", "2 2 1 1").replace("0 1 2\n", "1 0 2\n")
    E = read_energy(io.StringIO(text))
    assert E.oriented and E.edges[0].tolist() == [1]


def test_labeling_read():
    assert read_labeling(io.StringIO("0 1 0"), n=3, l=2).tolist() == [0, 1, 0]
    with pytest.raises(FormatError, match="out of range"):
        read_labeling(io.StringIO("5"), n=1, l=3)
    with pytest.raises(FormatError, match="entries"):
        read_labeling(io.StringIO("0 1"), n=3)


def test_labeling_roundtrip(tmp_path):
    L = np.array([3, 0, 2, 2, 1])
    write_labeling(L, tmp_path / "l.txt")
    assert np.array_equal(read_labeling(tmp_path / "l.txt", n=5, l=4), L)


def test_solve_report_schema():
    E = generate_synthetic(SyntheticParams(6, 6, 3, 10.0, seed=1))
    r = solve_multiscale(E, PyramidParams(seed=1))
    buf = io.StringIO()
    write_solve_report(r, buf, meta={"method": "multiscale", "seed": 1})
    top, blocks = read_report(io.StringIO(buf.getvalue()))
    assert top["kind"] == "solve" and top["method"] == "multiscale"
    assert float(top["final_energy"]) == r.final_energy
    assert int(top["levels"]) == len(blocks) == len(r.per_level)
    assert all(name == "level" for name, _ in blocks)
    assert int(blocks[-1][1]["level"]) == 0


def test_report_parse_errors():
    with pytest.raises(FormatError):
        read_report(io.StringIO("nope\n"))
    with pytest.raises(FormatError):
        read_report(io.StringIO("MSE-REPORT 1\nbegin level\n"))
