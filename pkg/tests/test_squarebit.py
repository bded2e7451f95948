from __future__ import annotations

from fractions import Fraction

import pytest

from alc import expected
from alc.linalg import RMatrix, RVector
from alc.squarebit import (
    build_catalog,
    build_model,
    compute_table3,
    compute_table4,
    compute_table5,
    d8_index,
    table3_invalid_cells,
)

CAT = build_catalog()
HALF = Fraction(1, 2)


def test_elementary_constants():
    assert CAT.omega == (RVector([1, 0, 1]), RVector([0, 1, 1]), RVector([-1, 0, 1]), RVector([0, -1, 1]))
    assert CAT.u == RVector([0, 0, 1])
    assert CAT.e[0] == RVector([HALF, HALF, HALF])


def test_factorised_indexing():
    assert CAT.Omega[5] == CAT.omega[1].outer(CAT.omega[1])
    for i in range(4):
        for j in range(4):
            assert CAT.Omega[4 * i + j] == CAT.omega[i].outer(CAT.omega[j])
            assert CAT.E[4 * i + j] == CAT.e[i].outer(CAT.e[j])


def test_omega16_coefficients():
    w = CAT.omega
    expect = (w[1].outer(w[1]) - w[2].outer(w[2]) + w[2].outer(w[3]) + w[3].outer(w[2])).scale(HALF)
    assert CAT.Omega[16] == expect
    assert CAT.Omega[16] == RMatrix([[-HALF, HALF, 0], [HALF, HALF, 0], [0, 0, 1]])


def test_entangled_effects_are_normalised_functionals():
    for n in range(16, 24):
        for j in range(16):
            assert 0 <= (CAT.E[n].transpose() @ CAT.Omega[j]).trace() <= 1


def test_d8_structure():
    d8 = list(CAT.d8)
    assert len(set(d8)) == 8
    rotations = [m for m in d8 if m.rows[0][0] * m.rows[1][1] - m.rows[0][1] * m.rows[1][0] == 1]
    assert len(rotations) == 4
    ident = RMatrix.identity(3)
    for a in d8:
        assert any(a @ b == ident for b in d8)
        for b in d8:
            assert a @ b in d8


def test_completeness_elementary():
    assert CAT.e[0] + CAT.e[2] == CAT.u
    assert CAT.e[1] + CAT.e[3] == CAT.u


def test_effect16_on_omega0():
    assert (CAT.E[16].transpose() @ CAT.Omega[0]).trace() == 0


@pytest.mark.parametrize("name,n_states,n_effects,n_trans", [
    ("pr", 24, 16, 128),
    ("hs", 16, 24, 128),
    ("hybrid-a", 18, 18, 4),
    ("hybrid-b", 18, 18, 4),
    ("frozen-16", 17, 17, 2),
    ("frozen-20", 17, 17, 1),
])
def test_model_sizes(name, n_states, n_effects, n_trans):
    m = build_model(name)
    assert (len(m.states), len(m.effects), len(m.transformations)) == (n_states, n_effects, n_trans)


def test_model_index_sets():
    assert build_model("hybrid-a").state_indices == list(range(16)) + [20, 22]
    assert build_model("hybrid-b").effect_indices == list(range(16)) + [21, 23]
    assert build_model("frozen-16").state_indices == list(range(16)) + [16]


@pytest.mark.parametrize("bad", ["frozen-15", "frozen-24", "qubit"])
def test_invalid_model_names(bad):
    with pytest.raises(ValueError):
        build_model(bad)


def test_model_aliases():
    assert build_model("HybridA").name == "hybrid-a"
    assert build_model("Frozen(18)").name == "frozen-18"


def test_table3_examples():
    grid = compute_table3()
    assert grid[0][0] == 1
    assert grid[18][16] == -HALF
    assert grid[21][22] == Fraction(3, 2)


def test_table3_invalid_cells_are_the_shaded_ones():
    bad = table3_invalid_cells()
    assert len(bad) == 16
    assert {(j, i) for j, i, _ in bad} == set(expected.TABLE3_SHADED)
    assert {v for _, _, v in bad} == {-HALF, Fraction(3, 2)}


def test_table3_matches_reference_after_errata():
    assert compute_table3() == expected.corrected(expected.TABLE3, expected.TABLE3_ERRATA)


def test_table3_errata_are_exactly_the_disagreements():
    grid = compute_table3()
    diffs = {(j, i) for j in range(24) for i in range(24) if grid[j][i] != expected.TABLE3[j][i]}
    assert diffs == {cell for _, cells in expected.TABLE3_ERRATA for cell in cells}
    assert len(diffs) == 69


def test_table3_printed_block_is_twice_normalised():
    grid = compute_table3()
    for j in range(16, 24):
        for i in range(16):
            assert expected.TABLE3[j][i] == 2 * grid[j][i]


def test_table4_matches_reference_after_errata():
    assert compute_table4() == expected.corrected(expected.TABLE4, expected.TABLE4_ERRATA)


def test_factorised_block_is_binary():
    grid = compute_table3()
    for j in range(16):
        for i in range(24):
            assert grid[j][i] in (0, 1)


def test_entangled_states_on_factorised_effects():
    # normalised effects give {0, 1/2} here
    grid = compute_table3()
    assert {grid[j][i] for j in range(16, 24) for i in range(16)} == {0, HALF}


def test_factorised_effects_sum_to_unit():
    total = RMatrix.zeros(3, 3)
    for i in range(16):
        total = total + CAT.E[i]
    assert total == CAT.unit.scale(4)


def test_table5_matches():
    assert compute_table5() == [list(row) for row in expected.TABLE5]


def test_table5_examples():
    grid = compute_table5()  # [bob][alice]
    assert grid[d8_index(0, 1)][d8_index(0, 1)] == 16
    assert grid[d8_index(3, -1)][d8_index(0, -1)] == 16
    assert grid[d8_index(1, 1)][d8_index(2, 1)] == 19


def test_sign_group_rule():
    grid = compute_table5()
    for a in range(8):
        for b in range(8):
            same = (a < 4) == (b < 4)
            assert (16 <= grid[b][a] <= 19) == same
            assert (20 <= grid[b][a] <= 23) == (not same)


def test_pr_closure():
    pr = build_model("pr")
    lookup = pr.catalog()
    for t in pr.transformations:
        for s in pr.states:
            assert t.act(s.matrix) in lookup
