from __future__ import annotations

from fractions import Fraction

import pytest

from alc.expected import TOY_COMPOSITION
from alc.spekkens import (
    M,
    M_PRIME,
    PSI,
    U,
    ToyEpistemic,
    ToyMeasurement,
    ToyPermutation,
    apply_local,
    composition_table,
    is_klein_group,
    is_valid,
    klein_table,
    ontic_bit,
    outcome_distribution,
    pure_type,
    single_pure_states,
    spekkens_report,
    toy_protocol,
)

Q = Fraction


def test_ontic_indexing():
    assert ontic_bit(1, 1) == 0
    assert ontic_bit(4, 4) == 15
    assert ontic_bit(2, 3) == 6


def test_permutations():
    assert U[1].mapping == (2, 1, 4, 3)
    assert U[2].mapping == (3, 4, 1, 2)
    assert U[3].mapping == (4, 3, 2, 1)
    with pytest.raises(ValueError):
        ToyPermutation((1, 1, 2, 3))


def test_apply_local_examples():
    assert apply_local(U[1], U[1], PSI[0]) == PSI[0]
    assert apply_local(U[0], U[3], PSI[0]) == PSI[3]
    for s in PSI:
        assert apply_local(U[0], U[0], s) == s


def test_composition_table():
    assert composition_table() == TOY_COMPOSITION
    for pair in [(0, 2), (2, 0), (1, 3), (3, 1)]:
        assert composition_table()[pair] == 2


def test_outcome_examples():
    assert outcome_distribution(PSI[2], M) == [0, 0, 1, 0]
    assert outcome_distribution(PSI[0], M_PRIME) == [1, 0]


def test_type1_outcomes():
    s12 = ToyEpistemic.single(1, 2)
    s13 = ToyEpistemic.single(1, 3)
    # the support {(1.1), (1.2), (2.1), (2.2)} meets S_I and S_II twice each
    assert outcome_distribution(ToyEpistemic.product(s12, s12), M) == [Q(1, 2), Q(1, 2), 0, 0]
    assert outcome_distribution(ToyEpistemic.product(s12, s13), M) == [Q(1, 4)] * 4


def test_toy_protocol():
    assert toy_protocol(M) == 1
    assert toy_protocol(M_PRIME) == 1


def test_klein_group():
    t = klein_table()
    assert t == [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]]
    assert is_klein_group(t)
    assert not is_klein_group([[0, 1, 2, 3], [1, 2, 3, 0], [2, 3, 0, 1], [3, 0, 1, 2]])


def test_psi_partition():
    total = 0
    for i, a in enumerate(PSI):
        assert pure_type(a) == "type-2"
        for b in PSI[i + 1:]:
            assert a.support & b.support == 0
        total |= a.support
    assert total == (1 << 16) - 1
    assert tuple(M.outcomes) == PSI


def test_validity_preserved():
    singles = single_pure_states()
    assert len(singles) == 6
    states = list(PSI) + [ToyEpistemic.product(a, b) for a in singles for b in singles]
    for s in states:
        assert is_valid(s)
        for pa in U:
            for pb in U:
                assert is_valid(apply_local(pa, pb, s))


def test_invalid_states():
    assert not is_valid(ToyEpistemic.pairs((1, 1), (1, 2), (1, 3), (1, 4)))
    assert not is_valid(ToyEpistemic.pairs((1, 1), (2, 2)))
    assert not is_valid(ToyEpistemic.single(1))


def test_distributions_sum_to_one():
    singles = single_pure_states()
    for a in singles:
        for b in singles:
            for m in (M, M_PRIME):
                assert sum(outcome_distribution(ToyEpistemic.product(a, b), m)) == 1


def test_measurement_validation():
    with pytest.raises(ValueError):
        ToyMeasurement((PSI[0], PSI[0]))
    with pytest.raises(ValueError):
        ToyMeasurement((PSI[0], PSI[1]))
    with pytest.raises(ValueError):
        outcome_distribution(ToyEpistemic.single(1, 2), M)


def test_report():
    rep = spekkens_report()
    assert rep["match"]
    assert rep["success_M"] == "1/1" and rep["success_M_prime"] == "1/1"
    assert len(rep["composition_table"]) == 16
