from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alc.linalg import (
    FEASIBLE,
    INFEASIBLE,
    UNBOUNDED,
    DimensionError,
    LpProblem,
    RMatrix,
    RVector,
    check_farkas,
    check_witness,
    solve_feasibility,
    solve_lp_max,
    trace_product,
)
from alc.oracles import oracle_feasible, oracle_max
from alc.selfcheck import random_lp

F = Fraction
rationals = st.fractions(min_value=-50, max_value=50, max_denominator=30)


@given(rationals, rationals, rationals)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0
    if a:
        assert a * (1 / a) == 1


@given(st.integers(-10**6, 10**6), st.integers(1, 10**6))
def test_normal_form(n, d):
    q = F(n, d)
    assert q.denominator > 0
    from math import gcd
    assert gcd(q.numerator, q.denominator) == 1


@given(st.lists(rationals, min_size=3, max_size=3), st.lists(rationals, min_size=3, max_size=3))
def test_vector_ops(u, v):
    x, y = RVector(u), RVector(v)
    assert x + y - y == x
    assert x.dot(y) == y.dot(x)
    assert (x + y).dot(x) == x.dot(x) + y.dot(x)
    assert x.outer(y).transpose() == y.outer(x)


def test_vector_dimension_mismatch():
    with pytest.raises(DimensionError):
        RVector([1, 2]) + RVector([1, 2, 3])
    with pytest.raises(DimensionError):
        RVector([1, 2]).dot(RVector([1]))


def test_matrix_basics():
    a = RMatrix([[1, 2], [3, 4]])
    assert a.shape == (2, 2)
    assert a @ RMatrix.identity(2) == a
    assert a.transpose() == RMatrix([[1, 3], [2, 4]])
    assert a.trace() == 5
    assert a.flatten() == RVector([1, 2, 3, 4])
    assert a @ RVector([1, 1]) == RVector([3, 7])
    with pytest.raises(DimensionError):
        a @ RMatrix([[1, 2, 3]])
    with pytest.raises(DimensionError):
        RMatrix([[1, 2], [3]])


def test_hashable_and_exact():
    m = RMatrix([[F(1, 2), 0], [0, F(2, 4)]])
    assert m == RMatrix([[F(1, 2), 0], [0, F(1, 2)]])
    assert hash(m) == hash(RMatrix([[F(1, 2), 0], [0, F(1, 2)]]))


def test_trace_product_matches_definition():
    e = RMatrix([[1, 2, 0], [0, 1, F(1, 2)], [3, 0, 1]])
    w = RMatrix([[2, 0, 1], [1, 1, 0], [0, 4, 1]])
    assert trace_product(e, w) == (e.transpose() @ w).trace()
    with pytest.raises(DimensionError):
        trace_product(RMatrix([[1]]), w)


def test_infeasible_has_farkas():
    # x1 + x2 = -1 with x >= 0
    p = LpProblem(RMatrix([[1, 1]]), RVector([-1]))
    out = solve_feasibility(p)
    assert out.status == INFEASIBLE
    assert check_farkas(p, out.certificate)


def test_feasible_witness():
    p = LpProblem(RMatrix([[1, 1, 0], [0, 1, 1]]), RVector([1, F(1, 2)]))
    out = solve_feasibility(p)
    assert out.status == FEASIBLE
    assert check_witness(p, out.witness)


def test_redundant_rows():
    p = LpProblem(RMatrix([[1, 1], [2, 2], [1, 1]]), RVector([1, 2, 1]))
    assert solve_feasibility(p).feasible


def test_lp_max_and_duals():
    # max x1 + x2 s.t. x1 + 2 x2 + s = 4, x1 = 1
    a = RMatrix([[1, 2, 1], [1, 0, 0]])
    b = RVector([4, 1])
    c = RVector([1, 1, 0])
    out = solve_lp_max(LpProblem(a, b, c))
    assert out.status == FEASIBLE
    assert out.value == F(5, 2)
    y = out.certificate
    assert y.dot(b) == out.value
    assert all(s >= ci for s, ci in zip(a.transpose() @ y, c))


def test_lp_unbounded():
    out = solve_lp_max(LpProblem(RMatrix([[1, -1]]), RVector([0]), RVector([1, 0])))
    assert out.status == UNBOUNDED


def test_lp_problem_shape_checks():
    with pytest.raises(DimensionError):
        LpProblem(RMatrix([[1, 1]]), RVector([1, 2]))
    with pytest.raises(DimensionError):
        LpProblem(RMatrix([[1, 1]]), RVector([1]), RVector([1]))


def test_against_oracle_seeded():
    rng = random.Random(12345)
    for _ in range(300):
        a, b, c = random_lp(rng)
        p = LpProblem(RMatrix(a), RVector(b))
        out = solve_feasibility(p)
        assert out.feasible == oracle_feasible(a, b)
        assert check_witness(p, out.witness) if out.feasible else check_farkas(p, out.certificate)
        res = solve_lp_max(LpProblem(RMatrix(a), RVector(b), RVector(c)))
        status, value = oracle_max(a, b, c)
        assert res.status == status
        if status == FEASIBLE:
            assert res.value == value


small = st.integers(-4, 4).map(Fraction)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 3).flatmap(lambda m: st.integers(1, 5).flatmap(lambda n: st.tuples(
    st.lists(st.lists(small, min_size=n, max_size=n), min_size=m, max_size=m),
    st.lists(small, min_size=m, max_size=m),
))))
def test_certificates_always_check(data):
    a, b = data
    p = LpProblem(RMatrix(a), RVector(b))
    out = solve_feasibility(p)
    assert out.feasible == oracle_feasible(a, b)
    if out.feasible:
        assert check_witness(p, out.witness)
    else:
        assert check_farkas(p, out.certificate)
