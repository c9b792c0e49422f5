from __future__ import annotations

import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nilgrade.core import (
    Algebra,
    in_span,
    kernel_basis,
    mat_inverse,
    mat_mul,
    mat_vec,
    rank,
    rref,
    solve,
)
from nilgrade.errors import NotNilpotent, SingularMatrix
from nilgrade.scalar import FieldDescriptor, Fp, Qi, fp_field

QI = FieldDescriptor("Qi")


def qmat(rows):
    return [[Qi(Fraction(v)) for v in row] for row in rows]


def chain_algebra(n: int) -> Algebra:
    """e_i e_j = e_{i+j} while i+j <= n; a single chain of basis products."""
    table = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i + j <= n:
                table[(i, j)] = {i + j: Qi(1)}
    return Algebra(n, QI, table)


# -- linear algebra ----------------------------------------------------------


def test_rref_and_rank():
    m, pivots = rref(qmat([[1, 2], [2, 4]]), QI)
    assert pivots == [0]
    assert m == qmat([[1, 2]])
    assert rank(qmat([[1, 2], [2, 4]]), QI) == 1
    assert rank(qmat([[1, 0], [0, 1]]), QI) == 2
    assert rank([], QI) == 0


def test_kernel_basis():
    ker = kernel_basis(qmat([[1, 2], [2, 4]]), QI)
    assert ker == [[Qi(-2), Qi(1)]]
    assert kernel_basis(qmat([[1, 0], [0, 1]]), QI) == []


def test_solve():
    assert solve(qmat([[1, 2], [2, 4]]), [Qi(3), Qi(6)], QI) == [Qi(3), Qi(0)]
    assert solve(qmat([[1, 2], [2, 4]]), [Qi(3), Qi(5)], QI) is None


def test_mat_inverse():
    assert mat_inverse(qmat([[1, 1], [0, 1]]), QI) == qmat([[1, -1], [0, 1]])
    with pytest.raises(SingularMatrix):
        mat_inverse(qmat([[1, 2], [2, 4]]), QI)
    f5 = fp_field(5)
    m = [[Fp(2, 5), Fp(0, 5)], [Fp(0, 5), Fp(3, 5)]]
    assert mat_inverse(m, f5) == [[Fp(3, 5), Fp(0, 5)], [Fp(0, 5), Fp(2, 5)]]


def test_in_span():
    rows, pivots = rref(qmat([[1, 0, 1], [0, 1, 1]]), QI)
    assert in_span([Qi(2), Qi(3), Qi(5)], rows, pivots, QI)
    assert not in_span([Qi(0), Qi(0), Qi(1)], rows, pivots, QI)


def test_mat_mul_and_vec():
    a = qmat([[1, 2], [3, 4]])
    b = qmat([[0, 1], [1, 0]])
    assert mat_mul(a, b, QI) == qmat([[2, 1], [4, 3]])
    assert mat_vec(a, [Qi(1), Qi(1)], QI) == [Qi(3), Qi(7)]


@settings(max_examples=100, deadline=None)
@given(st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=3, max_size=3))
def test_rref_row_space_preserved(entries):
    m = qmat(entries)
    red, pivots = rref(m, QI)
    # every original row reduces to zero against the echelon rows
    for row in m:
        assert in_span(row, red, pivots, QI)
    assert len(red) == rank(m, QI)


# -- algebra basics -----------------------------------------------------------


def test_chain_algebra_products():
    alg = chain_algebra(4)
    assert alg.product(1, 2) == {3: Qi(1)}
    assert alg.product(3, 3) == {}
    x = alg.multiply(alg.basis_vector(1), alg.basis_vector(3))
    assert x == [Qi(0), Qi(0), Qi(0), Qi(1)]


def test_table_validation():
    with pytest.raises(ValueError):
        Algebra(2, QI, {(1, 3): {1: Qi(1)}})
    with pytest.raises(ValueError):
        Algebra(2, QI, {(1, 1): {5: Qi(1)}})
    # zero coefficients are dropped
    alg = Algebra(2, QI, {(1, 1): {2: Qi(0)}})
    assert alg.table == {}


def test_associativity_chain():
    assert chain_algebra(5).verify_associativity() == []


def test_associativity_violation_found():
    # e1 e1 = e2, e2 e1 = e3, but e1 e2 = 0: (e1 e1) e1 = e3 != 0 = e1 (e1 e1)
    alg = Algebra(3, QI, {(1, 1): {2: Qi(1)}, (2, 1): {3: Qi(1)}})
    bad = alg.verify_associativity()
    assert [v[:3] for v in bad] == [(1, 1, 1)]
    assert bad[0].defect == [Qi(0), Qi(0), Qi(1)]


def test_power_filtration_chain():
    alg = chain_algebra(4)
    powers = alg.power_filtration()
    assert [len(p) for p in powers] == [4, 3, 2, 1, 0]
    # A^4 = span(e_4) is the last nonzero power
    assert alg.nilindex() == 4
    # A^2 is spanned by e_2, e_3, e_4
    rows, pivots = rref(powers[1], QI)
    assert pivots == [1, 2, 3]


def test_not_nilpotent():
    alg = Algebra(1, QI, {(1, 1): {1: Qi(1)}})
    with pytest.raises(NotNilpotent):
        alg.power_filtration()


def test_left_mult_matrix_is_shift():
    alg = chain_algebra(3)
    L = alg.left_mult_matrix(alg.basis_vector(1))
    assert L == qmat([[0, 0, 0], [1, 0, 0], [0, 1, 0]])


def test_basis_change_round_trip():
    alg = chain_algebra(4)
    p = qmat([[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 2, 1], [0, 0, 0, 1]])
    moved = alg.apply_basis_change(p)
    assert moved != alg
    back = moved.apply_basis_change(mat_inverse(p, QI))
    assert back == alg


def test_basis_change_scaling():
    # e1' = 2 e1 in the chain: e1'e1' = 4 e2 = 4 e2'
    alg = chain_algebra(2)
    moved = alg.apply_basis_change(qmat([[2, 0], [0, 1]]))
    assert moved.product(1, 1) == {2: Qi(4)}


def test_json_round_trip():
    alg = chain_algebra(4)
    blob = json.dumps(alg.to_json(), sort_keys=True)
    again = Algebra.from_json(json.loads(blob))
    assert again == alg
    assert json.dumps(again.to_json(), sort_keys=True) == blob


def test_json_is_deterministic():
    t1 = {(1, 1): {2: Qi(1), 3: Qi(2)}, (2, 1): {3: Qi(1)}}
    t2 = {(2, 1): {3: Qi(1)}, (1, 1): {3: Qi(2), 2: Qi(1)}}
    a = Algebra(3, QI, t1)
    b = Algebra(3, QI, t2)
    assert json.dumps(a.to_json()) == json.dumps(b.to_json())
