from fractions import Fraction

import pytest
import sympy
from sympy import GF
from sympy.polys.matrices import DomainMatrix
from hypothesis import given, settings, strategies as st

from thomason import linalg as la
from thomason.field import Field, Fp

Q = Field.rationals()
F5 = Field.prime(5)

small_ints = st.integers(min_value=-3, max_value=3)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(st.lists(small_ints, min_size=n, max_size=n), min_size=m, max_size=m)))


def test_fp_arithmetic():
    a, b = Fp(3, 7), Fp(5, 7)
    assert (a + b).v == 1
    assert (a * b).v == 1
    assert (a / b * b).v == 3
    assert (1 - a).v == 5
    assert F5(Fraction(1, 2)).v == 3
    with pytest.raises(ZeroDivisionError):
        F5(Fraction(1, 5))
    with pytest.raises(ValueError):
        Field.prime(6)


def test_field_parse_and_format():
    assert Field.parse("Q") == Q
    assert Field.parse("Fp:3") == Field.prime(3)
    assert F5.format(F5(7)) == "2"
    assert Q.format(Fraction(-3, 4)) == "-3/4"
    with pytest.raises(ValueError):
        Field.parse("R")


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_matches_sympy(rows):
    A = Q.matrix(rows)
    assert la.rank(Q, A) == sympy.Matrix(rows).rank()


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_nullspace_is_a_kernel_basis(rows):
    A = Q.matrix(rows)
    K = la.nullspace(Q, A)
    assert K.shape[1] == A.shape[1] - la.rank(Q, A)
    assert la.is_zero(la.matmul(Q, A, K))
    assert la.rank(Q, K) == K.shape[1]


@settings(max_examples=40, deadline=None)
@given(matrices())
def test_rank_over_f5_matches_sympy_mod_5(rows):
    A = F5.matrix(rows)
    # plain sympy matrices have no finite-field rank; go through the polys domain
    expected = DomainMatrix.from_list_sympy(len(rows), len(rows[0]), rows).convert_to(GF(5)).rank()
    assert la.rank(F5, A) == expected


def test_inverse_and_coordinates():
    A = Q.matrix([[2, 1], [1, 1]])
    inv = la.inverse(Q, A)
    assert la.is_zero(la.matmul(Q, A, inv) - Q.eye(2))
    with pytest.raises(ZeroDivisionError):
        la.inverse(Q, Q.matrix([[1, 2], [2, 4]]))
    B = Q.matrix([[1, 0], [1, 1], [0, 1]])
    v = Q.matrix([[2], [5], [3]])
    c = la.Coordinates(Q, B)
    assert list(c(v).flat) == [2, 3]
    assert c.contains(v)
    assert not la.in_span(Q, B, Q.matrix([[1], [0], [0]]))


def test_extend_basis_is_greedy():
    base = Q.matrix([[1], [0], [0]])
    cand = Q.matrix([[2, 0, 0], [0, 0, 1], [0, 0, 0]])
    ext = la.extend_basis(Q, base, cand)
    assert ext.shape[1] == 1 and list(ext[:, 0]) == [0, 1, 0]
