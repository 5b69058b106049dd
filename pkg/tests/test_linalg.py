from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from kummerlat import linalg

small = st.integers(-6, 6)


def mats(m, n):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=m, max_size=m)


def test_float_rejected():
    with pytest.raises(TypeError):
        linalg.as_matrix([[0.5, 1]])


def test_string_rationals_parse():
    A = linalg.as_matrix([["1/2", "3"]])
    assert A[0, 0] == Fraction(1, 2) and A[0, 1] == 3


@given(mats(3, 3))
def test_det_matches_fraction_elimination(rows):
    A = linalg.as_matrix(rows)
    d = linalg.determinant(A)
    assert d == linalg._fraction_det([[Fraction(x) for x in r] for r in rows])


@given(mats(3, 3))
def test_inverse_roundtrip(rows):
    A = linalg.as_matrix(rows)
    if linalg.determinant(A) == 0:
        return
    I = linalg.normalize_matrix(A.dot(linalg.inverse(A)))
    assert (I == linalg.identity(3)).all()


@given(mats(3, 4))
def test_hnf_transform(rows):
    A = linalg.as_matrix(rows)
    H, U, r = linalg.hnf_with_transform(A)
    assert (U.dot(A) == H).all()
    assert abs(linalg.determinant(U)) == 1
    assert r == linalg.rank(A)


@given(mats(3, 4))
def test_integer_kernel(rows):
    A = linalg.as_matrix(rows)
    K = linalg.integer_kernel(A)
    assert K.shape[0] == 4 - linalg.rank(A)
    for k in K:
        assert not any(A.dot(k))
    # saturated: kernel of kernel of kernel is the kernel again
    if K.shape[0]:
        again = linalg.integer_kernel(linalg.integer_kernel(K))
        assert (linalg.hnf(again) == linalg.hnf(K)).all()


@given(mats(3, 3))
def test_smith_form(rows):
    A = linalg.as_matrix(rows)
    D, U, V, Vinv = linalg.smith_normal_form(A)
    assert (U.dot(A).dot(V) == D).all()
    assert (linalg.normalize_matrix(V.dot(Vinv)) == linalg.identity(3)).all()
    diag = [D[i, i] for i in range(3)]
    nz = [d for d in diag if d]
    for a, b in zip(nz, nz[1:]):
        assert b % a == 0
    assert all(D[i, j] == 0 for i in range(3) for j in range(3) if i != j)


def test_solve_left_outside_span():
    with pytest.raises(ValueError):
        linalg.solve_left(linalg.as_matrix([[1, 0, 0]]), [0, 1, 0])


def test_elementary_divisors_small():
    assert list(linalg.elementary_divisors([[2, 0], [0, 4]])) == [2, 4]
    assert list(linalg.elementary_divisors([[2, 1], [1, 2]])) == [1, 3]
