from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from kummerlat import linalg
from kummerlat.errors import DegenerateForm, IncompatibleGlue, NotIsomorphism, NotSymmetric
from kummerlat.lattice import (
    IntegerLattice, Sublattice, determinant, direct_sum, discriminant_form, glue,
    glue_map_from_images, hyperbolic_plane, is_even_unimodular, orthogonal_complement,
    primitive_closure, signature,
)

E8_CARTAN = [
    [2, -1, 0, 0, 0, 0, 0, 0],
    [-1, 2, -1, 0, 0, 0, 0, 0],
    [0, -1, 2, -1, 0, 0, 0, -1],
    [0, 0, -1, 2, -1, 0, 0, 0],
    [0, 0, 0, -1, 2, -1, 0, 0],
    [0, 0, 0, 0, -1, 2, -1, 0],
    [0, 0, 0, 0, 0, -1, 2, 0],
    [0, 0, -1, 0, 0, 0, 0, 2],
]


def e8():
    return IntegerLattice(E8_CARTAN, label="E8")


def random_unimodular(draw, n):
    U = linalg.identity(n)
    for _ in range(draw(st.integers(1, 6))):
        i = draw(st.integers(0, n - 1))
        j = draw(st.integers(0, n - 1))
        if i == j:
            continue
        k = draw(st.integers(-2, 2))
        E = linalg.identity(n)
        E[i, j] = k
        U = U.dot(E)
    return U


@st.composite
def nondegenerate_grams(draw, max_n=4):
    n = draw(st.integers(1, max_n))
    A = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            A[i][j] = A[j][i] = draw(st.integers(-4, 4))
    if linalg.determinant(linalg.as_matrix(A)) == 0:
        A = [[A[i][j] + (5 * (i + 1) if i == j else 0) for j in range(n)] for i in range(n)]
    if linalg.determinant(linalg.as_matrix(A)) == 0:
        A[0][0] += 1
    return A


def test_small_invariants():
    U = hyperbolic_plane()
    assert signature(U) == (1, 1) and determinant(U) == -1
    assert is_even_unimodular(U)
    assert signature(e8()) == (8, 0) and determinant(e8()) == 1
    assert is_even_unimodular(direct_sum(e8(), U))


def test_asymmetric_gram_reports_cell():
    with pytest.raises(NotSymmetric) as ei:
        IntegerLattice([[2, 1, 0], [1, 2, 0], [0, 3, 2]])
    assert ei.value.cell == (2, 1)


def test_degenerate_flag():
    with pytest.raises(DegenerateForm):
        IntegerLattice([[1, 1], [1, 1]])
    L = IntegerLattice([[1, 1], [1, 1]], allow_degenerate=True)
    assert L.rank == 2


@given(st.data(), nondegenerate_grams())
def test_invariants_under_base_change(data, A):
    L = IntegerLattice(A)
    U = random_unimodular(data.draw, L.rank)
    L2 = IntegerLattice(U.dot(L.gram).dot(U.T))
    assert signature(L2) == signature(L)
    assert determinant(L2) == determinant(L)
    if L.is_even:
        d1, d2 = discriminant_form(L), discriminant_form(L2)
        assert d1.elementary_divisors == d2.elementary_divisors
        if d1.order <= 200:
            assert _q_histogram(d1) == _q_histogram(d2)


def _q_histogram(D):
    import itertools
    from collections import Counter

    return Counter(D.q(D.element(c)) for c in
                   itertools.product(*(range(d) for d in D.elementary_divisors)))


@given(nondegenerate_grams())
def test_discriminant_form_is_consistent(A):
    A = [[2 * x if i == j else x for j, x in enumerate(r)] for i, r in enumerate(A)]
    try:
        L = IntegerLattice(A)
    except DegenerateForm:
        return
    D = discriminant_form(L)
    assert D.order == abs(determinant(L))
    for g, d in zip(D.generators, D.elementary_divisors):
        # generator lies in the dual and has order d
        assert linalg.is_integral(L.gram.dot(g))
        assert linalg.is_integral(g * d)
        c = D.coordinates(g)
        assert c.count(1) == 1 and set(c) <= {0, 1}


def test_discriminant_of_a2():
    D = discriminant_form(IntegerLattice([[2, -1], [-1, 2]]))
    assert D.elementary_divisors == (3,)
    assert D.q_values[0] in (Fraction(2, 3), Fraction(4, 3))


def test_glue_two_rank_one():
    A = IntegerLattice([[2]])
    B = IntegerLattice([[-2]])
    gamma = glue_map_from_images(discriminant_form(A), discriminant_form(B), [[Fraction(1, 2)]])
    G, basis = glue(A, B, gamma)
    assert is_even_unimodular(G) and signature(G) == (1, 1)


def test_glue_rejects_isometry_of_wrong_sign():
    A = IntegerLattice([[2]])
    gamma = glue_map_from_images(discriminant_form(A), discriminant_form(A), [[Fraction(1, 2)]])
    with pytest.raises(IncompatibleGlue):
        gamma.check()


def test_glue_rejects_order_mismatch():
    A = IntegerLattice([[2]])
    B = IntegerLattice([[-4]])
    with pytest.raises(NotIsomorphism):
        glue_map_from_images(discriminant_form(A), discriminant_form(B),
                             [[Fraction(1, 2)]]).check()


def test_primitive_closure_and_complement():
    U = hyperbolic_plane()
    S = Sublattice(U, [[2, 0]])
    assert primitive_closure(S) == Sublattice(U, [[1, 0]])
    C = orthogonal_complement(Sublattice(U, [[1, 1]]))
    assert C.rank == 1 and C.gram()[0, 0] == -2


@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=3))
def test_closure_is_saturated(rows):
    L = direct_sum(hyperbolic_plane(), hyperbolic_plane())
    if linalg.rank(linalg.as_matrix(rows)) != len(rows):
        return
    S = Sublattice(L, rows)
    P = primitive_closure(S)
    assert P.contains_sublattice(S)
    assert P.rank == S.rank
    # saturated: anything in P ⊗ Q ∩ Z^4 is in P
    assert primitive_closure(P) == P
    C = orthogonal_complement(S)
    assert C.rank == 4 - S.rank
    assert not L.gram_of(np.vstack([S.basis, C.basis]))[:S.rank, S.rank:].any()


def test_sublattice_index():
    L = IntegerLattice([[2, 0], [0, 2]])
    full = Sublattice(L, linalg.identity(2))
    assert Sublattice(L, [[2, 0], [1, 3]]).index_in(full) == 6
