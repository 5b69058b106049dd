from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from kummerlat import linalg
from kummerlat.enumeration import (
    EXACT_NORM, UP_TO_NORM, EnumerationRequest, brute_force_short_vectors, fincke_pohst,
    lll_gram, short_vectors,
)
from kummerlat.errors import CapExceeded, NotDefinite
from kummerlat.lattice import IntegerLattice

from test_lattice import E8_CARTAN


def random_definite(rng, n):
    # B B^T + small diagonal keeps things positive definite with modest entries
    while True:
        B = rng.integers(-2, 3, size=(n, n))
        G = (B @ B.T).astype(object)
        if linalg.determinant(linalg.as_matrix(G.tolist())) != 0:
            return linalg.as_matrix(G.tolist())


def test_e8_roots():
    roots = short_vectors(EnumerationRequest(IntegerLattice(E8_CARTAN), 2))
    assert len(roots) == 120
    vecs = short_vectors(EnumerationRequest(IntegerLattice(E8_CARTAN), 4, mode=UP_TO_NORM))
    assert len(vecs) == 120 + 1080


def test_a2_hexagon():
    assert short_vectors(EnumerationRequest(IntegerLattice([[2, 1], [1, 2]]), 2)) == \
        [(0, 1), (1, -1), (1, 0)]


def test_negated_request():
    G = IntegerLattice([[-2, 1], [1, -2]])
    assert len(short_vectors(EnumerationRequest(G, 2, negate=True))) == 3
    with pytest.raises(NotDefinite):
        short_vectors(EnumerationRequest(G, 2))


def test_cap():
    with pytest.raises(CapExceeded) as ei:
        short_vectors(EnumerationRequest(IntegerLattice(E8_CARTAN), 2, cap=10))
    assert ei.value.count == 10


def test_oracle_agreement_fixed_seed():
    rng = np.random.default_rng(2024)
    for _ in range(25):
        n = int(rng.integers(1, 5))
        G = random_definite(rng, n)
        for N in (2, 4, 8):
            for mode in (EXACT_NORM, UP_TO_NORM):
                got = short_vectors(EnumerationRequest(IntegerLattice(G), N, mode=mode))
                assert got == brute_force_short_vectors(G, N, mode)


@given(st.integers(0, 10 ** 6))
def test_lll_is_unimodular_congruence(seed):
    rng = np.random.default_rng(seed)
    G = random_definite(rng, int(rng.integers(1, 6)))
    H, R = lll_gram(G)
    assert abs(linalg.determinant(H)) == 1
    assert (H.dot(G).dot(H.T) == R).all()
    # size reduction: |mu_ij| <= 1/2 fails only with exact ties, so check the first one
    if R.shape[0] > 1:
        assert 2 * abs(R[1, 0]) <= R[0, 0]


def test_fincke_pohst_with_center():
    # points of Z^2 within distance^2 1/2 of (1/2, 1/2): the four corners
    res = fincke_pohst([[1, 0], [0, 1]], Fraction(1, 2), center=[Fraction(1, 2), Fraction(1, 2)])
    assert sorted(x for x, _ in res) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert all(v == Fraction(1, 2) for _, v in res)
