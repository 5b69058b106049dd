from fractions import Fraction

import numpy as np
import pytest

from kummerlat import linalg
from kummerlat.enumeration import roots_in_complement
from kummerlat.errors import NotPositivePlane, NotRational
from kummerlat.kummer import (
    TORUS, FourPlane, build_glue_map, build_kummer_lattice, explicit_complement_basis,
    glue_h2, induced_four_plane, k_lattice, khat_discriminant_order, kummer_lattice_index,
    orbifold_map, sample_geometric_interpretation, standard_geometric_interpretation,
)
from kummerlat.lattice import determinant, discriminant_form, is_even_unimodular, signature


def test_torus_forms():
    assert is_even_unimodular(TORUS.h2_lattice())
    assert signature(TORUS.h2_lattice()) == (3, 3)
    assert signature(TORUS.heven_lattice()) == (4, 4)


def test_kummer_lattice():
    Pi = build_kummer_lattice()
    assert Pi.rank == 16 and Pi.is_even
    assert abs(determinant(Pi)) == 64
    assert kummer_lattice_index() == 32
    D = discriminant_form(Pi)
    assert D.elementary_divisors == (2,) * 6


def test_glue_to_h2():
    gamma = build_glue_map()
    assert gamma.domain.order == gamma.codomain.order == 64
    H2, _ = glue_h2()
    assert is_even_unimodular(H2) and signature(H2) == (3, 19)
    # K*/K of K = H^2(T)(2) has trivial q on the generators
    assert all(q == 0 for q in discriminant_form(k_lattice()).q_values)


def test_model_certificate(model):
    cert = model.certification()
    assert cert == {"even": True, "det": 1, "signature": (4, 20)}


def test_named_vectors(model):
    n = model.named
    assert model.ambient_pair(n["u"], n["u0"]) == 1
    assert model.ambient_pair(n["u0"], n["u0"]) == 0
    assert model.ambient_pair(n["u"], n["u"]) == 0
    assert model.ambient_pair(n["B_Z"], n["B_Z"]) == -8
    for v in [n["u"], n["u0"], *n["E_hat"]]:
        assert model.contains(v)
    assert khat_discriminant_order(model) == 256


def test_standard_sample_is_root_free(model):
    g = standard_geometric_interpretation()
    res = roots_in_complement(model, induced_four_plane(g, model))
    assert res.roots == [] and res.complement_rank == 20
    assert res.complement_signature == (0, 20)


def test_dropping_half_bz_creates_roots(model):
    g = standard_geometric_interpretation()
    B, _, _ = orbifold_map(g, model)
    plane = induced_four_plane(g, model, b_override=B - model.named["B_Z"] * Fraction(1, 2))
    res = roots_in_complement(model, plane)
    assert len(res.roots) == 16
    for r in res.roots:
        assert model.ambient_pair(r, r) == -2


def test_explicit_complement_basis(model):
    rng = np.random.default_rng(11)
    for _ in range(3):
        g = sample_geometric_interpretation(rng)
        plane = induced_four_plane(g, model).vectors
        C = explicit_complement_basis(g, model)
        assert C.shape == (20, 24)
        assert linalg.rank(C) == 20
        assert not model.ambient_gram_of(np.vstack([plane, C]))[:4, 4:].any()
        # negative definite
        assert signature_of(model.ambient_gram_of(C)) == (0, 20)


def signature_of(G):
    from kummerlat.lattice import IntegerLattice

    d, M = linalg.clear_denominators(G)
    return signature(IntegerLattice(M))


def test_plane_validation(model):
    with pytest.raises(NotPositivePlane):
        roots_in_complement(model, np.zeros((4, 24), dtype=object))
    g = standard_geometric_interpretation()
    rows = induced_four_plane(g, model).vectors.astype(float)
    with pytest.raises(NotRational):
        roots_in_complement(model, rows)


def test_samples_are_valid():
    rng = np.random.default_rng(5)
    for _ in range(10):
        g = sample_geometric_interpretation(rng)
        assert g.violations() == []
