from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from kummerlat.errors import DegeneratePath, DimensionMismatch, NotRational, PathHitsWall
from kummerlat.kummer import sample_geometric_interpretation, standard_geometric_interpretation
from kummerlat.stability import (
    HOLDS_BY_OMEGA_SQ, HOLDS_BY_SCAN, VIOLATED, ChamberPoint, LiftedPoint, MukaiVector,
    NumericalLattice, PathInChamber, StabVector, apply_lambda, boundary_probe_exceptional,
    bounded_delta_plus_scan, central_charge, cyclic_ns, exceptional_class, exp_vector,
    hyperbolic_ns, induced_point, lift, lift_path_winding, membership, mukai_pairing,
    phase_alignment, skyscraper, sufficiency_check, wall_crossings,
)

U = hyperbolic_ns()
fr = st.fractions(min_value=-3, max_value=3, max_denominator=6)
ints = st.integers(-4, 4)


@st.composite
def chamber_points(draw):
    a = draw(st.fractions(min_value=Fraction(1, 4), max_value=3, max_denominator=5))
    b = draw(st.fractions(min_value=Fraction(1, 4), max_value=3, max_denominator=5))
    return ChamberPoint((draw(fr), draw(fr)), (a, b))


mukai = st.tuples(ints, ints, ints, ints)


def pair(a, b):
    return mukai_pairing(a, b, U.ns)


def test_pairing_values():
    G = [[0, 1], [1, 0]]
    assert mukai_pairing((1, 0, 0, 0), (0, 0, 0, 1), G) == -1
    assert mukai_pairing((1, 0, 0, 1), (1, 0, 0, 1), G) == -2
    assert mukai_pairing((0, 1, 2, 0), (0, 1, 2, 0), G) == 4
    with pytest.raises(DimensionMismatch):
        mukai_pairing((1, 0, 1), (1, 0, 0, 1), G)


def test_exp_examples():
    w = exp_vector(ChamberPoint((0, 0), (0, 0)), U)
    assert w.re == (1, 0, 0, 0) and w.im == (0, 0, 0, 0)
    w = exp_vector(ChamberPoint((0, 0), (1, 1)), U)
    assert w.re == (1, 0, 0, -1) and w.im == (0, 1, 1, 0)


def test_float_input_rejected():
    with pytest.raises(NotRational):
        ChamberPoint((0.5, 0), (1, 1))


@given(chamber_points())
def test_exp_lies_on_the_quadric(p):
    w = exp_vector(p, U)
    ww = U.ns_pair(p.omega, p.omega)
    assert pair(w.re, w.re) - pair(w.im, w.im) == 0
    assert pair(w.re, w.im) == 0
    assert pair(w.re, w.re) + pair(w.im, w.im) == 2 * ww


@given(chamber_points())
def test_charge_examples(p):
    assert central_charge(p, (0, 0, 0, 1), U) == (-1, 0)
    if p.B == (0, 0):
        ww = U.ns_pair(p.omega, p.omega)
        assert central_charge(p, (1, 0, 0, 1), U) == (ww / 2 - 1, 0)
        assert central_charge(p, (0, 2, -1, 0), U) == (0, U.ns_pair(p.omega, (2, -1)))


@given(chamber_points(), mukai, mukai)
def test_charge_is_linear(p, v, w):
    z1, z2 = central_charge(p, v, U), central_charge(p, w, U)
    z = central_charge(p, MukaiVector.of(v) + w, U)
    assert z == (z1[0] + z2[0], z1[1] + z2[1])


@given(chamber_points(), mukai, mukai, st.integers(1, 5))
def test_alignment_antisymmetric_and_scaling(p, v, w, k):
    a = phase_alignment(p, v, w, U)
    assert phase_alignment(p, w, v, U) == -a
    assert phase_alignment(p, v, v, U) == 0
    b = phase_alignment(p, MukaiVector.of(v).scaled(k), w, U)
    assert (b > 0) == (a > 0) and (b == 0) == (a == 0)


def test_alignment_generic_point_nonzero():
    p = ChamberPoint((0, 0), (2, 1))
    assert phase_alignment(p, (0, 0, 0, 1), (0, 1, 0, 0), U) == 1  # = omega.c


# ---------------------------------------------------------------------------


def test_sufficiency_examples():
    assert sufficiency_check(ChamberPoint((0, 0), (2, 1)), U).status == HOLDS_BY_OMEGA_SQ
    r = sufficiency_check(ChamberPoint((0, 0), (1, 1)), U)
    assert r.status == VIOLATED and r.delta.as_tuple() == (1, 0, 0, 1) and r.charge == (0, 0)
    r = sufficiency_check(ChamberPoint((0, 0), (1, Fraction(3, 4))), U, r_max=3)
    assert r.status == VIOLATED and r.charge == (Fraction(-1, 4), 0) and r.complete


def test_sufficiency_holds_by_scan():
    # omega^2 = 2 but B pushes the charge of O_X off the real axis
    r = sufficiency_check(ChamberPoint((Fraction(1, 3), 0), (1, 1)), U)
    assert r.status == HOLDS_BY_SCAN and r.complete


def test_cyclic_ns_cannot_hold_half_squares():
    N = cyclic_ns(2)
    r = sufficiency_check(ChamberPoint((0,), (1,)), N)
    assert r.status == VIOLATED and r.charge == (0, 0)


@settings(max_examples=20)
@given(st.fractions(min_value=Fraction(1, 5), max_value=2, max_denominator=5),
       st.fractions(min_value=Fraction(1, 5), max_value=2, max_denominator=5),
       fr, fr)
def test_scan_matches_brute_force(a, b, b1, b2):
    p = ChamberPoint((b1, b2), (a, b))
    assume(U.ns_pair(p.omega, p.omega) <= 2)
    scan = bounded_delta_plus_scan(U, p)
    got = {d.as_tuple() for d, _ in scan.deltas}
    brute = set()
    for r in range(1, scan.r_bound + 3):
        for c1 in range(-16, 17):
            for c2 in range(-16, 17):
                s = Fraction(2 * c1 * c2 + 2, 2 * r)
                if s.denominator != 1:
                    continue
                z = central_charge(p, (r, c1, c2, s), U)
                if z[1] == 0 and z[0] <= 0:
                    brute.add((r, c1, c2, s))
    assert got == brute


def test_membership_abelian():
    A = hyperbolic_ns(spherical=False)
    m = membership(A, exp_vector(ChamberPoint((0, 0), (2, 1)), A))
    assert all(m.flags().values())


def test_membership_root_witness():
    w = exp_vector(ChamberPoint((0, 0), (1, 1)), U)
    m = membership(U, w)
    assert m.in_P_plus and not m.in_P_plus_0
    d = m.witness["P_plus_0"]
    assert pair(d.as_tuple(), d.as_tuple()) == -2
    assert pair(d.as_tuple(), w.re) == 0 and pair(d.as_tuple(), w.im) == 0
    assert not membership(U, w.conjugate()).in_P_plus


def test_membership_not_in_P():
    m = membership(U, StabVector((1, 0, 0, 0), (0, 0, 0, 1)))
    assert not m.in_P and not m.in_Q


# ---------------------------------------------------------------------------


def test_kummer_induced_points_avoid_roots(model):
    rng = np.random.default_rng(8)
    for g in [standard_geometric_interpretation(), sample_geometric_interpretation(rng)]:
        N = NumericalLattice.from_kummer(model, g)
        p = induced_point(N, g)
        m = membership(N, exp_vector(p, N))
        assert m.in_P_plus and m.in_P_plus_0
        # pi_* omega is only nef: it sits on the walls of the exceptional curves
        assert not m.in_L and "ample" in m.witness
        m0 = membership(N, exp_vector(ChamberPoint((0,) * N.rho, p.omega), N))
        assert not m0.in_P_plus_0


def test_exceptional_class_is_spherical(model):
    g = standard_geometric_interpretation()
    N = NumericalLattice.from_kummer(model, g)
    for k in range(-1, 4):
        v = exceptional_class(N, 5, k)
        assert mukai_pairing(v, v, N.ns) == -2
        # chi(O_X, O_C(k)) = -<v(O_X), v> against h^0 - h^1 of O(k) on P^1
        chi_curve = k + 1
        assert -mukai_pairing((1, *([0] * N.rho), 1), v, N.ns) == chi_curve


def test_boundary_probe(model):
    g = standard_geometric_interpretation()
    for k in (0, 3):
        pr = boundary_probe_exceptional(model, g, k)
        assert pr.all_vanish and pr.hypothesis_holds and pr.b_in_ns
    pr = boundary_probe_exceptional(model, g, 0, perturb=(6, Fraction(1, 7)))
    assert [i for i, a in enumerate(pr.alignments) if a != 0] == [6]


# ---------------------------------------------------------------------------


def test_constant_path_has_no_events():
    p = ChamberPoint((0, 0), (2, 1))
    assert wall_crossings(PathInChamber([p, p]), [(0, 0, 0, 1), (0, 1, -1, 0)], U) == []


def test_single_crossing_at_orthogonality():
    path = PathInChamber([ChamberPoint((0, 0), (3, 1)), ChamberPoint((0, 0), (1, 2))])
    ev = wall_crossings(path, [(0, 0, 0, 1), (0, 1, -1, 0)], U)
    # omega(t).(1,-1) = (1+t) - (3-2t) vanishes at t = 2/3
    assert len(ev) == 1 and ev[0].t == Fraction(2, 3) and ev[0].exact


def test_irrational_crossing_is_bracketed():
    # alignment of O_X and O_p: Im Z(O_X) = -B.omega, here a quadratic with irrational roots
    path = PathInChamber([ChamberPoint((-1, 1), (1, 1)), ChamberPoint((1, 1), (1, 1))])
    ev = wall_crossings(path, [(0, 0, 0, 1), (1, 0, 0, 1)], U)
    for e in ev:
        lo, hi = e.interval
        assert lo <= e.t <= hi


def test_path_inside_chamber():
    path = PathInChamber([ChamberPoint((0, 0), (2, 1)), ChamberPoint((0, 0), (3, 1)),
                          ChamberPoint((0, 0), (3, 2))])
    assert wall_crossings(path, [(0, 0, 0, 1), (0, 1, -1, 0), (0, 1, 0, 0)], U) == []


def test_degenerate_and_bad_paths():
    p = ChamberPoint((0, 0), (2, 1))
    with pytest.raises(DegeneratePath):
        wall_crossings(PathInChamber([p, p]), [(0, 0, 0, 0), (0, 0, 0, 0)], U)
    bad = PathInChamber([ChamberPoint((0, 0), (1, 1)), ChamberPoint((0, 0), (-1, 1))])
    with pytest.raises(PathHitsWall):
        lift_path_winding(bad, U)


# ---------------------------------------------------------------------------


def test_lambda_examples():
    w = lift(exp_vector(ChamberPoint((0, 0), (1, 1)), U))
    assert apply_lambda(w, 0) == w
    two = apply_lambda(w, 2)
    assert two.base == w.base and two.winding == 1
    one = apply_lambda(w, 1)
    assert one.base.re == tuple(-x for x in w.base.re) and one.winding == 0 and one.phase == 1


@given(fr, fr, chamber_points())
def test_lambda_group_law(a, b, p):
    w = lift(exp_vector(p, U))
    assert apply_lambda(apply_lambda(w, a), b) == apply_lambda(w, a + b)


@given(chamber_points(), fr)
def test_loop_winding_is_one(p, start):
    loop = PathInChamber([p, p], (start, start + 2))
    res = lift_path_winding(loop, U)
    assert res.is_loop and res.winding == 1


def test_winding_concatenation():
    p, q = ChamberPoint((0, 0), (1, 1)), ChamberPoint((1, 0), (2, 1))
    a = PathInChamber([p, q, p], (0, 1, 2))
    b = PathInChamber([p, p], (2, 4))
    assert lift_path_winding(a, U).winding == 1
    assert lift_path_winding(a + b, U).winding == 2
    assert lift_path_winding(PathInChamber([p, q]), U).winding == 0
