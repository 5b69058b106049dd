"""The Kummer lattice, the orbifold embedding of the torus Mukai lattice, and
twisted transcendental lattices.

Ambient coordinates for the rank-24 model are fixed as::

    0        pi_* v0           (v0 generates H^0 of the torus)
    1..6     pi_* (mu_j ^ mu_k) for jk = 12, 13, 14, 23, 24, 34
    7        pi_* v            (v generates H^4 of the torus)
    8..23    E_i, i in F_2^4 in binary order (a1 a2 a3 a4, a1 most significant)

The Gram in these coordinates is ``2 * (torus form)`` on the first eight
and ``-2 * identity`` on the exceptional classes. The torus form is the
intersection form with <v0, v> = +1; Mukai-convention data (r, c, s) enters
the model as ``r * u0_hat + c - s * u_hat``.
"""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd

import numpy as np

from . import linalg
from .errors import ConstructionInvariantViolated, NotPositivePlane, NotRationalBField
from .lattice import (
    IntegerLattice,
    Sublattice,
    determinant,
    discriminant_form,
    glue,
    glue_map_from_images,
    is_positive_definite,
    orthogonal_complement,
    primitive_closure,
    signature,
)

WEDGE_PAIRS = ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))
F2_4 = tuple(tuple((i >> (3 - b)) & 1 for b in range(4)) for i in range(16))

I_V0, I_V = 0, 7
E_OFFSET = 8
RANK = 24
HALF = Fraction(1, 2)


def _f2_index(a):
    return a[0] * 8 + a[1] * 4 + a[2] * 2 + a[3]


def _f2_add(a, b):
    return tuple((x + y) % 2 for x, y in zip(a, b))


def plane_P(j, k):
    """P_jk = {a in F_2^4 : a_l = 0 for l not in {j, k}}."""
    return [a for a in F2_4 if all(a[l - 1] == 0 for l in (1, 2, 3, 4) if l not in (j, k))]


def affine_hyperplanes():
    """The 30 affine hyperplanes {x : l(x) = c} of F_2^4, l != 0."""
    out = []
    for l in F2_4[1:]:
        for c in (0, 1):
            out.append([a for a in F2_4 if sum(x * y for x, y in zip(a, l)) % 2 == c])
    return out


# ---------------------------------------------------------------------------
# torus


def _wedge_sign(p, q):
    perm = p + q
    if len(set(perm)) < 4:
        return 0
    inv = sum(1 for i in range(4) for j in range(i + 1, 4) if perm[i] > perm[j])
    return -1 if inv % 2 else 1


@dataclass(frozen=True)
class TorusModel:
    h2_gram: np.ndarray
    heven_gram: np.ndarray  # Mukai convention, <v0, v> = -1
    intersection_gram: np.ndarray  # <v0, v> = +1, used for the orbifold construction

    @classmethod
    def standard(cls):
        h2 = linalg.as_matrix([[_wedge_sign(p, q) for q in WEDGE_PAIRS] for p in WEDGE_PAIRS])
        mukai = linalg.zeros(8, 8)
        mukai[1:7, 1:7] = h2
        inter = mukai.copy()
        mukai[0, 7] = mukai[7, 0] = -1
        inter[0, 7] = inter[7, 0] = 1
        return cls(h2, mukai, inter)

    def h2_lattice(self):
        return IntegerLattice(self.h2_gram, label="H2(T)")

    def heven_lattice(self, mukai=True):
        return IntegerLattice(self.heven_gram if mukai else self.intersection_gram,
                              label="Heven(T)")

    def pair(self, a, b):
        return linalg._normalize(linalg.as_vector(a).dot(self.h2_gram).dot(linalg.as_vector(b)))


TORUS = TorusModel.standard()


@dataclass(frozen=True)
class GeometricInterpretation:
    """Torus data: complex-structure plane, B-field, Kaehler class, volume."""

    omega1: tuple
    omega2: tuple
    b_field: tuple
    kahler: tuple
    volume: Fraction

    def __post_init__(self):
        for name in ("omega1", "omega2", "b_field", "kahler"):
            v = tuple(linalg._exact(x) for x in getattr(self, name))
            if len(v) != 6:
                raise ValueError(f"{name} must have 6 coordinates")
            object.__setattr__(self, name, v)
        object.__setattr__(self, "volume", Fraction(self.volume))

    def heven_plane(self):
        """The four-plane Omega ⊥ mho in H^even(T) (intersection convention), 4 x 8."""
        B, w = self.b_field, self.kahler
        Bw = TORUS.pair(B, w)
        BB = TORUS.pair(B, B)
        return linalg.as_matrix([
            [0, *self.omega1, 0],
            [0, *self.omega2, 0],
            [1, *B, self.volume - BB * HALF],
            [0, *w, -Bw],
        ])

    def violations(self):
        out = []
        G = linalg.as_matrix([[TORUS.pair(a, b) for b in (self.omega1, self.omega2)]
                              for a in (self.omega1, self.omega2)])
        if not is_positive_definite(G):
            out.append("omega plane not positive definite")
        if TORUS.pair(self.kahler, self.kahler) <= 0:
            out.append("kahler class has non-positive square")
        for name in ("kahler", "b_field"):
            v = getattr(self, name)
            if TORUS.pair(v, self.omega1) or TORUS.pair(v, self.omega2):
                out.append(f"{name} not orthogonal to the omega plane")
        if self.volume <= 0:
            out.append("volume not positive")
        plane = self.heven_plane()
        if not is_positive_definite(plane.dot(TORUS.intersection_gram).dot(plane.T)):
            out.append("four-plane not positive definite")
        return out

    def validate(self):
        bad = self.violations()
        if bad:
            raise NotPositivePlane("; ".join(bad))
        return self

    def to_json(self):
        enc = lambda v: [str(x) for x in v]
        return {"omega1": enc(self.omega1), "omega2": enc(self.omega2),
                "b_field": enc(self.b_field), "kahler": enc(self.kahler),
                "volume": str(self.volume)}

    @classmethod
    def from_json(cls, d):
        dec = lambda v: tuple(Fraction(x) for x in v)
        return cls(dec(d["omega1"]), dec(d["omega2"]), dec(d["b_field"]),
                   dec(d["kahler"]), Fraction(d["volume"]))


# ---------------------------------------------------------------------------
# Kummer lattice and the glue map


def kummer_lattice_basis():
    """HNF basis (rows, E-coordinates) of the lattice spanned by the E_i and
    the half-sums over affine hyperplanes."""
    rows = [[int(i == j) for j in range(16)] for i in range(16)]
    for H in affine_hyperplanes():
        idx = {_f2_index(a) for a in H}
        rows.append([Fraction(1, 2) if j in idx else 0 for j in range(16)])
    return linalg.rational_hnf(linalg.as_matrix(rows))


def build_kummer_lattice(dim_check=True):
    basis = kummer_lattice_basis()
    gram = linalg.normalize_matrix(basis.dot(basis.T) * -2)
    Pi = IntegerLattice(gram, label="Pi")
    if dim_check:
        if Pi.rank != 16 or not Pi.is_even:
            raise ConstructionInvariantViolated("Pi rank/evenness", f"rank {Pi.rank}")
        if abs(determinant(Pi)) != 64:
            raise ConstructionInvariantViolated("Pi determinant", str(determinant(Pi)))
    return Pi


def kummer_lattice_index():
    """Index of <E_i> inside Pi."""
    return abs(linalg.determinant(linalg.inverse(kummer_lattice_basis())))


def k_lattice():
    """K = pi_* H^2(T, Z) = H^2(T)(2), in the wedge basis."""
    return IntegerLattice(TORUS.h2_gram * 2, label="K")


def _half_sum_P(j, k):
    idx = {_f2_index(a) for a in plane_P(j, k)}
    return [Fraction(1, 2) if i in idx else 0 for i in range(16)]


def build_glue_map():
    """gamma : K*/K -> Pi*/Pi sending (1/2) pi_*(mu_j mu_k) to (1/2) sum_{P_jk} E_i."""
    K = k_lattice()
    Pi = build_kummer_lattice()
    DK, DPi = discriminant_form(K), discriminant_form(Pi)
    Binv = linalg.inverse(kummer_lattice_basis())
    half_images = [linalg.as_vector(_half_sum_P(j, k)).dot(Binv) for j, k in WEDGE_PAIRS]
    images = []
    for g in DK.generators:
        c = [int(x) for x in g * 2]  # g = sum c_jk * (1/2) e_jk  (mod K)
        if not linalg.is_integral(g * 2):
            raise ConstructionInvariantViolated("K*/K generator not in (1/2)K")
        img = sum((ci * h for ci, h in zip(c, half_images)), linalg.zeros(1, 16)[0])
        images.append(linalg.normalize_matrix(img.reshape(1, -1))[0])
    gamma = glue_map_from_images(DK, DPi, images)
    gamma.check()
    return gamma


def glue_h2():
    """H^2(X, Z) as glue(K, Pi, gamma); returns (lattice, basis in K (+) Pi coordinates)."""
    gamma = build_glue_map()
    return glue(gamma.domain.lattice, gamma.codomain.lattice, gamma, label="H2(X)")


# ---------------------------------------------------------------------------
# the rank-24 model


def ambient_gram():
    G = linalg.zeros(RANK, RANK)
    G[:8, :8] = TORUS.intersection_gram * 2
    for i in range(16):
        G[E_OFFSET + i, E_OFFSET + i] = -2
    return G


def _unit(i):
    v = [0] * RANK
    v[i] = 1
    return v


def _vec(entries):
    return linalg.normalize_matrix(linalg.as_matrix([entries]))[0]


@dataclass(frozen=True, eq=False)
class KummerModel:
    ambient_gram: np.ndarray
    generators: np.ndarray
    basis: np.ndarray  # rows: lattice basis in ambient coordinates
    lattice: IntegerLattice
    named: dict = field(default_factory=dict)
    _basis_inv: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if self._basis_inv is None:
            object.__setattr__(self, "_basis_inv", linalg.inverse(self.basis))

    def ambient_pair(self, a, b):
        return linalg._normalize(linalg.as_vector(a).dot(self.ambient_gram).dot(linalg.as_vector(b)))

    def ambient_gram_of(self, rows):
        rows = np.asarray(rows, dtype=object)
        return linalg.normalize_matrix(rows.dot(self.ambient_gram).dot(rows.T))

    def to_lattice_coords(self, rows):
        return linalg.normalize_matrix(np.asarray(rows, dtype=object).dot(self._basis_inv))

    def to_ambient(self, coords):
        return linalg.normalize_matrix(np.asarray(coords, dtype=object).dot(self.basis))

    def contains(self, v):
        return linalg.is_integral(self.to_lattice_coords(linalg.as_vector(v)))

    def pi_star(self, torus_vec):
        """Image of a vector of H^even(T) (8 coords) or H^2(T) (6 coords)."""
        t = [linalg._exact(x) for x in torus_vec]
        if len(t) == 6:
            t = [0, *t, 0]
        return _vec(t + [0] * 16)

    def sublattice(self, ambient_rows):
        return Sublattice(self.lattice, self.to_lattice_coords(linalg.as_matrix(
            linalg.to_lists(ambient_rows))))

    def certification(self):
        sig = signature(self.lattice)
        return {"even": self.lattice.is_even, "det": determinant(self.lattice), "signature": sig}


def model_vectors():
    """Named ambient vectors of the construction."""
    u = _vec(_unit(I_V))
    E = [_vec(_unit(E_OFFSET + i)) for i in range(16)]
    u0 = _vec([Fraction(1, 2)] + [0] * 6 + [1] + [Fraction(-1, 4)] * 16)
    E_hat = [_vec(E[i] - u * HALF) for i in range(16)]
    B_Z = _vec(sum(E_hat, linalg.zeros(1, RANK)[0]) * HALF)
    return {"u": u, "u0": u0, "E": E, "E_hat": E_hat, "B_Z": B_Z}


def mukai_generators():
    v = model_vectors()
    rows = [v["u"], v["u0"]]
    for n, (j, k) in enumerate(WEDGE_PAIRS):
        P = plane_P(j, k)
        for l in F2_4:
            row = linalg.zeros(1, RANK)[0]
            row[1 + n] = Fraction(1, 2)
            for a in P:
                row = row + v["E_hat"][_f2_index(_f2_add(a, l))] * HALF
            rows.append(_vec(row))
    rows.extend(v["E_hat"])
    return linalg.as_matrix([list(r) for r in rows])


@lru_cache(maxsize=1)
def build_mukai_model():
    gens = mukai_generators()
    basis = linalg.rational_hnf(gens)
    G_amb = ambient_gram()
    gram = linalg.normalize_matrix(basis.dot(G_amb).dot(basis.T))
    if basis.shape[0] != RANK:
        raise ConstructionInvariantViolated("rank", f"generated rank {basis.shape[0]}")
    if not linalg.is_integral(gram):
        raise ConstructionInvariantViolated("integrality", "Gram not integral")
    L = IntegerLattice(gram, label="Z^{4,20}")
    if not L.is_even:
        raise ConstructionInvariantViolated("even")
    if abs(determinant(L)) != 1:
        raise ConstructionInvariantViolated("unimodular", f"det {determinant(L)}")
    if signature(L) != (4, 20):
        raise ConstructionInvariantViolated("signature", str(signature(L)))
    named = model_vectors()
    return KummerModel(G_amb, gens, basis, L, named)


def khat_discriminant_order(model=None):
    """|K^*/K| for K^ = saturation of pi_* H^even(T, Z) in the model."""
    model = model or build_mukai_model()
    rows = linalg.as_matrix([_unit(i) for i in range(8)])
    sat = primitive_closure(model.sublattice(rows))
    return abs(determinant(sat.lattice()))


# ---------------------------------------------------------------------------
# orbifold map and induced four-planes


@dataclass(frozen=True)
class FourPlane:
    vectors: np.ndarray  # 4 x 24: Omega1', Omega2', Re mho', Im mho'

    def gram(self, model):
        return model.ambient_gram_of(self.vectors)


def orbifold_map(g, model=None):
    """Return (B, omega_X, V) in model coordinates for torus data g."""
    model = model or build_mukai_model()
    B = _vec(model.pi_star(g.b_field) * HALF + model.named["B_Z"] * HALF)
    omega_X = model.pi_star(g.kahler)
    return B, omega_X, g.volume * HALF


def induced_four_plane(g, model=None, b_override=None):
    """pi_* Omega ⊥ pi_* mho as four rational vectors in model coordinates."""
    model = model or build_mukai_model()
    B, w, V = orbifold_map(g, model)
    if b_override is not None:
        B = _vec(b_override)
    u, u0 = model.named["u"], model.named["u0"]
    BB = model.ambient_pair(B, B)
    re = _vec(u0 + B + (V - BB * HALF) * u)
    im = _vec(w - model.ambient_pair(B, w) * u)
    rows = linalg.as_matrix([list(model.pi_star(g.omega1)), list(model.pi_star(g.omega2)),
                             list(re), list(im)])
    if not is_positive_definite(model.ambient_gram_of(rows)):
        raise NotPositivePlane("induced four-plane is not positive definite")
    return FourPlane(rows)


def explicit_complement_basis(g, model=None):
    """The 20 rational vectors spanning x^⊥ listed for the root-freeness argument."""
    model = model or build_mukai_model()
    B, w, V = orbifold_map(g, model)
    u, u0 = model.named["u"], model.named["u0"]
    rows = [list(_vec(e + u * HALF)) for e in model.named["E_hat"]]
    for eta in torus_orthogonal_frame(g):
        pe = model.pi_star(eta)
        rows.append(list(_vec(pe - model.ambient_pair(pe, B) * u)))
    BB = model.ambient_pair(B, B)
    rows.append(list(_vec(u0 + B - (V + BB * HALF) * u)))
    return linalg.as_matrix(rows)


def torus_orthogonal_frame(g):
    """Orthogonal rational basis of span(omega, Omega)^⊥ in H^2(T) ⊗ Q."""
    A = linalg.as_matrix([list(g.kahler), list(g.omega1), list(g.omega2)]).dot(TORUS.h2_gram)
    K = linalg.integer_kernel(A)
    frame = []
    for row in K:
        v = linalg.as_vector(row)
        for f in frame:
            v = v - Fraction(TORUS.pair(v, f)) / TORUS.pair(f, f) * f
        frame.append(linalg.normalize_matrix(v.reshape(1, -1))[0])
    return frame


# ---------------------------------------------------------------------------
# random rational torus data


def _reflect(x, r):
    rr = TORUS.pair(r, r)
    return x - Fraction(2 * TORUS.pair(x, r), rr) * r


def sample_geometric_interpretation(rng, reflections=3):
    """Rational torus data from a random rational isometry of an explicit frame.

    ``rng`` is a ``numpy.random.Generator``.
    """
    e = [linalg.as_vector(_unit(i)[:6]) for i in range(6)]
    pos = [e[0] + e[5], e[1] - e[4], e[2] + e[3]]
    neg = [e[0] - e[5], e[1] + e[4], e[2] - e[3]]
    refl = []
    while len(refl) < reflections:
        r = linalg.as_vector([int(x) for x in rng.integers(-3, 4, size=6)])
        if TORUS.pair(r, r) != 0:
            refl.append(r)

    def iso(v):
        for r in refl:
            v = _reflect(v, r)
        return linalg.normalize_matrix(v.reshape(1, -1))[0]

    def small_frac():
        return Fraction(int(rng.integers(-4, 5)), int(rng.integers(1, 5)))

    a = int(rng.integers(2, 5))
    bs = [int(x) for x in rng.integers(-1, 2, size=3)]
    while a * a <= sum(b * b for b in bs):
        a += 1
    kahler = iso(a * pos[2] + sum((b * n for b, n in zip(bs, neg)), 0 * pos[0]))
    kahler = kahler * Fraction(int(rng.integers(1, 4)), int(rng.integers(1, 3)))
    b_field = iso(small_frac() * pos[2] + sum((small_frac() * n for n in neg), 0 * pos[0]))
    volume = Fraction(int(rng.integers(1, 9)), int(rng.integers(1, 5)))
    g = GeometricInterpretation(tuple(iso(pos[0])), tuple(iso(pos[1])), tuple(b_field),
                                tuple(kahler), volume)
    return g.validate()


def standard_geometric_interpretation():
    """A fixed square-torus sample with zero B-field."""
    return GeometricInterpretation((1, 0, 0, 0, 0, 1), (0, 1, 0, 0, -1, 0),
                                   (0, 0, 0, 0, 0, 0), (0, 0, 1, 1, 0, 0), Fraction(1))


# ---------------------------------------------------------------------------
# transcendental and twisted lattices


def transcendental_lattice(L, omega_rows, extra_rows=None):
    """(NS, T) for a rational period plane given in coordinates of L.

    NS = L ∩ Omega^⊥ (optionally also ⊥ extra_rows), T = NS^⊥.
    """
    rows = linalg.as_matrix(linalg.to_lists(omega_rows))
    if rows.shape[0] != 2 or not is_positive_definite(L.gram_of(rows)):
        raise NotPositivePlane("period plane is not positive definite")
    S = rows if extra_rows is None else np.vstack([rows, linalg.as_matrix(linalg.to_lists(extra_rows))])
    NS = orthogonal_complement(Sublattice(L, S))
    T = orthogonal_complement(NS)
    return NS, T


@dataclass(frozen=True, eq=False)
class TwistedLattice:
    transcendental: Sublattice
    bfield: np.ndarray
    order: int
    kernel: Sublattice
    index: int


def twisted_kernel(T, B, n):
    """ker{ T -> Q/Z, t -> <t, B> }; B in the ambient coordinates of T."""
    if n <= 0:
        raise ValueError("order must be positive")
    B = linalg.as_vector(B)
    vals = [Fraction(T.ambient.pair(t, B)) for t in T.basis]
    if any((n * v).denominator != 1 for v in vals):
        raise NotRationalBField(f"{n} * B is not integral on T")
    b = [int(n * v) for v in vals]
    A = linalg.as_matrix([b + [n]])
    K = linalg.integer_kernel(A)
    coeff = linalg.hnf(linalg.as_matrix([list(row[:-1]) for row in K]))
    basis = linalg.normalize_matrix(coeff.dot(T.basis))
    kernel = Sublattice(T.ambient, linalg.rational_hnf(basis))
    index = abs(linalg.determinant(coeff))
    return TwistedLattice(T, B, n, kernel, index)


def generalized_cy(pair, B, omega1, omega2, unit4):
    """(Re phi, Im phi) of phi = exp(B) Omega = Omega + <B, Omega> * unit4."""
    re = _vec(linalg.as_vector(omega1) + pair(B, omega1) * linalg.as_vector(unit4))
    im = _vec(linalg.as_vector(omega2) + pair(B, omega2) * linalg.as_vector(unit4))
    return re, im


def generalized_transcendental(L, re_phi, im_phi):
    """Minimal primitive sublattice of L whose complexification contains phi."""
    return primitive_closure(Sublattice(L, linalg.as_matrix([list(re_phi), list(im_phi)])))


@dataclass
class TwistedIsometryReport:
    image_in_target: bool
    gram_doubled: bool
    image_is_primitive_closure: bool
    torus_rank: int
    kummer_rank: int
    torus_gram: list
    kummer_gram: list

    @property
    def passed(self):
        return self.image_in_target and self.gram_doubled and self.image_is_primitive_closure


def torus_twisted_transcendental(g, B_A):
    """T(A, B_A) inside H^even(T) (intersection convention, 8 coordinates)."""
    TL = TORUS.heven_lattice(mukai=False)
    v = [0] * 7 + [1]
    pair8 = lambda a, b: TL.pair(a, b)
    om1 = [0, *g.omega1, 0]
    om2 = [0, *g.omega2, 0]
    B8 = [0, *B_A, 0]
    re, im = generalized_cy(pair8, B8, om1, om2, v)
    return generalized_transcendental(TL, re, im)


def verify_twisted_isometry(g, B_A, model=None, b_override=None):
    """Compare pi_* T(A, B_A) with T(X, B) for B from the orbifold map."""
    model = model or build_mukai_model()
    B_A = tuple(linalg._exact(x) for x in B_A)
    TA = torus_twisted_transcendental(g, B_A)
    if b_override is None:
        B = _vec(model.pi_star(B_A) * HALF + model.named["B_Z"] * HALF)
    else:
        B = _vec(b_override)
    om1, om2 = model.pi_star(g.omega1), model.pi_star(g.omega2)
    re, im = generalized_cy(model.ambient_pair, B, om1, om2, model.named["u"])
    TX = generalized_transcendental(model.lattice, *model.to_lattice_coords(
        linalg.as_matrix([list(re), list(im)])))
    image_amb = linalg.as_matrix([list(model.pi_star(row)) for row in TA.basis])
    image = model.to_lattice_coords(image_amb)
    integral = linalg.is_integral(image)
    in_target = integral and all(TX.contains(row) for row in image)
    gram_TA = TA.gram()
    gram_img = model.ambient_gram_of(image_amb)
    doubled = bool((gram_img == gram_TA * 2).all())
    equal = integral and Sublattice(model.lattice, image) == TX
    return TwistedIsometryReport(in_target, doubled, bool(equal), TA.rank, TX.rank,
                         gram_TA.tolist(), TX.gram().tolist())
