"""Integral lattices given by Gram matrices, and the operations on them.

Vectors of a lattice ``L`` are written in coordinates with respect to the
basis of ``L`` that the Gram matrix refers to, so ``L`` itself is ``Z^n``
and the dual lattice is ``gram^{-1} Z^n``.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import linalg
from .errors import DegenerateForm, IncompatibleGlue, NotIsomorphism, NotSymmetric


@dataclass(frozen=True, eq=False)
class IntegerLattice:
    gram: np.ndarray
    label: Optional[str] = None
    allow_degenerate: bool = False

    def __post_init__(self):
        g = linalg.as_matrix(linalg.to_lists(self.gram)) if len(self.gram) else linalg.zeros(0, 0)
        if g.shape[0] != g.shape[1]:
            raise ValueError("Gram matrix must be square")
        if not linalg.is_integral(g):
            raise ValueError("Gram matrix must be integral")
        g = linalg.normalize_matrix(g)
        if not all(g[i, j] == g[j, i] for i in range(len(g)) for j in range(i)):
            bad = next((i, j) for i in range(len(g)) for j in range(i) if g[i, j] != g[j, i])
            raise NotSymmetric(bad)
        g.setflags(write=False)
        object.__setattr__(self, "gram", g)
        if not self.allow_degenerate and self.rank and linalg.determinant(g) == 0:
            raise DegenerateForm(f"degenerate Gram matrix ({self.label or 'unnamed'})")

    @property
    def rank(self):
        return self.gram.shape[0]

    @property
    def is_even(self):
        return all(self.gram[i, i] % 2 == 0 for i in range(self.rank))

    def pair(self, x, y):
        """Bilinear form on coordinate vectors (exact)."""
        return linalg._normalize(sum(
            (xi * gij * yj for xi, row in zip(x, self.gram) for gij, yj in zip(row, y)),
            0,
        ))

    def norm(self, x):
        return self.pair(x, x)

    def gram_of(self, rows):
        rows = np.asarray(rows, dtype=object)
        if rows.shape[0] == 0:
            return linalg.zeros(0, 0)
        return linalg.normalize_matrix(rows.dot(self.gram).dot(rows.T))

    def scaled(self, k, label=None):
        return IntegerLattice(self.gram * k, label=label)

    def __eq__(self, other):
        return (
            isinstance(other, IntegerLattice)
            and self.gram.shape == other.gram.shape
            and bool((self.gram == other.gram).all())
        )

    def __hash__(self):
        return hash(tuple(map(tuple, self.gram.tolist())))

    def __repr__(self):
        return f"IntegerLattice(rank={self.rank}, label={self.label!r})"


def direct_sum(*lattices, label=None):
    n = sum(L.rank for L in lattices)
    g = linalg.zeros(n, n)
    k = 0
    for L in lattices:
        g[k:k + L.rank, k:k + L.rank] = L.gram
        k += L.rank
    return IntegerLattice(g, label=label)


def hyperbolic_plane(scale=1, label="U"):
    return IntegerLattice([[0, scale], [scale, 0]], label=label)


@dataclass(frozen=True, eq=False)
class Sublattice:
    """Rows of ``basis`` (rational, ambient coordinates) span the sublattice."""

    ambient: IntegerLattice
    basis: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=object)
        if b.size == 0:
            b = np.empty((0, self.ambient.rank), dtype=object)
        else:
            b = linalg.normalize_matrix(linalg.as_matrix(linalg.to_lists(b)))
        if b.shape[1] != self.ambient.rank:
            raise ValueError("basis width does not match ambient rank")
        if b.shape[0] and linalg.rank(b) != b.shape[0]:
            raise ValueError("sublattice basis rows are dependent")
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @property
    def rank(self):
        return self.basis.shape[0]

    @property
    def integral(self):
        return linalg.is_integral(self.basis)

    def gram(self):
        return self.ambient.gram_of(self.basis)

    def lattice(self, label=None, allow_degenerate=False):
        g = self.gram()
        return IntegerLattice(g, label=label, allow_degenerate=allow_degenerate)

    def canonical(self):
        return Sublattice(self.ambient, linalg.rational_hnf(self.basis))

    def contains(self, v):
        try:
            x = linalg.solve_left(self.basis, v)
        except ValueError:
            return False
        return linalg.is_integral(x)

    def contains_sublattice(self, other):
        return all(self.contains(row) for row in other.basis)

    def index_in(self, other):
        """Index [other : self], assuming self is a finite-index sublattice of other."""
        coords = linalg.as_matrix([linalg.solve_left(other.basis, row) for row in self.basis])
        if not linalg.is_integral(coords):
            raise ValueError("not a sublattice")
        return abs(linalg.determinant(coords))

    def __eq__(self, other):
        if not isinstance(other, Sublattice) or self.rank != other.rank:
            return False
        a, b = self.canonical().basis, other.canonical().basis
        return a.shape == b.shape and bool((a == b).all())

    def __hash__(self):
        return hash(tuple(map(tuple, self.canonical().basis.tolist())))


# ---------------------------------------------------------------------------
# invariants


def determinant(L):
    return linalg.determinant(L.gram)


def signature(L):
    """Exact (p, q) by symmetric Gaussian reduction over Q."""
    A = [[Fraction(x) for x in row] for row in L.gram.tolist()]
    n = len(A)
    p = q = 0
    active = list(range(n))
    while active:
        piv = next((i for i in active if A[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in active for j in active if i < j and A[i][j] != 0), None)
            if pair is None:
                raise DegenerateForm("degenerate form: zero block left in reduction")
            i, j = pair
            # e_i -> e_i + e_j gives diagonal entry 2 A[i][j] != 0
            for k in range(n):
                A[i][k] += A[j][k]
            for k in range(n):
                A[k][i] += A[k][j]
            piv = i
        d = A[piv][piv]
        if d > 0:
            p += 1
        else:
            q += 1
        active.remove(piv)
        row = A[piv]
        for i in active:
            f = A[i][piv] / d
            if f:
                Ai = A[i]
                for k in active:
                    Ai[k] -= f * row[k]
        for i in active:
            A[i][piv] = A[piv][i] = Fraction(0)
    return p, q


def is_even_unimodular(L):
    return L.is_even and abs(determinant(L)) == 1


def dual_overlattice_quotient_order(L):
    return abs(determinant(L))


def is_positive_definite(gram):
    L = IntegerLattice(linalg.clear_denominators(gram)[1], allow_degenerate=True)
    if L.rank == 0:
        return True
    if linalg.determinant(L.gram) == 0:
        return False
    return signature(L) == (L.rank, 0)


# ---------------------------------------------------------------------------
# discriminant forms


def _mod(x, m):
    x = Fraction(x) % m
    return linalg._normalize(x)


@dataclass(frozen=True, eq=False)
class DiscriminantForm:
    lattice: IntegerLattice
    elementary_divisors: tuple
    generators: tuple  # rational coordinate vectors in L*
    q_values: tuple  # Fractions mod 2
    pairing: tuple  # matrix of Fractions mod 1
    _coord_map: np.ndarray = field(repr=False)  # y = D V^{-1} x restricted to nontrivial part

    @property
    def order(self):
        out = 1
        for d in self.elementary_divisors:
            out *= d
        return out

    def coordinates(self, x):
        """Coordinates of a dual vector x modulo the elementary divisors."""
        x = linalg.as_vector(x)
        if not linalg.is_integral(self.lattice.gram.dot(x)):
            raise ValueError("vector is not in the dual lattice")
        y = self._coord_map.dot(x)
        if not linalg.is_integral(y):
            raise ValueError("coordinate map produced non-integer values")
        return tuple(int(v) % d for v, d in zip(y, self.elementary_divisors))

    def element(self, coords):
        """A dual-lattice representative of the class with the given coordinates."""
        v = linalg.zeros(1, self.lattice.rank)[0]
        for c, g in zip(coords, self.generators):
            v = v + c * g
        return linalg.normalize_matrix(v.reshape(1, -1))[0]

    def q(self, x):
        return _mod(self.lattice.norm(x), 2)

    def b(self, x, y):
        return _mod(self.lattice.pair(x, y), 1)

    def is_trivial(self):
        return not self.elementary_divisors


def discriminant_form(L):
    """Discriminant form of an even non-degenerate lattice, with SNF generators."""
    if L.rank and determinant(L) == 0:
        raise DegenerateForm("discriminant form of a degenerate lattice")
    D, U, V, Vinv = linalg.smith_normal_form(L.gram)
    n = L.rank
    keep = [i for i in range(n) if D[i, i] != 1]
    divisors = tuple(int(D[i, i]) for i in keep)
    gens = []
    for i in keep:
        g = linalg.normalize_matrix((V[:, i] * Fraction(1, int(D[i, i]))).reshape(1, -1))[0]
        g.setflags(write=False)
        gens.append(g)
    coord_map = linalg.as_matrix([[D[i, i] * Vinv[i, j] for j in range(n)] for i in keep], ncols=n)
    q_values = tuple(_mod(L.norm(g), 2) for g in gens)
    pairing = tuple(tuple(_mod(L.pair(g, h), 1) for h in gens) for g in gens)
    return DiscriminantForm(L, divisors, tuple(gens), q_values, pairing, coord_map)


@dataclass(frozen=True, eq=False)
class GlueMap:
    domain: DiscriminantForm
    codomain: DiscriminantForm
    matrix: np.ndarray  # row i = codomain coordinates of gamma(domain generator i)

    def image(self, coords):
        out = [0] * len(self.codomain.elementary_divisors)
        for c, row in zip(coords, self.matrix):
            out = [o + c * int(r) for o, r in zip(out, row)]
        return tuple(o % d for o, d in zip(out, self.codomain.elementary_divisors))

    def check(self):
        """Raise if not an isomorphism or if q_domain != -q_codomain o gamma."""
        dom, cod = self.domain, self.codomain
        if dom.order != cod.order:
            raise NotIsomorphism(f"group orders differ: {dom.order} vs {cod.order}")
        imgs = [cod.element(self.image(e)) for e in _unit_coords(dom)]
        # injectivity on generators' span: the image subgroup must have full order
        if _subgroup_order(cod, [self.image(e) for e in _unit_coords(dom)]) != cod.order:
            raise NotIsomorphism("glue matrix is not invertible modulo the divisors")
        for i, g in enumerate(dom.generators):
            if _mod(dom.q(g) + cod.q(imgs[i]), 2) != 0:
                raise IncompatibleGlue(f"q-condition fails on generator {i}")
            for j in range(i + 1, len(dom.generators)):
                if _mod(dom.b(g, dom.generators[j]) + cod.b(imgs[i], imgs[j]), 1) != 0:
                    raise IncompatibleGlue(f"bilinear condition fails on pair ({i}, {j})")
        # every order of a domain generator must be killed in the image
        for e, d in zip(_unit_coords(dom), dom.elementary_divisors):
            if any(x != 0 for x in self.image([d * c for c in e])):
                raise NotIsomorphism("glue map is not a homomorphism")
        return True


def _unit_coords(D):
    k = len(D.elementary_divisors)
    return [tuple(int(i == j) for j in range(k)) for i in range(k)]


def _subgroup_order(D, gens):
    """Order of the subgroup of prod Z/d_i generated by the given coordinate tuples."""
    k = len(D.elementary_divisors)
    if k == 0:
        return 1
    rows = [list(g) for g in gens]
    rows += [[D.elementary_divisors[i] if i == j else 0 for j in range(k)] for i in range(k)]
    H = linalg.hnf(rows)
    order = 1
    for i in range(H.shape[0]):
        order *= int(next(x for x in H[i] if x != 0))
    return D.order // order


def glue(Lam, V, gamma, label=None):
    """Overlattice of Lam (+) V obtained from an anti-isometry of discriminant forms.

    Returns ``(Gamma, basis)`` where ``basis`` rows express the glued lattice in
    the rational coordinates of Lam (+) V (Hermite-reduced).
    """
    if gamma.domain.lattice != Lam or gamma.codomain.lattice != V:
        raise ValueError("glue map does not match the lattices")
    gamma.check()
    n, m = Lam.rank, V.rank
    rows = [[int(i == j) for j in range(n + m)] for i in range(n + m)]
    for e, g in zip(_unit_coords(gamma.domain), gamma.domain.generators):
        h = gamma.codomain.element(gamma.image(e))
        rows.append(list(g) + list(h))
    basis = linalg.rational_hnf(linalg.as_matrix(rows))
    total = direct_sum(Lam, V)
    G = total.gram_of(basis)
    if not linalg.is_integral(G):
        raise IncompatibleGlue("glued lattice is not integral")
    Gamma = IntegerLattice(G, label=label)
    if not Gamma.is_even:
        raise IncompatibleGlue("glued lattice is not even")
    return Gamma, basis


def glue_map_from_images(domain, codomain, images):
    """Build a GlueMap from dual-lattice images of the domain generators."""
    mat = linalg.as_matrix([list(codomain.coordinates(h)) for h in images],
                           ncols=len(codomain.elementary_divisors))
    return GlueMap(domain, codomain, mat)


# ---------------------------------------------------------------------------
# saturation and complements


def primitive_closure(S):
    """Saturation ``ambient ∩ (S ⊗ Q)`` in HNF."""
    n = S.ambient.rank
    if S.rank == 0:
        return Sublattice(S.ambient, np.empty((0, n), dtype=object))
    _, M = linalg.clear_denominators(S.basis)
    N = linalg.integer_kernel(M)  # rows n with S n = 0
    if N.shape[0] == 0:
        return Sublattice(S.ambient, linalg.identity(n))
    return Sublattice(S.ambient, linalg.integer_kernel(N))


def orthogonal_complement(S):
    """``{v in ambient : <v, s> = 0 for all s in S}`` in HNF."""
    n = S.ambient.rank
    if S.rank == 0:
        return Sublattice(S.ambient, linalg.identity(n))
    A = np.asarray(S.basis, dtype=object).dot(S.ambient.gram)
    K = linalg.integer_kernel(A)
    return Sublattice(S.ambient, K)


def sublattice_of(L, rows):
    return Sublattice(L, linalg.as_matrix(linalg.to_lists(rows), ncols=L.rank))
