"""Numerical layer of stability conditions on K3 and Abelian surfaces.

Everything lives in the numerical lattice N(X) = H^0 + NS(X) + H^4 with the
Mukai pairing  <(r,c,s),(r',c',s')> = -r s' + c.c' - s r'.  Mukai vectors are
coordinate tuples ``(r, c_1, ..., c_rho, s)`` in an NS basis.

Charges are exact rational pairs (Re, Im); no angle is ever stored as a float
except in the purely diagnostic ``approx`` helpers.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import linalg, poly
from .enumeration import (EnumerationRequest, fincke_pohst, lll_gram, short_vectors)
from .errors import (DegeneratePath, DimensionMismatch, NotDefinite, NotRational,
                     PathHitsWall)
from .lattice import IntegerLattice, Sublattice, orthogonal_complement, signature

HALF = Fraction(1, 2)


def _exact_tuple(values):
    out = []
    for x in values:
        if isinstance(x, float):
            raise NotRational(f"float value {x!r} where an exact rational is required")
        out.append(linalg._exact(x))
    return tuple(out)


# ---------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class MukaiVector:
    r: Fraction
    c1: tuple
    s: Fraction

    def __post_init__(self):
        object.__setattr__(self, "r", linalg._exact(self.r))
        object.__setattr__(self, "s", linalg._exact(self.s))
        object.__setattr__(self, "c1", _exact_tuple(self.c1))

    @classmethod
    def of(cls, v):
        if isinstance(v, MukaiVector):
            return v
        v = list(v)
        if len(v) < 2:
            raise DimensionMismatch("a Mukai vector needs at least r and s")
        return cls(v[0], tuple(v[1:-1]), v[-1])

    def as_tuple(self):
        return (self.r, *self.c1, self.s)

    @property
    def denominator(self):
        """Common denominator; 1 for ordinary (untwisted) classes."""
        return math.lcm(*(Fraction(x).denominator for x in self.as_tuple()))

    def __add__(self, other):
        other = MukaiVector.of(other)
        if len(other.c1) != len(self.c1):
            raise DimensionMismatch("NS ranks differ")
        return MukaiVector(self.r + other.r, tuple(a + b for a, b in zip(self.c1, other.c1)),
                           self.s + other.s)

    def scaled(self, k):
        return MukaiVector(k * self.r, tuple(k * x for x in self.c1), k * self.s)

    def __str__(self):
        return ",".join(str(x) for x in self.as_tuple())


SKYSCRAPER_S = 1  # v(O_p) = (0, 0, 1)


@dataclass(frozen=True)
class StabVector:
    """Complexified vector re + i im of N(X) ⊗ Q, both as Mukai coordinate tuples."""

    re: tuple
    im: tuple

    def __post_init__(self):
        object.__setattr__(self, "re", _exact_tuple(self.re))
        object.__setattr__(self, "im", _exact_tuple(self.im))
        if len(self.re) != len(self.im):
            raise DimensionMismatch("re and im have different lengths")

    def conjugate(self):
        return StabVector(self.re, tuple(-x for x in self.im))

    def quarter_turn(self, k=1):
        """Multiply by exp(-i pi k / 2)."""
        re, im = self.re, self.im
        for _ in range(k % 4):
            re, im = im, tuple(-x for x in re)
        return StabVector(re, im)


@dataclass(frozen=True)
class ChamberPoint:
    B: tuple
    omega: tuple

    def __post_init__(self):
        object.__setattr__(self, "B", _exact_tuple(self.B))
        object.__setattr__(self, "omega", _exact_tuple(self.omega))
        if len(self.B) != len(self.omega):
            raise DimensionMismatch("B and omega have different lengths")


@dataclass(frozen=True, eq=False)
class NumericalLattice:
    """NS(X) with the intersection form plus the data needed for membership tests.

    ``reference`` is an ample-side class used to pick the component P^+;
    ``spherical`` is False on Abelian surfaces, where there are no spherical
    objects and the root conditions are vacuous.
    """

    ns: IntegerLattice
    reference: tuple
    spherical: bool = True
    label: str = ""
    model: object = None
    ns_ambient: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        ref = _exact_tuple(self.reference)
        if len(ref) != self.ns.rank:
            raise DimensionMismatch("reference class has the wrong length")
        object.__setattr__(self, "reference", ref)

    @property
    def rho(self):
        return self.ns.rank

    @property
    def dim(self):
        return self.rho + 2

    def ns_pair(self, a, b):
        if len(a) != self.rho or len(b) != self.rho:
            raise DimensionMismatch(f"expected NS vectors of length {self.rho}")
        return linalg._normalize(linalg.as_vector(a).dot(self.ns.gram).dot(linalg.as_vector(b)))

    def mukai_gram(self):
        n = self.dim
        G = linalg.zeros(n, n)
        G[1:n - 1, 1:n - 1] = self.ns.gram
        G[0, n - 1] = G[n - 1, 0] = -1
        return G

    def check_vector(self, v):
        v = tuple(v)
        if len(v) != self.dim:
            raise DimensionMismatch(f"expected Mukai vectors of length {self.dim}, got {len(v)}")
        return v

    # -- Kummer/K3 embedding -------------------------------------------------

    @classmethod
    def from_kummer(cls, model, g):
        """N(X) for the Kummer surface of torus data g, inside the Mukai model.

        NS(X) is the part of the model orthogonal to the period plane and to the
        hyperbolic pair (u, u0).  The reference class is the orbifold Kaehler
        class pi_* omega_T.
        """
        named = model.named
        rows = linalg.as_matrix([list(named["u"]), list(named["u0"]),
                                 list(model.pi_star(g.omega1)), list(model.pi_star(g.omega2))])
        comp = orthogonal_complement(model.sublattice(rows))
        ns_amb = model.to_ambient(comp.basis)
        N = cls(IntegerLattice(comp.gram(), label="NS(X)"), (0,) * comp.rank, True, "Km",
                model, ns_amb)
        ref = N.ns_coords(model.pi_star(g.kahler))
        object.__setattr__(N, "reference", _exact_tuple(ref))
        return N

    def ns_coords(self, ambient_vec):
        """Coordinates of an ambient class of NS(X) ⊗ Q in the NS basis."""
        return tuple(linalg.solve_left(self.ns_ambient, linalg.as_vector(ambient_vec)))

    def ns_projection(self, ambient_vec):
        """Orthogonal projection of an ambient class onto NS(X) ⊗ Q (NS coordinates)."""
        G = self.ns.gram
        rhs = linalg.as_vector([self.model.ambient_pair(ambient_vec, b) for b in self.ns_ambient])
        return tuple(linalg.normalize_matrix(linalg.inverse(G).dot(rhs).reshape(1, -1))[0])

    def to_ambient(self, v):
        """(r, c, s) -> r u0 + c - s u in model coordinates."""
        v = self.check_vector(v)
        named = self.model.named
        out = named["u0"] * v[0] - named["u"] * v[-1]
        if self.rho:
            out = out + linalg.as_vector(v[1:-1]).dot(self.ns_ambient)
        return linalg.normalize_matrix(out.reshape(1, -1))[0]


def hyperbolic_ns(reference=(1, 1), spherical=True, label="U"):
    """NS = U (e.f = 1): the smallest hyperbolic NS with rational classes of any
    positive square 2ab."""
    return NumericalLattice(IntegerLattice([[0, 1], [1, 0]], label=label), reference, spherical,
                            label)


def cyclic_ns(degree=2, spherical=True):
    """NS = Z h with h^2 = degree."""
    return NumericalLattice(IntegerLattice([[degree]], label=f"<{degree}>"), (1,), spherical,
                            f"<{degree}>")


# ---------------------------------------------------------------------------
# pairing, exp, charges


def mukai_pairing(a, b, ns_gram):
    """-r s' + c.c' - s r' for Mukai vectors in NS coordinates."""
    a = MukaiVector.of(a)
    b = MukaiVector.of(b)
    G = linalg.as_matrix(linalg.to_lists(ns_gram)) if not isinstance(ns_gram, IntegerLattice) \
        else ns_gram.gram
    rho = G.shape[0] if G.size else 0
    if len(a.c1) != rho or len(b.c1) != rho:
        raise DimensionMismatch(f"NS rank {rho} but vectors have {len(a.c1)} and {len(b.c1)}")
    cc = linalg.as_vector(a.c1).dot(G).dot(linalg.as_vector(b.c1)) if rho else 0
    return linalg._normalize(-a.r * b.s + cc - a.s * b.r)


def _pair(N, a, b):
    return mukai_pairing(a, b, N.ns)


def exp_vector(p, N):
    """exp(B + i omega) = (1, B, (B^2 - omega^2)/2) + i (0, omega, B.omega)."""
    B, w = p.B, p.omega
    if len(B) != N.rho:
        raise DimensionMismatch(f"chamber point has length {len(B)}, NS rank {N.rho}")
    BB = N.ns_pair(B, B)
    ww = N.ns_pair(w, w)
    Bw = N.ns_pair(B, w)
    return StabVector((1, *B, (BB - ww) * HALF), (0, *w, Bw))


def charge_of(w, v, N):
    """<w, v> for a StabVector w, as an exact (Re, Im) pair."""
    v = MukaiVector.of(v).as_tuple()
    return _pair(N, w.re, v), _pair(N, w.im, v)


def central_charge(p, v, N):
    return charge_of(exp_vector(p, N), v, N)


def phase_alignment(p, v, w, N):
    """Im(Z(v) conj Z(w)); zero exactly when the two charges are real-proportional."""
    rv, iv = central_charge(p, v, N)
    rw, iw = central_charge(p, w, N)
    return iv * rw - rv * iw


# ---------------------------------------------------------------------------
# bounded scan of Delta^+


@dataclass
class ScanResult:
    deltas: list          # [(MukaiVector, (Re Z, Im Z))], sorted
    complete: bool
    r_bound: int
    r_max: Optional[int]


def _hodge_index_ok(N, p):
    return signature(N.ns) == (1, N.rho - 1) and N.ns_pair(p.omega, p.omega) > 0


def bounded_delta_plus_scan(N, p, r_max=None):
    """(-2)-classes delta with r > 0 whose charge is real and <= 0.

    With y = c - rB orthogonal to omega one has Im Z = 0 and
    Re Z = (-y^2 - 2 + r^2 omega^2) / (2r); since y^2 <= 0 on omega^⊥ (Hodge index),
    a violation needs r^2 omega^2 <= 2, and for each such r the admissible c lie
    in a bounded ellipsoid.  The scan is therefore complete for r <= r_bound.
    """
    ww = N.ns_pair(p.omega, p.omega)
    if ww <= 0:
        raise NotDefinite("omega^2 must be positive")
    if not _hodge_index_ok(N, p):
        raise NotDefinite(f"NS signature {signature(N.ns)} is not hyperbolic")
    r_bound = math.isqrt(int(Fraction(2) / ww)) if ww <= 2 else 0
    while (r_bound + 1) ** 2 * ww <= 2:
        r_bound += 1
    while r_bound and r_bound ** 2 * ww > 2:
        r_bound -= 1
    top = r_bound if r_max is None else min(r_bound, r_max)
    complete = r_max is None or r_max >= r_bound
    B = p.B
    G = N.ns.gram
    a = linalg.as_vector(p.omega).dot(G)  # linear form c -> omega.c
    den = linalg.common_denominator(a.reshape(1, -1))
    a_int = [int(x * den) for x in a]
    Bw = N.ns_pair(B, p.omega)
    found = []
    for r in range(1, top + 1):
        found.extend(_scan_rank(N, p, r, a_int, den, Bw, ww))
    found.sort(key=lambda item: item[0].as_tuple())
    return ScanResult(found, complete, r_bound, r_max)


def _scan_rank(N, p, r, a_int, den, Bw, ww):
    rho = N.rho
    target = Fraction(r * Bw * den)
    if target.denominator != 1:
        return []
    g = linalg.vec_gcd(a_int)
    if g == 0 or int(target) % g:
        return []
    H, U, _ = linalg.hnf_with_transform(linalg.as_matrix([[x] for x in a_int]))
    # U @ a^T = (+-g, 0, ..., 0)^T
    sgn = 1 if H[0, 0] > 0 else -1
    c0 = U[0] * (sgn * int(target) // g)
    W = U[1:]
    B = linalg.as_vector(p.B)
    u = linalg.as_vector(c0) - B * r
    bound = 2 - r * r * ww
    if bound < 0:
        return []
    cands = []
    if rho == 1:
        if all(x == 0 for x in u):
            cands.append(c0)
    else:
        t = linalg.solve_left(W, u)  # u = t W
        gramW = linalg.normalize_matrix(-(W.dot(N.ns.gram).dot(W.T)))
        for m in close_vectors(gramW, [-x for x in t], bound):
            cands.append(c0 + linalg.as_vector(m).dot(W))
    out = []
    for c in cands:
        c = tuple(linalg._normalize(x) for x in c)
        cc = N.ns_pair(c, c)
        s = Fraction(cc + 2, 2 * r)
        if s.denominator != 1:
            continue
        delta = MukaiVector(r, c, s)
        z = central_charge(p, delta, N)
        assert mukai_pairing(delta, delta, N.ns) == -2
        if z[1] == 0 and z[0] <= 0:
            out.append((delta, z))
    return out


def close_vectors(gram, center, bound):
    """Integer m with Q(m - center) <= bound for a positive definite integral Q."""
    H, G = lll_gram(gram)
    Hinv = linalg.inverse(H)
    c = linalg.as_vector(center).dot(Hinv)
    res = fincke_pohst(G, bound, center=list(c))
    return [tuple(linalg.as_vector(x).dot(H)) for x, _ in res]


# ---------------------------------------------------------------------------
# membership


@dataclass
class Membership:
    in_P: bool
    in_P_plus: bool
    in_P_plus_0: bool
    in_Q: bool
    in_L: bool
    witness: dict = field(default_factory=dict)
    complete: bool = True
    notes: list = field(default_factory=list)

    def flags(self):
        return {k: getattr(self, k) for k in ("in_P", "in_P_plus", "in_P_plus_0", "in_Q", "in_L")}


def _gram2(N, w):
    return [[_pair(N, w.re, w.re), _pair(N, w.re, w.im)],
            [_pair(N, w.im, w.re), _pair(N, w.im, w.im)]]


def orientation(N, w):
    """Sign of det <frame(w), frame(exp(i omega_0))>; +1 on P^+."""
    ref = exp_vector(ChamberPoint((0,) * N.rho, N.reference), N)
    M = [[_pair(N, a, b) for b in (ref.re, ref.im)] for a in (w.re, w.im)]
    d = M[0][0] * M[1][1] - M[0][1] * M[1][0]
    return (d > 0) - (d < 0)


def roots_orthogonal_to(N, w, cap=None):
    """All (-2)-classes of N(X) orthogonal to re and im (up to sign)."""
    L = IntegerLattice(N.mukai_gram(), label="N(X)")
    rows = linalg.as_matrix([list(w.re), list(w.im)])
    comp = orthogonal_complement(Sublattice(L, rows))
    if comp.rank == 0:
        return []
    cg = comp.gram()
    if signature(IntegerLattice(cg)) != (0, comp.rank):
        raise NotDefinite("complement of the plane is not negative definite")
    vecs = short_vectors(EnumerationRequest(IntegerLattice(cg), 2, negate=True, cap=cap))
    return [MukaiVector.of(linalg.normalize_matrix(
        linalg.as_vector(v).dot(comp.basis).reshape(1, -1))[0]) for v in vecs]


def ns_roots_orthogonal_to(N, omega):
    """(-2)-classes of NS(X) orthogonal to omega (these sit on walls of the ample cone)."""
    comp = orthogonal_complement(Sublattice(N.ns, linalg.as_matrix([list(omega)])))
    if comp.rank == 0:
        return []
    vecs = short_vectors(EnumerationRequest(IntegerLattice(comp.gram()), 2, negate=True))
    return [tuple(linalg.normalize_matrix(linalg.as_vector(v).dot(comp.basis).reshape(1, -1))[0])
            for v in vecs]


def membership(N, w, r_max=None):
    """Flags for P, P^+, P^+_0, Q and L with witnesses.

    ``in_L`` additionally asks that omega lie in the positive cone component of
    the reference class and on no (-2)-wall of NS(X); which Weyl chamber is the
    ample one is not decidable from lattice data alone.
    """
    if not isinstance(w, StabVector):
        w = StabVector(*w)
    N.check_vector(w.re)
    N.check_vector(w.im)
    m = Membership(False, False, False, False, False)
    g = _gram2(N, w)
    m.in_P = g[0][0] > 0 and g[0][0] * g[1][1] - g[0][1] * g[1][0] > 0
    if m.in_P:
        m.in_P_plus = orientation(N, w) > 0
    if m.in_P_plus:
        if N.spherical:
            roots = roots_orthogonal_to(N, w)
            m.in_P_plus_0 = not roots
            if roots:
                m.witness["P_plus_0"] = roots[0]
        else:
            m.in_P_plus_0 = True
    m.in_Q = (g[0][0] == g[1][1] and g[0][1] == 0 and g[0][0] + g[1][1] > 0
              and w.re[0] == 1 and w.im[0] == 0)
    if m.in_Q:
        B, omega = w.re[1:-1], w.im[1:-1]
        p = ChamberPoint(B, omega)
        ww = N.ns_pair(omega, omega)
        positive = ww > 0 and N.ns_pair(omega, N.reference) > 0 if N.rho else False
        if not positive:
            m.notes.append("omega not in the positive cone of the reference class")
        else:
            ok = True
            if N.spherical:
                walls = ns_roots_orthogonal_to(N, omega)
                if walls:
                    ok = False
                    m.witness["ample"] = MukaiVector(0, walls[0], 0)
                    m.notes.append("omega lies on a (-2)-wall of NS(X)")
                else:
                    scan = bounded_delta_plus_scan(N, p, r_max)
                    m.complete = scan.complete
                    if scan.deltas:
                        ok = False
                        m.witness["L"] = scan.deltas[0][0]
            m.in_L = ok
    return m


# ---------------------------------------------------------------------------
# sufficiency


HOLDS_BY_OMEGA_SQ = "holds_by_omega_sq"
HOLDS_BY_SCAN = "holds_by_scan"
VIOLATED = "violated"


@dataclass
class SufficiencyResult:
    status: str
    delta: Optional[MukaiVector] = None
    charge: Optional[tuple] = None
    complete: bool = True
    r_bound: Optional[int] = None


def sufficiency_check(p, N, r_max=None):
    ww = N.ns_pair(p.omega, p.omega)
    if ww <= 0:
        raise NotDefinite("omega^2 must be positive")
    if ww > 2:
        return SufficiencyResult(HOLDS_BY_OMEGA_SQ)
    scan = bounded_delta_plus_scan(N, p, r_max)
    if scan.deltas:
        # report the class with the most negative charge, ties by coordinates
        delta, z = min(scan.deltas, key=lambda item: (item[1][0], item[0].as_tuple()))
        return SufficiencyResult(VIOLATED, delta, z, scan.complete, scan.r_bound)
    return SufficiencyResult(HOLDS_BY_SCAN, None, None, scan.complete, scan.r_bound)


# ---------------------------------------------------------------------------
# paths and walls


@dataclass(frozen=True)
class PathInChamber:
    points: tuple
    lambdas: Optional[tuple] = None

    def __post_init__(self):
        pts = tuple(p if isinstance(p, ChamberPoint) else ChamberPoint(*p) for p in self.points)
        if not pts:
            raise DegeneratePath("empty path")
        object.__setattr__(self, "points", pts)
        if self.lambdas is not None:
            lam = _exact_tuple(self.lambdas)
            if len(lam) != len(pts):
                raise DimensionMismatch("one lambda per path vertex")
            object.__setattr__(self, "lambdas", lam)

    def lambda_at(self, k):
        return Fraction(0) if self.lambdas is None else self.lambdas[k]

    @property
    def segments(self):
        return max(len(self.points) - 1, 0)

    def is_loop(self):
        return (self.points[0] == self.points[-1]
                and (self.lambda_at(len(self.points) - 1) - self.lambda_at(0)) % 2 == 0)

    def __add__(self, other):
        """Concatenation; the second path must start where this one ends."""
        if self.points[-1] != other.points[0] or \
                self.lambda_at(len(self.points) - 1) != other.lambda_at(0):
            raise DegeneratePath("paths do not join")
        lam = None
        if self.lambdas is not None or other.lambdas is not None:
            lam = tuple(self.lambda_at(k) for k in range(len(self.points))) + \
                tuple(other.lambda_at(k) for k in range(1, len(other.points)))
        return PathInChamber(self.points + other.points[1:], lam)


def _seg_polys(N, p0, p1):
    """Linear interpolation data for B(t), omega(t) as quadratic pairing polynomials."""
    dB = [b - a for a, b in zip(p0.B, p1.B)]
    dw = [b - a for a, b in zip(p0.omega, p1.omega)]
    pr = N.ns_pair
    BB = poly.poly([pr(p0.B, p0.B), 2 * pr(p0.B, dB), pr(dB, dB)])
    ww = poly.poly([pr(p0.omega, p0.omega), 2 * pr(p0.omega, dw), pr(dw, dw)])
    Bw = poly.poly([pr(p0.B, p0.omega), pr(p0.B, dw) + pr(dB, p0.omega), pr(dB, dw)])
    return dB, dw, BB, ww, Bw


def _charge_polys(N, p0, seg, v):
    dB, dw, BB, ww, Bw = seg
    v = MukaiVector.of(v)
    r, c, s = v.r, v.c1, v.s
    pr = N.ns_pair
    Bc = poly.linear(pr(p0.B, c), pr(dB, c)) if N.rho else poly.ZERO
    wc = poly.linear(pr(p0.omega, c), pr(dw, c)) if N.rho else poly.ZERO
    re = poly.add(poly.add(poly.poly([-s]), Bc), poly.scale(poly.sub(BB, ww), -r * HALF))
    im = poly.sub(wc, poly.scale(Bw, r))
    return re, im


def _check_segment_positive(N, path, k):
    seg = _seg_polys(N, path.points[k], path.points[k + 1])
    if not poly.positive_on(seg[3], 0, 1):
        raise PathHitsWall(f"omega^2 is not positive along segment {k}")
    return seg


@dataclass(frozen=True)
class WallEvent:
    segment: int
    t: Fraction           # local parameter in [0, 1] (interval midpoint if irrational)
    interval: tuple       # (lo, hi), equal when the crossing is rational
    pair: tuple           # (i, j) indices into the vector list
    sign_before: int
    sign_after: int

    @property
    def exact(self):
        return self.interval[0] == self.interval[1]

    @property
    def position(self):
        return self.segment + self.t


def _pieces(A):
    """Sign pattern of a polynomial on [0, 1]: list of (t_lo, t_hi, root, sign_left, sign_right)."""
    if not A:
        return None
    roots = poly.isolate_roots(A, 0, 1)
    bounds = [Fraction(0)]
    out = []
    for lo, hi, _ in roots:
        bounds.append(lo)
        bounds.append(hi)
    bounds.append(Fraction(1))
    samples = []
    for i in range(len(roots) + 1):
        a, b = bounds[2 * i], bounds[2 * i + 1]
        samples.append((a + b) / 2)
    for i, (lo, hi, ex) in enumerate(roots):
        sl = poly.sign_at(A, samples[i])
        sr = poly.sign_at(A, samples[i + 1])
        out.append((lo, hi, ex, sl, sr))
    return out, poly.sign_at(A, samples[0]), poly.sign_at(A, samples[-1])


def _pair_events(args):
    N, path, segs, charges, i, j = args
    events = []
    last = 0
    for k in range(path.segments):
        (rv, iv), (rw, iw) = charges[i][k], charges[j][k]
        if not rv and not iv and not rw and not iw:
            raise DegeneratePath(f"both charges vanish on segment {k} for pair {(i, j)}")
        A = poly.sub(poly.mul(iv, rw), poly.mul(rv, iw))
        pat = _pieces(A)
        if pat is None:
            continue
        roots, first, lastsign = pat
        if last and first and first != last:
            events.append(WallEvent(k, Fraction(0), (Fraction(0), Fraction(0)), (i, j), last, first))
        for lo, hi, ex, sl, sr in roots:
            if sl and sr and sl != sr:
                t = ex if ex is not None else (lo + hi) / 2
                events.append(WallEvent(k, t, (lo, hi), (i, j), sl, sr))
        if lastsign:
            last = lastsign
    return events


def _threads():
    try:
        return max(1, int(os.environ.get("KUMMERLAT_THREADS", "1")))
    except ValueError:
        return 1


def wall_crossings(path, vectors, N):
    """Sign changes of every pairwise alignment along a piecewise-linear path.

    Events are sorted by (segment, t, pair).  The rotation lambda does not move
    walls (a common phase cancels in the alignment) and is ignored here.
    """
    vectors = [MukaiVector.of(v) for v in vectors]
    for v in vectors:
        N.check_vector(v.as_tuple())
    segs = [_check_segment_positive(N, path, k) for k in range(path.segments)]
    charges = [[_charge_polys(N, path.points[k], segs[k], v) for k in range(path.segments)]
               for v in vectors]
    jobs = [(N, path, segs, charges, i, j) for i in range(len(vectors))
            for j in range(i + 1, len(vectors))]
    n = _threads()
    if n > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=n) as ex:
            results = list(ex.map(_pair_events, jobs))
    else:
        results = [_pair_events(job) for job in jobs]
    events = [e for r in results for e in r]
    events.sort(key=lambda e: (e.segment, e.t, e.pair))
    return events


# ---------------------------------------------------------------------------
# exceptional classes on the Kummer side


def skyscraper(N):
    return MukaiVector(0, (0,) * N.rho, 1)


def exceptional_class(N, i, k=0):
    """Mukai vector of O_C(k) for the exceptional curve C with class E^_i: (0, C, k+1)."""
    c = N.ns_coords(N.model.named["E_hat"][i])
    return MukaiVector(0, c, k + 1)


def induced_point(N, g):
    """Chamber point (B, pi_* omega_T) of the orbifold map, in NS coordinates.

    B is projected to NS(X) ⊗ Q; the projection is exact when the torus B-field
    is of type (1,1).
    """
    from .kummer import orbifold_map

    B, w, _ = orbifold_map(g, N.model)
    return ChamberPoint(N.ns_projection(B), N.ns_coords(w))


@dataclass
class BoundaryProbe:
    k: int
    omega_T_sq: Fraction
    hypothesis_holds: bool  # omega_T^2 > 1
    alignments: list        # one per i in F_2^4
    re_exceptional: list    # Re Z(O_C(k)) per i
    re_skyscraper: Fraction
    b_in_ns: bool

    @property
    def all_vanish(self):
        return all(a == 0 for a in self.alignments)


def boundary_probe_exceptional(model, g, k=0, perturb=None, N=None):
    """Alignments of O_C(k) with O_p at the induced point, for the 16 curves.

    ``perturb`` is an optional (i, eps) pair moving omega by eps * E^_i.
    """
    from .kummer import TORUS, orbifold_map

    N = N or NumericalLattice.from_kummer(model, g)
    p = induced_point(N, g)
    B_amb = orbifold_map(g, model)[0]
    b_in_ns = all(x == 0 for x in linalg.as_vector(B_amb)
                  - N.to_ambient((0, *p.B, 0)))
    if perturb is not None:
        i0, eps = perturb
        e = N.ns_coords(model.named["E_hat"][i0])
        p = ChamberPoint(p.B, tuple(a + Fraction(eps) * b for a, b in zip(p.omega, e)))
    sky = skyscraper(N)
    als, res = [], []
    for i in range(16):
        w = exceptional_class(N, i, k)
        als.append(phase_alignment(p, sky, w, N))
        res.append(central_charge(p, w, N)[0])
    wT = TORUS.pair(g.kahler, g.kahler)
    return BoundaryProbe(k, wT, wT > 1, als, res, central_charge(p, sky, N)[0], b_in_ns)


# ---------------------------------------------------------------------------
# the C-action and the cover


@dataclass(frozen=True)
class LiftedPoint:
    """A point of the cover: an exact base vector, an integer winding and the
    accumulated phase in half-turns modulo 2.

    ``base`` already carries the largest quarter-turn part of ``phase``; the
    remainder ``pending`` (in [0, 1/2)) is kept as a symbolic rotation.
    """

    base: StabVector
    winding: int = 0
    phase: Fraction = Fraction(0)

    def __post_init__(self):
        ph = linalg._exact(self.phase)
        if not 0 <= ph < 2:
            raise ValueError("phase must lie in [0, 2)")
        object.__setattr__(self, "phase", Fraction(ph))

    @property
    def quarter_turns(self):
        return math.floor(self.phase * 2)

    @property
    def pending(self):
        return self.phase - Fraction(self.quarter_turns, 2)

    @property
    def total_shift(self):
        return 2 * self.winding + self.phase

    def approx(self):
        """Float (re, im) after applying the pending rotation; diagnostics only."""
        a = -math.pi * float(self.pending)
        c, s = math.cos(a), math.sin(a)
        re = [float(x) for x in self.base.re]
        im = [float(x) for x in self.base.im]
        return ([c * x - s * y for x, y in zip(re, im)], [s * x + c * y for x, y in zip(re, im)])


def lift(w):
    return LiftedPoint(w, 0, Fraction(0))


def apply_lambda(w, lam):
    """Act by lambda in C with rational real part: Z -> exp(-i pi lambda) Z.

    lambda = 1 is the shift [1] (base negated), lambda = 2 the double shift
    (same base, winding + 1).
    """
    if isinstance(lam, complex):
        raise NotRational("only real rational lambda is supported")
    lam = linalg._exact(lam)
    if isinstance(lam, float):
        raise NotRational("lambda must be rational")
    total = w.phase + lam
    dw = math.floor(total / 2)
    phase = total - 2 * dw
    q_new = math.floor(phase * 2)
    base = w.base.quarter_turn(q_new - w.quarter_turns)
    return LiftedPoint(base, w.winding + dw, phase)


@dataclass
class WindingResult:
    winding: int
    endpoint: LiftedPoint
    half_turns: Fraction      # total accumulated rotation of the frame, in units of pi
    is_loop: bool


def _frame_arg_change(N, path, k):
    """Change of arg r(mho) along a segment, in half-turns (units of pi).

    r(exp(B + i omega)) = 1 identically, so only the rotation contributes:
    arg r = -pi lambda(t), linear in t.
    """
    return -(path.lambda_at(k + 1) - path.lambda_at(k))


def lift_path_winding(path, N):
    """Continuous lift of a path of chamber points with a rotation parameter.

    Raises PathHitsWall if the frame degenerates (omega^2 <= 0) anywhere.
    """
    for k in range(path.segments):
        _check_segment_positive(N, path, k)
    if path.segments == 0 and N.ns_pair(path.points[0].omega, path.points[0].omega) <= 0:
        raise PathHitsWall("degenerate frame at the only vertex")
    turns = sum((_frame_arg_change(N, path, k) for k in range(path.segments)), Fraction(0))
    start = apply_lambda(lift(exp_vector(path.points[0], N)), path.lambda_at(0))
    # the lift moves by exactly the accumulated rotation (arg decreases by pi per unit lambda)
    end = apply_lambda(lift(exp_vector(path.points[-1], N)), start.total_shift - turns)
    loop = path.is_loop()
    if loop:
        assert end.base == start.base and end.phase == start.phase
    return WindingResult(end.winding - start.winding, end, -turns, loop)
