"""Short-vector and root enumeration in definite lattices.

LLL works directly on the Gram matrix with integer arithmetic only; the
Fincke-Pohst search uses an exact rational square-completion of the form,
so every pruning decision is an exact comparison.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from . import linalg
from .errors import CapExceeded, NotDefinite, NotPositivePlane, NotRational
from .lattice import IntegerLattice, Sublattice, orthogonal_complement, signature

EXACT_NORM = "exact_norm"
UP_TO_NORM = "up_to_norm"


def lll_gram(gram, delta=Fraction(3, 4)):
    """Integral LLL on a positive definite Gram matrix.

    Returns ``(H, G)`` with H unimodular and ``G == H @ gram @ H.T`` reduced.
    """
    b = [[int(x) for x in row] for row in np.asarray(gram, dtype=object)]
    n = len(b)
    if n == 0:
        return linalg.identity(0), linalg.zeros(0, 0)
    H = [[int(i == j) for j in range(n)] for i in range(n)]
    lam = [[0] * n for _ in range(n)]
    d = [0] * (n + 1)  # d[i+1] = det of leading (i+1)x(i+1) Gram; d[0] = 1
    d[0] = 1
    dn, dd = delta.numerator, delta.denominator

    def red(k, l):
        if 2 * abs(lam[k][l]) > d[l + 1]:
            q = _round_div(lam[k][l], d[l + 1])
            H[k] = [x - q * y for x, y in zip(H[k], H[l])]
            bkl = b[k][l]
            b[k][k] += -2 * q * bkl + q * q * b[l][l]
            for i in range(n):
                if i != k:
                    b[k][i] -= q * b[l][i]
                    b[i][k] = b[k][i]
            lam[k][l] -= q * d[l + 1]
            for i in range(l):
                lam[k][i] -= q * lam[l][i]

    def swap(k):
        H[k], H[k - 1] = H[k - 1], H[k]
        b[k], b[k - 1] = b[k - 1], b[k]
        for row in b:
            row[k], row[k - 1] = row[k - 1], row[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lmb = lam[k][k - 1]
        B = (d[k - 1] * d[k + 1] + lmb * lmb) // d[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - lmb * t) // d[k]
            lam[i][k - 1] = (B * t + lmb * lam[i][k]) // d[k + 1]
        d[k] = B

    d[1] = b[0][0]
    if d[1] <= 0:
        raise NotDefinite("Gram matrix is not positive definite")
    k, kmax = 1, 0
    while k < n:
        if k > kmax:
            kmax = k
            for j in range(k + 1):
                u = b[k][j]
                for i in range(j):
                    u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
                if j < k:
                    lam[k][j] = u
                else:
                    if u <= 0:
                        raise NotDefinite("Gram matrix is not positive definite")
                    d[k + 1] = u
        red(k, k - 1)
        # Lovasz: d_{k+1} d_{k-1} >= (delta d_k^2 - lam^2) scaled by dd
        if dd * d[k + 1] * d[k - 1] < dn * d[k] * d[k] - dd * lam[k][k - 1] ** 2:
            swap(k)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1
    return linalg.as_matrix(H), linalg.as_matrix(b)


def _round_div(a, b):
    # nearest integer to a/b for b > 0
    return (2 * a + b) // (2 * b)


def _completion(gram):
    """Square completion Q(x) = sum_i q[i][i] (x_i + sum_{j>i} q[i][j] x_j)^2."""
    n = len(gram)
    q = [[Fraction(x) for x in row] for row in gram]
    for i in range(n):
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    for i in range(n):
        if q[i][i] <= 0:
            raise NotDefinite("form is not positive definite")
    return q


def _int_range(a, T):
    """Integers x with (x - a)^2 <= T, as (lo, hi); lo > hi when empty."""
    if T < 0:
        return 1, 0
    s = math.sqrt(float(T)) if T else 0.0
    af = float(a)
    lo = math.floor(af - s) - 1
    hi = math.ceil(af + s) + 1
    while lo <= hi and (lo - a) ** 2 > T:
        lo += 1
    while hi >= lo and (hi - a) ** 2 > T:
        hi -= 1
    return lo, hi


def fincke_pohst(gram, bound, center=None, cap=None):
    """All integer x with Q(x - center) <= bound, for positive definite Q.

    Returns a list of (x, value) pairs, value = Q(x - center) exactly.
    """
    n = len(gram)
    bound = Fraction(bound)
    if n == 0:
        return [((), Fraction(0))] if bound >= 0 else []
    q = _completion([[Fraction(x) for x in row] for row in np.asarray(gram, dtype=object)])
    c = [Fraction(0)] * n if center is None else [Fraction(x) for x in center]
    out = []
    x = [0] * n

    def rec(i, remaining):
        # shift for coordinate i: (x_i - c_i) + sum_{j>i} q_ij (x_j - c_j)
        shift = sum((q[i][j] * (x[j] - c[j]) for j in range(i + 1, n)), Fraction(0))
        a = c[i] - shift
        lo, hi = _int_range(a, remaining / q[i][i])
        for xi in range(lo, hi + 1):
            x[i] = xi
            used = q[i][i] * (xi - a) ** 2
            rest = remaining - used
            if i == 0:
                out.append((tuple(x), bound - rest))
                if cap is not None and len(out) > cap:
                    raise CapExceeded(f"more than {cap} vectors", [v for v, _ in out])
            else:
                rec(i - 1, rest)
        x[i] = 0

    rec(n - 1, bound)
    return out


@dataclass(frozen=True)
class EnumerationRequest:
    lattice: IntegerLattice
    norm_target: int
    mode: str = EXACT_NORM
    cap: Optional[int] = None
    negate: bool = False  # enumerate in the negated form (negative definite input)

    def __post_init__(self):
        if self.norm_target <= 0:
            raise ValueError("norm_target must be positive")
        if self.mode not in (EXACT_NORM, UP_TO_NORM):
            raise ValueError(f"unknown mode {self.mode!r}")


def _first_nonzero_positive(v):
    for x in v:
        if x:
            return x > 0
    return False


def short_vectors(req):
    """Representatives (up to sign) of vectors with norm == or <= the target.

    Vectors are coordinate tuples in the lattice basis, lexicographically sorted.
    """
    gram = req.lattice.gram * (-1 if req.negate else 1)
    n = gram.shape[0]
    if n == 0:
        return []
    if signature(IntegerLattice(gram)) != (n, 0):
        raise NotDefinite("lattice is not definite after sign normalization")
    H, G = lll_gram(gram)
    try:
        found = fincke_pohst(G, req.norm_target, cap=None if req.cap is None else 2 * req.cap + 1)
    except CapExceeded as e:
        part = _finish(req, H, [(y, None) for y in e.partial], check_norm=False)
        part = [v for v in part if _norm(gram, v) == req.norm_target or req.mode == UP_TO_NORM]
        raise CapExceeded(f"more than {req.cap} vectors", part[:req.cap]) from None
    out = _finish(req, H, found)
    if req.cap is not None and len(out) > req.cap:
        raise CapExceeded(f"more than {req.cap} vectors", out[:req.cap])
    return out


def _norm(gram, v):
    v = np.asarray(v, dtype=object)
    return v.dot(gram).dot(v)


def _finish(req, H, found, check_norm=True):
    out = []
    for y, val in found:
        if not any(y):
            continue
        if check_norm and req.mode == EXACT_NORM and val != req.norm_target:
            continue
        v = tuple(int(t) for t in np.asarray(y, dtype=object).dot(H))
        if _first_nonzero_positive(v):
            out.append(v)
        elif not check_norm:
            # a truncated search sees only one sign of some pairs
            out.append(tuple(-t for t in v))
    return sorted(set(out))


def brute_force_short_vectors(gram, norm_target, mode=EXACT_NORM, box=None):
    """Naive box search; the box radius comes from the smallest eigenvalue bound
    of the form unless given."""
    G = np.asarray(gram, dtype=object)
    n = G.shape[0]
    if box is None:
        # |x_i| <= sqrt(N * (G^{-1})_{ii}) for positive definite G
        Ginv = linalg.inverse(G)
        box = max(math.isqrt(int(Fraction(norm_target) * Ginv[i, i]) + 1) + 1 for i in range(n))
    out = []
    import itertools

    for x in itertools.product(range(-box, box + 1), repeat=n):
        if not any(x) or not _first_nonzero_positive(x):
            continue
        v = np.asarray(x, dtype=object)
        val = v.dot(G).dot(v)
        if val == norm_target or (mode == UP_TO_NORM and val <= norm_target):
            out.append(tuple(x))
    out.sort()
    return out


# ---------------------------------------------------------------------------
# roots in the complement of a positive four-plane


@dataclass
class RootSearchResult:
    roots: list  # ambient (model) coordinates as tuples of Fractions/ints
    complement_rank: int
    complement_signature: tuple
    denominator: int
    complete: bool = True


def roots_in_complement(model, plane, cap=None):
    """All (-2)-classes of the model lattice orthogonal to a rational positive 4-plane.

    ``plane`` is a FourPlane (or any 4 x 24 rational array) in the model's
    ambient coordinates; the roots come back in the same coordinates.
    """
    rows = np.asarray(getattr(plane, "vectors", plane), dtype=object)
    if any(isinstance(x, float) for x in rows.reshape(-1)):
        raise NotRational("plane vectors must be exact rationals")
    rows = linalg.as_matrix(linalg.to_lists(rows))
    gram4 = model.ambient_gram_of(rows)
    from .lattice import is_positive_definite

    if rows.shape[0] != 4 or not is_positive_definite(gram4):
        raise NotPositivePlane("the 4x4 Gram of the plane is not positive definite")
    denom = linalg.common_denominator(rows)
    coords = model.to_lattice_coords(rows)
    comp = orthogonal_complement(Sublattice(model.lattice, coords))
    cg = comp.gram()
    sig = signature(IntegerLattice(cg))
    if sig != (0, comp.rank):
        raise NotDefinite(f"complement has signature {sig}")
    vecs = short_vectors(EnumerationRequest(IntegerLattice(cg), 2, negate=True, cap=cap))
    roots = []
    for v in vecs:
        lat = np.asarray(v, dtype=object).dot(comp.basis)
        amb = model.to_ambient(lat)
        # post-validation
        assert model.ambient_pair(amb, amb) == -2
        assert all(model.ambient_pair(amb, r) == 0 for r in rows)
        roots.append(tuple(amb))
    return RootSearchResult(roots, comp.rank, sig, denom)
