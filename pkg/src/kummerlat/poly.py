"""Univariate polynomials over Q with Sturm-sequence root isolation.

A polynomial is a tuple of Fractions, constant term first, with no trailing
zeros (the zero polynomial is the empty tuple).
"""

from fractions import Fraction


def poly(coeffs):
    c = [Fraction(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


ZERO = ()
ONE = (Fraction(1),)


def degree(p):
    return len(p) - 1


def add(p, q):
    n = max(len(p), len(q))
    return poly([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def sub(p, q):
    return add(p, scale(q, -1))


def scale(p, k):
    return poly([k * a for a in p])


def mul(p, q):
    if not p or not q:
        return ZERO
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return poly(out)


def linear(a, b):
    """a + b t"""
    return poly([a, b])


def evaluate(p, t):
    acc = Fraction(0)
    for a in reversed(p):
        acc = acc * t + a
    return acc


def sign_at(p, t):
    v = evaluate(p, t)
    return (v > 0) - (v < 0)


def derivative(p):
    return poly([i * a for i, a in enumerate(p)][1:])


def divmod_poly(p, q):
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(p)
    out = [Fraction(0)] * max(len(p) - len(q) + 1, 0)
    lead = q[-1]
    while len(r) >= len(q) and r:
        k = len(r) - len(q)
        f = r[-1] / lead
        out[k] = f
        for i, b in enumerate(q):
            r[i + k] -= f * b
        r = list(poly(r))
    return poly(out), poly(r)


def gcd_poly(p, q):
    while q:
        p, q = q, divmod_poly(p, q)[1]
    if not p:
        return ZERO
    return scale(p, 1 / p[-1])


def squarefree(p):
    g = gcd_poly(p, derivative(p))
    if degree(g) <= 0:
        return p
    return divmod_poly(p, g)[0]


def sturm_sequence(p):
    seq = [p, derivative(p)]
    while seq[-1]:
        r = divmod_poly(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append(scale(r, -1))
    return seq


def _variations(seq, t):
    signs = [s for s in (sign_at(q, t) for q in seq) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(seq, a, b):
    """Number of distinct real roots in (a, b] (p(a) != 0 assumed by caller)."""
    return _variations(seq, a) - _variations(seq, b)


def isolate_roots(p, a, b, width=Fraction(1, 2 ** 48)):
    """Distinct real roots of p in the open interval (a, b).

    Returns a sorted list of ``(lo, hi, exact)`` where ``exact`` is the root as
    a Fraction when it is rational and was identified, else None; ``lo < root < hi``
    for inexact roots and ``lo == hi == root`` for exact ones.
    """
    if not p:
        raise ValueError("zero polynomial has no isolated roots")
    if degree(p) == 0:
        return []
    a, b = Fraction(a), Fraction(b)
    sf = squarefree(p)
    seq = sturm_sequence(sf)
    out = []

    def rec(lo, hi):
        # invariant: sf(lo) != 0 or lo == a; count roots in (lo, hi)
        n = count_roots(seq, lo, hi) - (1 if evaluate(sf, hi) == 0 else 0)
        if n == 0:
            return
        mid = (lo + hi) / 2
        if n == 1:
            if evaluate(sf, mid) == 0:
                out.append((mid, mid, mid))
                return
            left = count_roots(seq, lo, mid)
            if left:
                _refine(lo, mid)
            else:
                _refine(mid, hi)
            return
        rec(lo, mid)
        if evaluate(sf, mid) == 0:
            out.append((mid, mid, mid))
        rec(mid, hi)

    def _refine(lo, hi):
        slo = sign_at(sf, lo)
        while hi - lo > width:
            mid = (lo + hi) / 2
            sm = sign_at(sf, mid)
            if sm == 0:
                out.append((mid, mid, mid))
                return
            if sm == slo:
                lo = mid
            else:
                hi = mid
        guess = _rational_guess(sf, lo, hi)
        if guess is not None:
            out.append((guess, guess, guess))
        else:
            out.append((lo, hi, None))

    lo = a
    if evaluate(sf, a) == 0:
        # start just right of a root at the endpoint
        lo = a + min(width, (b - a) / 4)
        while count_roots(seq, a, lo) > 1 or evaluate(sf, lo) == 0:
            lo = a + (lo - a) / 2
    rec(lo, b)
    out.sort(key=lambda r: r[0])
    return out


def _rational_guess(p, lo, hi):
    mid = (lo + hi) / 2
    for bound in (10, 100, 1000, 10 ** 4, 10 ** 6, 10 ** 9):
        q = mid.limit_denominator(bound)
        if lo <= q <= hi and evaluate(p, q) == 0:
            return q
    return None


def positive_on(p, a, b):
    """True iff p(t) > 0 for every t in the closed interval [a, b]."""
    if not p:
        return False
    if sign_at(p, a) <= 0 or sign_at(p, b) <= 0:
        return False
    if degree(p) == 0:
        return True
    return not isolate_roots(p, a, b)
