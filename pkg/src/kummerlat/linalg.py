"""Exact integer and rational matrix routines.

Matrices are numpy arrays of ``dtype=object`` holding Python ``int`` or
``fractions.Fraction`` entries, so no value ever passes through floating
point. The heavy loops run on plain nested lists.
"""

from fractions import Fraction
from math import gcd, lcm

import numpy as np


def as_matrix(rows, ncols=None):
    """Return a 2-d object array of exact entries (ints stay ints)."""
    rows = [[_exact(x) for x in row] for row in rows]
    if not rows:
        return np.empty((0, ncols or 0), dtype=object)
    arr = np.empty((len(rows), len(rows[0])), dtype=object)
    for i, row in enumerate(rows):
        if len(row) != arr.shape[1]:
            raise ValueError("ragged matrix")
        arr[i, :] = row
    return arr


def as_vector(values):
    values = [_exact(x) for x in values]
    arr = np.empty(len(values), dtype=object)
    arr[:] = values
    return arr


def _exact(x):
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return x
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, str):
        return _normalize(Fraction(x))
    if isinstance(x, float):
        raise TypeError("floating point value in exact matrix")
    return _normalize(Fraction(x))


def _normalize(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    return x


def to_lists(A):
    return [[_exact(x) for x in row] for row in np.asarray(A, dtype=object)]


def identity(n):
    I = np.zeros((n, n), dtype=object)
    for i in range(n):
        I[i, i] = 1
    return I


def zeros(m, n):
    Z = np.empty((m, n), dtype=object)
    Z[...] = 0
    return Z


def normalize_matrix(A):
    """Replace integral Fractions by ints, in a copy."""
    A = np.array(A, dtype=object)
    flat = A.reshape(-1)
    for k in range(flat.size):
        flat[k] = _normalize(flat[k])
    return A


def common_denominator(A):
    d = 1
    for x in np.asarray(A, dtype=object).reshape(-1):
        if isinstance(x, Fraction):
            d = lcm(d, x.denominator)
    return d


def clear_denominators(A):
    """Return ``(d, d*A)`` with ``d*A`` an integer matrix and ``d`` minimal."""
    d = common_denominator(A)
    M = np.array(A, dtype=object) * d
    return d, normalize_matrix(M)


def is_integral(A):
    return all(
        isinstance(x, int) or (isinstance(x, Fraction) and x.denominator == 1)
        for x in np.asarray(A, dtype=object).reshape(-1)
    )


# ---------------------------------------------------------------------------
# determinants, ranks, solving


def determinant(A):
    A = to_lists(A)
    n = len(A)
    if n == 0:
        return 1
    if any(len(r) != n for r in A):
        raise ValueError("determinant of a non-square matrix")
    if all(isinstance(x, int) for r in A for x in r):
        return _bareiss(A)
    return _normalize(_fraction_det(A))


def _bareiss(M):
    M = [r[:] for r in M]
    n = len(M)
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        pk = M[k][k]
        for i in range(k + 1, n):
            Mi, Mk = M[i], M[k]
            mik = Mi[k]
            for j in range(k + 1, n):
                Mi[j] = (Mi[j] * pk - mik * Mk[j]) // prev
        prev = pk
    return sign * M[n - 1][n - 1]


def _fraction_det(M):
    M = [[Fraction(x) for x in r] for r in M]
    n = len(M)
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if M[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            det = -det
        det *= M[k][k]
        inv = 1 / M[k][k]
        for i in range(k + 1, n):
            f = M[i][k] * inv
            if f:
                Mi, Mk = M[i], M[k]
                for j in range(k, n):
                    Mi[j] -= f * Mk[j]
    return det


def row_echelon(A):
    """Reduced row echelon form over Q; returns (R, pivot_columns)."""
    M = [[Fraction(x) for x in r] for r in to_lists(A)]
    m = len(M)
    n = len(M[0]) if m else 0
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(m):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return M, pivots


def rank(A):
    A = np.asarray(A, dtype=object)
    if A.size == 0:
        return 0
    return len(row_echelon(A)[1])


def inverse(A):
    A = to_lists(A)
    n = len(A)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(A)]
    R, piv = row_echelon(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return normalize_matrix(as_matrix([row[n:] for row in R]))


def solve_left(Basis, v):
    """Coordinates ``x`` with ``x @ Basis == v``; raises ValueError if v is not in the row span."""
    Basis = to_lists(Basis)
    r = len(Basis)
    if r == 0:
        if any(_exact(x) != 0 for x in v):
            raise ValueError("vector not in span")
        return as_vector([])
    n = len(Basis[0])
    # solve Basis^T x = v
    aug = [[Basis[i][j] for i in range(r)] + [_exact(v[j])] for j in range(n)]
    R, piv = row_echelon(aug)
    if r in piv:
        raise ValueError("vector not in span")
    if len(piv) < r:
        raise ValueError("basis rows are dependent")
    x = [Fraction(0)] * r
    for row, c in zip(R, piv):
        x[c] = row[r]
    return as_vector([_normalize(t) for t in x])


# ---------------------------------------------------------------------------
# Hermite normal form, kernels, Smith normal form


def _hnf_lists(A, with_transform=False):
    A = [r[:] for r in A]
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)] if with_transform else None
    r = 0
    for col in range(n):
        if r == m:
            break
        found = False
        while True:
            nz = [i for i in range(r, m) if A[i][col] != 0]
            if not nz:
                break
            found = True
            piv = min(nz, key=lambda i: abs(A[i][col]))
            if piv != r:
                A[r], A[piv] = A[piv], A[r]
                if U is not None:
                    U[r], U[piv] = U[piv], U[r]
            clean = True
            p = A[r][col]
            for i in range(r + 1, m):
                a = A[i][col]
                if a:
                    q = a // p
                    Ar = A[r]
                    A[i] = [x - q * y for x, y in zip(A[i], Ar)]
                    if U is not None:
                        Ur = U[r]
                        U[i] = [x - q * y for x, y in zip(U[i], Ur)]
                    if A[i][col]:
                        clean = False
            if clean:
                break
        if not found:
            continue
        if A[r][col] < 0:
            A[r] = [-x for x in A[r]]
            if U is not None:
                U[r] = [-x for x in U[r]]
        p = A[r][col]
        for i in range(r):
            q = A[i][col] // p
            if q:
                A[i] = [x - q * y for x, y in zip(A[i], A[r])]
                if U is not None:
                    U[i] = [x - q * y for x, y in zip(U[i], U[r])]
        r += 1
    return A, U, r


def hnf(A):
    """Row Hermite normal form of an integer matrix, zero rows dropped."""
    A = to_lists(A)
    if not A:
        return np.empty((0, 0), dtype=object)
    n = len(A[0])
    H, _, r = _hnf_lists(A)
    return as_matrix(H[:r], ncols=n)


def hnf_with_transform(A):
    """Return ``(H, U, r)`` with ``U @ A == H`` (all rows), U unimodular, rank r."""
    A = to_lists(A)
    H, U, r = _hnf_lists(A, with_transform=True)
    return as_matrix(H), as_matrix(U), r


def rational_hnf(A):
    """Canonical basis of the Z-module spanned by the rows of a rational matrix."""
    A = np.asarray(A, dtype=object)
    if A.shape[0] == 0:
        return A.copy()
    d, M = clear_denominators(A)
    H = hnf(M)
    return normalize_matrix(H * Fraction(1, d)) if d != 1 else H


def integer_kernel(A):
    """HNF basis (rows) of ``{x in Z^n : A @ x == 0}`` for an integer matrix A."""
    A = np.asarray(A, dtype=object)
    m, n = A.shape
    if m == 0:
        return identity(n)
    _, M = clear_denominators(A)
    H, U, r = _hnf_lists(to_lists(M.T), with_transform=True)
    kernel = U[r:]
    if not kernel:
        return np.empty((0, n), dtype=object)
    return hnf(kernel)


def left_kernel(A):
    """HNF basis of ``{x in Z^m : x @ A == 0}``."""
    return integer_kernel(np.asarray(A, dtype=object).T)


def smith_normal_form(A):
    """Return ``(D, U, V, Vinv)`` with ``U @ A @ V == D`` and d_1 | d_2 | ...

    U and V are unimodular; Vinv is the exact inverse of V.
    """
    A = to_lists(A)
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    W = [[int(i == j) for j in range(n)] for i in range(n)]  # V^{-1}

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        W[i], W[j] = W[j], W[i]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        A[dst] = [x - q * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x - q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        for row in A:
            row[dst] -= q * row[src]
        for row in V:
            row[dst] -= q * row[src]
        W[src] = [x + q * y for x, y in zip(W[src], W[dst])]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            p = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, A[i][t] // p)
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, A[t][j] // p)
            rest = [(i, t) for i in range(t + 1, m) if A[i][t]]
            rest += [(t, j) for j in range(t + 1, n) if A[t][j]]
            if rest:
                i, j = min(rest, key=lambda ij: abs(A[ij[0]][ij[1]]))
                if j == t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, -1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    return as_matrix(A), as_matrix(U), as_matrix(V), as_matrix(W)


def elementary_divisors(A):
    D = smith_normal_form(A)[0]
    return [int(D[i, i]) for i in range(min(D.shape)) if D[i, i] != 0]


def vec_gcd(values):
    g = 0
    for x in values:
        g = gcd(g, int(x))
    return g
