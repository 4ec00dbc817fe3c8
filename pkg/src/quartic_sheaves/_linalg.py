"""Dense linear algebra over prime fields F_p.

Matrices are numpy int64 arrays with entries reduced into [0, p).  The row
echelon kernels below sit on the hot path of the Macaulay emptiness test,
so they are JIT-compiled with numba when it is importable; the plain-Python
definitions are kept as a correct (slow) fallback.

Inner loops avoid the integer-division cost of ``%`` by reducing through a
small lookup table of size 2*p*p (entries stay below 2*p*2 after one
multiply-subtract step, p is tiny here).
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False
    njit = None


def inverse_table(p):
    """Multiplicative inverses mod p as an int64 array; slot 0 is unused."""
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv[a] = pow(a, p - 2, p)
    return inv


def reduction_table(p):
    """t -> t % p for t in [0, 2*p*p), avoiding idiv in inner loops."""
    red = np.empty(2 * p * p, dtype=np.int64)
    for t in range(2 * p * p):
        red[t] = t % p
    return red


def rank_mod_p(M, p, inv, red):
    """Rank of M over F_p by row echelon reduction.  M is destroyed."""
    rows, cols = M.shape
    pp = p * p
    r = 0
    for c in range(cols):
        piv = -1
        for i in range(r, rows):
            if M[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, cols):
                tmp = M[r, j]
                M[r, j] = M[piv, j]
                M[piv, j] = tmp
        f = inv[M[r, c]]
        if f != 1:
            for j in range(c, cols):
                M[r, j] = M[r, j] * f % p
        for i in range(r + 1, rows):
            g = M[i, c]
            if g != 0:
                for j in range(c, cols):
                    M[i, j] = red[M[i, j] + pp - g * M[r, j]]
        r += 1
        if r == rows:
            break
    return r


def solve_basic_mod_p(A, b, p, inv, red, x):
    """First basic solution of A x = b over F_p (A, b are destroyed).

    Pivot columns are taken left to right and free variables are set to
    zero, which makes the solution a deterministic function of (A, b).
    Returns 1 and fills ``x`` on success, returns 0 if inconsistent.
    """
    rows, cols = A.shape
    pp = p * p
    r = 0
    npiv = rows if rows < cols else cols
    pivcol = np.full(npiv, -1, dtype=np.int64)
    for c in range(cols):
        piv = -1
        for i in range(r, rows):
            if A[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, cols):
                tmp = A[r, j]
                A[r, j] = A[piv, j]
                A[piv, j] = tmp
            tmp = b[r]
            b[r] = b[piv]
            b[piv] = tmp
        f = inv[A[r, c]]
        if f != 1:
            for j in range(c, cols):
                A[r, j] = A[r, j] * f % p
            b[r] = b[r] * f % p
        for i in range(rows):
            if i != r:
                g = A[i, c]
                if g != 0:
                    for j in range(c, cols):
                        A[i, j] = red[A[i, j] + pp - g * A[r, j]]
                    b[i] = red[b[i] + pp - g * b[r]]
        pivcol[r] = c
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if b[i] != 0:
            return 0
    for j in range(cols):
        x[j] = 0
    for i in range(r):
        x[pivcol[i]] = b[i]
    return 1


if HAVE_NUMBA:
    rank_mod_p = njit(cache=True)(rank_mod_p)
    solve_basic_mod_p = njit(cache=True)(solve_basic_mod_p)


def rank(M, p):
    """Rank of an integer matrix over F_p (M is not modified)."""
    M = np.ascontiguousarray(np.asarray(M, dtype=np.int64) % p)
    if M.size == 0:
        return 0
    return int(rank_mod_p(M.copy(), p, inverse_table(p), reduction_table(p)))


def solve_basic(A, b, p):
    """First basic solution of A x = b over F_p, or None if inconsistent."""
    A = np.ascontiguousarray(np.asarray(A, dtype=np.int64) % p)
    b = np.ascontiguousarray(np.asarray(b, dtype=np.int64) % p)
    x = np.zeros(A.shape[1], dtype=np.int64)
    ok = solve_basic_mod_p(
        A.copy(), b.copy(), p, inverse_table(p), reduction_table(p), x
    )
    return x if ok else None


def rref(M, p):
    """Reduced row echelon form over F_p; returns (R, pivot_columns)."""
    R = np.asarray(M, dtype=np.int64).copy() % p
    rows, cols = R.shape
    inv = inverse_table(p)
    pivots = []
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if R[i, c]:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        R[r] = R[r] * inv[R[r, c]] % p
        for i in range(rows):
            if i != r and R[i, c]:
                R[i] = (R[i] - R[i, c] * R[r]) % p
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return R, pivots


def nullspace(M, p):
    """Basis of the right kernel of M over F_p, rows of the result."""
    M = np.asarray(M, dtype=np.int64)
    rows, cols = M.shape
    R, pivots = rref(M, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for n, c in enumerate(free):
        basis[n, c] = 1
        for i, pc in enumerate(pivots):
            basis[n, pc] = (-R[i, c]) % p
    return basis


def inv_3x3(T, p):
    """Inverse of a 3x3 integer matrix over F_p via the adjugate."""
    T = np.asarray(T, dtype=np.int64) % p
    a, b, c = T[0]
    d, e, f = T[1]
    g, h, i = T[2]
    det = (a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)) % p
    if det == 0:
        raise ZeroDivisionError("matrix is singular mod %d" % p)
    adj = np.array(
        [
            [e * i - f * h, c * h - b * i, b * f - c * e],
            [f * g - d * i, a * i - c * g, c * d - a * f],
            [d * h - e * g, b * g - a * h, a * e - b * d],
        ],
        dtype=np.int64,
    )
    return adj * pow(int(det), p - 2, p) % p
