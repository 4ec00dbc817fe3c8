"""Vectorized exhaustive search over P^2(F_{p^k}).

Elements of F_q (q = p^k) are encoded as integers in [0, q): the element
with residues (c_0, ..., c_{k-1}) gets index sum(c_i * p^i).  This matches
FieldElem.index, embeds F_p as the indices < p, and lets field arithmetic
run through small lookup tables built once per field (via discrete logs).

Plane points are flat-indexed in the same order as plane.enumerate_plane:
(1 : a : b) for flat = a*q + b, then (0 : 1 : b), then (0 : 0 : 1).

Everything here works on F_p coefficient vectors of forms; it is the
engine behind the enumeration singularity method and the zero-orbit
listings, and is deliberately separate from the exact object layer.
"""

from __future__ import annotations

import functools

import numpy as np

from .algebra import FieldSpec, monomial_exponents
from .plane import BudgetExceeded, ProjPoint

# Refuse lookup tables for fields larger than this (q^2-entry tables).
MAX_TABLE_ORDER = 2500

# Chunk length for full-plane scans, keeps transient buffers small.
SCAN_CHUNK = 1 << 19


class FieldTables:
    """Index-encoded arithmetic tables for one F_{p^k}."""

    def __init__(self, spec):
        if spec.order > MAX_TABLE_ORDER:
            raise BudgetExceeded(
                f"field of order {spec.order} exceeds the table limit {MAX_TABLE_ORDER}"
            )
        self.spec = spec
        p, k, q = spec.p, spec.k, spec.order
        self.p, self.k, self.q = p, k, q
        # discrete log / exp through a generator of the unit group
        exp = np.zeros(q - 1, dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        gen = self._find_generator(spec)
        cur = spec.one
        for i in range(q - 1):
            exp[i] = cur.index
            log[cur.index] = i
            cur = cur * gen
        self.exp, self.log = exp, log
        # multiplication: exp[(log a + log b) mod (q-1)], zero absorbs
        lg = log[1:]
        table = exp[(lg[:, None] + lg[None, :]) % (q - 1)]
        mul = np.zeros((q, q), dtype=np.int32)
        mul[1:, 1:] = table
        self.mul = mul
        # addition via digit vectors
        digits = np.zeros((q, k), dtype=np.int64)
        idx = np.arange(q)
        for i in range(k):
            digits[:, i] = idx % p
            idx = idx // p
        weights = p ** np.arange(k)
        add = np.zeros((q, q), dtype=np.int32)
        step = max(1, (1 << 22) // (q * k))
        for start in range(0, q, step):
            stop = min(q, start + step)
            s = (digits[start:stop, None, :] + digits[None, :, :]) % p
            add[start:stop] = s @ weights
        self.add = add
        self.neg = add[0].copy()  # placeholder, replaced below
        neg = ((-digits) % p) @ weights
        self.neg = neg.astype(np.int32)
        inv = np.zeros(q, dtype=np.int32)
        inv[1:] = exp[(-(lg) % (q - 1))]
        self.inv = inv
        frob = np.zeros(q, dtype=np.int32)
        frob[1:] = exp[(lg * p) % (q - 1)]
        self.frob = frob

    @staticmethod
    def _find_generator(spec):
        q = spec.order
        factors = []
        m = q - 1
        d = 2
        while d * d <= m:
            if m % d == 0:
                factors.append(d)
                while m % d == 0:
                    m //= d
            d += 1
        if m > 1:
            factors.append(m)
        for idx in range(2, q):
            g = spec.from_index(idx)
            if all(g ** ((q - 1) // r) != spec.one for r in factors):
                return g
        raise RuntimeError("no generator found")  # pragma: no cover


@functools.lru_cache(maxsize=16)
def tables(spec):
    return FieldTables(spec)


def plane_count(spec):
    q = spec.order
    return q * q + q + 1


def check_budget(spec, budget):
    raw = spec.p ** (3 * spec.k)
    if budget is not None and raw > budget:
        raise BudgetExceeded(
            f"p^(3k) = {raw} exceeds the enumeration budget {budget}"
        )


def flat_coords(spec, start, stop):
    """Index-encoded coordinates of plane points flat in [start, stop)."""
    q = spec.order
    flats = np.arange(start, stop, dtype=np.int64)
    x0 = np.zeros(len(flats), dtype=np.int32)
    x1 = np.zeros(len(flats), dtype=np.int32)
    x2 = np.zeros(len(flats), dtype=np.int32)
    affine = flats < q * q
    x0[affine] = 1
    x1[affine] = flats[affine] // q
    x2[affine] = flats[affine] % q
    mid = (~affine) & (flats < q * q + q)
    x1[mid] = 1
    x2[mid] = flats[mid] - q * q
    last = flats == q * q + q
    x2[last] = 1
    return x0, x1, x2


def point_from_flat(spec, flat):
    q = spec.order
    if flat < q * q:
        return ProjPoint(
            [spec.one, spec.from_index(flat // q), spec.from_index(flat % q)], spec
        )
    if flat < q * q + q:
        return ProjPoint([spec.zero, spec.one, spec.from_index(flat - q * q)], spec)
    return ProjPoint([spec.zero, spec.zero, spec.one], spec)


def eval_on_coords(residues, degree, T, x0, x1, x2):
    """Values (index-encoded) of an F_p form at index-encoded points."""
    mul, add = T.mul, T.add
    n = len(x0)
    pw = []
    for x in (x0, x1, x2):
        row = [np.ones(n, dtype=np.int32)]
        for _ in range(degree):
            row.append(mul[row[-1], x])
        pw.append(row)
    acc = np.zeros(n, dtype=np.int32)
    for c, (i, j, l) in zip(residues, monomial_exponents(degree)):
        c = int(c)
        if c == 0:
            continue
        term = mul[pw[0][i], mul[pw[1][j], pw[2][l]]]
        if c != 1:
            term = mul[c, term]
        acc = add[acc, term]
    return acc


def common_zero_flats(gens, spec, budget, limit=None):
    """Flat indices of the common zeros of F_p forms in P^2(F_{p^k}).

    gens: sequence of (residue_vector, degree).  Scans the plane in chunks,
    masking by successive generators.  When ``limit`` is given, stops as
    soon as that many zeros are found.
    """
    check_budget(spec, budget)
    T = tables(spec)
    total = plane_count(spec)
    found = []
    nfound = 0
    for start in range(0, total, SCAN_CHUNK):
        stop = min(total, start + SCAN_CHUNK)
        x0, x1, x2 = flat_coords(spec, start, stop)
        sel = np.arange(start, stop, dtype=np.int64)
        for res, deg in gens:
            vals = eval_on_coords(res, deg, T, x0, x1, x2)
            keep = vals == 0
            sel = sel[keep]
            if len(sel) == 0:
                break
            x0, x1, x2 = x0[keep], x1[keep], x2[keep]
        if len(sel):
            found.append(sel)
            nfound += len(sel)
            if limit is not None and nfound >= limit:
                break
    if not found:
        return np.empty(0, dtype=np.int64)
    out = np.concatenate(found)
    return out[:limit] if limit is not None else out


def _flat_is_rational(spec, flat):
    q, p = spec.order, spec.p
    if flat < q * q:
        return flat // q < p and flat % q < p
    if flat < q * q + q:
        return flat - q * q < p
    return True


def _frobenius_flat(T, spec, flat):
    q = spec.order
    frob = T.frob
    if flat < q * q:
        a, b = divmod(flat, q)
        fa, fb = int(frob[a]), int(frob[b])
        return fa * q + fb
    if flat < q * q + q:
        return q * q + int(frob[flat - q * q])
    return flat


def zero_orbits(gens, base_spec, budget=2**32, stop_at_degree_sum=None):
    """Galois orbits of the common closure zeros, for F_p generators.

    Scans P^2(F_{p^k}) for k = 1, 2, 3 and reports one representative per
    Frobenius orbit as (ProjPoint over F_{p^k}, orbit degree), rational
    points first.  Sound for zero schemes whose closed points have residue
    degree <= 3.  With ``stop_at_degree_sum`` set, higher levels are
    skipped once the accumulated orbit degree reaches the target or rules
    the remaining levels out.
    """
    if base_spec.k != 1:
        raise ValueError("zero_orbits expects generators over the prime field")
    packed = [(g.residues(), g.degree) for g in gens]
    p = base_spec.p
    orbits = []
    degree_sum = 0
    for flat in common_zero_flats(packed, base_spec, budget):
        orbits.append((point_from_flat(base_spec, int(flat)), 1))
        degree_sum += 1
    for k in (2, 3):
        if stop_at_degree_sum is not None and degree_sum + k > stop_at_degree_sum:
            break
        spec_k = FieldSpec(p, k)
        T = tables(spec_k)
        flats = [
            int(f)
            for f in common_zero_flats(packed, spec_k, budget)
            if not _flat_is_rational(spec_k, int(f))
        ]
        seen = set()
        for flat in flats:
            if flat in seen:
                continue
            orbit = [flat]
            cur = _frobenius_flat(T, spec_k, flat)
            while cur != flat:
                orbit.append(cur)
                cur = _frobenius_flat(T, spec_k, cur)
            seen.update(orbit)
            rep = min(orbit)
            orbits.append((point_from_flat(spec_k, rep), len(orbit)))
            degree_sum += len(orbit)
        if stop_at_degree_sum is not None and degree_sum >= stop_at_degree_sum:
            break
    orbits.sort(key=lambda od: (od[1], od[0].sort_key()))
    return tuple(orbits)


def first_common_zero(gens, base_spec, budget=2**32):
    """A common closure zero of F_p forms with residue degree <= 3, if any.

    Returns the first zero in scan order at the smallest field level, as a
    ProjPoint, or None.  This is the witness search of the enumeration
    singularity method.
    """
    if base_spec.k != 1:
        raise ValueError("first_common_zero expects generators over the prime field")
    packed = [(g.residues(), g.degree) for g in gens]
    for k in (1, 2, 3):
        spec_k = base_spec if k == 1 else FieldSpec(base_spec.p, k)
        flats = common_zero_flats(packed, spec_k, budget, limit=1 if k == 1 else None)
        for flat in flats:
            # at k >= 2 rational zeros were already ruled out at k = 1
            return point_from_flat(spec_k, int(flat))
    return None
