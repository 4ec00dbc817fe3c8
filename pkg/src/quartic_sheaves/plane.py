"""Points and transforms of the projective plane over F_{p^k}.

Normalization convention (global): a point's coordinates are scaled so the
first nonzero coordinate equals 1.  This makes representation equality the
same as projective equality, so points can be deduplicated and hashed.

Enumeration order: the points (1 : a : b) for a, b running through the
field in index order (a outer), then (0 : 1 : b), then (0 : 0 : 1); a total
of q^2 + q + 1 points for q = p^k.
"""

from __future__ import annotations

import numpy as np

from . import _linalg
from .algebra import FieldElem, FieldSpec, common_spec

# Default guard for exhaustive plane scans, compared against p^(3k): the raw
# coordinate-triple count.  Callers that genuinely need closure scans (the
# enumeration singularity oracle, zero-orbit listings) pass a larger budget
# explicitly.
DEFAULT_ENUM_BUDGET = 2**24


class BudgetExceeded(RuntimeError):
    """An exhaustive enumeration was larger than its allowed budget."""


class ProjPoint:
    """A point of P^2(F_{p^k}) in canonical normalized form."""

    __slots__ = ("spec", "coords")

    def __init__(self, coords, spec=None):
        coords = list(coords)
        if len(coords) != 3:
            raise ValueError("a plane point needs 3 coordinates")
        if spec is None:
            elem_specs = [c.spec for c in coords if isinstance(c, FieldElem)]
            if not elem_specs:
                raise ValueError("spec required when coordinates are plain ints")
            spec = elem_specs[0]
            for s in elem_specs[1:]:
                spec = common_spec(spec, s)
        coords = [
            c.embed(spec) if isinstance(c, FieldElem) else spec.from_int(int(c))
            for c in coords
        ]
        lead = next((c for c in coords if not c.is_zero()), None)
        if lead is None:
            raise ValueError("the zero triple is not a projective point")
        inv = lead.inverse()
        coords = tuple(c * inv for c in coords)
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "coords", coords)

    def __setattr__(self, name, value):
        raise AttributeError("ProjPoint is immutable")

    def frobenius(self):
        return ProjPoint([c.frobenius() for c in self.coords], self.spec)

    def frobenius_orbit(self):
        """Conjugates of the point under x -> x^p, starting at self."""
        orbit = [self]
        cur = self.frobenius()
        while cur != self:
            orbit.append(cur)
            cur = cur.frobenius()
        return orbit

    def residue_degree(self):
        """Smallest subfield degree containing the normalized coordinates.

        For the degrees in scope (k <= 3, prime or 1) the only subfields
        are F_p and F_{p^k} itself.
        """
        if self.spec.k == 1 or all(c.in_prime_field() for c in self.coords):
            return 1
        return self.spec.k

    def in_prime_subfield(self):
        return all(c.in_prime_field() for c in self.coords)

    def descend_to_prime(self):
        """The same point as an object over F_p (coords must be rational)."""
        if not self.in_prime_subfield():
            raise ValueError("point is not rational")
        sub = self.spec.prime_subfield()
        return ProjPoint([c.coeffs[0] for c in self.coords], sub)

    def __eq__(self, other):
        if not isinstance(other, ProjPoint):
            return NotImplemented
        return self.spec == other.spec and self.coords == other.coords

    def __hash__(self):
        return hash((self.spec, self.coords))

    def __str__(self):
        def fmt(c):
            return str(c.coeffs[0]) if self.spec.k == 1 else str(list(c.coeffs))

        return "(" + " : ".join(fmt(c) for c in self.coords) + ")"

    def __repr__(self):
        return f"ProjPoint{self!s}"

    def sort_key(self):
        return tuple(c.index for c in self.coords)

    def to_json(self):
        return [c.to_json() for c in self.coords]

    @classmethod
    def from_json(cls, obj, spec):
        return cls([FieldElem.from_json(c, spec) for c in obj], spec)


def standard_points(spec):
    """The coordinate triangle (1:0:0), (0:1:0), (0:0:1)."""
    return (
        ProjPoint([1, 0, 0], spec),
        ProjPoint([0, 1, 0], spec),
        ProjPoint([0, 0, 1], spec),
    )


def enumerate_plane(spec, budget=DEFAULT_ENUM_BUDGET):
    """Yield the q^2 + q + 1 normalized points of P^2(F_q), q = p^k.

    Deterministic order; refuses to start when p^(3k) exceeds the budget.
    """
    raw = spec.p ** (3 * spec.k)
    if budget is not None and raw > budget:
        raise BudgetExceeded(
            f"p^(3k) = {raw} exceeds the enumeration budget {budget}"
        )
    one = spec.one
    zero = spec.zero
    for a_idx in range(spec.order):
        a = spec.from_index(a_idx)
        for b_idx in range(spec.order):
            yield ProjPoint([one, a, spec.from_index(b_idx)], spec)
    for b_idx in range(spec.order):
        yield ProjPoint([zero, one, spec.from_index(b_idx)], spec)
    yield ProjPoint([zero, zero, one], spec)


def plane_size(spec):
    q = spec.order
    return q * q + q + 1


def collinear(p0, p1, p2):
    """True iff the 3x3 coordinate determinant vanishes."""
    pts = (p0, p1, p2)
    spec = pts[0].spec
    for pt in pts[1:]:
        spec = common_spec(spec, pt.spec)
    rows = [[c.embed(spec) for c in pt.coords] for pt in pts]
    a, b, c = rows
    det = (
        a[0] * (b[1] * c[2] - b[2] * c[1])
        - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
    )
    return det.is_zero()


class ProjTransform:
    """An invertible coordinate change of P^2, defined over F_p."""

    __slots__ = ("spec", "matrix", "inverse_matrix")

    def __init__(self, matrix, spec):
        if spec.k != 1:
            raise ValueError("transforms are defined over the prime field")
        M = np.asarray(matrix, dtype=np.int64) % spec.p
        if M.shape != (3, 3):
            raise ValueError("transform matrix must be 3x3")
        Minv = _linalg.inv_3x3(M, spec.p)  # raises ZeroDivisionError if singular
        M.setflags(write=False)
        Minv.setflags(write=False)
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "matrix", M)
        object.__setattr__(self, "inverse_matrix", Minv)

    def __setattr__(self, name, value):
        raise AttributeError("ProjTransform is immutable")

    @classmethod
    def identity(cls, spec):
        return cls(np.eye(3, dtype=np.int64), spec)

    def inverse(self):
        return ProjTransform(self.inverse_matrix, self.spec)

    def compose(self, other):
        """self @ other as matrices: substitute(f, self.compose(other)) ==
        substitute(substitute(f, self), other)."""
        return ProjTransform(self.matrix @ other.matrix % self.spec.p, self.spec)

    def apply(self, pt):
        """Image of a point (over any extension of the base field)."""
        target = common_spec(self.spec, pt.spec)
        coords = [c.embed(target) for c in pt.coords]
        out = []
        for m in range(3):
            acc = target.zero
            for n in range(3):
                acc = acc + coords[n] * int(self.matrix[m, n])
            out.append(acc)
        return ProjPoint(out, target)

    def __eq__(self, other):
        if not isinstance(other, ProjTransform):
            return NotImplemented
        return self.spec == other.spec and np.array_equal(self.matrix, other.matrix)

    def __repr__(self):
        return f"ProjTransform({self.matrix.tolist()} over F_{self.spec.p})"


def transform_to_standard(points):
    """Transform T carrying the standard triangle to the given points.

    The input must be three distinct, non-collinear, rational points.  T's
    columns are the canonical normalized representatives, which pins down
    the column scalings and makes the output deterministic.  For forms,
    substitute(f, T) vanishes on the standard triangle iff f vanishes on
    the input points.
    """
    pts = list(points)
    if len(pts) != 3:
        raise ValueError("need exactly three points")
    for pt in pts:
        if pt.spec.k != 1 and not pt.in_prime_subfield():
            raise ValueError("standardization needs rational points")
    pts = [pt.descend_to_prime() if pt.spec.k != 1 else pt for pt in pts]
    spec = pts[0].spec
    if any(pt.spec != spec for pt in pts):
        raise ValueError("points over mixed fields")
    if pts[0] == pts[1] or pts[0] == pts[2] or pts[1] == pts[2]:
        raise ValueError("points must be distinct")
    if collinear(*pts):
        raise ValueError("points are collinear")
    cols = np.array(
        [[c.coeffs[0] for c in pt.coords] for pt in pts], dtype=np.int64
    ).T
    return ProjTransform(cols, spec)
