"""Matrix presentations of the sheaves and their singularity tests.

Two shapes occur:

* the open-stratum shape M0: a 3x3 matrix whose first two columns are
  linear forms (the Kronecker part) and whose third column is quadratic;
  valid when the Kronecker part is stable and the determinant is nonzero;
* the closed-stratum shape M1: a 2x2 matrix with a linear first row and a
  cubic second row; valid when the linear forms are independent and the
  determinant is nonzero.

A presentation is singular exactly when the ideal of all its next-to-top
minors (2x2 for M0, the four entries for M1) has a nonempty zero scheme
over the closure.  Two independent deciders are provided: the Macaulay
emptiness test ("macaulay") and an exhaustive search over P^2(F_{p^k}),
k <= 3 ("enumeration").  The search is complete here because every zero
of the minors ideal lies inside the length-3 scheme cut out by the
quadric minors, so closed points have residue degree at most 3.

Minor sign convention: minor(rows {i<j}, cols {a<b}) =
M[i,a] M[j,b] - M[i,b] M[j,a], enumerated row-major (row pairs outer).
Signs do not matter for any ideal-theoretic use.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _linalg, _scan
from .algebra import (
    FieldError,
    FieldSpec,
    HomogPoly,
    is_projectively_empty,
    rank_ext,
)
from .plane import ProjPoint


class PresentationError(ValueError):
    """The matrix does not satisfy the validity gates of its shape."""


_ROW_PAIRS = ((0, 1), (0, 2), (1, 2))


class KroneckerModule:
    """A 3x2 matrix of linear forms."""

    __slots__ = ("spec", "entries")

    def __init__(self, entries):
        rows = tuple(tuple(r) for r in entries)
        if len(rows) != 3 or any(len(r) != 2 for r in rows):
            raise ValueError("a Kronecker module is a 3x2 matrix")
        spec = rows[0][0].spec
        for r in rows:
            for e in r:
                if not isinstance(e, HomogPoly) or e.degree != 1:
                    raise ValueError("entries must be linear forms")
                if e.spec != spec:
                    raise FieldError("entries over mixed fields")
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "entries", rows)

    def __setattr__(self, name, value):
        raise AttributeError("KroneckerModule is immutable")

    @classmethod
    def from_coeff_rows(cls, rows, spec):
        """rows: 3x2 nested coefficient triples."""
        return cls(
            [[HomogPoly(1, c, spec) for c in row] for row in rows]
        )

    @classmethod
    def random(cls, spec, rng):
        return cls(
            [[HomogPoly.random(1, spec, rng) for _ in range(2)] for _ in range(3)]
        )

    def minors(self):
        """The three 2x2 minors, row pairs (0,1), (0,2), (1,2)."""
        e = self.entries
        return tuple(
            e[i][0] * e[j][1] - e[i][1] * e[j][0] for i, j in _ROW_PAIRS
        )

    def cofactor_column(self):
        """(d0, d1, d2) with det [alpha | q] = q0 d0 + q1 d1 + q2 d2.

        These are the signed cofactors along an appended third column:
        (+minor(1,2), -minor(0,2), +minor(0,1)).
        """
        m01, m02, m12 = self.minors()
        return (m12, -m02, m01)

    def coefficient_matrix(self):
        """3x6 matrix of minor coefficients (prime field only)."""
        return np.array([m.residues() for m in self.minors()], dtype=np.int64)

    def is_stable(self):
        """True iff the three minors span a 3-dimensional space of quadrics."""
        minors = self.minors()
        if self.spec.k == 1:
            return _linalg.rank(self.coefficient_matrix(), self.spec.p) == 3
        return rank_ext([list(m.coeffs) for m in minors]) == 3

    def substitute(self, T):
        return KroneckerModule(
            [[e.substitute(T) for e in row] for row in self.entries]
        )

    def __eq__(self, other):
        if not isinstance(other, KroneckerModule):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"KroneckerModule({[[str(e) for e in r] for r in self.entries]})"

    def to_json(self):
        return [[e.to_json() for e in row] for row in self.entries]

    @classmethod
    def from_json(cls, obj, spec):
        return cls([[HomogPoly.from_json(e, spec) for e in row] for row in obj])


class M0Presentation:
    """Open-stratum shape: [linear | linear | quadratic] columns, 3x3."""

    __slots__ = ("spec", "linear", "quadrics")

    shape = "m0"

    def __init__(self, linear, quadrics):
        quadrics = tuple(quadrics)
        if len(quadrics) != 3:
            raise ValueError("need three quadratic entries")
        spec = linear.spec
        for q in quadrics:
            if q.degree != 2:
                raise ValueError("third column must be quadratic")
            if q.spec != spec:
                raise FieldError("entries over mixed fields")
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "linear", linear)
        object.__setattr__(self, "quadrics", quadrics)

    def __setattr__(self, name, value):
        raise AttributeError("M0Presentation is immutable")

    @classmethod
    def standard_form(cls, q0, q1, q2):
        """[x0 x0 q0; x1 0 q1; 0 x2 q2] -- the standard-position shape."""
        spec = q0.spec
        x0 = HomogPoly.variable(0, spec)
        x1 = HomogPoly.variable(1, spec)
        x2 = HomogPoly.variable(2, spec)
        zero = HomogPoly.zero(1, spec)
        alpha = KroneckerModule([[x0, x0], [x1, zero], [zero, x2]])
        return cls(alpha, (q0, q1, q2))

    def entry(self, i, j):
        if j < 2:
            return self.linear.entries[i][j]
        return self.quadrics[i]

    def matrix(self):
        return tuple(tuple(self.entry(i, j) for j in range(3)) for i in range(3))

    def determinant(self):
        """Exact determinant, degree 4 (expansion along the third column)."""
        d = self.linear.cofactor_column()
        acc = self.quadrics[0] * d[0]
        acc = acc + self.quadrics[1] * d[1]
        acc = acc + self.quadrics[2] * d[2]
        return acc

    def minors2x2(self):
        """All nine 2x2 minors: three quadrics then six cubics.

        Row-major enumeration over (row pair, column pair); the fixed sign
        convention is minor = M[i,a] M[j,b] - M[i,b] M[j,a].
        """
        M = self.matrix()
        out = []
        for i, j in _ROW_PAIRS:
            for a, b in _ROW_PAIRS:  # same index pairs for columns
                out.append(M[i][a] * M[j][b] - M[i][b] * M[j][a])
        return tuple(out)

    def is_valid(self):
        return self.linear.is_stable() and not self.determinant().is_zero()

    def validate(self):
        if not self.linear.is_stable():
            raise PresentationError("Kronecker part is not stable")
        if self.determinant().is_zero():
            raise PresentationError("determinant vanishes identically")

    def rank_at_point(self, pt):
        rows = [[self.entry(i, j).eval(pt.coords) for j in range(3)] for i in range(3)]
        return rank_ext(rows)

    def substitute(self, T):
        return M0Presentation(
            self.linear.substitute(T), tuple(q.substitute(T) for q in self.quadrics)
        )

    def coeff_vector(self):
        """27 residues: 6 linear entries (row-major) then 3 quadrics."""
        out = []
        for i in range(3):
            for j in range(2):
                out.extend(int(c) for c in self.linear.entries[i][j].residues())
        for q in self.quadrics:
            out.extend(int(c) for c in q.residues())
        return np.array(out, dtype=np.int64)

    @classmethod
    def from_coeff_vector(cls, vec, spec):
        vec = [int(v) for v in vec]
        rows = [
            [vec[(2 * i + j) * 3 : (2 * i + j) * 3 + 3] for j in range(2)]
            for i in range(3)
        ]
        quadrics = tuple(
            HomogPoly(2, vec[18 + 6 * i : 24 + 6 * i], spec) for i in range(3)
        )
        return cls(KroneckerModule.from_coeff_rows(rows, spec), quadrics)

    def __eq__(self, other):
        if not isinstance(other, M0Presentation):
            return NotImplemented
        return self.linear == other.linear and self.quadrics == other.quadrics

    def __hash__(self):
        return hash((self.linear, self.quadrics))

    def __repr__(self):
        return f"M0Presentation({[[str(e) for e in r] for r in self.matrix()]})"

    def to_json(self):
        return {
            "shape": "m0",
            "field": self.spec.to_json(),
            "entries": [[self.entry(i, j).to_json() for j in range(3)] for i in range(3)],
        }


class M1Presentation:
    """Closed-stratum shape: [z1 z2; q1 q2], linear row over cubic row."""

    __slots__ = ("spec", "linears", "cubics")

    shape = "m1"

    def __init__(self, linears, cubics):
        linears = tuple(linears)
        cubics = tuple(cubics)
        if len(linears) != 2 or len(cubics) != 2:
            raise ValueError("shape is 2x2: two linear and two cubic entries")
        spec = linears[0].spec
        for z in linears:
            if z.degree != 1 or z.spec != spec:
                raise ValueError("first row must be linear forms over one field")
        for q in cubics:
            if q.degree != 3 or q.spec != spec:
                raise ValueError("second row must be cubic forms over one field")
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "linears", linears)
        object.__setattr__(self, "cubics", cubics)

    def __setattr__(self, name, value):
        raise AttributeError("M1Presentation is immutable")

    def determinant(self):
        return self.linears[0] * self.cubics[1] - self.linears[1] * self.cubics[0]

    def entries_list(self):
        """The four entries -- the 1x1 next-to-top minors of this shape."""
        return (*self.linears, *self.cubics)

    def linears_independent(self):
        if self.spec.k == 1:
            mat = np.array([z.residues() for z in self.linears], dtype=np.int64)
            return _linalg.rank(mat, self.spec.p) == 2
        return rank_ext([list(z.coeffs) for z in self.linears]) == 2

    def is_valid(self):
        return self.linears_independent() and not self.determinant().is_zero()

    def validate(self):
        if not self.linears_independent():
            raise PresentationError("linear entries are dependent")
        if self.determinant().is_zero():
            raise PresentationError("determinant vanishes identically")

    def support_point(self):
        """The unique common zero of the two (independent) linear forms."""
        a = self.linears[0].residues()
        b = self.linears[1].residues()
        cross = np.cross(a, b) % self.spec.p
        return ProjPoint([int(c) for c in cross], self.spec)

    def rank_at_point(self, pt):
        rows = [
            [self.linears[0].eval(pt.coords), self.linears[1].eval(pt.coords)],
            [self.cubics[0].eval(pt.coords), self.cubics[1].eval(pt.coords)],
        ]
        return rank_ext(rows)

    def substitute(self, T):
        return M1Presentation(
            tuple(z.substitute(T) for z in self.linears),
            tuple(q.substitute(T) for q in self.cubics),
        )

    def coeff_vector(self):
        """26 residues: z1, z2 (3 each) then q1, q2 (10 each)."""
        out = []
        for z in self.linears:
            out.extend(int(c) for c in z.residues())
        for q in self.cubics:
            out.extend(int(c) for c in q.residues())
        return np.array(out, dtype=np.int64)

    @classmethod
    def from_coeff_vector(cls, vec, spec):
        vec = [int(v) for v in vec]
        return cls(
            (HomogPoly(1, vec[0:3], spec), HomogPoly(1, vec[3:6], spec)),
            (HomogPoly(3, vec[6:16], spec), HomogPoly(3, vec[16:26], spec)),
        )

    def __eq__(self, other):
        if not isinstance(other, M1Presentation):
            return NotImplemented
        return self.linears == other.linears and self.cubics == other.cubics

    def __hash__(self):
        return hash((self.linears, self.cubics))

    def __repr__(self):
        rows = [[str(z) for z in self.linears], [str(q) for q in self.cubics]]
        return f"M1Presentation({rows})"

    def to_json(self):
        return {
            "shape": "m1",
            "field": self.spec.to_json(),
            "entries": [
                [z.to_json() for z in self.linears],
                [q.to_json() for q in self.cubics],
            ],
        }


def presentation_from_json(obj):
    spec = FieldSpec.from_json(obj["field"])
    shape = obj.get("shape")
    entries = obj["entries"]
    if shape == "m0":
        linear = KroneckerModule(
            [[HomogPoly.from_json(entries[i][j], spec) for j in range(2)] for i in range(3)]
        )
        quadrics = tuple(HomogPoly.from_json(entries[i][2], spec) for i in range(3))
        return M0Presentation(linear, quadrics)
    if shape == "m1":
        return M1Presentation(
            tuple(HomogPoly.from_json(e, spec) for e in entries[0]),
            tuple(HomogPoly.from_json(e, spec) for e in entries[1]),
        )
    raise ValueError(f"unknown presentation shape {shape!r}")


@dataclass(frozen=True)
class SingularityVerdict:
    """Outcome of a singularity decision.

    witness, when present, is a closure point where the matrix rank drops
    to n-2 (found by the enumeration method, or the support point for the
    2x2 shape).
    """

    singular: bool
    method: str
    witness: Optional[ProjPoint] = None


def is_stable(alpha):
    return alpha.is_stable()


def minors2x2(A):
    return A.minors2x2()


def determinant(A):
    return A.determinant()


def rank_at_point(A, pt):
    return A.rank_at_point(pt)


def m1_support_singular(A):
    """2x2 shape: singular iff both cubics vanish at the support point.

    Equivalent to the minors ideal (the four entries) having a nonempty
    zero scheme, since that scheme lives inside the single common zero of
    the two independent linear entries; the equivalence is cross-checked
    against is_projectively_empty in the test suite.
    """
    pt = A.support_point()
    if A.cubics[0].eval(pt.coords).is_zero() and A.cubics[1].eval(pt.coords).is_zero():
        return True, pt
    return False, None


def is_singular(A, method="macaulay", budget=2**32):
    """Singularity verdict for a valid presentation.

    method "macaulay": Macaulay emptiness of the 2x2-minors ideal for the
    3x3 shape; support-point evaluation for the 2x2 shape (see
    m1_support_singular).  method "enumeration": exhaustive search of
    P^2(F_{p^k}), k <= 3, for a point where the rank drops to n-2; sound
    and complete because the zero scheme sits inside a length-3 scheme.
    """
    A.validate()
    if method == "macaulay":
        if isinstance(A, M0Presentation):
            return SingularityVerdict(
                not is_projectively_empty(A.minors2x2()), "macaulay", None
            )
        sing, pt = m1_support_singular(A)
        return SingularityVerdict(sing, "macaulay", pt)
    if method == "enumeration":
        if A.spec.k != 1:
            raise FieldError("enumeration method runs over prime-field presentations")
        if isinstance(A, M0Presentation):
            gens = [g for g in A.minors2x2() if not g.is_zero()]
        else:
            gens = [g for g in A.entries_list() if not g.is_zero()]
        witness = _scan.first_common_zero(gens, A.spec, budget)
        return SingularityVerdict(witness is not None, "enumeration", witness)
    raise ValueError(f"unknown method {method!r}")


def find_witness(A, budget=2**32):
    """A closure point of rank drop for a singular presentation, or None."""
    return is_singular(A, method="enumeration", budget=budget).witness


def sample_presentation_stats(stratum, spec, rng, max_rejects=100000):
    """Uniform valid presentation plus the number of rejected draws.

    Coefficients are drawn uniformly over F_p and redrawn until the
    validity gates hold.  Deterministic given the generator state.
    """
    if spec.k != 1:
        raise FieldError("sampling runs over the prime field")
    rejects = 0
    while True:
        if stratum == "m0":
            cand = M0Presentation.from_coeff_vector(rng.integers(0, spec.p, 27), spec)
        elif stratum == "m1":
            cand = M1Presentation.from_coeff_vector(rng.integers(0, spec.p, 26), spec)
        else:
            raise ValueError(f"unknown stratum {stratum!r}")
        if cand.is_valid():
            return cand, rejects
        rejects += 1
        if rejects > max_rejects:
            raise RuntimeError("rejection budget exceeded while sampling")


def sample_presentation(stratum, spec, rng, max_rejects=100000):
    return sample_presentation_stats(stratum, spec, rng, max_rejects)[0]


def boundary_fixture(spec):
    """The stock example of a non-singular sheaf whose support curve is
    singular at a (non-reduced) zero-scheme point: matrix
    [x0 x1 0; 0 x0 x2^2; x2 0 x1^2].
    """
    x0 = HomogPoly.variable(0, spec)
    x1 = HomogPoly.variable(1, spec)
    x2 = HomogPoly.variable(2, spec)
    zero1 = HomogPoly.zero(1, spec)
    linear = KroneckerModule([[x0, x1], [zero1, x0], [x2, zero1]])
    quadrics = (HomogPoly.zero(2, spec), x2 * x2, x1 * x1)
    return M0Presentation(linear, quadrics)


def _random_invertible(n, spec, rng):
    while True:
        M = rng.integers(0, spec.p, (n, n)).astype(np.int64)
        if _linalg.rank(M, spec.p) == n:
            return M


def random_m0_move(A, rng):
    """A random allowed group move: GL3 on rows, block column operations
    (GL2 on the linear columns, unit scaling of the quadratic column, and
    unipotent additions of linear multiples of columns 1-2 to column 3).

    Changes the determinant by a nonzero scalar and fixes the singularity
    verdict and the canonical determinant class.
    """
    spec = A.spec
    R = _random_invertible(3, spec, rng)
    C2 = _random_invertible(2, spec, rng)
    c33 = int(rng.integers(1, spec.p))
    a = HomogPoly.random(1, spec, rng)
    b = HomogPoly.random(1, spec, rng)
    return apply_m0_move(A, R, C2, c33, a, b)


def apply_m0_move(A, R, C2, c33, a, b):
    cols = [
        [A.linear.entries[i][0] for i in range(3)],
        [A.linear.entries[i][1] for i in range(3)],
        list(A.quadrics),
    ]
    new0 = [cols[0][i] * int(C2[0, 0]) + cols[1][i] * int(C2[1, 0]) for i in range(3)]
    new1 = [cols[0][i] * int(C2[0, 1]) + cols[1][i] * int(C2[1, 1]) for i in range(3)]
    new2 = [
        cols[2][i] * c33 + a * cols[0][i] + b * cols[1][i] for i in range(3)
    ]
    # then mix rows by R
    lin_rows = []
    quad_col = []
    for i in range(3):
        e0 = new0[0] * int(R[i, 0]) + new0[1] * int(R[i, 1]) + new0[2] * int(R[i, 2])
        e1 = new1[0] * int(R[i, 0]) + new1[1] * int(R[i, 1]) + new1[2] * int(R[i, 2])
        e2 = new2[0] * int(R[i, 0]) + new2[1] * int(R[i, 1]) + new2[2] * int(R[i, 2])
        lin_rows.append([e0, e1])
        quad_col.append(e2)
    return M0Presentation(KroneckerModule(lin_rows), tuple(quad_col))


def random_m1_move(A, rng):
    """Random allowed move for the 2x2 shape: unit scalings of both rows,
    a quadratic multiple of the linear row added to the cubic row, and a
    GL2 constant mix of the columns."""
    spec = A.spec
    s = int(rng.integers(1, spec.p))
    t = int(rng.integers(1, spec.p))
    g = HomogPoly.random(2, spec, rng)
    C2 = _random_invertible(2, spec, rng)
    z = [A.linears[0] * s, A.linears[1] * s]
    q = [A.cubics[0] * t + g * A.linears[0], A.cubics[1] * t + g * A.linears[1]]
    new_z = [z[0] * int(C2[0, 0]) + z[1] * int(C2[1, 0]),
             z[0] * int(C2[0, 1]) + z[1] * int(C2[1, 1])]
    new_q = [q[0] * int(C2[0, 0]) + q[1] * int(C2[1, 0]),
             q[0] * int(C2[0, 1]) + q[1] * int(C2[1, 1])]
    return M1Presentation(tuple(new_z), tuple(new_q))
