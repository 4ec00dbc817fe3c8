"""Morphisms from the open stratum to curve, Kronecker and flag data.

For a valid 3x3 presentation A:

* nu(A) is its linear (Kronecker) part;
* mu(A) is the canonicalized determinant quartic cutting the support curve;
* h_points(alpha) lists the Galois orbits of closure zeros of the three
  quadric minors of a stable Kronecker module (defined away from the
  common-linear-factor locus);
* flag_of(A) = (mu(A), h_points(nu(A))), with the containment of the
  zero orbit points in the curve enforced;
* build_from_flag inverts flag_of on (quartic, three rational points in
  general position) pairs, via the standard-position decomposition
  f = q0*(x1 x2) + q1*(-x0 x2) + q2*(-x0 x1);
* same_orbit_test produces the unipotent column operation connecting two
  presentations with identical linear part and proportional determinant,
  which must exist off the common-factor locus (syzygies of the minor
  column are spanned by the rows of the transposed Kronecker matrix);
* fiber_twist realizes the one-parameter family with constant (linear
  part, determinant) that exists on the common-factor locus;
* sing_curve_meets_Z decides whether the support curve is singular at a
  point of the zero scheme.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _linalg, _scan
from .algebra import (
    FieldError,
    HomogPoly,
    linear_divides,
    mul_index_table,
    n_monomials,
    quadric_split,
)
from .plane import ProjPoint, collinear, transform_to_standard
from .presentations import (
    KroneckerModule,
    M0Presentation,
    PresentationError,
)


class CommonFactorError(PresentationError):
    """Operation undefined on the common-linear-factor locus."""


class SyzygyFailure(RuntimeError):
    """The syzygy solve failed where theory says it cannot; loud on purpose."""


@dataclass(frozen=True)
class SyzygyCertificate:
    """Witness (a, b) of a unipotent column identity.

    For presentations A, B with equal linear part [z | w] and equal
    determinant: (q-column of A) - (q-column of B) = a*z + b*w, i.e.
    A = B * [[1,0,a],[0,1,b],[0,0,1]].
    """

    a: HomogPoly
    b: HomogPoly

    def apply_to(self, B):
        """B * unipotent(a, b): adds a*col0 + b*col1 to the q-column."""
        z = [B.linear.entries[i][0] for i in range(3)]
        w = [B.linear.entries[i][1] for i in range(3)]
        quad = tuple(
            B.quadrics[i] + self.a * z[i] + self.b * w[i] for i in range(3)
        )
        return M0Presentation(B.linear, quad)


@dataclass(frozen=True)
class Flag:
    """A pair (quartic curve class, zero-scheme orbit points on it).

    curve is canonicalized (first nonzero coefficient 1); points hold one
    representative per Galois orbit with the orbit degree.  The orbit
    degrees sum to 3 exactly when the zero scheme is reduced; a smaller
    sum flags a non-reduced scheme.
    """

    curve: HomogPoly
    points: tuple

    @property
    def degree_sum(self):
        return sum(d for _, d in self.points)

    @property
    def non_reduced(self):
        return self.degree_sum < 3

    def to_json(self):
        return {
            "curve": self.curve.to_json(),
            "points": [
                {"coords": pt.to_json(), "degree": d, "k": pt.spec.k}
                for pt, d in self.points
            ],
        }

    @classmethod
    def from_json(cls, obj):
        from .algebra import FieldSpec

        curve = HomogPoly.from_json(obj["curve"])
        pts = []
        for entry in obj["points"]:
            spec = FieldSpec(curve.spec.p, int(entry.get("k", 1)))
            pts.append(
                (ProjPoint.from_json(entry["coords"], spec), int(entry["degree"]))
            )
        return cls(curve, tuple(pts))


def nu(A):
    """Linear part of a valid presentation (stability comes along)."""
    A.validate()
    return A.linear


def mu(A):
    """Canonicalized determinant: the support curve class."""
    det = A.determinant()
    if det.is_zero():
        raise PresentationError("determinant vanishes identically")
    return det.monic_canonical()


def common_linear_factor(alpha):
    """A linear form dividing all three quadric minors, or None.

    Candidates are the linear factors of the first minor (over F_p or
    F_{p^2}, via quadric_split); each is tested for dividing the other
    two.  For stable modules a common factor, when it exists, is always
    proportional to a rational form: an irrational factor would force all
    three minors to be proportional to its norm quadric, contradicting
    stability.  The extension-field branch is kept for completeness.
    """
    if not alpha.is_stable():
        raise PresentationError("Kronecker module is not stable")
    minors = alpha.minors()
    split = quadric_split(minors[0])
    for cand in split.factors:
        if all(linear_divides(cand, m) is not None for m in minors[1:]):
            return cand
    return None


def h_points(alpha, budget=2**32):
    """Galois orbits of the closure zeros of the quadric minors.

    Defined for stable modules off the common-factor locus, where the
    zero scheme has length 3; the orbit degrees therefore sum to at most
    3, and a deficit marks a non-reduced scheme.
    """
    if not alpha.is_stable():
        raise PresentationError("Kronecker module is not stable")
    if common_linear_factor(alpha) is not None:
        raise CommonFactorError("minors share a linear factor; zero scheme is a curve")
    orbits = _scan.zero_orbits(
        list(alpha.minors()), alpha.spec, budget=budget, stop_at_degree_sum=3
    )
    if sum(d for _, d in orbits) > 3:
        raise AssertionError("zero scheme of Kronecker minors exceeded length 3")
    return orbits


def flag_of(A, budget=2**32):
    """(mu(A), h_points(nu(A))) with containment of points in the curve
    enforced."""
    alpha = nu(A)
    points = h_points(alpha, budget=budget)
    curve = mu(A)
    for pt, _ in points:
        if not curve.eval(pt.coords).is_zero():
            raise AssertionError("zero-scheme point fell off the support curve")
    return Flag(curve, points)


def kronecker_through_points(points):
    """A stable Kronecker module whose minors cut exactly the three given
    (distinct, non-collinear, rational) points."""
    T = transform_to_standard(points)
    spec = T.spec
    x0 = HomogPoly.variable(0, spec)
    x1 = HomogPoly.variable(1, spec)
    x2 = HomogPoly.variable(2, spec)
    zero = HomogPoly.zero(1, spec)
    alpha_std = KroneckerModule([[x0, x0], [x1, zero], [zero, x2]])
    return alpha_std.substitute(T.inverse())


def standard_cofactors(spec):
    """(x1 x2, -x0 x2, -x0 x1): the minor column in standard position."""
    x0 = HomogPoly.variable(0, spec)
    x1 = HomogPoly.variable(1, spec)
    x2 = HomogPoly.variable(2, spec)
    return (x1 * x2, -(x0 * x2), -(x0 * x1))


def build_from_flag(curve, points):
    """A presentation with mu = <curve> and zero scheme = the given points.

    curve: a nonzero quartic over F_p vanishing at all three points;
    points: distinct, non-collinear, rational.  The quartic is decomposed
    as q0 d0 + q1 d1 + q2 d2 against the standard-position minor column
    after moving the points to the coordinate triangle; the linear system
    (15 equations, 18 unknowns) is solved deterministically by taking the
    first basic solution in the fixed monomial order, then everything is
    moved back.
    """
    if curve.degree != 4:
        raise ValueError("curve must be a quartic")
    if curve.spec.k != 1:
        raise FieldError("build_from_flag runs over the prime field")
    if curve.is_zero():
        raise ValueError("curve must be nonzero")
    pts = list(points)
    T = transform_to_standard(pts)  # validates count/distinct/collinear/rational
    for pt in pts:
        if not curve.eval(pt.coords).is_zero():
            raise ValueError(f"curve does not pass through {pt}")
    spec = curve.spec
    p = spec.p
    f_std = curve.substitute(T)
    d = standard_cofactors(spec)
    table = mul_index_table(2, 2)
    D = np.zeros((n_monomials(4), 18), dtype=np.int64)
    for i, di in enumerate(d):
        dres = di.residues()
        for a in range(6):
            if dres[a]:
                for m in range(6):
                    D[table[a, m], 6 * i + m] = (D[table[a, m], 6 * i + m] + dres[a]) % p
    x = _linalg.solve_basic(D, f_std.residues(), p)
    if x is None:
        raise AssertionError("decomposition against the minor column is inconsistent")
    quadrics = tuple(HomogPoly(2, [int(c) for c in x[6 * i : 6 * i + 6]], spec) for i in range(3))
    A_std = M0Presentation.standard_form(*quadrics)
    return A_std.substitute(T.inverse())


def same_orbit_test(A, B):
    """Certificate that A and B present the same class, given identical
    linear parts and proportional determinants, off the common-factor
    locus.

    The q-column of B is first rescaled so the determinants agree; the
    certificate (a, b) then satisfies qA - qB = a*z + b*w exactly.  A
    failure of the solve would contradict the syzygy structure of the
    minor column and raises SyzygyFailure.
    """
    A.validate()
    B.validate()
    if A.linear != B.linear:
        raise PresentationError("linear parts differ; align them with group moves first")
    if common_linear_factor(A.linear) is not None:
        raise CommonFactorError("minors share a linear factor; certificate not unique")
    detA = A.determinant()
    detB = B.determinant()
    lead = detA.leading_index()
    leadB = detB.leading_index()
    if lead != leadB:
        raise PresentationError("determinants are not proportional")
    lam = detA.coeffs[lead] * detB.coeffs[leadB].inverse()
    if detB.scale(lam) != detA:
        raise PresentationError("determinants are not proportional")
    spec = A.spec
    p = spec.p
    z = [A.linear.entries[i][0] for i in range(3)]
    w = [A.linear.entries[i][1] for i in range(3)]
    table = mul_index_table(1, 1)
    # 18 equations (3 quadrics x 6 coefficients), 6 unknowns (a, b coeffs)
    M = np.zeros((18, 6), dtype=np.int64)
    rhs = np.zeros(18, dtype=np.int64)
    for i in range(3):
        diff = A.quadrics[i] - B.quadrics[i].scale(lam)
        rhs[6 * i : 6 * i + 6] = diff.residues()
        zres = z[i].residues()
        wres = w[i].residues()
        for var in range(3):
            for a in range(3):
                M[6 * i + table[var, a], var] = (
                    M[6 * i + table[var, a], var] + zres[a]
                ) % p
                M[6 * i + table[var, a], 3 + var] = (
                    M[6 * i + table[var, a], 3 + var] + wres[a]
                ) % p
    x = _linalg.solve_basic(M, rhs, p)
    if x is None:
        raise SyzygyFailure(
            "no unipotent certificate for an equal-(linear, determinant) pair off "
            "the common-factor locus; this contradicts the syzygy structure. "
            f"A={A!r} B={B!r}"
        )
    a = HomogPoly(1, [int(c) for c in x[0:3]], spec)
    b = HomogPoly(1, [int(c) for c in x[3:6]], spec)
    cert = SyzygyCertificate(a, b)
    rescaledB = M0Presentation(B.linear, tuple(q.scale(lam) for q in B.quadrics))
    if cert.apply_to(rescaledB) != A:
        raise SyzygyFailure("certificate verification failed")  # pragma: no cover
    return cert


def fiber_twist(A, xi):
    """The twist A_xi on the common-factor normal form.

    Requires lin(A) == [[y1, y2], [y0, 0], [0, y0]] with y0, y1, y2
    independent; returns the presentation with quadric column
    (p0, p1 + xi*y2, p2 - xi*y1).  The determinant and the linear part do
    not move (the added column is xi times the extra syzygy (0, y2, -y1)
    of the minor column (y0^2, -y0 y1, -y0 y2)); both are enforced.
    """
    e = A.linear.entries
    y1, y2 = e[0][0], e[0][1]
    y0 = e[1][0]
    if not e[1][1].is_zero() or not e[2][0].is_zero() or e[2][1] != y0:
        raise PresentationError("linear part is not in the common-factor normal form")
    coeff_rows = np.array(
        [y0.residues(), y1.residues(), y2.residues()], dtype=np.int64
    )
    if _linalg.rank(coeff_rows, A.spec.p) != 3:
        raise PresentationError("normal form needs independent linear forms")
    if xi.degree != 1 or xi.spec != A.spec:
        raise ValueError("twist parameter must be a linear form over the same field")
    quad = (
        A.quadrics[0],
        A.quadrics[1] + xi * y2,
        A.quadrics[2] - xi * y1,
    )
    out = M0Presentation(A.linear, quad)
    if out.determinant() != A.determinant():  # pragma: no cover - identity
        raise AssertionError("twist changed the determinant")
    return out


def sing_curve_meets_Z(A):
    """True iff the support curve is singular somewhere on the zero scheme.

    Decided by the emptiness test on {quadric minors of the linear part}
    together with the three partials of the determinant.
    """
    if not isinstance(A, M0Presentation):
        raise TypeError("sing_curve_meets_Z is defined for the 3x3 shape")
    A.validate()
    det = A.determinant()
    gens = list(A.linear.minors()) + [det.partial(v) for v in range(3)]
    gens = [g for g in gens if not g.is_zero()]
    from .algebra import is_projectively_empty

    return not is_projectively_empty(gens)


def z_sing_meet_points(A, budget=2**32):
    """Galois orbits of the points where the curve is singular on the zero
    scheme (meaningful off the common-factor locus, where there are at
    most three)."""
    if not isinstance(A, M0Presentation):
        raise TypeError("z_sing_meet_points is defined for the 3x3 shape")
    A.validate()
    det = A.determinant()
    gens = list(A.linear.minors()) + [det.partial(v) for v in range(3)]
    gens = [g for g in gens if not g.is_zero()]
    return _scan.zero_orbits(gens, A.spec, budget=budget, stop_at_degree_sum=None)


def sample_rational_flag(spec, rng, max_tries=10000):
    """A random (quartic, three points) flag over F_p: distinct
    non-collinear rational points plus a uniform nonzero quartic through
    them (uniform over the 12-dimensional through-space)."""
    if spec.k != 1:
        raise FieldError("flags are sampled over the prime field")
    p = spec.p
    for _ in range(max_tries):
        pts = []
        while len(pts) < 3:
            raw = rng.integers(0, p, 3)
            if not raw.any():
                continue
            cand = ProjPoint([int(c) for c in raw], spec)
            if cand not in pts:
                pts.append(cand)
        if collinear(*pts):
            continue
        # quartics through the points: right kernel of the 3x15 value matrix
        from .algebra import monomial_exponents

        E = np.zeros((3, 15), dtype=np.int64)
        for r, pt in enumerate(pts):
            c = [int(x.coeffs[0]) for x in pt.coords]
            for idx, (i, j, l) in enumerate(monomial_exponents(4)):
                E[r, idx] = pow(c[0], i, p) * pow(c[1], j, p) * pow(c[2], l, p) % p
        basis = _linalg.nullspace(E, p)
        coeffs = rng.integers(0, p, basis.shape[0])
        vec = (coeffs @ basis) % p
        if not vec.any():
            continue
        return HomogPoly(4, [int(v) for v in vec], spec), tuple(pts)
    raise RuntimeError("failed to sample a flag")  # pragma: no cover
