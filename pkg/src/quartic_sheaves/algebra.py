"""Exact field and polynomial arithmetic underlying every other module.

Provides prime fields F_p (p >= 5), their extensions F_{p^k} for k <= 3,
dense homogeneous forms in x0, x1, x2, and the graded Macaulay-matrix
emptiness test that decides whether a set of forms has a common zero over
the algebraic closure.

Fixed conventions, relied on by all serializers and solvers:

* Monomials of degree d are ordered lexicographically with x0 > x1 > x2:
  the monomial x0^i x1^j x2^(d-i-j) sits at index T(d-i) + (d-i) - j with
  T(n) = n(n+1)/2, i.e. exponent pairs (i, j) descending.
* F_{p^k} = F_p[t]/(m(t)) where m is monic irreducible of degree k with
  the smallest base-p encoding of its non-leading coefficients; for k <= 3
  irreducibility is equivalent to having no roots in F_p.
* Field elements serialize as their residue list (a single residue when
  k = 1); polynomials as {"degree", "coeffs", "p", "k"}.

Characteristic 2 and 3 are rejected: quartic forms and their partial
derivatives need the scalars 2, 3, 4 to be invertible.

All values are immutable after construction and safe to share between
workers.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from . import _linalg


class FieldError(ValueError):
    """Invalid field parameters or mixed-field arithmetic."""


def is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@functools.lru_cache(maxsize=None)
def find_modulus(p, k):
    """Non-leading coefficients (c_0, ..., c_{k-1}) of the canonical
    monic irreducible t^k + c_{k-1} t^{k-1} + ... + c_0 over F_p.

    Canonical = smallest value of sum(c_i * p^i); deterministic so that
    serialized extension elements mean the same thing everywhere.
    """
    if k == 1:
        return ()
    for enc in range(p**k):
        coeffs = []
        e = enc
        for _ in range(k):
            coeffs.append(e % p)
            e //= p
        if all(_modpoly_eval(coeffs, a, p) != 0 for a in range(p)):
            return tuple(coeffs)
    raise FieldError(f"no irreducible polynomial found for p={p}, k={k}")


def _modpoly_eval(coeffs, a, p):
    # value of t^k + sum c_i t^i at t = a
    acc = pow(a, len(coeffs), p)
    for i, c in enumerate(coeffs):
        acc = (acc + c * pow(a, i, p)) % p
    return acc


@functools.lru_cache(maxsize=None)
def _theta_reduction(p, k, modulus):
    """Residues of t^j mod the modulus for j in [k, 2k-2], as tuples."""
    rows = {}
    cur = [(-c) % p for c in modulus]  # t^k
    rows[k] = tuple(cur)
    for j in range(k + 1, 2 * k - 1):
        shifted = [0] + cur[:-1]
        top = cur[-1]
        cur = [(shifted[i] + top * rows[k][i]) % p for i in range(k)]
        rows[j] = tuple(cur)
    return rows


@dataclass(frozen=True)
class FieldSpec:
    """Description of F_{p^k}: prime p >= 5, degree k in {1, 2, 3}."""

    p: int
    k: int = 1
    modulus: tuple = None

    def __post_init__(self):
        if not is_prime(self.p) or self.p < 5:
            raise FieldError(f"p must be a prime >= 5, got {self.p}")
        if self.k not in (1, 2, 3):
            raise FieldError(f"extension degree must be 1, 2 or 3, got {self.k}")
        if self.modulus is None:
            object.__setattr__(self, "modulus", find_modulus(self.p, self.k))
        else:
            object.__setattr__(self, "modulus", tuple(int(c) % self.p for c in self.modulus))
            if len(self.modulus) != (0 if self.k == 1 else self.k):
                raise FieldError("modulus length does not match extension degree")
            if self.k > 1 and any(
                _modpoly_eval(list(self.modulus), a, self.p) == 0 for a in range(self.p)
            ):
                raise FieldError("modulus polynomial has a root, not irreducible")

    @property
    def order(self):
        return self.p**self.k

    def element(self, coeffs):
        return FieldElem(self, coeffs)

    def from_int(self, a):
        return FieldElem(self, (a,) + (0,) * (self.k - 1))

    def from_index(self, idx):
        coeffs = []
        for _ in range(self.k):
            coeffs.append(idx % self.p)
            idx //= self.p
        return FieldElem(self, coeffs)

    @property
    def zero(self):
        return self.from_int(0)

    @property
    def one(self):
        return self.from_int(1)

    def random_element(self, rng):
        return FieldElem(self, [int(c) for c in rng.integers(0, self.p, self.k)])

    def elements(self):
        """All field elements in index order (0, 1, ..., p^k - 1)."""
        for idx in range(self.order):
            yield self.from_index(idx)

    def embeds_into(self, other):
        if self.p != other.p:
            return False
        if self.k == 1:
            return True
        return self.k == other.k and self.modulus == other.modulus

    def prime_subfield(self):
        return FieldSpec(self.p, 1)

    def to_json(self):
        return {"p": self.p, "k": self.k, "modulus_poly": list(self.modulus)}

    @classmethod
    def from_json(cls, obj):
        return cls(int(obj["p"]), int(obj.get("k", 1)), tuple(obj.get("modulus_poly", ())))


def common_spec(a, b):
    """The larger of two compatible specs (one must embed into the other)."""
    if a == b:
        return a
    if a.embeds_into(b):
        return b
    if b.embeds_into(a):
        return a
    raise FieldError(f"incompatible field specs {a} and {b}")


class FieldElem:
    """An element of F_{p^k}, stored as k residues of F_p[t]/(m)."""

    __slots__ = ("spec", "coeffs")

    def __init__(self, spec, coeffs):
        coeffs = tuple(int(c) % spec.p for c in coeffs)
        if len(coeffs) != spec.k:
            raise FieldError(f"expected {spec.k} residues, got {len(coeffs)}")
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElem is immutable")

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.spec == self.spec:
                return other
            if other.spec.embeds_into(self.spec):
                return other.embed(self.spec)
            raise FieldError("mixed field specs")
        if isinstance(other, (int, np.integer)):
            return self.spec.from_int(int(other))
        return NotImplemented

    def embed(self, target):
        if target == self.spec:
            return self
        if not self.spec.embeds_into(target):
            raise FieldError(f"no embedding of {self.spec} into {target}")
        return FieldElem(target, self.coeffs + (0,) * (target.k - self.spec.k))

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.spec, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.spec, [a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other):
        return -(self - other)

    def __neg__(self):
        return FieldElem(self.spec, [-a for a in self.coeffs])

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p, k = self.spec.p, self.spec.k
        if k == 1:
            return FieldElem(self.spec, (self.coeffs[0] * o.coeffs[0] % p,))
        conv = [0] * (2 * k - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    conv[i + j] += a * b
        red = _theta_reduction(p, k, self.spec.modulus)
        out = conv[:k]
        for j in range(k, 2 * k - 1):
            if conv[j]:
                row = red[j]
                for i in range(k):
                    out[i] += conv[j] * row[i]
        return FieldElem(self.spec, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        n = int(n)
        if n < 0:
            return self.inverse() ** (-n)
        acc = self.spec.one
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return self ** (self.spec.order - 2)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def frobenius(self):
        return self**self.spec.p

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def in_prime_field(self):
        return all(c == 0 for c in self.coeffs[1:])

    @property
    def index(self):
        idx = 0
        for c in reversed(self.coeffs):
            idx = idx * self.spec.p + c
        return idx

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.spec == other.spec and self.coeffs == other.coeffs
        if isinstance(other, (int, np.integer)):
            return self == self.spec.from_int(int(other))
        return NotImplemented

    def __hash__(self):
        return hash((self.spec, self.coeffs))

    def __repr__(self):
        if self.spec.k == 1:
            return f"F{self.spec.p}({self.coeffs[0]})"
        return f"F{self.spec.p}^{self.spec.k}{list(self.coeffs)}"

    def to_json(self):
        return self.coeffs[0] if self.spec.k == 1 else list(self.coeffs)

    @classmethod
    def from_json(cls, obj, spec):
        if isinstance(obj, (int, np.integer)):
            return spec.from_int(int(obj))
        return cls(spec, obj)


def field_sqrt(a):
    """A square root of a in F_q (q odd), or None if a is a non-residue.

    Tonelli-Shanks; the needed non-residue is found by scanning elements
    in index order, so the returned root is deterministic.
    """
    spec = a.spec
    q = spec.order
    if a.is_zero():
        return a
    if a ** ((q - 1) // 2) != spec.one:
        return None
    if q % 4 == 3:
        return a ** ((q + 1) // 4)
    # factor q - 1 = s * 2^e
    s, e = q - 1, 0
    while s % 2 == 0:
        s //= 2
        e += 1
    n = None
    for idx in range(2, q):
        cand = spec.from_index(idx)
        if not cand.is_zero() and cand ** ((q - 1) // 2) != spec.one:
            n = cand
            break
    x = a ** ((s + 1) // 2)
    b = a**s
    g = n**s
    r = e
    while True:
        t = b
        m = 0
        while t != spec.one:
            t = t * t
            m += 1
        if m == 0:
            return x
        gs = g ** (2 ** (r - m - 1))
        g = gs * gs
        x = x * gs
        b = b * g
        r = m


# ---------------------------------------------------------------------------
# monomial bookkeeping


def n_monomials(d):
    return (d + 1) * (d + 2) // 2


@functools.lru_cache(maxsize=None)
def monomial_exponents(d):
    """Exponent triples (i, j, l), i+j+l = d, in the fixed order."""
    out = []
    for i in range(d, -1, -1):
        for j in range(d - i, -1, -1):
            out.append((i, j, d - i - j))
    return tuple(out)


def monomial_index(d, i, j):
    r = d - i
    return r * (r + 1) // 2 + r - j


@functools.lru_cache(maxsize=None)
def mul_index_table(r, s):
    """(n_r, n_s) table: index of the degree-(r+s) product monomial."""
    er = monomial_exponents(r)
    es = monomial_exponents(s)
    out = np.empty((len(er), len(es)), dtype=np.int64)
    for a, (i1, j1, _) in enumerate(er):
        for b, (i2, j2, _) in enumerate(es):
            out[a, b] = monomial_index(r + s, i1 + i2, j1 + j2)
    return out


@functools.lru_cache(maxsize=None)
def partial_map(d, var):
    """Differentiation of the degree-d piece: (src, dst, mult) arrays."""
    src, dst, mult = [], [], []
    for idx, (i, j, l) in enumerate(monomial_exponents(d)):
        e = (i, j, l)[var]
        if e:
            ii, jj = i, j
            if var == 0:
                ii -= 1
            elif var == 1:
                jj -= 1
            src.append(idx)
            dst.append(monomial_index(d - 1, ii, jj))
            mult.append(e)
    return np.array(src), np.array(dst), np.array(mult)


class HomogPoly:
    """Dense homogeneous form of fixed degree in x0, x1, x2."""

    __slots__ = ("degree", "spec", "coeffs")

    def __init__(self, degree, coeffs, spec):
        coeffs = tuple(
            c if isinstance(c, FieldElem) else spec.from_int(int(c)) for c in coeffs
        )
        if len(coeffs) != n_monomials(degree):
            raise ValueError(
                f"degree {degree} needs {n_monomials(degree)} coefficients, got {len(coeffs)}"
            )
        for c in coeffs:
            if c.spec != spec:
                raise FieldError("coefficient from a different field")
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("HomogPoly is immutable")

    # -- constructors

    @classmethod
    def zero(cls, degree, spec):
        return cls(degree, (0,) * n_monomials(degree), spec)

    @classmethod
    def from_terms(cls, degree, terms, spec):
        """terms: mapping (i, j, l) -> coefficient."""
        coeffs = [0] * n_monomials(degree)
        for (i, j, l), c in terms.items():
            if i + j + l != degree:
                raise ValueError(f"exponent {(i, j, l)} has wrong degree")
            coeffs[monomial_index(degree, i, j)] = c
        return cls(degree, coeffs, spec)

    @classmethod
    def variable(cls, var, spec):
        e = [0, 0, 0]
        e[var] = 1
        return cls.from_terms(1, {tuple(e): 1}, spec)

    @classmethod
    def random(cls, degree, spec, rng):
        if spec.k != 1:
            raise FieldError("random forms are drawn over the prime field")
        return cls(degree, [int(c) for c in rng.integers(0, spec.p, n_monomials(degree))], spec)

    @classmethod
    def from_residues(cls, degree, vec, spec):
        return cls(degree, [int(c) for c in vec], spec)

    # -- queries

    def is_zero(self):
        return all(c.is_zero() for c in self.coeffs)

    def coeff(self, exps):
        i, j, l = exps
        if i + j + l != self.degree:
            raise ValueError("exponent triple has wrong degree")
        return self.coeffs[monomial_index(self.degree, i, j)]

    def residues(self):
        """Coefficients as an int64 vector; only valid over a prime field."""
        if self.spec.k != 1:
            raise FieldError("residue vector is only defined over F_p")
        return np.array([c.coeffs[0] for c in self.coeffs], dtype=np.int64)

    def leading_index(self):
        for idx, c in enumerate(self.coeffs):
            if not c.is_zero():
                return idx
        return None

    # -- arithmetic

    def _check_compatible(self, other):
        if self.spec != other.spec:
            raise FieldError("mixed field specs in polynomial arithmetic")

    def __add__(self, other):
        self._check_compatible(other)
        if self.degree != other.degree:
            raise ValueError("cannot add forms of different degrees")
        return HomogPoly(
            self.degree, [a + b for a, b in zip(self.coeffs, other.coeffs)], self.spec
        )

    def __sub__(self, other):
        self._check_compatible(other)
        if self.degree != other.degree:
            raise ValueError("cannot subtract forms of different degrees")
        return HomogPoly(
            self.degree, [a - b for a, b in zip(self.coeffs, other.coeffs)], self.spec
        )

    def __neg__(self):
        return HomogPoly(self.degree, [-a for a in self.coeffs], self.spec)

    def scale(self, c):
        if not isinstance(c, FieldElem):
            c = self.spec.from_int(int(c))
        return HomogPoly(self.degree, [c * a for a in self.coeffs], self.spec)

    def __mul__(self, other):
        if isinstance(other, (int, np.integer, FieldElem)):
            return self.scale(other)
        self._check_compatible(other)
        table = mul_index_table(self.degree, other.degree)
        out_deg = self.degree + other.degree
        if self.spec.k == 1:
            p = self.spec.p
            out = np.zeros(n_monomials(out_deg), dtype=np.int64)
            prod = np.outer(self.residues(), other.residues())
            np.add.at(out, table.ravel(), prod.ravel())
            return HomogPoly.from_residues(out_deg, out % p, self.spec)
        out = [self.spec.zero] * n_monomials(out_deg)
        for a, ca in enumerate(self.coeffs):
            if ca.is_zero():
                continue
            for b, cb in enumerate(other.coeffs):
                if not cb.is_zero():
                    idx = table[a, b]
                    out[idx] = out[idx] + ca * cb
        return HomogPoly(out_deg, out, self.spec)

    __rmul__ = __mul__

    def partial(self, var):
        """Formal partial derivative with respect to x_var."""
        if self.degree == 0:
            raise ValueError("cannot differentiate a degree-0 form")
        src, dst, mult = partial_map(self.degree, var)
        out = [self.spec.zero] * n_monomials(self.degree - 1)
        for s, t, m in zip(src, dst, mult):
            out[t] = out[t] + self.coeffs[s] * int(m)
        return HomogPoly(self.degree - 1, out, self.spec)

    def eval(self, point):
        """Value at a point given as 3 coordinates over a compatible field.

        Coordinates may be FieldElems over F_{p^k} (the form's coefficients
        are embedded) or plain ints.  Homogeneous: eval at lam*pt equals
        lam^degree times eval at pt.
        """
        coords = list(point)
        if len(coords) != 3:
            raise ValueError("a plane point has 3 coordinates")
        target = self.spec
        for c in coords:
            if isinstance(c, FieldElem):
                target = common_spec(target, c.spec)
        coords = [
            c.embed(target) if isinstance(c, FieldElem) else target.from_int(int(c))
            for c in coords
        ]
        if all(c.is_zero() for c in coords):
            raise ValueError("evaluation point must be nonzero")
        d = self.degree
        pows = []
        for c in coords:
            row = [target.one]
            for _ in range(d):
                row.append(row[-1] * c)
            pows.append(row)
        acc = target.zero
        for (i, j, l), c in zip(monomial_exponents(d), self.coeffs):
            if not c.is_zero():
                acc = acc + c.embed(target) * pows[0][i] * pows[1][j] * pows[2][l]
        return acc

    def substitute(self, T):
        """The composite form x -> self(T x) for an invertible T over F_p.

        Composition convention: substitute(f, T1 @ T2) equals
        substitute(substitute(f, T1), T2).
        """
        T = np.asarray(getattr(T, "matrix", T), dtype=np.int64) % self.spec.p
        if T.shape != (3, 3):
            raise ValueError("substitution matrix must be 3x3")
        _linalg.inv_3x3(T, self.spec.p)  # raises if singular
        rows = [
            HomogPoly(1, [int(T[m, 0]), int(T[m, 1]), int(T[m, 2])], self.spec)
            for m in range(3)
        ]
        d = self.degree
        pows = []
        for lf in rows:
            row = [HomogPoly(0, [1], self.spec)]
            for _ in range(d):
                row.append(row[-1] * lf)
            pows.append(row)
        acc = HomogPoly.zero(d, self.spec)
        for (i, j, l), c in zip(monomial_exponents(d), self.coeffs):
            if not c.is_zero():
                acc = acc + (pows[0][i] * pows[1][j] * pows[2][l]).scale(c)
        return acc

    def frobenius(self):
        return HomogPoly(self.degree, [c.frobenius() for c in self.coeffs], self.spec)

    def monic_canonical(self):
        """Scale so the first nonzero coefficient is 1 (class representative)."""
        lead = self.leading_index()
        if lead is None:
            raise ValueError("the zero form has no canonical representative")
        return self.scale(self.coeffs[lead].inverse())

    # -- dunder plumbing

    def __eq__(self, other):
        if not isinstance(other, HomogPoly):
            return NotImplemented
        return (
            self.spec == other.spec
            and self.degree == other.degree
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.spec, self.degree, self.coeffs))

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for (i, j, l), c in zip(monomial_exponents(self.degree), self.coeffs):
            if c.is_zero():
                continue
            mono = "*".join(
                f"x{v}" + (f"^{e}" if e > 1 else "")
                for v, e in enumerate((i, j, l))
                if e > 0
            )
            if not mono:
                mono = "1"
            if c == self.spec.one:
                parts.append(mono)
            else:
                cs = str(c.coeffs[0]) if self.spec.k == 1 else str(list(c.coeffs))
                parts.append(f"{cs}*{mono}" if mono != "1" else cs)
        return " + ".join(parts)

    def __repr__(self):
        return f"HomogPoly({self!s} over F_{self.spec.p}^{self.spec.k})"

    def to_json(self):
        return {
            "degree": self.degree,
            "coeffs": [c.to_json() for c in self.coeffs],
            "p": self.spec.p,
            "k": self.spec.k,
        }

    @classmethod
    def from_json(cls, obj, spec=None):
        if spec is None:
            spec = FieldSpec(int(obj["p"]), int(obj.get("k", 1)))
        coeffs = [FieldElem.from_json(c, spec) for c in obj["coeffs"]]
        return cls(int(obj["degree"]), coeffs, spec)


# module-level operation aliases matching the functional surface


def poly_mul(a, b):
    return a * b


def partial(f, var):
    return f.partial(var)


def substitute(f, T):
    return f.substitute(T)


def eval_poly(f, point):
    return f.eval(point)


# ---------------------------------------------------------------------------
# generic small linear algebra over FieldElem matrices (extension fields)


def rank_ext(rows):
    """Rank of a small matrix of FieldElems (list of row lists)."""
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if not rows[i][c].is_zero():
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def solve_ext(rows, rhs):
    """First basic solution over a field, or None if inconsistent."""
    rows = [list(r) + [v] for r, v in zip(rows, rhs)]
    if not rows:
        return []
    ncols = len(rows[0]) - 1
    spec = rows[0][0].spec
    r = 0
    pivcols = []
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if not rows[i][c].is_zero():
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivcols.append(c)
        r += 1
        if r == len(rows):
            break
    for i in range(r, len(rows)):
        if not rows[i][-1].is_zero():
            return None
    x = [spec.zero] * ncols
    for i, c in enumerate(pivcols):
        x[c] = rows[i][-1]
    return x


# ---------------------------------------------------------------------------
# Macaulay emptiness test


def macaulay_bound(degrees):
    """Regularity bound for the plane: sum of (d-1) over the three largest
    generator degrees, plus one.  Valid cutoff for the effective
    Nullstellensatz in P^2."""
    top = sorted(degrees, reverse=True)[:3]
    return sum(d - 1 for d in top) + 1


def macaulay_matrix(gens, N=None):
    """Rows spanning the degree-N piece of the ideal (gens over F_p).

    Row (g, m) holds the coefficients of m*g for every monomial m of
    degree N - deg(g).  Returns (matrix, N).
    """
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        raise ValueError("need at least one nonzero generator")
    spec = gens[0].spec
    for g in gens:
        if g.spec != spec:
            raise FieldError("generators over mixed fields")
    if N is None:
        N = macaulay_bound([g.degree for g in gens])
    ncols = n_monomials(N)
    if spec.k == 1:
        rows = []
        for g in gens:
            table = mul_index_table(N - g.degree, g.degree)
            vec = g.residues()
            block = np.zeros((table.shape[0], ncols), dtype=np.int64)
            np.add.at(
                block,
                (np.repeat(np.arange(table.shape[0]), table.shape[1]), table.ravel()),
                np.tile(vec, table.shape[0]),
            )
            rows.append(block % spec.p)
        return np.vstack(rows), N
    rows = []
    for g in gens:
        table = mul_index_table(N - g.degree, g.degree)
        for s in range(table.shape[0]):
            row = [spec.zero] * ncols
            for b, c in enumerate(g.coeffs):
                if not c.is_zero():
                    row[table[s, b]] = row[table[s, b]] + c
            rows.append(row)
    return rows, N


def is_projectively_empty(gens):
    """True iff the generators have no common zero over the closure.

    Decided via the graded piece in degree N = macaulay_bound: the zero
    scheme in P^2 is empty iff that piece is the full space of degree-N
    forms.  With fewer than three (nonzero) generators the zero scheme is
    never empty, so the answer is False without any rank computation.
    """
    nonzero = [g for g in gens if not g.is_zero()]
    if not nonzero:
        raise ValueError("emptiness test needs at least one nonzero generator")
    spec = nonzero[0].spec
    for g in nonzero:
        if g.spec != spec:
            raise FieldError("generators over mixed fields")
    if len(nonzero) < 3:
        return False
    mat, N = macaulay_matrix(nonzero)
    if spec.k == 1:
        return _linalg.rank(mat, spec.p) == n_monomials(N)
    return rank_ext(mat) == n_monomials(N)


# ---------------------------------------------------------------------------
# quadric classification


@dataclass(frozen=True)
class QuadricSplit:
    """Factorization type of a nonzero quadric over F_p.

    kind is one of "double_line" (rank 1), "split_lines" (rank 2, factors
    rational), "conjugate_lines" (rank 2, factors conjugate over F_{p^2}),
    "irreducible" (rank 3).  factors holds the linear forms when they
    exist, monic-canonicalized, with q proportional to their product.
    """

    kind: str
    rank: int
    factors: tuple


def quadric_split(q):
    """Classify a quadric by the rank of its symmetric Gram matrix."""
    if q.degree != 2:
        raise ValueError("quadric_split expects a degree-2 form")
    if q.is_zero():
        raise ValueError("quadric_split expects a nonzero form")
    if q.spec.k != 1:
        raise FieldError("quadric classification runs over the prime field")
    p = q.spec.p
    spec = q.spec
    inv2 = pow(2, p - 2, p)
    c = {e: int(v.coeffs[0]) for e, v in zip(monomial_exponents(2), q.coeffs)}
    S = np.array(
        [
            [c[(2, 0, 0)], c[(1, 1, 0)] * inv2, c[(1, 0, 1)] * inv2],
            [c[(1, 1, 0)] * inv2, c[(0, 2, 0)], c[(0, 1, 1)] * inv2],
            [c[(1, 0, 1)] * inv2, c[(0, 1, 1)] * inv2, c[(0, 0, 2)]],
        ],
        dtype=np.int64,
    ) % p
    rk = _linalg.rank(S, p)
    if rk == 3:
        return QuadricSplit("irreducible", 3, ())
    if rk == 1:
        row = next(r for r in S if any(r % p))
        line = HomogPoly(1, [int(v) for v in row], spec).monic_canonical()
        return QuadricSplit("double_line", 1, (line,))
    # rank 2: two distinct lines through the radical point
    kernel = _linalg.nullspace(S, p)
    n = kernel[0]
    basis = None
    for a in range(3):
        for b in range(a + 1, 3):
            P = np.zeros((3, 3), dtype=np.int64)
            P[a, 0] = 1
            P[b, 1] = 1
            P[:, 2] = n
            try:
                Pinv = _linalg.inv_3x3(P, p)
            except ZeroDivisionError:
                continue
            basis = (P, Pinv)
            break
        if basis:
            break
    P, Pinv = basis
    ea = spec.from_int
    e0 = [int(v) for v in P[:, 0]]
    e1 = [int(v) for v in P[:, 1]]
    A = q.eval([ea(v) for v in e0]) if any(e0) else spec.zero
    C = q.eval([ea(v) for v in e1])
    AB = q.eval([ea(x + y) for x, y in zip(e0, e1)])
    B = AB - A - C
    # linear functionals u, v dual to the basis: rows 0, 1 of Pinv
    u = HomogPoly(1, [int(v) for v in Pinv[0]], spec)
    v = HomogPoly(1, [int(v) for v in Pinv[1]], spec)
    if A.is_zero():
        l1 = v
        l2 = u.scale(B) + v.scale(C)
        return QuadricSplit(
            "split_lines", 2, (l1.monic_canonical(), l2.monic_canonical())
        )
    disc = B * B - spec.from_int(4) * A * C
    root = field_sqrt(disc)
    if root is not None:
        inv2a = (spec.from_int(2) * A).inverse()
        t1 = (-B + root) * inv2a
        t2 = (-B - root) * inv2a
        l1 = (u - v.scale(t1)).monic_canonical()
        l2 = (u - v.scale(t2)).monic_canonical()
        return QuadricSplit("split_lines", 2, (l1, l2))
    ext = FieldSpec(p, 2)
    disc_ext = disc.embed(ext)
    root = field_sqrt(disc_ext)
    inv2a = (spec.from_int(2) * A).embed(ext).inverse()
    t1 = (-B.embed(ext) + root) * inv2a
    t2 = (-B.embed(ext) - root) * inv2a
    u_ext = HomogPoly(1, [cc.embed(ext) for cc in u.coeffs], ext)
    v_ext = HomogPoly(1, [cc.embed(ext) for cc in v.coeffs], ext)
    l1 = (u_ext - v_ext.scale(t1)).monic_canonical()
    l2 = (u_ext - v_ext.scale(t2)).monic_canonical()
    return QuadricSplit("conjugate_lines", 2, (l1, l2))


def embed_poly(f, target):
    """Reinterpret a form over a larger compatible field."""
    if f.spec == target:
        return f
    return HomogPoly(f.degree, [c.embed(target) for c in f.coeffs], target)


def linear_divides(line, f):
    """Quotient f / line if the linear form divides f, else None.

    The two forms may live over different compatible fields; the quotient
    comes back over the common one.
    """
    if line.degree != 1 or line.is_zero():
        raise ValueError("divisor must be a nonzero linear form")
    spec = common_spec(line.spec, f.spec)
    line = embed_poly(line, spec)
    f = embed_poly(f, spec)
    d = f.degree - 1
    if d < 0:
        return None
    table = mul_index_table(1, d)
    rows = [[spec.zero] * n_monomials(d) for _ in range(n_monomials(f.degree))]
    for a, ca in enumerate(line.coeffs):
        if ca.is_zero():
            continue
        for b in range(n_monomials(d)):
            rows[table[a, b]][b] = rows[table[a, b]][b] + ca
    sol = solve_ext(rows, list(f.coeffs))
    if sol is None:
        return None
    g = HomogPoly(d, sol, spec)
    return g if (line * g) == f else None
