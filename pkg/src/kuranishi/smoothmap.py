"""Smooth maps: exact polynomial parts plus compactly supported bump terms.

A map is a finite sum of polynomial components and "bump terms".  Each bump
term multiplies a vector of polynomials by a product of radial profiles, where
a profile measures the squared distance |L(x) - c|^2 along an affine map L.
This family is closed under addition, linear postcomposition, and affine
precomposition, which is exactly what the perturbation engine needs to push
perturbations between charts in closed form.

Profile shapes:

* ``bump``:     exp(1 - 1/(1 - t)) with t = |L(x)-c|^2 / r_outer^2, zero for t >= 1.
* ``plateau``:  identically 1 for |L(x)-c| <= r_inner, identically 0 for
                |L(x)-c| >= r_outer, a smooth monotone step in between.

Both are C-infinity; values and first derivatives are evaluated by exact
formulas (up to floating point roundoff).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from ._util import as_fraction, frac_vec
from .poly import Polynomial

# Safe upper bounds for |d profile / d t| used in Lipschitz estimates;
# verified by dense sampling in the test suite.
BUMP_SLOPE_BOUND = 1.5  # true max is 4/e ~ 1.4715
PLATEAU_SLOPE_BOUND = 2.5  # true max is 2.0 at the midpoint


def _bump_profile(t: float) -> float:
    if t >= 1.0:
        return 0.0
    return math.exp(1.0 - 1.0 / (1.0 - t))


def _bump_profile_dt(t: float) -> float:
    if t >= 1.0:
        return 0.0
    return -_bump_profile(t) / (1.0 - t) ** 2


def _g(u: float) -> float:
    return math.exp(-1.0 / u) if u > 0.0 else 0.0


def _plateau(s: float) -> float:
    if s <= 0.0:
        return 1.0
    if s >= 1.0:
        return 0.0
    a, b = _g(1.0 - s), _g(s)
    return a / (a + b)


def _plateau_ds(s: float) -> float:
    if s <= 0.0 or s >= 1.0:
        return 0.0
    a, b = _g(1.0 - s), _g(s)
    da = -a / (1.0 - s) ** 2
    db = b / s**2
    return (da * b - a * db) / (a + b) ** 2


@dataclass(frozen=True)
class Profile:
    """Radial factor along the affine map L(x) = matrix @ x + offset."""

    kind: str  # "bump" | "plateau"
    matrix: tuple  # p x n rational rows
    offset: tuple  # p rationals
    center: tuple  # p rationals
    r_inner: Fraction  # unused for "bump"
    r_outer: Fraction

    def __post_init__(self):
        if self.kind not in ("bump", "plateau"):
            raise ValueError(f"unknown profile kind {self.kind!r}")
        if self.r_outer <= 0:
            raise ValueError("profile outer radius must be positive")
        if self.kind == "plateau" and not 0 <= self.r_inner < self.r_outer:
            raise ValueError("plateau needs 0 <= r_inner < r_outer")

    @property
    def nvars(self) -> int:
        return len(self.matrix[0]) if self.matrix else 0

    def sq_dist_poly(self) -> Polynomial:
        """|L(x) - c|^2 as an exact polynomial."""
        n = self.nvars
        total = Polynomial.constant(n, 0)
        for row, off, c in zip(self.matrix, self.offset, self.center):
            lin = Polynomial.constant(n, as_fraction(off) - as_fraction(c))
            for j, a in enumerate(row):
                a = as_fraction(a)
                if a:
                    lin = lin + a * Polynomial.variable(n, j)
            total = total + lin * lin
        return total

    def value_and_dq(self, q: float) -> tuple:
        """Profile value and derivative with respect to q = |L(x)-c|^2."""
        if self.kind == "bump":
            r2 = float(self.r_outer) ** 2
            t = q / r2
            return _bump_profile(t), _bump_profile_dt(t) / r2
        a2 = float(self.r_inner) ** 2
        b2 = float(self.r_outer) ** 2
        s = (q - a2) / (b2 - a2)
        return _plateau(s), _plateau_ds(s) / (b2 - a2)

    def compose_affine(self, A, b) -> "Profile":
        """Profile of x ↦ self evaluated at A x + b (A rational rows, b rational)."""
        A = [frac_vec(r) for r in A]
        b = frac_vec(b)
        n_new = len(A[0]) if A else 0
        rows, offs = [], []
        for row, off in zip(self.matrix, self.offset):
            row = frac_vec(row)
            new_row = tuple(
                sum((row[i] * A[i][j] for i in range(len(row))), Fraction(0))
                for j in range(n_new)
            )
            new_off = as_fraction(off) + sum(
                (row[i] * b[i] for i in range(len(row))), Fraction(0)
            )
            rows.append(new_row)
            offs.append(new_off)
        return Profile(self.kind, tuple(rows), tuple(offs), self.center, self.r_inner, self.r_outer)

    def slope_bound(self) -> float:
        if self.kind == "bump":
            return BUMP_SLOPE_BOUND / float(self.r_outer) ** 2
        return PLATEAU_SLOPE_BOUND / (float(self.r_outer) ** 2 - float(self.r_inner) ** 2)


def ball_profile(center, radius, kind="bump", r_inner=None) -> Profile:
    """Profile of the plain Euclidean ball |x - c| < radius."""
    center = frac_vec(center)
    n = len(center)
    eye = tuple(tuple(Fraction(1) if i == j else Fraction(0) for j in range(n)) for i in range(n))
    zero = (Fraction(0),) * n
    radius = as_fraction(radius)
    inner = as_fraction(r_inner) if r_inner is not None else Fraction(0)
    return Profile(kind, eye, zero, center, inner, radius)


@dataclass(frozen=True)
class BumpTerm:
    """(product of profiles) * (vector of polynomial coefficients)."""

    profiles: tuple  # tuple[Profile, ...]
    coeffs: tuple  # tuple[Polynomial, ...], length = codomain_dim

    def value(self, x: np.ndarray) -> np.ndarray:
        p = 1.0
        for prof in self.profiles:
            q = float(prof.sq_dist_poly()(tuple(x)))
            v, _ = prof.value_and_dq(q)
            if v == 0.0:
                return np.zeros(len(self.coeffs))
            p *= v
        return p * np.array([float(c(tuple(x))) for c in self.coeffs])

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        xs = tuple(x)
        n = self.coeffs[0].nvars if self.coeffs else len(x)
        vals, dqs, grads = [], [], []
        for prof in self.profiles:
            qpoly = prof.sq_dist_poly()
            q = float(qpoly(xs))
            v, dq = prof.value_and_dq(q)
            vals.append(v)
            dqs.append(dq)
            grads.append(np.array([float(g(xs)) for g in qpoly.gradient()]))
        p = float(np.prod(vals)) if vals else 1.0
        cvals = np.array([float(c(xs)) for c in self.coeffs])
        cjac = np.array([[float(c.derivative(j)(xs)) for j in range(n)] for c in self.coeffs])
        if p == 0.0 and all(v == 0.0 for v in vals):
            return np.zeros((len(self.coeffs), n))
        # d/dx of the profile product
        dp = np.zeros(n)
        for k in range(len(self.profiles)):
            rest = 1.0
            for l, v in enumerate(vals):
                if l != k:
                    rest *= v
            dp += rest * dqs[k] * grads[k]
        return np.outer(cvals, dp) + p * cjac

    def compose_affine(self, A, b) -> "BumpTerm":
        A_f = [frac_vec(r) for r in A]
        b_f = frac_vec(b)
        n_new = len(A_f[0]) if A_f else 0
        args = []
        for i in range(len(A_f)):
            lin = Polynomial.constant(n_new, b_f[i])
            for j in range(n_new):
                if A_f[i][j]:
                    lin = lin + A_f[i][j] * Polynomial.variable(n_new, j)
            args.append(lin)
        return BumpTerm(
            tuple(p.compose_affine(A, b) for p in self.profiles),
            tuple(c.compose(args) for c in self.coeffs),
        )

    def sup_bound(self, box) -> float:
        """Upper bound for the max-abs of this term over a box (profiles <= 1)."""
        worst = 0.0
        for c in self.coeffs:
            lo, hi = c.interval(box)
            worst = max(worst, float(max(abs(lo), abs(hi))))
        return worst


class SmoothMap:
    """A map R^n -> R^m: polynomial components plus bump terms."""

    __slots__ = ("domain_dim", "codomain_dim", "components", "bump_terms")

    def __init__(self, domain_dim, codomain_dim, components, bump_terms=()):
        self.domain_dim = int(domain_dim)
        self.codomain_dim = int(codomain_dim)
        components = tuple(components)
        if len(components) != self.codomain_dim:
            raise ValueError("wrong number of components")
        for c in components:
            if c.nvars != self.domain_dim:
                raise ValueError("component has wrong variable count")
        self.components = components
        self.bump_terms = tuple(bump_terms)
        for t in self.bump_terms:
            if len(t.coeffs) != self.codomain_dim:
                raise ValueError("bump term has wrong coefficient count")

    # -- constructors ---------------------------------------------------

    @staticmethod
    def from_polynomials(polys: Sequence[Polynomial]) -> "SmoothMap":
        polys = list(polys)
        n = polys[0].nvars if polys else 0
        return SmoothMap(n, len(polys), polys)

    @staticmethod
    def zero(domain_dim: int, codomain_dim: int) -> "SmoothMap":
        return SmoothMap(
            domain_dim, codomain_dim, [Polynomial.constant(domain_dim, 0)] * codomain_dim
        )

    @staticmethod
    def identity(dim: int) -> "SmoothMap":
        return SmoothMap(dim, dim, [Polynomial.variable(dim, i) for i in range(dim)])

    @staticmethod
    def affine(A, b) -> "SmoothMap":
        A = [frac_vec(r) for r in A]
        b = frac_vec(b)
        n = len(A[0]) if A else 0
        comps = []
        for row, off in zip(A, b):
            p = Polynomial.constant(n, off)
            for j, a in enumerate(row):
                if a:
                    p = p + a * Polynomial.variable(n, j)
            comps.append(p)
        return SmoothMap(n, len(A), comps)

    # -- properties -------------------------------------------------------

    @property
    def is_polynomial(self) -> bool:
        return not self.bump_terms

    def __eq__(self, other):
        if not isinstance(other, SmoothMap):
            return NotImplemented
        return (
            self.domain_dim == other.domain_dim
            and self.codomain_dim == other.codomain_dim
            and self.components == other.components
            and self.bump_terms == other.bump_terms
        )

    def __repr__(self):
        tail = f" + {len(self.bump_terms)} bump terms" if self.bump_terms else ""
        return (
            f"SmoothMap({self.domain_dim}->{self.codomain_dim}: "
            f"[{', '.join(c.to_string() for c in self.components)}]{tail})"
        )

    # -- evaluation --------------------------------------------------------

    def __call__(self, point):
        """Exact tuple of Fractions for rational points of a polynomial map,
        otherwise a float numpy vector."""
        if self.is_polynomial and all(isinstance(x, (Fraction, int)) for x in point):
            return tuple(c(tuple(point)) for c in self.components)
        return self.eval_float(np.asarray([float(x) for x in point]))

    def eval_float(self, x: np.ndarray) -> np.ndarray:
        out = np.array([float(c(tuple(x))) for c in self.components])
        for t in self.bump_terms:
            out = out + t.value(x)
        return out

    def jacobian(self, point) -> np.ndarray:
        x = np.asarray([float(v) for v in point])
        n, m = self.domain_dim, self.codomain_dim
        jac = np.array(
            [[float(c.derivative(j)(tuple(x))) for j in range(n)] for c in self.components]
        ).reshape(m, n)
        for t in self.bump_terms:
            jac = jac + t.jacobian(x)
        return jac

    def jacobian_polynomials(self):
        """Symbolic Jacobian of the polynomial part (exact)."""
        return [
            [c.derivative(j) for j in range(self.domain_dim)] for c in self.components
        ]

    # -- algebra -------------------------------------------------------------

    def __add__(self, other: "SmoothMap") -> "SmoothMap":
        if (self.domain_dim, self.codomain_dim) != (other.domain_dim, other.codomain_dim):
            raise ValueError("dimension mismatch in sum")
        comps = [a + b for a, b in zip(self.components, other.components)]
        return SmoothMap(self.domain_dim, self.codomain_dim, comps, self.bump_terms + other.bump_terms)

    def scale(self, c) -> "SmoothMap":
        c = as_fraction(c)
        comps = [c * p for p in self.components]
        terms = tuple(
            BumpTerm(t.profiles, tuple(c * q for q in t.coeffs)) for t in self.bump_terms
        )
        return SmoothMap(self.domain_dim, self.codomain_dim, comps, terms)

    def postcompose_linear(self, M) -> "SmoothMap":
        """M @ self for a rational matrix M (m_out x codomain_dim)."""
        M = [frac_vec(r) for r in M]
        m_out = len(M)
        comps = []
        for row in M:
            p = Polynomial.constant(self.domain_dim, 0)
            for a, c in zip(row, self.components):
                if a:
                    p = p + a * c
            comps.append(p)
        terms = []
        for t in self.bump_terms:
            new_coeffs = []
            for row in M:
                p = Polynomial.constant(self.domain_dim, 0)
                for a, c in zip(row, t.coeffs):
                    if a:
                        p = p + a * c
                new_coeffs.append(p)
            terms.append(BumpTerm(t.profiles, tuple(new_coeffs)))
        return SmoothMap(self.domain_dim, m_out, comps, tuple(terms))

    def compose_affine(self, A, b) -> "SmoothMap":
        """self(A x + b) as a SmoothMap in the new variables."""
        A_f = [frac_vec(r) for r in A]
        b_f = frac_vec(b)
        if len(A_f) != self.domain_dim:
            raise ValueError("affine map has wrong output dimension")
        n_new = len(A_f[0]) if A_f else 0
        args = []
        for i in range(self.domain_dim):
            lin = Polynomial.constant(n_new, b_f[i])
            for j in range(n_new):
                if A_f[i][j]:
                    lin = lin + A_f[i][j] * Polynomial.variable(n_new, j)
            args.append(lin)
        comps = [c.compose(args) for c in self.components]
        terms = tuple(t.compose_affine(A_f, b_f) for t in self.bump_terms)
        return SmoothMap(n_new, self.codomain_dim, comps, terms)

    def compose_polynomial(self, args: Sequence[Polynomial]) -> "SmoothMap":
        """self(args(x)) for polynomial args; requires a polynomial map."""
        if not self.is_polynomial:
            raise ValueError("cannot compose bump terms with a general polynomial map")
        comps = [c.compose(list(args)) for c in self.components]
        return SmoothMap.from_polynomials(comps)

    def affine_parts(self):
        """(A, b) if this map is affine, else None."""
        A, b = [], []
        for c in self.components:
            row = [Fraction(0)] * self.domain_dim
            off = Fraction(0)
            for e, coef in c.coeffs.items():
                total = sum(e)
                if total == 0:
                    off = coef
                elif total == 1:
                    row[e.index(1)] = coef
                else:
                    return None
            A.append(tuple(row))
            b.append(off)
        if self.bump_terms:
            return None
        return tuple(A), tuple(b)

    # -- bounds ---------------------------------------------------------------

    def sup_bound(self, box) -> float:
        total = 0.0
        for c in self.components:
            lo, hi = c.interval(box)
            total = max(total, float(max(abs(lo), abs(hi))))
        for t in self.bump_terms:
            total += t.sup_bound(box)
        return total

    def lipschitz_bound(self, box) -> float:
        """Upper bound for the operator sup-norm of the Jacobian over a box."""
        worst = 0.0
        for i, c in enumerate(self.components):
            row = 0.0
            for j in range(self.domain_dim):
                lo, hi = c.derivative(j).interval(box)
                row += float(max(abs(lo), abs(hi)))
            worst = max(worst, row)
        for t in self.bump_terms:
            # |d(P * c)| <= |dP| * |c| + |P| * |dc| with P a product of profiles
            csup, cgrad = 0.0, 0.0
            for c in t.coeffs:
                lo, hi = c.interval(box)
                cs = float(max(abs(lo), abs(hi)))
                g = 0.0
                for j in range(c.nvars):
                    lo2, hi2 = c.derivative(j).interval(box)
                    g += float(max(abs(lo2), abs(hi2)))
                csup, cgrad = max(csup, cs), max(cgrad, g)
            dp = 0.0
            for prof in t.profiles:
                qpoly = prof.sq_dist_poly()
                qgrad = 0.0
                for j in range(qpoly.nvars):
                    lo2, hi2 = qpoly.derivative(j).interval(box)
                    qgrad += float(max(abs(lo2), abs(hi2)))
                dp += prof.slope_bound() * qgrad
            worst += dp * csup + cgrad
        return worst
