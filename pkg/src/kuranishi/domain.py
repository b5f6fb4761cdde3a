"""Open domains: finite unions of open boxes cut by strict polynomial inequalities.

Membership at rational points is decided exactly; float points are evaluated in
floating arithmetic.  This restricted class keeps neighbourhood arithmetic for
boxes exact, which the shrinking and reduction machinery leans on heavily.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ._util import as_fraction
from .poly import Polynomial


@dataclass(frozen=True)
class Piece:
    box: tuple  # ((lo, hi), ...) open intervals with Fraction endpoints
    constraints: tuple = ()  # Polynomials p with the piece cut to p(x) > 0

    def __post_init__(self):
        for lo, hi in self.box:
            if not (isinstance(lo, Fraction) and isinstance(hi, Fraction)):
                raise TypeError("box endpoints must be Fractions")
        for p in self.constraints:
            if p.nvars != len(self.box):
                raise ValueError("constraint has wrong variable count")

    @property
    def dim(self) -> int:
        return len(self.box)

    def is_degenerate(self) -> bool:
        return any(lo >= hi for lo, hi in self.box)

    def contains(self, point) -> bool:
        exact = all(isinstance(x, (Fraction, int)) for x in point)
        for (lo, hi), x in zip(self.box, point):
            if exact:
                if not (lo < x < hi):
                    return False
            else:
                if not (float(lo) < float(x) < float(hi)):
                    return False
        for p in self.constraints:
            v = p(tuple(point)) if exact else p(tuple(float(x) for x in point))
            if not v > 0:
                return False
        return True


def make_box(*intervals) -> Piece:
    return Piece(tuple((as_fraction(lo), as_fraction(hi)) for lo, hi in intervals))


class Domain:
    """A finite union of pieces; an empty piece list denotes the empty set."""

    __slots__ = ("ambient_dim", "pieces")

    def __init__(self, ambient_dim: int, pieces: Sequence[Piece] = ()):
        self.ambient_dim = int(ambient_dim)
        kept = []
        for p in pieces:
            if p.dim != self.ambient_dim:
                raise ValueError("piece dimension mismatch")
            if not p.is_degenerate():
                kept.append(p)
        self.pieces = tuple(kept)

    @staticmethod
    def box(*intervals) -> "Domain":
        piece = make_box(*intervals)
        return Domain(piece.dim, [piece])

    @staticmethod
    def point() -> "Domain":
        """The unique zero-dimensional domain (a single point)."""
        return Domain(0, [Piece(())])

    @staticmethod
    def empty(ambient_dim: int) -> "Domain":
        return Domain(ambient_dim, [])

    def is_empty(self) -> bool:
        return not self.pieces

    def contains(self, point) -> bool:
        if len(point) != self.ambient_dim:
            return False
        return any(p.contains(point) for p in self.pieces)

    def __eq__(self, other):
        if not isinstance(other, Domain):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.pieces == other.pieces

    def __hash__(self):
        return hash((self.ambient_dim, self.pieces))

    def __repr__(self):
        return f"Domain(dim={self.ambient_dim}, pieces={len(self.pieces)})"

    def fingerprint(self):
        """Stable value identity, used to key deterministic sampling."""
        return (
            self.ambient_dim,
            tuple(
                (p.box, tuple(sorted((c.nvars, tuple(sorted(c.coeffs.items()))) for c in p.constraints)))
                for p in self.pieces
            ),
        )

    # -- geometry ---------------------------------------------------------

    def bounding_box(self) -> tuple:
        if not self.pieces:
            raise ValueError("empty domain has no bounding box")
        dims = self.ambient_dim
        los = [min(p.box[j][0] for p in self.pieces) for j in range(dims)]
        his = [max(p.box[j][1] for p in self.pieces) for j in range(dims)]
        return tuple((lo, hi) for lo, hi in zip(los, his))

    def shrink_boxes(self, margin) -> "Domain":
        """Shrink every box by the margin on each side; constraints carried over."""
        m = as_fraction(margin)
        pieces = []
        for p in self.pieces:
            box = tuple((lo + m, hi - m) for lo, hi in p.box)
            pieces.append(Piece(box, p.constraints))
        return Domain(self.ambient_dim, pieces)

    def enlarge_boxes(self, margin) -> "Domain":
        m = as_fraction(margin)
        pieces = []
        for p in self.pieces:
            box = tuple((lo - m, hi + m) for lo, hi in p.box)
            pieces.append(Piece(box, p.constraints))
        return Domain(self.ambient_dim, pieces)

    def intersect(self, other: "Domain") -> "Domain":
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("dimension mismatch in intersection")
        pieces = []
        for p in self.pieces:
            for q in other.pieces:
                box = tuple(
                    (max(a0, b0), min(a1, b1)) for (a0, a1), (b0, b1) in zip(p.box, q.box)
                )
                pieces.append(Piece(box, p.constraints + q.constraints))
        return Domain(self.ambient_dim, pieces)

    def distance_to(self, point) -> float:
        """Euclidean distance from a point to the union of the piece boxes.

        Constraints are ignored (an under-estimate), which errs on the
        inclusive side when thickening reduction sets; the reduction builder
        only produces constraint-free domains.
        """
        if not self.pieces:
            return math.inf
        best = math.inf
        xs = [float(v) for v in point]
        for p in self.pieces:
            s = 0.0
            for (lo, hi), x in zip(p.box, xs):
                d = max(float(lo) - x, 0.0, x - float(hi))
                s += d * d
            best = min(best, math.sqrt(s))
        return best

    def strictly_inside_margin(self, other: "Domain"):
        """Largest exact box margin by which self sits inside other, or None.

        Fast syntactic test: every piece of self must fit in some piece of
        other whose constraint list is a subset of the piece's own (so the
        extra constraints only cut self down further).  Returns the minimal
        slack over all box faces, which certifies precompact inclusion when
        positive; None means this test is inconclusive (not a disproof).
        """
        if self.ambient_dim != other.ambient_dim:
            return None
        worst = None
        for p in self.pieces:
            best_for_p = None
            for q in other.pieces:
                if not set(q.constraints) <= set(p.constraints):
                    continue
                slacks = [
                    min(a0 - b0, b1 - a1)
                    for (a0, a1), (b0, b1) in zip(p.box, q.box)
                ]
                cand = min(slacks) if slacks else Fraction(1)
                if cand > 0 and (best_for_p is None or cand > best_for_p):
                    best_for_p = cand
            if best_for_p is None:
                return None
            worst = best_for_p if worst is None else min(worst, best_for_p)
        if worst is None:
            # self empty: vacuously inside at unbounded margin
            return Fraction(1)
        return worst


def pullback_constraints(phi, target: Domain) -> list:
    """Pieces of constraints expressing phi(x) in target, one list per target piece.

    Requires a polynomial map; each returned constraint list, attached to a
    source piece, carves out the preimage of the corresponding target piece.
    """
    if not phi.is_polynomial:
        raise ValueError("pullback requires a polynomial coordinate change")
    comps = list(phi.components)
    out = []
    for q in target.pieces:
        cons = []
        for k, (lo, hi) in enumerate(q.box):
            cons.append(comps[k] - Polynomial.constant(phi.domain_dim, lo))
            cons.append(Polynomial.constant(phi.domain_dim, hi) - comps[k])
        for c in q.constraints:
            cons.append(c.compose(comps))
        out.append(tuple(cons))
    return out


def preimage(phi, target: Domain, source: Domain) -> Domain:
    """source ∩ phi^{-1}(target) as an exact Domain (polynomial phi)."""
    pieces = []
    for cons in pullback_constraints(phi, target):
        for p in source.pieces:
            pieces.append(Piece(p.box, p.constraints + cons))
    return Domain(source.ambient_dim, pieces)
