"""Deterministic quasi-uniform sampling of domains.

Samples live on a per-axis fraction grid i/(density+1) with a jitter that is
keyed to the reduced fraction coordinates, the seed, and the domain value.
Consequently equal (domain, density, seed) inputs reproduce the identical
list, and refining the density from D to D' with (D+1) | (D'+1) yields a
strict superset of the sample set.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from ._util import rng_for
from .domain import Domain


def _jitter(seed_parts, scale: Fraction) -> Fraction:
    rng = rng_for(*seed_parts)
    u = int(rng.integers(-(2**20), 2**20))
    return Fraction(u, 2**21) * scale  # in (-scale/2, scale/2)


def sample_domain(domain: Domain, density: int, seed: int) -> list:
    """Deterministic jittered grid of rational points strictly inside the domain.

    density counts grid nodes per axis per piece; points failing a piece's
    polynomial constraints are dropped.
    """
    if density < 1:
        raise ValueError("density must be >= 1")
    if domain.is_empty():
        raise ValueError("cannot sample an empty domain")
    fingerprint = domain.fingerprint()
    fracs = [Fraction(i, density + 1) for i in range(1, density + 1)]
    points = []
    for pi, piece in enumerate(domain.pieces):
        if piece.dim == 0:
            points.append(())
            continue
        for combo in itertools.product(fracs, repeat=piece.dim):
            coords = []
            for (lo, hi), f in zip(piece.box, combo):
                width = hi - lo
                # jitter scale keyed to the reduced fraction keeps refined
                # grids supersets of coarse ones
                scale = width / (3 * f.denominator)
                j = _jitter((seed, fingerprint, pi, combo, f, lo, hi), scale)
                coords.append(lo + f * width + j)
            point = tuple(coords)
            if piece.contains(point):
                points.append(point)
    # deterministic order, dedupe exact repeats across pieces
    seen = set()
    out = []
    for p in sorted(points):
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


def grid_floats(box, per_axis: int) -> list:
    """Plain float mesh over a box (closed, endpoints included); no jitter."""
    axes = []
    for lo, hi in box:
        lo, hi = float(lo), float(hi)
        if per_axis == 1:
            axes.append([(lo + hi) / 2.0])
        else:
            step = (hi - lo) / (per_axis - 1)
            axes.append([lo + i * step for i in range(per_axis)])
    return [tuple(c) for c in itertools.product(*axes)]
