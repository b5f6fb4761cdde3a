"""Deterministic seeding and small shared helpers."""

from __future__ import annotations

import hashlib
from fractions import Fraction

import numpy as np


def stable_seed(*parts) -> int:
    """Derive a 64-bit seed from a base seed and a sequence of labels.

    Python's builtin hash() is salted per process, so reproducible pipelines
    must derive sub-seeds through a stable digest.
    """
    h = hashlib.sha256()
    for p in parts:
        h.update(repr(p).encode("utf8"))
        h.update(b"\x1f")
    return int.from_bytes(h.digest()[:8], "big")


def rng_for(*parts) -> np.random.Generator:
    return np.random.default_rng(stable_seed(*parts))


def as_fraction(x) -> Fraction:
    """Coerce ints, strings ('3/4', '0.25') and floats to exact Fractions."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**12)
    raise TypeError(f"cannot interpret {x!r} as a rational number")


def frac_vec(xs) -> tuple:
    return tuple(as_fraction(x) for x in xs)


def float_vec(xs) -> np.ndarray:
    return np.array([float(x) for x in xs], dtype=float)
