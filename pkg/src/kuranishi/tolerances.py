"""Numeric thresholds shared across the pipeline; all CLI-overridable."""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    rank_rel: float = 1e-8  # rank cutoff, relative to the largest singular value
    eq: float = 1e-9  # sampled equality of smooth maps
    ident: float = 1e-7  # point matching / identification radius
    transv: float = 1e-6  # minimum singular value certifying transversality
    fit: float = 1e-7  # certified residual for implicit-function chart fits

    def override(self, **kwargs) -> "Tolerances":
        kwargs = {k: v for k, v in kwargs.items() if v is not None}
        return replace(self, **kwargs)


DEFAULT = Tolerances()
