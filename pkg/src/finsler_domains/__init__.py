"""Invariant Kähler-Berwald metrics on the classical domains R_I to R_IV."""

from .domains import DomainSpec, contains, sample_point, sample_tangent
from .errors import FinslerError
from .metrics import metric, bergman
from .curvature import sectional, bisectional, bounds

__all__ = [
    "DomainSpec",
    "FinslerError",
    "contains",
    "sample_point",
    "sample_tangent",
    "metric",
    "bergman",
    "sectional",
    "bisectional",
    "bounds",
]

__version__ = "0.1.0"
