"""Profiles phi:[0,1] -> (0, inf) for the type-IV metric family.

A profile bundles phi with its first and second derivatives. The type-IV
Minkowski norm is ``f_IV(xi) = sqrt(r * phi(s))`` with ``r = xi xi^*`` and
``s = |xi xi'|^2 / r^2``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import InvalidProfile

Scalar = Callable[[float], float]


@dataclass(frozen=True)
class PhiProfile:
    name: str
    eval: Scalar
    d1: Scalar
    d2: Scalar
    # False when phi' or phi'' blow up somewhere on [0, 1] (e.g. sqrt(1 - s) at s = 1).
    smooth: bool = True
    params: dict = field(default_factory=dict, compare=False)

    def __call__(self, s: float) -> float:
        return self.eval(s)

    def check(self, grid: int = 1001, h: float = 1e-4, tol: float = 1e-6) -> None:
        """Positivity and derivative consistency on a uniform grid.

        Raises InvalidProfile. The finite-difference comparison is skipped for
        profiles flagged ``smooth=False``, whose derivatives are singular at
        some point of [0, 1].
        """
        s = np.linspace(0.0, 1.0, grid)
        vals = np.array([self.eval(x) for x in s])
        if not np.all(np.isfinite(vals)) or vals.min() <= 0:
            raise InvalidProfile(f"profile {self.name!r} is not positive on [0,1]")
        if not self.smooth:
            return
        worst = 0.0
        for x in s:
            # shift the stencil centre so all samples stay inside [0, 1]
            c = min(max(x, h), 1 - h)
            fm, f0, fp = self.eval(c - h), self.eval(c), self.eval(c + h)
            err1 = abs((fp - fm) / (2 * h) - self.d1(c))
            err2 = abs((fp - 2 * f0 + fm) / h**2 - self.d2(c))
            worst = max(worst, err1, err2)
        if not worst <= tol:
            raise InvalidProfile(
                f"supplied derivatives of {self.name!r} disagree with finite differences by {worst:.2e}"
            )

    def to_json(self):
        if not self.params:
            return self.name
        return {"name": self.name, **self.params}


def _bergman() -> PhiProfile:
    return PhiProfile("bergman", lambda s: 1.0, lambda s: 0.0, lambda s: 0.0)


def _kobayashi() -> PhiProfile:
    def d1(s):
        u = 1.0 - s
        return -0.5 / math.sqrt(u) if u > 0 else -math.inf

    def d2(s):
        u = 1.0 - s
        return -0.25 * u ** -1.5 if u > 0 else -math.inf

    return PhiProfile(
        "kobayashi",
        lambda s: 1.0 + math.sqrt(max(1.0 - s, 0.0)),
        d1,
        d2,
        smooth=False,
    )


def _paper_example() -> PhiProfile:
    return PhiProfile(
        "paper-example",
        lambda s: 1.0 + math.sqrt(1.0 + s),
        lambda s: 0.5 / math.sqrt(1.0 + s),
        lambda s: -0.25 * (1.0 + s) ** -1.5,
    )


def exp_family(t: float, k: int) -> PhiProfile:
    """phi(s) = exp(1 + t (1+s)^(1/k)), strongly pseudoconvex for t in (0, 1/(4k))."""
    a = 1.0 / k

    def psi1(s):
        return t * a * (1.0 + s) ** (a - 1)

    def psi2(s):
        return t * a * (a - 1) * (1.0 + s) ** (a - 2)

    def phi(s):
        return math.exp(1.0 + t * (1.0 + s) ** a)

    return PhiProfile(
        "exp-family",
        phi,
        lambda s: phi(s) * psi1(s),
        lambda s: phi(s) * (psi2(s) + psi1(s) ** 2),
        params={"t": t, "k": k},
    )


def polynomial(name: str, coeffs) -> PhiProfile:
    """Profile from ascending polynomial coefficients; derivatives are exact."""
    c = np.polynomial.Polynomial(np.asarray(coeffs, dtype=float))
    c1, c2 = c.deriv(1), c.deriv(2)
    return PhiProfile(
        name,
        lambda s: float(c(s)),
        lambda s: float(c1(s)),
        lambda s: float(c2(s)),
        params={"coeffs": [float(x) for x in np.asarray(coeffs, dtype=float)]},
    )


BUILTIN = {
    "bergman": _bergman,
    "kobayashi": _kobayashi,
    "paper-example": _paper_example,
}

_EXP_RE = re.compile(r"^exp-family\(\s*([^,]+)\s*,\s*(\d+)\s*\)$")


def get_profile(spec) -> PhiProfile:
    """Resolve a profile from a name, an ``exp-family(t,k)`` string or a dict.

    Dicts take either ``{"name": "exp-family", "t": .., "k": ..}`` or
    ``{"name": .., "coeffs": [...]}`` for a polynomial profile.
    """
    if isinstance(spec, PhiProfile):
        return spec
    if isinstance(spec, str):
        if spec in BUILTIN:
            return BUILTIN[spec]()
        m = _EXP_RE.match(spec)
        if m:
            return exp_family(float(m.group(1)), int(m.group(2)))
        raise InvalidProfile(f"unknown profile {spec!r}")
    if isinstance(spec, dict):
        name = spec.get("name")
        if name == "exp-family":
            return exp_family(float(spec["t"]), int(spec["k"]))
        if "coeffs" in spec:
            return polynomial(name or "polynomial", spec["coeffs"])
        if name in BUILTIN:
            return BUILTIN[name]()
    raise InvalidProfile(f"cannot build a profile from {spec!r}")
