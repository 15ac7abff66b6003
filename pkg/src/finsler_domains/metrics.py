"""Invariant metrics F_I..F_IV, their building blocks and reference norms.

For kinds I-III, with P = (I - Z Z^*)^{-1} and Q = (I - Z^* Z)^{-1},

    frak_B_l(Z; V)       = tr[(P V Q V^*)^l]
    cal_B_ij(Z; V, W)    = tr[(P V Q V^*)^i (P W Q W^*)^j]
    F^2(Z; V)            = c/(1+t) [frak_B_1 + t frak_B_k^(1/k)]

where c is m+n, p+1 or q-1. Kind IV uses F^2 = r~ phi(s~).
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np

from .automorphisms import r_s_tilde_closed
from .domains import DomainSpec, as_point, contains
from .errors import NotInDomain, ShapeMismatch, ZeroTangent
from .norms import deformed_sum
from .matrix_kernel import singular_values


@dataclass(frozen=True)
class MetricValue:
    F: float
    F_squared: float
    components: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"F": self.F, "F_squared": self.F_squared, "components": dict(self.components)}


def _raw_matrix(Z) -> np.ndarray:
    Z = np.asarray(Z, dtype=complex)
    return Z.reshape(1, -1) if Z.ndim == 1 else Z


def _check_inside(Z: np.ndarray) -> None:
    if Z.size and np.linalg.norm(Z, 2) >= 1.0:
        raise NotInDomain("I - Z Z^* is not positive-definite")


def _transport(Z: np.ndarray, V: np.ndarray) -> np.ndarray:
    """X = P V Q V^*."""
    r, c = Z.shape
    P = np.linalg.inv(np.eye(r) - Z @ Z.conj().T)
    Q = np.linalg.inv(np.eye(c) - Z.conj().T @ Z)
    return P @ V @ Q @ V.conj().T


def _powers(X: np.ndarray, top: int) -> list:
    out = [np.eye(X.shape[0], dtype=complex)]
    for _ in range(top):
        out.append(out[-1] @ X)
    return out


def frak_B(l: int, Z, V) -> float:
    """tr[(P V Q V^*)^l]."""
    Z, V = _raw_matrix(Z), _raw_matrix(V)
    _check_inside(Z)
    X = _transport(Z, V)
    return float(np.trace(np.linalg.matrix_power(X, l)).real)


def cal_B(i: int, j: int, Z, V, W) -> float:
    """tr[(P V Q V^*)^i (P W Q W^*)^j]."""
    Z, V, W = _raw_matrix(Z), _raw_matrix(V), _raw_matrix(W)
    _check_inside(Z)
    if V.shape != W.shape:
        raise ShapeMismatch(f"tangents differ in shape: {V.shape} vs {W.shape}")
    Xv = _transport(Z, V)
    Xw = _transport(Z, W)
    return float(np.trace(np.linalg.matrix_power(Xv, i) @ np.linalg.matrix_power(Xw, j)).real)


def _nonzero(V: np.ndarray) -> float:
    n = float(np.linalg.norm(V))
    if n == 0:
        raise ZeroTangent("tangent vector is zero")
    return n


def blocks(spec: DomainSpec, Z, V, ls) -> tuple:
    """(|V|, {l: frak_B_l(Z; V/|V|)}) for the requested powers.

    Working with the unit tangent keeps frak_B_k away from underflow; the
    caller restores the scale with frak_B_l(Z; V) = |V|^(2l) frak_B_l(Z; V/|V|).
    """
    Z = as_point(spec, Z)
    V = as_point(spec, V)
    mem = contains(spec, Z)
    if not mem.inside:
        raise NotInDomain(f"point outside the domain (margin {mem.margin:.3e})")
    n = _nonzero(V)
    X = _transport(Z, V / n)
    pw = _powers(X, max(ls))
    return n, {l: float(np.trace(pw[l]).real) for l in ls}


def metric(spec: DomainSpec, Z, V) -> MetricValue:
    if spec.kind == "IV":
        data = r_s_tilde_closed(spec, Z, V)
        f2 = data.r_tilde * spec.profile.eval(data.s_tilde)
        return MetricValue(
            math.sqrt(f2), f2, {"r_tilde": data.r_tilde, "s_tilde": data.s_tilde}
        )
    t, k = spec.t, spec.k
    n, b = blocks(spec, Z, V, (1, k))
    f2 = n**2 * spec.scale / (1.0 + t) * deformed_sum(b[1], b[k], t, k)
    comps = {"B_1": n**2 * b[1], "B_k": _scaled_power(n, b[k], k)}
    return MetricValue(math.sqrt(f2), f2, comps)


def _scaled_power(n: float, b: float, l: int) -> float:
    # |V|^(2l) * b, computed in logs so that tiny tangents do not underflow
    # to zero when the true value is representable
    if b <= 0:
        return 0.0
    return math.exp(2 * l * math.log(n) + math.log(b))


def bergman(spec: DomainSpec, Z, V) -> float:
    """The Bergman quadratic form on (V, V-bar)."""
    if spec.kind == "IV":
        V = as_point(spec, V)
        if not np.any(V != 0):
            return 0.0
        return r_s_tilde_closed(spec, Z, V).r_tilde
    Z = as_point(spec, Z)
    V = as_point(spec, V)
    if not contains(spec, Z):
        raise NotInDomain("point outside the domain")
    return spec.scale * float(np.trace(_transport(Z, V)).real)


def reference_norm_CK(spec: DomainSpec, xi) -> float:
    """Caratheodory (= Kobayashi) norm at the origin.

    Kinds I-III: the largest singular value. Kind IV:
    sqrt(|xi|^2 + sqrt(|xi|^4 - |xi xi'|^2)).
    """
    xi = as_point(spec, xi)
    _nonzero(xi)
    if spec.kind != "IV":
        return float(singular_values(xi)[0])
    x = xi[0]
    r = float(np.vdot(x, x).real)
    return math.sqrt(r + math.sqrt(max(r * r - abs(x @ x) ** 2, 0.0)))
