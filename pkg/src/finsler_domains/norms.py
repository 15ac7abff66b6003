"""Iso-invariant complex Minkowski norms at the origin.

``minkowski_f`` is the unitarily bi-invariant norm on M(m, n)

    f^2(V) = [tr(V V^*) + t tr((V V^*)^k)^(1/k)] / (1 + t),

and ``f_IV_norm`` is the profile norm sqrt(r phi(s)) on C^N.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .domains import DomainSpec, as_point
from .errors import BadParams, InvalidProfile, ZeroTangent
from .matrix_kernel import singular_values, trace_power
from .profiles import PhiProfile, get_profile
from .tolerances import DEFAULT

__all__ = [
    "PhiProfile",
    "get_profile",
    "minkowski_f",
    "minkowski_f_sv",
    "hessian_origin",
    "validate_phi",
    "f_IV_norm",
    "hessian_IV",
    "HessianIVSpectrum",
    "PhiValidation",
]


def _check_tk(t: float, k: int) -> None:
    if not (t >= 0) or not math.isfinite(t):
        raise BadParams(f"t must be nonnegative, got {t}")
    if int(k) != k or k < 2:
        raise BadParams(f"k must be an integer >= 2, got {k}")


def deformed_sum(b1: float, bk: float, t: float, k: int) -> float:
    """b1 + t * bk^(1/k)."""
    return b1 + t * bk ** (1.0 / k) if bk > 0 else b1


def minkowski_f2(V, t: float, k: int) -> float:
    _check_tk(t, k)
    V = np.asarray(V, dtype=complex)
    scale = np.linalg.norm(V)
    if scale == 0:
        return 0.0
    # work with V/|V| so that tr((VV*)^k) cannot underflow
    U = V / scale
    P = U @ U.conj().T
    b1 = trace_power(P, 1).real
    bk = trace_power(P, k).real
    return scale**2 * deformed_sum(b1, bk, t, k) / (1.0 + t)


def minkowski_f(V, t: float, k: int) -> float:
    """The norm f(V); f(0) = 0."""
    return math.sqrt(minkowski_f2(V, t, k))


def minkowski_f_sv(V, t: float, k: int) -> float:
    """Singular-value form: f^2 = [sum l_i^2 + t (sum l_i^(2k))^(1/k)] / (1+t)."""
    _check_tk(t, k)
    lam = singular_values(V)
    if lam.size == 0 or lam[0] == 0:
        return 0.0
    x = lam / lam[0]
    f2 = np.sum(x**2) + t * np.sum(x ** (2 * k)) ** (1.0 / k)
    return float(lam[0] * math.sqrt(f2 / (1.0 + t)))


def _require_nonzero(V) -> None:
    if not np.any(np.asarray(V) != 0):
        raise ZeroTangent("tangent vector is zero")


def hessian_origin(spec: DomainSpec, V) -> np.ndarray:
    """Complex vertical Hessian of F^2(0; .) at V in flattened coordinates.

    Entry (a, b) is d^2 F^2 / dv_a dv-bar_b, obtained by evaluating the
    sesquilinear form h(W, U) on the chart basis. With P = V V^* and
    Phi = tr(P^k),

        h(W, U) = c/(1+t) [tr(W U^*) + t d_W dbar_U Phi^(1/k)].
    """
    if spec.kind == "IV":
        raise BadParams("hessian_origin covers kinds I-III; use hessian_IV")
    V = as_point(spec, V)
    _require_nonzero(V)
    t, k = spec.t, spec.k
    # the form is homogeneous of degree 0, so normalize V first
    V = V / np.linalg.norm(V)
    basis = spec.chart.basis()
    d = len(basis)
    P = V @ V.conj().T
    pw = [np.eye(P.shape[0], dtype=complex)]
    for _ in range(k):
        pw.append(pw[-1] @ P)
    Phi = np.trace(pw[k]).real
    Vh = V.conj().T
    # d_W Phi = k tr(P^(k-1) W V^*); dbar_U Phi = k tr(P^(k-1) V U^*)
    dPhi = np.array([k * np.trace(pw[k - 1] @ W @ Vh) for W in basis])
    H = np.empty((d, d), dtype=complex)
    for a, W in enumerate(basis):
        WVh = W @ Vh
        for b, U in enumerate(basis):
            Uh = U.conj().T
            VUh = V @ Uh
            dd = np.trace(pw[k - 1] @ W @ Uh)
            for j in range(k - 1):
                dd += np.trace(pw[j] @ VUh @ pw[k - 2 - j] @ WVh)
            dd *= k
            root = Phi ** (1.0 / k - 1) * dd / k + (1.0 / k) * (1.0 / k - 1) * Phi ** (
                1.0 / k - 2
            ) * dPhi[a] * np.conj(dPhi[b])
            H[a, b] = np.trace(W @ Uh) + t * root
    return spec.scale / (1.0 + t) * H


@dataclass(frozen=True)
class PhiValidation:
    valid: bool
    min_margin_1: float
    min_margin_2: float
    argmin_s: float
    argmin_s_1: float
    argmin_s_2: float
    nonfinite_points: int

    def to_json(self) -> dict:
        return {
            "valid": self.valid,
            "min_margin_1": self.min_margin_1,
            "min_margin_2": self.min_margin_2,
            "argmin_s": self.argmin_s,
            "argmin_s_1": self.argmin_s_1,
            "argmin_s_2": self.argmin_s_2,
            "nonfinite_points": self.nonfinite_points,
        }


def phi_coefficients(profile: PhiProfile, s: float):
    """(phi, phi', phi'', c0, k_tilde) at s."""
    p, d1, d2 = profile.eval(s), profile.d1(s), profile.d2(s)
    c0 = p - 2 * s * d1
    kt = p * (p + 2 * (2 - 3 * s) * d1) + 4 * s * (1 - s) * (p * d2 - d1 * d1)
    return p, d1, d2, c0, kt


def validate_phi(profile, grid: int = DEFAULT.phi_grid, margin: float = DEFAULT.phi_margin) -> PhiValidation:
    """Grid certification of phi - 2 s phi' > 0 and k_tilde > 0 on [0, 1].

    Non-finite margins (singular derivatives) count as failures.
    """
    profile = get_profile(profile)
    s = np.linspace(0.0, 1.0, grid)
    m1 = np.empty(grid)
    m2 = np.empty(grid)
    with np.errstate(all="ignore"):
        for i, x in enumerate(s):
            _, _, _, c0, kt = phi_coefficients(profile, float(x))
            m1[i], m2[i] = c0, kt
    bad = ~(np.isfinite(m1) & np.isfinite(m2))
    nonfinite = int(bad.sum())
    f1 = np.where(np.isfinite(m1), m1, np.inf)
    f2 = np.where(np.isfinite(m2), m2, np.inf)
    i1, i2 = int(np.argmin(f1)), int(np.argmin(f2))
    worst = i1 if f1[i1] <= f2[i2] else i2
    valid = nonfinite == 0 and f1[i1] > margin and f2[i2] > margin
    return PhiValidation(
        bool(valid),
        float(f1[i1]),
        float(f2[i2]),
        float(s[worst]),
        float(s[i1]),
        float(s[i2]),
        nonfinite,
    )


def r_s(xi) -> tuple:
    """r = xi xi^* and s = |xi xi'|^2 / r^2 (clipped to [0, 1])."""
    xi = np.asarray(xi, dtype=complex).reshape(-1)
    r = float(np.vdot(xi, xi).real)
    if r == 0:
        raise ZeroTangent("xi is zero")
    s = float(abs(xi @ xi) ** 2 / r**2)
    return r, min(max(s, 0.0), 1.0)


def f_IV_norm(xi, profile) -> tuple:
    """Return (sqrt(r phi(s)), r, s)."""
    profile = get_profile(profile)
    r, s = r_s(xi)
    return math.sqrt(r * profile.eval(s)), r, s


@dataclass(frozen=True)
class HessianIVSpectrum:
    c0: float
    c1: float
    c2: float
    k_tilde: float
    trace_half: float  # phi + (2-3s) phi' + 2 s (1-s) phi''
    predicted: tuple

    def quadratic_roots(self) -> tuple:
        disc = max(self.trace_half**2 - self.k_tilde, 0.0)
        q = math.sqrt(disc)
        hi = self.trace_half + q
        lo = self.k_tilde / hi if hi != 0 else self.trace_half - q
        return lo, hi


def hessian_IV(xi, profile):
    """Hessian (d^2 f_IV^2 / dxi_i dxi-bar_j) and its predicted spectrum.

    H = c0 I + B X B^* with B = [xi, conj(xi)] (columns), so that

        H_ij = c0 d_ij + c1 xi_i xi-bar_j / r + c2 (xi xi') xi-bar_i xi-bar_j / r^2
               + c2 conj(xi xi') xi_i xi_j / r^2 - (s/r) c2 xi-bar_i xi_j.

    The spectrum is c0 (N-2 times) plus the roots of
    lambda^2 - 2 [phi + (2-3s) phi' + 2 s (1-s) phi''] lambda + k_tilde.
    """
    profile = get_profile(profile)
    xi = np.asarray(xi, dtype=complex).reshape(-1)
    r, s = r_s(xi)
    p, d1, d2, c0, kt = phi_coefficients(profile, s)
    if not (math.isfinite(c0) and math.isfinite(kt)) or c0 <= 0 or kt <= 0:
        raise InvalidProfile(f"profile {profile.name!r} violates strong pseudoconvexity at s={s:.6g}")
    c1 = 4 * (d1 + s * d2)
    c2 = -2 * (d1 + 2 * s * d2)
    sig = xi @ xi
    xb = xi.conj()
    H = (
        c0 * np.eye(xi.size)
        + c1 / r * np.outer(xi, xb)
        + c2 * sig / r**2 * np.outer(xb, xb)
        + c2 * np.conj(sig) / r**2 * np.outer(xi, xi)
        - s / r * c2 * np.outer(xb, xi)
    )
    half = p + (2 - 3 * s) * d1 + 2 * s * (1 - s) * d2
    spec = HessianIVSpectrum(c0, c1, c2, kt, half, ())
    lo, hi = spec.quadratic_roots()
    predicted = tuple(sorted([c0] * (xi.size - 2) + [lo, hi]))
    spec = HessianIVSpectrum(c0, c1, c2, kt, half, predicted)
    return H, spec
