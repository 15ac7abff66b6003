"""Holomorphic sectional and bisectional curvature.

Closed forms for all four families, the extremal constants, finite-difference
oracles built from the base-point Hessian of F^2, and the Kaehler-Berwald
residual max |d^2 F^2 / dz_i dv-bar_j| at (0; v).
"""

from __future__ import annotations

from dataclasses import dataclass
import hashlib
import json
import math

import numpy as np

from .automorphisms import differential, normalizer
from .domains import DomainSpec, as_point, contains
from .errors import BadParams, NotInDomain, ZeroTangent
from .matrix_kernel import matrix_to_json
from .metrics import _transport, _powers, metric
from .norms import phi_coefficients
from .numdiff import mixed_wirtinger, wirtinger_hessian
from .tolerances import DEFAULT

GOLDEN_TOL = 1e-12


def _unit(spec: DomainSpec, V) -> np.ndarray:
    V = as_point(spec, V)
    n = np.linalg.norm(V)
    if n == 0:
        raise ZeroTangent("tangent vector is zero")
    return V / n


def _inside(spec: DomainSpec, Z) -> np.ndarray:
    Z = as_point(spec, Z)
    mem = contains(spec, Z)
    if not mem.inside:
        raise NotInDomain(f"point outside the domain (margin {mem.margin:.3e})")
    return Z


def _trace_blocks(Z, V, W, ls_v, pairs):
    """frak_B_l(Z;V) for l in ls_v and cal_B_ij(Z;V,W) for (i,j) in pairs."""
    Xv = _transport(Z, V)
    top = max(list(ls_v) + [i for i, _ in pairs])
    pv = _powers(Xv, top)
    out_v = {l: float(np.trace(pv[l]).real) for l in ls_v}
    if not pairs:
        return out_v, {}
    Xw = _transport(Z, W)
    pw = _powers(Xw, max(j for _, j in pairs))
    out_vw = {(i, j): float(np.trace(pv[i] @ pw[j]).real) for i, j in pairs}
    return out_v, out_vw


def _F2_unit(spec: DomainSpec, b: dict) -> float:
    t, k = spec.t, spec.k
    return spec.scale / (1 + t) * (b[1] + t * b[k] ** (1.0 / k))


def _iv_pushforward(spec: DomainSpec, Z, V) -> np.ndarray:
    Z = _inside(spec, Z)
    V = _unit(spec, V)
    if not np.any(Z):
        return V[0]
    return differential(normalizer(spec, Z), V)[0]


def _iv_rs(xi: np.ndarray) -> tuple:
    r = float(np.vdot(xi, xi).real)
    s = float(abs(xi @ xi) ** 2 / r**2)
    return r, min(max(s, 0.0), 1.0)


def sectional_IV_origin(N: int, profile, s: float) -> float:
    """K_IV(0; v) = -(2/(N phi^2)) [phi + (1-s)(phi - 2 s phi')]."""
    p, d1, _, c0, _ = phi_coefficients(profile, s)
    if s >= 1.0:
        # (1-s) c0 vanishes; avoid 0 * inf for profiles singular at s = 1
        return -2.0 / (N * p)
    return -2.0 / (N * p * p) * (p + (1 - s) * c0)


def sectional(spec: DomainSpec, Z, V) -> float:
    if spec.kind == "IV":
        xi = _iv_pushforward(spec, Z, V)
        _, s = _iv_rs(xi)
        return sectional_IV_origin(spec.dims[0], spec.profile, s)
    Z = _inside(spec, Z)
    V = _unit(spec, V)
    t, k = spec.t, spec.k
    b, _ = _trace_blocks(Z, V, None, (1, 2, k, k + 1), ())
    F2 = _F2_unit(spec, b)
    num = b[2] + t * b[k] ** (1.0 / k - 1) * b[k + 1]
    return -4 * spec.scale / (1 + t) * num / F2**2


def bisectional_IV_origin(N: int, profile, xv: np.ndarray, xw: np.ndarray) -> float:
    """B_IV(0; v, w) with G_{;ij-bar}(0; v) = 2 r~ phi d_ij + 4N c0 (v_j vbar_i - v_i vbar_j)."""
    av, sv = _iv_rs(xv)
    aw, sw = _iv_rs(xw)
    p, _, _, c0, _ = phi_coefficients(profile, sv)
    pw = profile.eval(sw)
    cross = abs(np.vdot(xw, xv)) ** 2 - abs(xv @ xw) ** 2
    num = p * av * aw + c0 * cross
    return -2.0 / N * num / (av * p * aw * pw)


def bisectional(spec: DomainSpec, Z, V, W) -> float:
    if spec.kind == "IV":
        Z = _inside(spec, Z)
        xv = _iv_pushforward(spec, Z, V)
        xw = _iv_pushforward(spec, Z, W)
        return bisectional_IV_origin(spec.dims[0], spec.profile, xv, xw)
    Z = _inside(spec, Z)
    V = _unit(spec, V)
    W = _unit(spec, W)
    t, k, c = spec.t, spec.k, spec.scale
    pairs = ((1, 1), (k, 1))
    bv, bvw = _trace_blocks(Z, V, W, (1, k), pairs)
    bw, _ = _trace_blocks(Z, W, None, (1, k), ())
    Fv, Fw = _F2_unit(spec, bv), _F2_unit(spec, bw)
    lift = t * bv[k] ** (1.0 / k - 1)
    if spec.kind == "I":
        Zh, Vh, Wh = Z.conj().T, V.conj().T, W.conj().T
        _, tvw = _trace_blocks(Zh, Vh, Wh, (1,), pairs)
        num = bvw[1, 1] + tvw[1, 1] + lift * (bvw[k, 1] + tvw[k, 1])
        return -2 * c / (1 + t) * num / (Fv * Fw)
    num = bvw[1, 1] + lift * bvw[k, 1]
    return -4 * c / (1 + t) * num / (Fv * Fw)


# Bergman specializations (t = 0, phi = 1), kept as separate short formulas


def bergman_sectional(spec: DomainSpec, Z, V) -> float:
    if spec.kind == "IV":
        _, s = _iv_rs(_iv_pushforward(spec, Z, V))
        return -2.0 / spec.dims[0] * (2.0 - s)
    Z = _inside(spec, Z)
    V = _unit(spec, V)
    b, _ = _trace_blocks(Z, V, None, (1, 2), ())
    return -4.0 * b[2] / (spec.scale * b[1] ** 2)


def bergman_bisectional(spec: DomainSpec, Z, V, W) -> float:
    if spec.kind == "IV":
        Z = _inside(spec, Z)
        xv = _iv_pushforward(spec, Z, V)
        xw = _iv_pushforward(spec, Z, W)
        av, aw = np.vdot(xv, xv).real, np.vdot(xw, xw).real
        cross = abs(np.vdot(xw, xv)) ** 2 - abs(xv @ xw) ** 2
        return -2.0 / spec.dims[0] * (av * aw + cross) / (av * aw)
    Z = _inside(spec, Z)
    V = _unit(spec, V)
    W = _unit(spec, W)
    bv, bvw = _trace_blocks(Z, V, W, (1,), ((1, 1),))
    bw, _ = _trace_blocks(Z, W, None, (1,), ())
    if spec.kind == "I":
        _, tvw = _trace_blocks(Z.conj().T, V.conj().T, W.conj().T, (1,), ((1, 1),))
        return -2.0 * (bvw[1, 1] + tvw[1, 1]) / (spec.scale * bv[1] * bw[1])
    return -4.0 * bvw[1, 1] / (spec.scale * bv[1] * bw[1])


# bounds


@dataclass(frozen=True)
class CurvatureBounds:
    lower: float
    upper: float
    attaining_vectors: tuple | None = None
    argmin_s: float | None = None
    argmax_s: float | None = None

    def to_json(self) -> dict:
        out = {"lower": self.lower, "upper": self.upper}
        if self.attaining_vectors is not None:
            out["attaining_vectors"] = [matrix_to_json(v) for v in self.attaining_vectors]
        if self.argmin_s is not None:
            out["s_at_lower"] = self.argmin_s
            out["s_at_upper"] = self.argmax_s
        return out


def block_V0(q: int) -> np.ndarray:
    """Direct sum of [[0, 1], [-1, 0]] blocks, padded with a zero block for odd q."""
    V = np.zeros((q, q), dtype=complex)
    for i in range(0, q - 1, 2):
        V[i, i + 1], V[i + 1, i] = 1, -1
    return V


def _E(shape, *entries) -> np.ndarray:
    V = np.zeros(shape, dtype=complex)
    for (i, j), x in entries:
        V[i, j] = x
    return V


def _golden(f, a: float, b: float, tol: float = GOLDEN_TOL) -> float:
    """Golden-section search for a minimum of f on [a, b]."""
    g = (math.sqrt(5) - 1) / 2
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def _grid_extremum(f, grid: int, sign: float) -> float:
    s = np.linspace(0.0, 1.0, grid)
    vals = np.array([sign * f(float(x)) for x in s])
    i = int(np.argmin(vals))
    a, b = s[max(i - 1, 0)], s[min(i + 1, grid - 1)]
    x = _golden(lambda u: sign * f(u), float(a), float(b))
    cands = [(sign * f(float(y)), float(y)) for y in (x, a, b, s[i])]
    return min(cands)[1]


def iv_vector_with_s(N: int, s: float) -> np.ndarray:
    """Unit vector v in C^N with |vv'|^2 / (v v^*)^2 = s."""
    alpha = 0.5 * math.acos(math.sqrt(min(max(s, 0.0), 1.0)))
    v = np.zeros((1, N), dtype=complex)
    v[0, 0], v[0, 1] = math.cos(alpha), 1j * math.sin(alpha)
    return v


def bounds(spec: DomainSpec, grid: int = DEFAULT.phi_grid) -> CurvatureBounds:
    """Infimum and supremum of the holomorphic sectional curvature."""
    kind = spec.kind
    if kind == "IV":
        N = spec.dims[0]

        def g(s):
            return -sectional_IV_origin(N, spec.profile, s)

        s_max = _grid_extremum(g, grid, -1.0)
        s_min = _grid_extremum(g, grid, 1.0)
        lower, upper = -g(s_max), -g(s_min)
        if not upper < 0:
            raise BadParams("profile yields a nonnegative curvature bound")
        return CurvatureBounds(
            lower, upper, (iv_vector_with_s(N, s_max), iv_vector_with_s(N, s_min)), s_max, s_min
        )
    t, k, c = spec.t, spec.k, spec.scale
    shape = spec.shape
    if kind == "I":
        m = spec.dims[0]
        lo, hi = -4.0 / c, -4.0 / c * (1 + t) / (m + t * m ** (1.0 / k))
        vl = _E(shape, ((0, 0), 1))
        vh = _E(shape, *[((i, i), 1) for i in range(m)])
    elif kind == "II":
        p = spec.dims[0]
        lo, hi = -4.0 / c, -4.0 / c * (1 + t) / (p + t * p ** (1.0 / k))
        vl = _E(shape, ((0, 0), 1))
        vh = np.eye(p, dtype=complex)
    else:
        q = spec.dims[0]
        e = 2 * (q // 2)
        lo = -4.0 / c * (1 + t) / (2 + t * 2 ** (1.0 / k))
        hi = -4.0 / c * (1 + t) / (e + t * e ** (1.0 / k))
        vl = _E(shape, ((0, 1), 1), ((1, 0), -1))
        vh = block_V0(q)
    return CurvatureBounds(lo, hi, (vl, vh))


def bisectional_bounds(spec: DomainSpec) -> CurvatureBounds:
    """Floor and ceiling (0) of the holomorphic bisectional curvature.

    For kind IV the floor -4/(N min phi) holds when phi' >= 0 on [0, 1].
    """
    kind = spec.kind
    c, t, k = spec.scale, spec.t, spec.k
    if kind in ("I", "II"):
        lo = -4.0 / c
    elif kind == "III":
        lo = -4.0 * (1 + t) / (c * (2 + t * 2 ** (1.0 / k)))
    else:
        s = np.linspace(0.0, 1.0, DEFAULT.phi_grid)
        pmin = min(spec.profile.eval(float(x)) for x in s)
        lo = -4.0 / (spec.dims[0] * pmin)
    return CurvatureBounds(lo, 0.0)


# finite-difference oracles


def _F2_at(spec: DomainSpec, V: np.ndarray):
    chart = spec.chart

    def f(z):
        return metric(spec, chart.unflatten(z), V).F_squared

    return f


def base_hessian(spec: DomainSpec, V, h: float = DEFAULT.fd_step) -> np.ndarray:
    """Central-difference matrix of d^2 F^2(z; V) / dz_i dz-bar_j at z = 0."""
    if not (1e-6 <= h <= 1e-2):
        raise BadParams(f"step {h} outside [1e-6, 1e-2]")
    V = _unit(spec, V)
    return wirtinger_hessian(_F2_at(spec, V), np.zeros(spec.dim, dtype=complex), h)


def fd_sectional_oracle(spec: DomainSpec, V, h: float = DEFAULT.fd_step, H=None) -> float:
    """K(0; v) = -(2/F^4) sum_ij G_{i j-bar} v_i vbar_j with G the base Hessian of F^2."""
    V = _unit(spec, V)
    if H is None:
        H = base_hessian(spec, V, h)
    v = spec.chart.flatten(V)
    F2 = metric(spec, np.zeros(spec.shape), V).F_squared
    return float(-2.0 / F2**2 * (v @ H @ v.conj()).real)


def fd_bisectional_oracle(spec: DomainSpec, V, W, h: float = DEFAULT.fd_step, H=None) -> float:
    """B(0; v, w) = -(2/(F^2(v) F^2(w))) sum_ij G_{i j-bar}(0; v) w_i wbar_j."""
    V = _unit(spec, V)
    W = _unit(spec, W)
    if H is None:
        H = base_hessian(spec, V, h)
    w = spec.chart.flatten(W)
    zero = np.zeros(spec.shape)
    Fv = metric(spec, zero, V).F_squared
    Fw = metric(spec, zero, W).F_squared
    return float(-2.0 / (Fv * Fw) * (w @ H @ w.conj()).real)


def kahler_berwald_residual(spec: DomainSpec, V, h: float = DEFAULT.fd_step) -> float:
    """max_ij |d^2 F^2 / dz_i dv-bar_j| at (0; V/|V|) by central differences."""
    if not (1e-6 <= h <= 1e-2):
        raise BadParams(f"step {h} outside [1e-6, 1e-2]")
    V = _unit(spec, V)
    chart = spec.chart

    def f(z, v):
        return metric(spec, chart.unflatten(z), chart.unflatten(v)).F_squared

    M = mixed_wirtinger(f, np.zeros(spec.dim, dtype=complex), chart.flatten(V), h)
    return float(np.abs(M).max())


# reports


def inputs_digest(spec: DomainSpec, Z, V, W=None, seed=None) -> str:
    payload = {
        "spec": spec.to_json(),
        "Z": matrix_to_json(Z),
        "V": matrix_to_json(V),
        "W": None if W is None else matrix_to_json(W),
        "seed": seed,
    }
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


@dataclass(frozen=True)
class CurvatureReport:
    K: float
    B: float | None
    bounds: CurvatureBounds
    oracle_residual: float | None
    inputs_digest: str

    def to_json(self) -> dict:
        return {
            "K": self.K,
            "B": self.B,
            "bounds": {"lower": self.bounds.lower, "upper": self.bounds.upper},
            "oracle_residual": self.oracle_residual,
            "inputs_digest": self.inputs_digest,
        }


def curvature_report(spec: DomainSpec, Z, V, W=None, oracle: bool = False,
                     h: float = DEFAULT.fd_step, seed=None) -> CurvatureReport:
    """Closed-form curvatures at (Z; V[, W]); the oracle runs at the transported tangent."""
    Z = _inside(spec, Z)
    K = sectional(spec, Z, V)
    B = None if W is None else bisectional(spec, Z, V, W)
    residual = None
    if oracle:
        if np.any(Z):
            aut = normalizer(spec, Z)
            V0 = differential(aut, as_point(spec, V))
            W0 = None if W is None else differential(aut, as_point(spec, W))
        else:
            V0, W0 = as_point(spec, V), None if W is None else as_point(spec, W)
        H = base_hessian(spec, V0, h)
        residual = abs(fd_sectional_oracle(spec, V0, h, H) - K) / abs(K)
        if W is not None:
            fb = fd_bisectional_oracle(spec, V0, W0, h, H)
            residual = max(residual, abs(fb - B) / max(abs(B), 1.0))
    return CurvatureReport(K, B, bounds(spec), residual, inputs_digest(spec, Z, V, W, seed))
