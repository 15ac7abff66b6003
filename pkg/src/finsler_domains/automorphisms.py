"""Normalizing automorphisms Phi_{Z0} with Phi_{Z0}(Z0) = 0.

Kinds I-III use the matrix Moebius map

    Phi(Z) = A (Z - Z0) (I - Z0^* Z)^{-1} D^{-1},

with A, D the principal square roots of (I - Z0 Z0^*)^{-1} and
(I - Z0^* Z0)^{-1}; for kinds II and III, D = conj(A). Kind IV uses the
real factors X0, A, D of the Lie ball.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .domains import DomainSpec, as_point, contains, delta_IV
from .errors import NotInDomain, NotPositiveDefinite, NumericalBreakdown, SingularPivot, ZeroTangent
from .matrix_kernel import hermitian_sqrt, matrix_to_json
from .tolerances import DEFAULT


@dataclass(frozen=True)
class Automorphism:
    spec: DomainSpec
    Z0: np.ndarray
    A: np.ndarray
    D: np.ndarray
    X0: np.ndarray | None = None
    # cached inverse factor for kinds I-III (D^{-1} is the principal root of I - Z0^* Z0)
    D_inv: np.ndarray | None = None

    def __call__(self, Z) -> np.ndarray:
        return apply(self, Z)

    def to_json(self) -> dict:
        out = {
            "kind": self.spec.kind,
            "Z0": matrix_to_json(self.Z0),
            "A": matrix_to_json(self.A),
            "D": matrix_to_json(self.D),
        }
        if self.X0 is not None:
            out["X0"] = matrix_to_json(self.X0)
        return out


@dataclass(frozen=True)
class NormalizedIVData:
    r_tilde: float
    s_tilde: float


def _sqrt_pd(M: np.ndarray) -> np.ndarray:
    try:
        return hermitian_sqrt(M, tol=1e-9)
    except NotPositiveDefinite as exc:
        raise NumericalBreakdown(str(exc)) from None


def _check_base(spec: DomainSpec, Z0) -> np.ndarray:
    Z0 = as_point(spec, Z0)
    mem = contains(spec, Z0)
    if not mem.inside:
        raise NotInDomain(f"base point outside the domain (margin {mem.margin:.3e})")
    if mem.margin < DEFAULT.boundary_margin:
        raise NumericalBreakdown(f"base point too close to the boundary (margin {mem.margin:.3e})")
    return Z0


def lie_ball_X0(z0: np.ndarray) -> np.ndarray:
    """The real 2 x N matrix X0 attached to z0 in R_IV."""
    c = z0 @ z0
    X0 = -1.0 / (1.0 - abs(c) ** 2) * np.array(
        [
            (np.conj(c) - 1) * z0 + (c - 1) * z0.conj(),
            1j * (c + 1) * z0.conj() - 1j * (np.conj(c) + 1) * z0,
        ]
    )
    # both rows are real by construction
    return X0.real


def normalizer(spec: DomainSpec, Z0) -> Automorphism:
    Z0 = _check_base(spec, Z0)
    if spec.kind == "IV":
        X0 = lie_ball_X0(Z0[0])
        I2, IN = np.eye(2), np.eye(X0.shape[1])
        G2 = I2 - X0 @ X0.T
        GN = IN - X0.T @ X0
        if np.linalg.eigvalsh(G2).min() <= 0:
            raise NumericalBreakdown("I - X0 X0' is not positive-definite")
        A = _sqrt_pd(np.linalg.inv(G2)).real
        D = _sqrt_pd(np.linalg.inv(GN)).real
        return Automorphism(spec, Z0, A, D, X0=X0)
    r, c = Z0.shape
    Zh = Z0.conj().T
    A = _sqrt_pd(np.linalg.inv(np.eye(r) - Z0 @ Zh))
    if spec.kind == "I":
        Gn = np.eye(c) - Zh @ Z0
        D = _sqrt_pd(np.linalg.inv(Gn))
        D_inv = _sqrt_pd(Gn)
    else:
        D = A.conj()
        D_inv = _sqrt_pd(np.eye(r) - Z0 @ Zh).conj()
    return Automorphism(spec, Z0, A, D, D_inv=D_inv)


def _middle(aut: Automorphism, Z: np.ndarray) -> np.ndarray:
    M = np.eye(Z.shape[1]) - aut.Z0.conj().T @ Z
    if np.linalg.cond(M) > 1e14:
        raise SingularPivot("I - Z0^* Z is numerically singular")
    return np.linalg.inv(M)


def _project(spec: DomainSpec, W: np.ndarray) -> np.ndarray:
    if spec.kind == "II":
        return 0.5 * (W + W.T)
    if spec.kind == "III":
        return 0.5 * (W - W.T)
    return W


def _lie_a(z: np.ndarray) -> np.ndarray:
    zz = z @ z
    return np.array([(1 + zz) / 2, (1 - zz) / 2j])


_ONE_I = np.array([1.0, 1j])


def apply(aut: Automorphism, Z) -> np.ndarray:
    spec = aut.spec
    Z = as_point(spec, Z)
    if not contains(spec, Z):
        raise NotInDomain("point outside the domain")
    if spec.kind == "IV":
        z = Z[0]
        a = _lie_a(z)
        q = (a - z @ aut.X0.T) @ aut.A @ _ONE_I
        if abs(q) < 1e-300:
            raise SingularPivot("vanishing denominator")
        return (((z - a @ aut.X0) @ aut.D) / q).reshape(1, -1)
    W = aut.A @ (Z - aut.Z0) @ _middle(aut, Z) @ aut.D_inv
    return _project(spec, W)


def differential(aut: Automorphism, V) -> np.ndarray:
    """Push-forward of a tangent at Z0 to the origin."""
    spec = aut.spec
    V = as_point(spec, V)
    if spec.kind == "IV":
        z0 = aut.Z0[0]
        c = z0 @ z0
        U = np.eye(z0.size) - 2.0 / (1.0 - abs(c) ** 2) * (
            np.outer(z0, z0.conj()) - np.conj(c) * np.outer(z0, z0)
        )
        return (V[0] @ U @ aut.D.T / math.sqrt(delta_IV(z0))).reshape(1, -1)
    return _project(spec, aut.A @ V @ aut.D.conj().T)


def differential_at(aut: Automorphism, Z, V) -> np.ndarray:
    """Push-forward of a tangent V at an arbitrary interior point Z."""
    spec = aut.spec
    Z = as_point(spec, Z)
    V = as_point(spec, V)
    if spec.kind == "IV":
        z, v = Z[0], V[0]
        a = _lie_a(z)
        da = (z @ v) * _ONE_I
        q = (a - z @ aut.X0.T) @ aut.A @ _ONE_I
        dq = (da - v @ aut.X0.T) @ aut.A @ _ONE_I
        n = (z - a @ aut.X0) @ aut.D
        dn = (v - da @ aut.X0) @ aut.D
        return ((dn * q - n * dq) / q**2).reshape(1, -1)
    Minv = _middle(aut, Z)
    inner = V + (Z - aut.Z0) @ Minv @ aut.Z0.conj().T @ V
    return _project(spec, aut.A @ inner @ Minv @ aut.D_inv)


def kronecker_matrix(aut: Automorphism) -> np.ndarray:
    """Matrix C with flatten(Phi_*(V)) = flatten(V) @ C.

    Kind I: A' (x) conj(D)'. Kind II: the symmetric product with entries
    p_ab p_ij (A_ai A_bj + A_aj A_bi), p_ii = 1/sqrt(2), p_ij = 1. Kind III:
    the skew product A_ai A_bj - A_aj A_bi. Indices run over the chart.
    """
    spec = aut.spec
    if spec.kind == "IV":
        raise ValueError("kind IV has no tensor-product form")
    A = aut.A
    if spec.kind == "I":
        return np.kron(A.T, aut.D.conj().T)
    idx = spec.chart.index
    d = len(idx)
    C = np.empty((d, d), dtype=complex)
    pw = {True: 1 / math.sqrt(2.0), False: 1.0}
    # rows follow the input coordinates (ij), columns the output (ab)
    for col, (a, b) in enumerate(idx):
        for row, (i, j) in enumerate(idx):
            if spec.kind == "II":
                C[row, col] = pw[a == b] * pw[i == j] * (A[a, i] * A[b, j] + A[a, j] * A[b, i])
            else:
                C[row, col] = A[a, i] * A[b, j] - A[a, j] * A[b, i]
    return C


def r_s_tilde(spec: DomainSpec, z, v) -> NormalizedIVData:
    """r~ = 2N xi xi^*, s~ = |xi xi'|^2 / (xi xi^*)^2 with xi the push-forward of v."""
    if spec.kind != "IV":
        raise ValueError("r_s_tilde is defined on R_IV only")
    v = as_point(spec, v)
    if not np.any(v != 0):
        raise ZeroTangent("tangent vector is zero")
    xi = differential(normalizer(spec, z), v)[0]
    r = float(np.vdot(xi, xi).real)
    s = abs(xi @ xi) ** 2 / r**2
    return NormalizedIVData(2 * spec.dims[0] * r, float(min(max(s, 0.0), 1.0)))


def r_s_tilde_closed(spec: DomainSpec, z, v) -> NormalizedIVData:
    """Closed forms of r~ and s~ directly in terms of (z0; v)."""
    z = as_point(spec, z)[0]
    v = as_point(spec, v)[0]
    if not np.any(v != 0):
        raise ZeroTangent("tangent vector is zero")
    if not contains(spec, z.reshape(1, -1)):
        raise NotInDomain("point outside the domain")
    N = spec.dims[0]
    c = z @ z
    dl = delta_IV(z)
    zz_bar = np.vdot(z, z).real
    M = (
        dl * np.eye(N)
        - 2 * np.conj(c) * np.outer(z, z)
        - 2 * (1 - 2 * zz_bar) * np.outer(z, z.conj())
        + 2 * np.outer(z.conj(), z)
        - 2 * c * np.outer(z.conj(), z.conj())
    )
    r = float((v @ M @ v.conj()).real) * 2 * N / dl**2
    s = 4 * N**2 * abs(v @ v) ** 2 / (dl**2 * r**2)
    return NormalizedIVData(r, float(min(max(s, 0.0), 1.0)))


# isotropy maps at the origin


def transpose_map(V) -> np.ndarray:
    """Z -> Z' (an automorphism of R_I(n, n))."""
    return np.asarray(V).T.copy()


def rm_III2(Z) -> np.ndarray:
    """The entry permutation of R_III(4) that swaps the slots (1,4) and (2,3)."""
    Z = np.asarray(Z, dtype=complex)
    if Z.shape != (4, 4):
        raise ValueError("rm_III2 acts on 4 x 4 skew matrices")
    W = Z.copy()
    W[0, 3], W[1, 2] = Z[1, 2], Z[0, 3]
    W[3, 0], W[2, 1] = -W[0, 3], -W[1, 2]
    return W
