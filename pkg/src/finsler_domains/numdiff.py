"""Central finite differences for Wirtinger derivatives of real functions on C^d."""

from __future__ import annotations

import numpy as np


def real_hessian(f, x0: np.ndarray, h: float) -> np.ndarray:
    """Central-difference Hessian of a real function of a real vector."""
    n = x0.size
    f0 = f(x0)
    E = np.eye(n) * h
    fp = np.array([f(x0 + E[i]) for i in range(n)])
    fm = np.array([f(x0 - E[i]) for i in range(n)])
    H = np.empty((n, n))
    for i in range(n):
        H[i, i] = (fp[i] - 2 * f0 + fm[i]) / h**2
        for j in range(i + 1, n):
            v = (
                f(x0 + E[i] + E[j])
                - f(x0 + E[i] - E[j])
                - f(x0 - E[i] + E[j])
                + f(x0 - E[i] - E[j])
            ) / (4 * h**2)
            H[i, j] = H[j, i] = v
    return H


def wirtinger_hessian(f, z0: np.ndarray, h: float) -> np.ndarray:
    """Matrix of d^2 f / dz_a dz-bar_b at z0 for real-valued f on C^d.

    Uses d dbar = 1/4 [(dx dx' + dy dy') + i (dx dy' - dy dx')] on the real
    Hessian in coordinates (x_1..x_d, y_1..y_d).
    """
    z0 = np.asarray(z0, dtype=complex).reshape(-1)
    d = z0.size

    def g(x):
        return f(x[:d] + 1j * x[d:])

    R = real_hessian(g, np.concatenate([z0.real, z0.imag]), h)
    xx, yy = R[:d, :d], R[d:, d:]
    xy, yx = R[:d, d:], R[d:, :d]
    return 0.25 * ((xx + yy) + 1j * (xy - yx))


def mixed_wirtinger(f, z0: np.ndarray, v0: np.ndarray, h: float) -> np.ndarray:
    """Matrix of d^2 f / dz_i dv-bar_j at (z0, v0) for real-valued f(z, v).

    With z = x + iy and v = a + ib:
    d_z dbar_v = 1/4 [(dx da + dy db) + i (dx db - dy da)].
    """
    z0 = np.asarray(z0, dtype=complex).reshape(-1)
    v0 = np.asarray(v0, dtype=complex).reshape(-1)
    d, e = z0.size, v0.size

    def cross(dz, dv):
        return (
            f(z0 + h * dz, v0 + h * dv)
            - f(z0 + h * dz, v0 - h * dv)
            - f(z0 - h * dz, v0 + h * dv)
            + f(z0 - h * dz, v0 - h * dv)
        ) / (4 * h**2)

    out = np.empty((d, e), dtype=complex)
    for i in range(d):
        ei = np.zeros(d, dtype=complex)
        ei[i] = 1
        for j in range(e):
            ej = np.zeros(e, dtype=complex)
            ej[j] = 1
            xa = cross(ei, ej)
            yb = cross(1j * ei, 1j * ej)
            xb = cross(ei, 1j * ej)
            ya = cross(1j * ei, ej)
            out[i, j] = 0.25 * ((xa + yb) + 1j * (xb - ya))
    return out
