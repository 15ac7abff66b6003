"""Dense complex matrix primitives.

All functions take and return plain ``numpy`` arrays and never mutate their
inputs.
"""

from __future__ import annotations

import numpy as np

from .errors import NotHermitian, NotPositiveDefinite, NotSquare, ShapeMismatch
from .tolerances import DEFAULT


def _as_matrix(M) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2:
        raise ShapeMismatch(f"expected a 2-d array, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ShapeMismatch("matrix has non-finite entries")
    return M


def _require_square(M: np.ndarray) -> None:
    if M.shape[0] != M.shape[1]:
        raise NotSquare(f"expected a square matrix, got {M.shape}")


def hermitian_defect(M: np.ndarray) -> float:
    """Relative Frobenius distance between M and its conjugate transpose."""
    scale = max(1.0, np.linalg.norm(M))
    return float(np.linalg.norm(M - M.conj().T) / scale)


def _require_hermitian(M: np.ndarray, tol: float) -> None:
    _require_square(M)
    d = hermitian_defect(M)
    if d > tol:
        raise NotHermitian(f"Hermitian defect {d:.3e} exceeds {tol:.1e}")


def hermitian_eigen(M, tol: float = DEFAULT.hermitian):
    """Eigenvalues (nondecreasing) and unitary eigenvectors of a Hermitian matrix."""
    M = _as_matrix(M)
    _require_hermitian(M, tol)
    H = 0.5 * (M + M.conj().T)
    w, U = np.linalg.eigh(H)
    return w, U


def hermitian_sqrt(M, tol: float = DEFAULT.hermitian) -> np.ndarray:
    """Principal (Hermitian positive-definite) square root of a Hermitian PD matrix."""
    w, U = hermitian_eigen(M, tol)
    if w[0] <= 0:
        raise NotPositiveDefinite(f"minimum eigenvalue {w[0]:.3e} is not positive")
    return (U * np.sqrt(w)) @ U.conj().T


def trace_power(M, l: int) -> complex:
    """tr(M^l) by repeated multiplication."""
    M = _as_matrix(M)
    _require_square(M)
    if l < 1:
        raise ValueError("l must be a positive integer")
    P = M
    for _ in range(l - 1):
        P = P @ M
    return complex(np.trace(P))


def singular_values(V) -> np.ndarray:
    """Singular values in nonincreasing order."""
    V = _as_matrix(V)
    return np.linalg.svd(V, compute_uv=False)


def dagger(M: np.ndarray) -> np.ndarray:
    return np.conj(M).T


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR with phase correction."""
    X = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    Q, R = np.linalg.qr(X)
    d = np.diag(R)
    return Q * (d / np.abs(d))


def random_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    X = rng.normal(size=(n, n))
    Q, R = np.linalg.qr(X)
    return Q * np.sign(np.diag(R))


def matrix_to_json(M) -> dict:
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    rows, cols = M.shape
    data = [[float(x.real), float(x.imag)] for x in M.reshape(-1)]
    return {"rows": rows, "cols": cols, "data": data}


def matrix_from_json(obj: dict) -> np.ndarray:
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ShapeMismatch(f"malformed matrix JSON: {exc}") from None
    if len(data) != rows * cols:
        raise ShapeMismatch(f"expected {rows * cols} entries, got {len(data)}")
    vals = np.array([complex(re, im) for re, im in data], dtype=complex)
    return _as_matrix(vals.reshape(rows, cols))
