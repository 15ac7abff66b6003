import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from finsler_domains.errors import NotHermitian, NotPositiveDefinite, NotSquare, ShapeMismatch
from finsler_domains.matrix_kernel import (
    hermitian_eigen,
    hermitian_sqrt,
    matrix_from_json,
    matrix_to_json,
    random_unitary,
    singular_values,
    trace_power,
)

from conftest import cplx


def random_pd(rng, n):
    X = cplx(rng, n, n)
    return X @ X.conj().T + 0.1 * np.eye(n)


def test_sqrt_identity():
    np.testing.assert_allclose(hermitian_sqrt(np.eye(3)), np.eye(3), atol=1e-15)


def test_sqrt_diagonal():
    np.testing.assert_allclose(hermitian_sqrt(np.diag([4.0, 1.0])), np.diag([2.0, 1.0]), atol=1e-15)


def test_sqrt_remultiplies(rng):
    M = random_pd(rng, 4)
    S = hermitian_sqrt(M)
    assert np.linalg.norm(S @ S - M) / np.linalg.norm(M) < 1e-10
    np.testing.assert_allclose(S, S.conj().T, atol=1e-14)
    assert np.linalg.eigvalsh(S).min() > 0


def test_sqrt_rejects_non_hermitian(rng):
    with pytest.raises(NotHermitian):
        hermitian_sqrt(cplx(rng, 3, 3))


def test_sqrt_rejects_indefinite():
    with pytest.raises(NotPositiveDefinite):
        hermitian_sqrt(np.diag([1.0, -1.0]))
    with pytest.raises(NotPositiveDefinite):
        hermitian_sqrt(np.zeros((2, 2)))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 6))
def test_sqrt_property(seed, n):
    M = random_pd(np.random.default_rng(seed), n)
    S = hermitian_sqrt(M)
    assert np.linalg.norm(S @ S - M) / np.linalg.norm(M) < 1e-10


def test_trace_power_identity():
    assert trace_power(np.eye(2), 3) == pytest.approx(2)


def test_trace_power_diagonal():
    assert trace_power(np.diag([2.0, 3.0]), 2) == pytest.approx(13)


def test_trace_power_vs_eigenvalues(rng):
    M = cplx(rng, 3, 3)
    ev = np.linalg.eigvals(M)
    expected = np.sum(ev**4)
    assert abs(trace_power(M, 4) - expected) / abs(expected) < 1e-9


@pytest.mark.parametrize("l", range(1, 7))
def test_trace_power_vs_accumulated_product(rng, l):
    M = cplx(rng, 5, 5)
    P = np.eye(5, dtype=complex)
    for _ in range(l):
        P = P @ M
    expected = np.trace(P)
    assert abs(trace_power(M, l) - expected) <= 1e-9 * abs(expected)


def test_trace_power_hermitian_psd_is_real(rng):
    X = cplx(rng, 4, 4)
    val = trace_power(X @ X.conj().T, 5)
    assert abs(val.imag) < 1e-12 * abs(val)


def test_trace_power_errors():
    with pytest.raises(NotSquare):
        trace_power(np.ones((2, 3)), 2)
    with pytest.raises(ValueError):
        trace_power(np.eye(2), 0)


def test_singular_values_rank_one():
    E = np.zeros((2, 3))
    E[0, 0] = 1
    np.testing.assert_allclose(singular_values(E), [1, 0], atol=1e-15)


def test_singular_values_diagonal():
    np.testing.assert_allclose(singular_values(np.diag([3.0, 4.0])), [4, 3])


def test_singular_values_trace(rng):
    V = cplx(rng, 2, 4)
    lam = singular_values(V)
    tr = np.trace(V @ V.conj().T).real
    assert abs(np.sum(lam**2) - tr) / tr < 1e-10
    assert np.all(np.diff(lam) <= 0) and np.all(lam >= 0)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_singular_values_unitary_invariance(seed):
    rng = np.random.default_rng(seed)
    V = cplx(rng, 3, 4)
    U1, U2 = random_unitary(3, rng), random_unitary(4, rng)
    np.testing.assert_allclose(singular_values(U1 @ V @ U2), singular_values(V), atol=1e-9)


def test_eigen_trivial():
    w, _ = hermitian_eigen(np.eye(4))
    np.testing.assert_allclose(w, [1, 1, 1, 1])
    w, _ = hermitian_eigen(np.diag([-1.0, 5.0]))
    np.testing.assert_allclose(w, [-1, 5])


def test_eigen_reconstruction(rng):
    X = cplx(rng, 5, 5)
    M = X + X.conj().T
    w, U = hermitian_eigen(M)
    err = np.linalg.norm(U @ np.diag(w) @ U.conj().T - M) / max(1, np.linalg.norm(M))
    assert err < 1e-10
    assert np.all(np.diff(w) >= 0)


def test_eigen_unitary_conjugation(rng):
    X = cplx(rng, 5, 5)
    M = X + X.conj().T
    U = random_unitary(5, rng)
    w1, _ = hermitian_eigen(M)
    w2, _ = hermitian_eigen(U @ M @ U.conj().T)
    np.testing.assert_allclose(w1, w2, atol=1e-9)


def test_eigen_rejects_non_hermitian(rng):
    with pytest.raises(NotHermitian):
        hermitian_eigen(cplx(rng, 3, 3))


def test_json_round_trip(rng):
    M = cplx(rng, 2, 3)
    obj = json.loads(json.dumps(matrix_to_json(M)))
    assert obj["rows"] == 2 and obj["cols"] == 3 and len(obj["data"]) == 6
    np.testing.assert_array_equal(matrix_from_json(obj), M)


def test_json_rejects_bad_length():
    with pytest.raises(ShapeMismatch):
        matrix_from_json({"rows": 2, "cols": 2, "data": [[1, 0]]})


def test_rejects_non_finite():
    with pytest.raises(ShapeMismatch):
        trace_power(np.array([[np.nan]]), 1)
