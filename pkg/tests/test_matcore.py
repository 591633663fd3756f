import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from opweak.errors import EigenConvergenceError, InputError
from opweak.matcore import (
    abs_matrix,
    as_hermitian,
    direct_sum,
    hermitian_eig,
    hermitian_eigvals,
    kron,
    matrix_from_json,
    matrix_to_json,
    neg_part,
    pos_part,
    shifted_abs,
    support_projection,
    unitary_exp,
)
from opweak.sampling import haar_unitary, sample_gue

F = np.diag([1.0, -1.0])


def test_diagonal_eigendecomposition():
    eig = hermitian_eig(np.diag([3.0, -1.0, 2.0]))
    np.testing.assert_allclose(eig.eigenvalues, [3.0, 2.0, -1.0])
    q = np.abs(eig.unitary)
    np.testing.assert_allclose(q, np.eye(3)[:, [0, 2, 1]], atol=1e-15)


def test_identity():
    eig = hermitian_eig(np.eye(4))
    np.testing.assert_allclose(eig.eigenvalues, np.ones(4))
    np.testing.assert_allclose(eig.unitary.conj().T @ eig.unitary, np.eye(4), atol=1e-15)


def test_zero_matrix():
    eig = hermitian_eig(np.zeros((3, 3)))
    assert np.all(eig.eigenvalues == 0)


def test_random_reconstruction_seed7():
    a = sample_gue(8, 7)
    eig = hermitian_eig(a)
    assert np.linalg.norm(eig.reconstruct() - a) <= 8e-12 * np.linalg.norm(a)


def test_matches_lapack_oracle():
    a = sample_gue(20, 3)
    np.testing.assert_allclose(hermitian_eig(a).eigenvalues, np.linalg.eigvalsh(a)[::-1], atol=1e-13)
    np.testing.assert_allclose(hermitian_eigvals(a), np.linalg.eigvalsh(a)[::-1], atol=1e-13)


@pytest.mark.parametrize("n", [1, 2, 17, 64, 128])
def test_reconstruction_and_orthogonality(n):
    a = sample_gue(n, n)
    eig = hermitian_eig(a)
    assert np.linalg.norm(eig.reconstruct() - a) <= n * 1e-12 * np.linalg.norm(a)
    assert np.linalg.norm(eig.unitary.conj().T @ eig.unitary - np.eye(n)) <= n * 1e-13
    assert np.all(np.diff(eig.eigenvalues) <= 0)


def test_degenerate_spectrum():
    w = haar_unitary(12, 4)
    lam = np.repeat([2.0, -1.0, 0.0], 4)
    a = (w * lam) @ w.conj().T
    eig = hermitian_eig(a)
    np.testing.assert_allclose(eig.eigenvalues, np.sort(lam)[::-1], atol=1e-13)
    assert np.linalg.norm(eig.reconstruct() - a) <= 12e-12 * np.linalg.norm(a)


def test_nonconvergence_reports_residual():
    a = sample_gue(16, 1)
    with pytest.raises(EigenConvergenceError) as info:
        hermitian_eig(a, max_sweeps=1)
    assert info.value.residual > 0
    assert info.value.sweeps == 1


@pytest.mark.parametrize("bad", [np.array([[1.0, 2.0], [0.0, 1.0]]), np.array([[np.nan]]), np.ones((2, 3)), np.ones(3)])
def test_rejects_bad_input(bad):
    with pytest.raises(InputError):
        hermitian_eig(bad)


def test_as_hermitian_symmetrizes_within_tolerance():
    a = np.array([[1.0, 1.0 + 1e-14], [1.0, 2.0]])
    h = as_hermitian(a)
    assert np.array_equal(h, h.conj().T)


def test_spectral_functions():
    d = np.diag([3.0, -1.0, 2.0])
    np.testing.assert_allclose(abs_matrix(d), np.diag([3.0, 1.0, 2.0]), atol=1e-15)
    np.testing.assert_allclose(abs_matrix(np.array([[0.0, 1.0], [1.0, 0.0]])), np.eye(2), atol=1e-15)
    a = sample_gue(10, 5)
    p, m = pos_part(a), neg_part(a)
    np.testing.assert_allclose(p - m, a, atol=1e-13)
    assert np.linalg.norm(p @ m) <= 1e-11 * np.linalg.norm(a) ** 2
    np.testing.assert_allclose(shifted_abs(a, 0.0), abs_matrix(a), atol=1e-14)


def test_abs_is_psd_and_norm_preserving():
    a = sample_gue(12, 9)
    absa = abs_matrix(a)
    w = np.linalg.eigvalsh(absa)
    assert w.min() >= -1e-10 * np.abs(w).max()
    for p in (1, 2, 3):
        sa = np.linalg.svd(a, compute_uv=False)
        sb = np.linalg.svd(absa, compute_uv=False)
        assert np.sum(sa**p) == pytest.approx(np.sum(sb**p), rel=1e-12)


def test_support_projection():
    np.testing.assert_allclose(support_projection(np.diag([2.0, 0.0, -1.0])), np.diag([1.0, 0.0, 1.0]), atol=1e-15)
    np.testing.assert_allclose(support_projection(np.zeros((3, 3))), np.zeros((3, 3)))
    v = np.random.default_rng(1).standard_normal(6) + 0j
    v /= np.linalg.norm(v)
    p = support_projection(np.outer(v, v.conj()))
    assert abs(np.trace(p).real - 1) <= 1e-10
    np.testing.assert_allclose(p @ p, p, atol=1e-12)


def test_positive_and_negative_supports_are_orthogonal():
    w = haar_unitary(8, 2)
    a = (w * np.array([1.0, 0.5, 0.2, 0.1, -0.1, -0.3, -0.7, -2.0])) @ w.conj().T
    sp = support_projection(pos_part(a))
    sm = support_projection(neg_part(a))
    assert np.linalg.norm(sp @ sm) <= 1e-10


def test_kron_and_direct_sum():
    np.testing.assert_array_equal(kron(np.eye(1), F), F)
    np.testing.assert_array_equal(direct_sum([np.diag([1.0]), np.diag([2.0])]), np.diag([1.0, 2.0]))
    with pytest.raises(InputError):
        kron(np.eye(65), np.eye(64))


def test_tensor_abs_identity():
    a, b = sample_gue(6, 1), sample_gue(6, 2)
    lhs = abs_matrix(kron(a, F)) - abs_matrix(kron(b, F))
    rhs = np.kron(abs_matrix(a) - abs_matrix(b), np.eye(2))
    assert np.linalg.norm(lhs - rhs) <= 1e-10 * max(np.linalg.norm(a), np.linalg.norm(b))


def test_unitary_exp():
    np.testing.assert_allclose(unitary_exp(sample_gue(4, 1), 0.0), np.eye(4), atol=1e-14)
    np.testing.assert_allclose(unitary_exp(np.array([[np.pi]]), 1.0), [[-1.0]], atol=1e-15)
    u = unitary_exp(sample_gue(8, 3), 0.7)
    np.testing.assert_allclose(u.conj().T @ u, np.eye(8), atol=1e-11)


def test_matrix_json_round_trip():
    a = sample_gue(3, 1)
    assert np.array_equal(matrix_from_json(matrix_to_json(a)), a)
    assert "im" not in matrix_to_json(np.eye(2))
    with pytest.raises(InputError):
        matrix_from_json({"n": 2, "re": [[1.0]]})
    with pytest.raises(InputError):
        matrix_from_json({"re": [[1.0]]})


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 12), st.integers(0, 2**32 - 1), st.floats(1e-3, 1e3))
def test_eigensolver_property(n, seed, scale):
    a = scale * sample_gue(n, seed)
    eig = hermitian_eig(a)
    assert np.linalg.norm(eig.reconstruct() - a) <= n * 1e-12 * np.linalg.norm(a)
    assert np.linalg.norm(eig.unitary.conj().T @ eig.unitary - np.eye(n)) <= n * 1e-13
