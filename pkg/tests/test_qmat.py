import numpy as np
import pytest
from hypothesis import given

from qcorr import qmat
from strategies import density_matrices, symmetric3


def test_kron_index_convention():
    a = np.arange(4).reshape(2, 2)
    b = np.array([[1, 2], [3, 4]])
    np.testing.assert_array_equal(qmat.kron(a, b), np.kron(a, b))


def test_pauli_algebra():
    for s in qmat.PAULI:
        np.testing.assert_allclose(s @ s, qmat.I2)
    np.testing.assert_allclose(qmat.SX @ qmat.SY, 1j * qmat.SZ)


def test_hs_norm_sq_matches_frobenius():
    m = np.array([[1, 2j], [3, -1]])
    assert qmat.hs_norm_sq(m) == pytest.approx(np.linalg.norm(m) ** 2)


def test_dagger():
    m = np.array([[1, 2j], [3, 4]])
    np.testing.assert_array_equal(qmat.dagger(m), m.conj().T)


@pytest.mark.parametrize(
    "m,expected",
    [
        (np.diag([3.0, 1.0, 2.0]), [3.0, 2.0, 1.0]),
        (np.zeros((3, 3)), [0.0, 0.0, 0.0]),
        (np.eye(3) * 5, [5.0, 5.0, 5.0]),
        (np.diag([1.0, 1.0, 1.0 + 1e-9]), [1.0 + 1e-9, 1.0, 1.0]),
        (np.array([[2.0, 1.0, 0.0], [1.0, 2.0, 0.0], [0.0, 0.0, 0.0]]), [3.0, 1.0, 0.0]),
    ],
)
def test_eig_sym3_known(m, expected):
    np.testing.assert_allclose(qmat.eig_sym3(m), expected, atol=1e-13)


def test_eig_sym3_rejects_asymmetric():
    with pytest.raises(ValueError):
        qmat.eig_sym3(np.array([[0, 1, 0], [0, 0, 0], [0, 0, 0]], dtype=float))


def test_eig_sym3_rejects_shape_and_nan():
    with pytest.raises(ValueError):
        qmat.eig_sym3(np.eye(2))
    with pytest.raises(ValueError):
        qmat.eig_sym3(np.full((3, 3), np.nan))


def test_eig_sym3_near_degenerate_pair():
    # eigenvalues 1, 1 + 1e-10, -2 rotated by a random orthogonal matrix
    q, _ = np.linalg.qr(np.random.default_rng(1).standard_normal((3, 3)))
    m = q @ np.diag([1.0, 1.0 + 1e-10, -2.0]) @ q.T
    m = 0.5 * (m + m.T)
    np.testing.assert_allclose(qmat.eig_sym3(m), [1.0 + 1e-10, 1.0, -2.0], atol=1e-13)


@given(symmetric3())
def test_eig_sym3_matches_lapack(m):
    ref = np.sort(np.linalg.eigvalsh(m))[::-1]
    np.testing.assert_allclose(qmat.eig_sym3(m), ref, atol=1e-11 * max(1.0, np.abs(m).max()))


@given(density_matrices())
def test_eig_herm4_matches_lapack(rho):
    ref = np.sort(np.linalg.eigvalsh(rho))[::-1]
    np.testing.assert_allclose(qmat.eig_herm4(rho), ref, atol=1e-12)


def test_eig_herm4_rejects_non_hermitian():
    m = np.zeros((4, 4), dtype=complex)
    m[0, 1] = 1.0
    with pytest.raises(ValueError):
        qmat.eig_herm4(m)


def test_eig_herm4_degenerate_complex():
    psi = np.array([1, 1j, 0, 0]) / np.sqrt(2)
    m = np.outer(psi, psi.conj()) + np.diag([0, 0, 1, 1])
    np.testing.assert_allclose(qmat.eig_herm4(m), [1, 1, 1, 0], atol=1e-14)
