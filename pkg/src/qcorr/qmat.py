"""Exact-size complex linear algebra for one and two qubits.

Matrices are plain numpy arrays: (2, 2) and (4, 4) complex, (3, 3) real
symmetric. The eigen-solvers live in the kernel backend; this module adds the
input checks.
"""
import numpy as np

from . import constants as C
from . import kernels

I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SX, SY, SZ)


def kron(a, b):
    """Kronecker product; entry [2i+k, 2j+l] is a[i, j] * b[k, l]."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return np.einsum("ij,kl->ikjl", a, b).reshape(a.shape[0] * b.shape[0], -1)


def dagger(m):
    return np.conj(np.asarray(m)).T


def hs_norm_sq(m):
    """Squared Hilbert-Schmidt norm tr(M^dagger M)."""
    m = np.asarray(m)
    return float(np.vdot(m, m).real)


def _check_finite(m):
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")


def eig_sym3(m):
    """Eigenvalues of a real symmetric 3x3 matrix, descending.

    Trigonometric closed form, with a Jacobi fallback near degenerate spectra.

    Raises
    ------
    ValueError
        If ``m`` is not 3x3 or is asymmetric beyond ``SYMMETRY_TOL``.
    """
    m = np.asarray(m, dtype=float)
    if m.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {m.shape}")
    _check_finite(m)
    if np.max(np.abs(m - m.T)) > C.SYMMETRY_TOL:
        raise ValueError("matrix is not symmetric")
    return kernels.eig_sym3(m)


def eig_herm4(m):
    """Eigenvalues of a 4x4 Hermitian matrix, descending (cyclic Jacobi)."""
    m = np.asarray(m, dtype=complex)
    if m.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {m.shape}")
    _check_finite(m)
    if np.max(np.abs(m - m.conj().T)) > C.HERMITIAN_TOL:
        raise ValueError("matrix is not Hermitian")
    return kernels.eig_herm4(m)
