"""Two-qubit density matrices, their Bloch form, and X-state structure."""
import enum
import math
from dataclasses import InitVar, dataclass, field

import numpy as np

from . import constants as C
from . import kernels, qmat


class InvalidStateError(ValueError):
    """Raised for matrices that are not density matrices.

    ``eigenvalue`` holds the offending (most negative) eigenvalue when the
    failure is a positivity violation.
    """

    def __init__(self, message, eigenvalue=None):
        super().__init__(message)
        self.eigenvalue = eigenvalue


class NotXStateError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class TwoQubitState:
    """A validated 4x4 density matrix in the basis |00>, |01>, |10>, |11>.

    With ``strict=False`` a positivity violation is recorded in
    ``is_positive`` instead of raising; Hermiticity and unit trace are always
    enforced.
    """

    rho: np.ndarray
    strict: InitVar[bool] = True
    min_eigenvalue: float = field(init=False)

    def __post_init__(self, strict):
        rho = np.array(self.rho, dtype=complex)
        if rho.shape != (4, 4):
            raise InvalidStateError(f"expected a 4x4 matrix, got shape {rho.shape}")
        if not np.all(np.isfinite(rho)):
            raise InvalidStateError("matrix has non-finite entries")
        if np.max(np.abs(rho - rho.conj().T)) > C.HERMITIAN_TOL:
            raise InvalidStateError("matrix is not Hermitian")
        tr = np.trace(rho).real
        if abs(tr - 1.0) > C.TRACE_TOL:
            raise InvalidStateError(f"trace is {tr!r}, expected 1")
        rho = 0.5 * (rho + rho.conj().T)
        rho.setflags(write=False)
        lam = float(kernels.eig_herm4(rho)[-1])
        if strict and lam < C.POSITIVITY_TOL:
            raise InvalidStateError(f"negative eigenvalue {lam:.6g}", eigenvalue=lam)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "min_eigenvalue", lam)

    @property
    def is_positive(self):
        return self.min_eigenvalue >= C.POSITIVITY_TOL

    def purity(self):
        return float(np.vdot(self.rho, self.rho).real)


def as_state(s):
    return s if isinstance(s, TwoQubitState) else TwoQubitState(s)


@dataclass(frozen=True)
class BlochForm:
    """Local vectors and correlation matrix with the 1/2-normalized Pauli basis.

    x_i = tr(rho s_i x I)/2, y_j = tr(rho I x s_j)/2, T_ij = tr(rho s_i x s_j)/2.
    """

    x: np.ndarray
    y: np.ndarray
    T: np.ndarray


def bloch_decompose(s):
    rho = as_state(s).rho
    x = np.empty(3, dtype=complex)
    y = np.empty(3, dtype=complex)
    t = np.empty((3, 3), dtype=complex)
    for i, si in enumerate(qmat.PAULI):
        x[i] = 0.5 * np.trace(rho @ qmat.kron(si, qmat.I2))
        y[i] = 0.5 * np.trace(rho @ qmat.kron(qmat.I2, si))
        for j, sj in enumerate(qmat.PAULI):
            t[i, j] = 0.5 * np.trace(rho @ qmat.kron(si, sj))
    imag = max(np.max(np.abs(x.imag)), np.max(np.abs(y.imag)), np.max(np.abs(t.imag)))
    if imag > C.IMAG_DISCARD_TOL:
        raise InvalidStateError(f"Pauli expectations have imaginary part {imag:.3g}")
    return BlochForm(x.real.copy(), y.real.copy(), t.real.copy())


def bloch_matrix(b):
    """The (unchecked) 4x4 matrix assembled from a Bloch form."""
    rho = 0.25 * np.eye(4, dtype=complex)
    for i, si in enumerate(qmat.PAULI):
        rho += 0.5 * b.x[i] * qmat.kron(si, qmat.I2)
        rho += 0.5 * b.y[i] * qmat.kron(qmat.I2, si)
        for j, sj in enumerate(qmat.PAULI):
            rho += 0.5 * b.T[i][j] * qmat.kron(si, sj)
    return rho


def bloch_reconstruct(b):
    """Inverse of :func:`bloch_decompose`; non-positive results are flagged."""
    return TwoQubitState(bloch_matrix(b), strict=False)


# ---------------------------------------------------------------------------
# named states and families
# ---------------------------------------------------------------------------
def ket_to_dm(psi):
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


_S = 1.0 / math.sqrt(2.0)
BELL_KETS = {
    "phi+": np.array([_S, 0, 0, _S]),
    "phi-": np.array([_S, 0, 0, -_S]),
    "psi+": np.array([0, _S, _S, 0]),
    "psi-": np.array([0, _S, -_S, 0]),
}


def bell(name):
    try:
        return TwoQubitState(ket_to_dm(BELL_KETS[name]))
    except KeyError:
        raise ValueError(f"unknown Bell state {name!r}") from None


class Family(enum.Enum):
    PURE = "pure"
    WERNER = "werner"
    VEDRAL_PLENIO = "vp"


@dataclass(frozen=True)
class StateFamilyParam:
    family: Family
    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")


def family_matrix(family, alpha):
    """Unchecked density matrix of a one-parameter family member."""
    family = Family(family)
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    singlet = ket_to_dm(BELL_KETS["psi-"])
    if family is Family.PURE:
        return ket_to_dm([math.sqrt(1.0 - alpha), 0.0, 0.0, math.sqrt(alpha)])
    if family is Family.WERNER:
        return (1.0 - alpha) / 4.0 * np.eye(4, dtype=complex) + alpha * singlet
    classical = np.diag([1.0, 0.0, 0.0, 1.0]).astype(complex)
    return alpha / 2.0 * classical + (1.0 - alpha) * singlet


def make_family(p, alpha=None):
    """State of a family: pure sqrt(1-a)|00>+sqrt(a)|11>, Werner, or
    Vedral-Plenio. Accepts a :class:`StateFamilyParam` or ``(family, alpha)``.
    """
    if alpha is not None:
        p = StateFamilyParam(p, alpha)
    return TwoQubitState(family_matrix(p.family, p.alpha))


# ---------------------------------------------------------------------------
# X states
# ---------------------------------------------------------------------------
_OFF_X = [(i, j) for i in range(4) for j in range(4) if i != j and i + j != 3]


@dataclass(frozen=True)
class XState:
    """Seven real parameters of an X state with non-negative coherences.

    ``phase_a`` and ``phase_b`` are the angles of the local diagonal unitary
    diag(1, e^{i a}) x diag(1, e^{i b}) that was applied to make the
    coherences real and non-negative.
    """

    rho11: float
    rho22: float
    rho33: float
    rho44: float
    rho14: float
    rho23: float
    phase_a: float = 0.0
    phase_b: float = 0.0

    def to_matrix(self):
        m = np.diag([self.rho11, self.rho22, self.rho33, self.rho44]).astype(complex)
        m[0, 3] = m[3, 0] = self.rho14
        m[1, 2] = m[2, 1] = self.rho23
        return m

    def elements(self):
        return np.array(
            [self.rho11, self.rho22, self.rho33, self.rho44, self.rho14, self.rho23]
        )

    def is_valid(self, tol=1e-12):
        d = self.elements()[:4]
        return (
            abs(d.sum() - 1.0) <= C.TRACE_TOL
            and np.all(d >= -tol)
            and self.rho14 <= math.sqrt(max(self.rho11 * self.rho44, 0.0)) + tol
            and self.rho23 <= math.sqrt(max(self.rho22 * self.rho33, 0.0)) + tol
        )


def off_x_magnitude(rho):
    rho = np.asarray(rho)
    return max(abs(rho[i, j]) for i, j in _OFF_X)


def as_x_state(s):
    """Extract the X entries, rotating away the coherence phases.

    Raises
    ------
    NotXStateError
        If an entry outside the diagonal and anti-diagonal exceeds
        ``X_STATE_TOL`` in magnitude.
    """
    rho = s.rho if isinstance(s, TwoQubitState) else np.asarray(s, dtype=complex)
    off = off_x_magnitude(rho)
    if off > C.X_STATE_TOL:
        raise NotXStateError(f"off-X entry of magnitude {off:.3g}")
    c14, c23 = rho[0, 3], rho[1, 2]
    arg14 = float(np.angle(c14)) if c14 != 0 else 0.0
    arg23 = float(np.angle(c23)) if c23 != 0 else 0.0
    # U = diag(1, e^{ia}) x diag(1, e^{ib}) sends rho14 -> e^{-i(a+b)} rho14
    # and rho23 -> e^{i(b-a)} rho23
    a = 0.5 * (arg14 + arg23)
    b = 0.5 * (arg14 - arg23)
    return XState(
        float(rho[0, 0].real),
        float(rho[1, 1].real),
        float(rho[2, 2].real),
        float(rho[3, 3].real),
        float(abs(c14)),
        float(abs(c23)),
        a,
        b,
    )


def local_phase_unitary(a, b):
    return qmat.kron(np.diag([1.0, np.exp(1j * a)]), np.diag([1.0, np.exp(1j * b)]))


# ---------------------------------------------------------------------------
# random sampling
# ---------------------------------------------------------------------------
def random_density_matrix(rng):
    """Hilbert-Schmidt random 4x4 density matrix: G G^dagger / tr(G G^dagger)."""
    g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_state(rng):
    return TwoQubitState(random_density_matrix(rng))


def random_unitary2(rng):
    """Haar-random 2x2 unitary (QR of a complex Ginibre matrix, phase-fixed)."""
    z = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))
