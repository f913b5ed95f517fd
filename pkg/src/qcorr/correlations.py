"""Measurement-induced nonlocality (MIN) and geometric discord (GD).

Two independent routes are provided for each quantity:

* closed forms on the Bloch data ``(x, T)``;
* brute-force oracles that optimize the Hilbert-Schmidt disturbance
  ``||rho - Pi(rho)||^2`` directly on the density matrix, over projective
  measurements on qubit A.
"""
import enum
import functools
import math
from dataclasses import dataclass

import numpy as np

from . import constants as C
from . import kernels, qmat
from .states import TwoQubitState, as_state, bloch_decompose


class Branch(enum.Enum):
    X_NONZERO = "XNonzero"
    X_ZERO = "XZero"


@dataclass(frozen=True)
class MeasurementDirection:
    """Bloch direction of a projective measurement {(I + n.s)/2, (I - n.s)/2}."""

    n: np.ndarray

    def __post_init__(self):
        n = np.asarray(self.n, dtype=float)
        if n.shape != (3,) or abs(float(np.linalg.norm(n)) - 1.0) > C.SYMMETRY_TOL:
            raise ValueError("measurement direction must be a unit 3-vector")
        object.__setattr__(self, "n", n)

    def projectors(self):
        nsig = sum(c * s for c, s in zip(self.n, qmat.PAULI))
        return 0.5 * (qmat.I2 + nsig), 0.5 * (qmat.I2 - nsig)


def _direction(v):
    v = np.asarray(v, dtype=float)
    return MeasurementDirection(v / float(np.linalg.norm(v)))


@dataclass(frozen=True)
class LambdaSet:
    lambda_min_TTt: float
    lambda_max_xxT: float


@dataclass(frozen=True)
class CorrelationReport:
    min_value: float
    gd_value: float
    min_oracle: float
    gd_oracle: float
    min_argmax: MeasurementDirection
    gd_argmin: MeasurementDirection
    branch: Branch

    def as_row(self):
        return {
            "min": self.min_value,
            "gd": self.gd_value,
            "min_oracle": self.min_oracle,
            "gd_oracle": self.gd_oracle,
            "branch": self.branch.value,
        }


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------
def _tt(b):
    tt = b.T @ b.T.T
    return 0.5 * (tt + tt.T)


def lambda_set(s):
    b = bloch_decompose(s)
    tt = _tt(b)
    m = tt + np.outer(b.x, b.x)
    return LambdaSet(
        float(qmat.eig_sym3(tt)[2]), float(qmat.eig_sym3(0.5 * (m + m.T))[0])
    )


def branch(s):
    b = bloch_decompose(s)
    return Branch.X_NONZERO if np.linalg.norm(b.x) > C.EPS_X else Branch.X_ZERO


def min_closed(s):
    """MIN: tr(TT^t) - x^t TT^t x / |x|^2, or tr(TT^t) - lambda_min if x = 0."""
    b = bloch_decompose(s)
    tt = _tt(b)
    xn2 = float(b.x @ b.x)
    if math.sqrt(xn2) > C.EPS_X:
        val = float(np.trace(tt)) - float(b.x @ tt @ b.x) / xn2
    else:
        val = float(np.trace(tt)) - float(qmat.eig_sym3(tt)[2])
    return val if val > 0.0 else 0.0


def gd_closed(s):
    """GD: |x|^2 + |T|^2 - lambda_max(x x^t + T T^t)."""
    b = bloch_decompose(s)
    tt = _tt(b)
    m = tt + np.outer(b.x, b.x)
    val = float(b.x @ b.x) + float(np.trace(tt)) - float(qmat.eig_sym3(0.5 * (m + m.T))[0])
    return val if val > 0.0 else 0.0


def closed_forms_batch(rhos):
    """Vectorized ``(min, gd, |x|)`` for a stack of (trusted) density matrices."""
    return kernels.closed_forms(np.asarray(rhos, dtype=complex), C.EPS_X)


# ---------------------------------------------------------------------------
# oracles
# ---------------------------------------------------------------------------
def post_measurement_state(s, d):
    """sum_k (P_k x I) rho (P_k x I) for the measurement along ``d``."""
    rho = as_state(s).rho
    if not isinstance(d, MeasurementDirection):
        d = _direction(d)
    out = np.zeros((4, 4), dtype=complex)
    for proj in d.projectors():
        p4 = qmat.kron(proj, qmat.I2)
        out += p4 @ rho @ p4
    return TwoQubitState(out)


def reduced_state_a(rho):
    return np.einsum("ikjk->ij", np.asarray(rho).reshape(2, 2, 2, 2))


@functools.lru_cache(maxsize=8)
def fibonacci_sphere(n=C.SPHERE_GRID_SIZE):
    """Quasi-uniform lattice of ``n`` unit vectors (read-only array)."""
    i = np.arange(n) + 0.5
    z = 1.0 - 2.0 * i / n
    r = np.sqrt(1.0 - z * z)
    phi = math.pi * (1.0 + math.sqrt(5.0)) * i
    dirs = np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)
    dirs.setflags(write=False)
    return dirs


def min_oracle(s, tol=C.ORACLE_TOL):
    """Brute-force MIN and a maximizing measurement direction.

    A measurement leaves rho_A invariant only if it commutes with rho_A, so a
    nonzero local Bloch vector pins the direction; otherwise the whole sphere
    is searched.
    """
    st = as_state(s)
    rho_a = reduced_state_a(st.rho)
    r = np.array([np.trace(rho_a @ sig).real for sig in qmat.PAULI])
    if 0.5 * float(np.linalg.norm(r)) > C.EPS_X:
        d = _direction(r)
        val = qmat.hs_norm_sq(st.rho - post_measurement_state(st, d).rho)
        return max(val, 0.0), d
    val, n = kernels.sphere_search(st.rho, fibonacci_sphere(), True, tol)
    return max(val, 0.0), _direction(n)


def gd_oracle(s, tol=C.ORACLE_TOL):
    """Brute-force GD: minimum disturbance over all projective measurements."""
    st = as_state(s)
    val, n = kernels.sphere_search(st.rho, fibonacci_sphere(), False, tol)
    return max(val, 0.0), _direction(n)


def correlation_report(s):
    st = as_state(s)
    mo, mdir = min_oracle(st)
    go, gdir = gd_oracle(st)
    return CorrelationReport(
        min_closed(st), gd_closed(st), mo, go, mdir, gdir, branch(st)
    )
