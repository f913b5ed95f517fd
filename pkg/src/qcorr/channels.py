"""Single-qubit CPTP channels in Kraus form and their local two-qubit action."""
import math
from dataclasses import dataclass

import numpy as np

from . import constants as C
from . import qmat
from .states import TwoQubitState, as_state

_ZERO_KRAUS = 1e-15


@dataclass(frozen=True)
class QubitChannel:
    """A list of 2x2 Kraus operators. CPTP is checked by :func:`validate_cptp`,
    not here, so that deliberately broken sets can be represented."""

    kraus: tuple
    label: str = ""

    def __post_init__(self):
        ops = tuple(np.array(k, dtype=complex) for k in self.kraus)
        if not ops or any(k.shape != (2, 2) for k in ops):
            raise ValueError("Kraus operators must be a non-empty list of 2x2 matrices")
        if len(ops) > 4:
            raise ValueError(f"a qubit channel needs at most 4 Kraus operators, got {len(ops)}")
        for k in ops:
            k.setflags(write=False)
        object.__setattr__(self, "kraus", ops)

    def __call__(self, rho):
        rho = np.asarray(rho, dtype=complex)
        return sum(k @ rho @ qmat.dagger(k) for k in self.kraus)


@dataclass(frozen=True)
class BlochAffine:
    """Bloch-vector action v -> T v + t of a qubit channel."""

    T: np.ndarray
    t: np.ndarray

    @property
    def is_unital(self):
        return bool(np.max(np.abs(self.t)) <= C.SYMMETRY_TOL)


@dataclass(frozen=True)
class ChannelStrength:
    gamma: float
    p: float = 1.0

    def __post_init__(self):
        _check_unit("gamma", self.gamma)
        _check_unit("p", self.p)


def _check_unit(name, v):
    if not (0.0 <= v <= 1.0):
        raise ValueError(f"{name} must lie in [0, 1], got {v}")


def _prune(ops):
    return [k for k in ops if np.max(np.abs(k)) > _ZERO_KRAUS] or [ops[0]]


def identity():
    return QubitChannel((qmat.I2,), "id")


def depolarizing(gamma):
    """{sqrt(1-3g/4) I, sqrt(g/4) X, sqrt(g/4) Y, sqrt(g/4) Z}; Bloch T = (1-g) I."""
    _check_unit("gamma", gamma)
    a = math.sqrt(1.0 - 0.75 * gamma)
    b = math.sqrt(gamma / 4.0)
    return QubitChannel((a * qmat.I2, b * qmat.SX, b * qmat.SY, b * qmat.SZ), f"depol:{gamma!r}")


def depolarizing_as_printed(gamma):
    """The depolarizing set with sqrt(g/2) Pauli weights and i*sigma_y.

    Not trace preserving for g > 0; kept to document that fact.
    """
    _check_unit("gamma", gamma)
    a = math.sqrt(1.0 - 0.75 * gamma)
    b = math.sqrt(gamma / 2.0)
    return QubitChannel(
        (a * qmat.I2, b * qmat.SX, b * 1j * qmat.SY, b * qmat.SZ), f"depol-printed:{gamma!r}"
    )


def dephasing(gamma):
    _check_unit("gamma", gamma)
    e0 = np.diag([1.0, math.sqrt(1.0 - gamma)])
    e1 = np.diag([0.0, math.sqrt(gamma)])
    return QubitChannel(tuple(_prune([e0, e1])), f"deph:{gamma!r}")


def gad(gamma, p=1.0):
    """Generalized amplitude damping; ``p = 1`` is plain amplitude damping
    towards |0>, and the fixed point is diag(p, 1 - p)."""
    _check_unit("gamma", gamma)
    _check_unit("p", p)
    sg, sk = math.sqrt(gamma), math.sqrt(1.0 - gamma)
    sp, sq = math.sqrt(p), math.sqrt(1.0 - p)
    ops = [
        sp * np.array([[1.0, 0.0], [0.0, sk]]),
        sp * np.array([[0.0, sg], [0.0, 0.0]]),
        sq * np.array([[sk, 0.0], [0.0, 1.0]]),
        sq * np.array([[0.0, 0.0], [sg, 0.0]]),
    ]
    return QubitChannel(tuple(_prune(ops)), f"gad:{gamma!r}:{p!r}")


def minimal_kraus(ops):
    """Kraus set of minimal length (at most 4) via the Choi matrix."""
    choi = np.zeros((4, 4), dtype=complex)
    for k in ops:
        v = np.asarray(k, dtype=complex).reshape(-1)  # row-major vec
        choi += np.outer(v, v.conj())
    w, vecs = np.linalg.eigh(choi)
    out = []
    for idx in np.argsort(w)[::-1]:
        if w[idx] > _ZERO_KRAUS:
            out.append(math.sqrt(w[idx]) * vecs[:, idx].reshape(2, 2))
    return out


def compose(first, second):
    """Channel applying ``first`` then ``second``."""
    ops = [f2 @ f1 for f1 in first.kraus for f2 in second.kraus]
    ops = _prune(ops)
    if len(ops) > 4:
        ops = minimal_kraus(ops)
    return QubitChannel(tuple(ops), f"{first.label}>{second.label}")


def cptp_defect(ch):
    s = sum(qmat.dagger(k) @ k for k in ch.kraus)
    return float(np.max(np.abs(s - qmat.I2)))


def validate_cptp(ch):
    """True iff sum_k E_k^dagger E_k = I within ``CPTP_TOL``."""
    return cptp_defect(ch) <= C.CPTP_TOL


def kraus_products(ch_a, ch_b):
    a, b = np.array(ch_a.kraus), np.array(ch_b.kraus)
    return np.einsum("mij,nkl->mnikjl", a, b).reshape(len(a) * len(b), 4, 4)


def apply_local_matrix(ch_a, ch_b, rho):
    """sum_{mu,nu} (E_mu x F_nu) rho (E_mu x F_nu)^dagger on raw arrays.

    ``rho`` may be a single 4x4 matrix or a stack of shape (n, 4, 4).
    """
    ks = kraus_products(ch_a, ch_b)
    return np.einsum("kij,...jl,kml->...im", ks, np.asarray(rho, dtype=complex), ks.conj())


def apply_local(ch_a, ch_b, s):
    """Independent local channels on the two qubits, returning a validated state."""
    for ch in (ch_a, ch_b):
        if not validate_cptp(ch):
            raise ValueError(f"channel {ch.label!r} is not trace preserving")
    return TwoQubitState(apply_local_matrix(ch_a, ch_b, as_state(s).rho))


def bloch_affine(ch):
    """Extract (T, t) by pushing I/2 and the three Pauli eigenstates through."""
    if not validate_cptp(ch):
        raise ValueError(f"channel {ch.label!r} is not trace preserving")

    def vec(rho):
        return np.array([np.trace(rho @ s).real for s in qmat.PAULI])

    t = vec(ch(0.5 * qmat.I2))
    cols = [vec(ch(0.5 * (qmat.I2 + s))) - t for s in qmat.PAULI]
    return BlochAffine(np.stack(cols, axis=1), t)


def stack_channels(channels):
    """Kraus-product stacks for a list of (A, B) channel pairs, padded to equal length."""
    blocks = [kraus_products(a, b) for a, b in channels]
    width = max(len(b) for b in blocks)
    out = np.zeros((len(blocks), width, 4, 4), dtype=complex)
    for i, b in enumerate(blocks):
        out[i, : len(b)] = b
    return out


def apply_stacked(stacks, rho):
    """Apply per-time Kraus stacks (n, k, 4, 4) to one initial matrix."""
    return np.einsum("nkij,jl,nkml->nim", stacks, np.asarray(rho, dtype=complex), stacks.conj())
