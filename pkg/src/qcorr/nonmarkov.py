"""Non-Markovian amplitude damping and dephasing with a Lorentzian bath.

Each qubit sees the same reduced dynamics, summarized by a complex
decoherence function p(t). For a Lorentzian spectrum the memory kernel is a
single damped exponential, so the integro-differential equation for p
collapses to a 2x2 linear ODE.

Basis convention: the excited level is the computational |1>. The element
lists written in the {|+>, |->} ordering therefore map index i to 5 - i.
"""
import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import constants as C
from .correlations import closed_forms_batch
from .records import TrajectoryRecord
from .states import Family, StateFamilyParam, XState, as_state, make_family


@dataclass(frozen=True)
class LorentzianSpectrum:
    """Bath spectrum of width ``lam`` detuned by ``delta``; ``gamma0`` sets the
    time unit. ``omega0`` is carried along but never enters the dynamics."""

    gamma0: float = 1.0
    lam: float = 0.1
    delta: float = 0.0
    omega0: float = 1.0

    def __post_init__(self):
        if not (self.gamma0 > 0.0 and self.lam > 0.0):
            raise ValueError("gamma0 and lam must be positive")
        if not math.isfinite(self.delta):
            raise ValueError("delta must be finite")


@dataclass(frozen=True)
class NoiseKernel:
    """f(tau) = amplitude * exp(-decay tau) * exp(i phase_rate tau)."""

    amplitude: float
    decay: float
    phase_rate: float = 0.0

    def __post_init__(self):
        if not self.decay > 0.0:
            raise ValueError("kernel decay must be positive")

    def __call__(self, tau):
        tau = np.asarray(tau, dtype=float)
        return self.amplitude * np.exp((-self.decay + 1j * self.phase_rate) * tau)

    @property
    def mass(self):
        """Integral of f over [0, inf)."""
        return self.amplitude / (self.decay - 1j * self.phase_rate)


def kernel_from_spectrum(spec):
    return NoiseKernel(0.5 * spec.gamma0 * spec.lam, spec.lam, spec.delta)


class PKind(enum.Enum):
    AMPLITUDE = "amplitude"
    DEPHASING = "dephasing"


@dataclass(frozen=True)
class DecoherenceFunction:
    kind: PKind
    t: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        v = np.asarray(self.values, dtype=complex)
        if t.shape != v.shape or t.ndim != 1:
            raise ValueError("times and values must be 1-D arrays of equal length")
        if t.size and (abs(v[0] - 1.0) > 1e-12 or t[0] != 0.0):
            raise ValueError("a decoherence function starts at t = 0 with p = 1")
        if t.size and np.max(np.abs(v)) > 1.0 + 1e-9:
            raise ValueError("|p(t)| exceeds 1")
        for a in (t, v):
            a.setflags(write=False)
        object.__setattr__(self, "kind", PKind(self.kind))
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "values", v)

    @property
    def abs(self):
        return np.abs(self.values)


# ---------------------------------------------------------------------------
# decoherence functions
# ---------------------------------------------------------------------------
def _amplitude_scalar(l, d, g2, t):
    if t == 0.0:
        return 1.0 + 0.0j
    if abs(d) < 1e-6 * max(abs(l), 1.0):
        x = 0.5 * d * t
        shc = cmath.sinh(x) / x if abs(x) > 1e-8 else 1.0
        return cmath.exp(-0.5 * l * t) * (cmath.cosh(x) + 0.5 * l * t * shc)
    r = l / d
    return 0.5 * (1.0 + r) * cmath.exp(0.5 * (d - l) * t) + 0.5 * (1.0 - r) * cmath.exp(-0.5 * (d + l) * t)


def amplitude_p(spec, t):
    """Excited-state amplitude of a qubit decaying into a Lorentzian bath.

    ``t`` may be a scalar or an array; the return type follows it.
    """
    l = complex(spec.lam, -spec.delta)
    d = cmath.sqrt(l * l - 2.0 * spec.gamma0 * spec.lam)
    if d.real < 0.0:
        d = -d
    ts = np.asarray(t, dtype=float)
    if np.any(ts < 0):
        raise ValueError("t must be non-negative")
    out = np.array([_amplitude_scalar(l, d, spec.gamma0, float(x)) for x in ts.reshape(-1)])
    if ts.ndim == 0:
        return complex(out[0])
    return out.reshape(ts.shape)


def amplitude_function(spec, t_grid):
    t = np.asarray(t_grid, dtype=float)
    return DecoherenceFunction(PKind.AMPLITUDE, t, amplitude_p(spec, t))


def resonant_closed_form(gamma0, lam, t):
    """Real solution for zero detuning and lam < 2 gamma0."""
    om = math.sqrt(2.0 * gamma0 * lam - lam * lam)
    t = np.asarray(t, dtype=float)
    return np.exp(-0.5 * lam * t) * (np.cos(0.5 * om * t) + lam / om * np.sin(0.5 * om * t))


def first_zero(spec, t_max=100.0, n=20000):
    """First sign change of the (real) resonant amplitude, refined by Brent."""
    if spec.delta != 0.0:
        raise ValueError("amplitude has no real zero crossing when detuned")
    t = np.linspace(0.0, t_max, n)
    p = amplitude_p(spec, t).real
    idx = np.nonzero(np.sign(p[1:]) != np.sign(p[:-1]))[0]
    if idx.size == 0:
        return None
    i = int(idx[0])
    return brentq(lambda s: amplitude_p(spec, s).real, t[i], t[i + 1], xtol=1e-14)


def _rk4_step_matrix(a, h):
    ha = h * a
    eye = np.eye(2, dtype=complex)
    ha2 = ha @ ha
    return eye + ha + ha2 / 2.0 + ha2 @ ha / 6.0 + ha2 @ ha2 / 24.0


def _integrate(kernel, t, substeps):
    # State (p, u) with u = integral term; linear autonomous system so one
    # classical RK4 step is the degree-4 Taylor polynomial of h*A.
    a = np.array(
        [[0.0, -1.0], [kernel.amplitude, -(kernel.decay - 1j * kernel.phase_rate)]], dtype=complex
    )
    dts = np.diff(t)
    out = np.empty(t.size, dtype=complex)
    if t.size == 0:
        return out
    y = np.array([1.0 + 0j, 0.0 + 0j])
    out[0] = y[0]
    cache = {}
    for i, dt in enumerate(dts):
        m = cache.get(dt)
        if m is None:
            m = np.linalg.matrix_power(_rk4_step_matrix(a, dt / substeps), substeps)
            cache[dt] = m
        y = m @ y
        out[i + 1] = y[0]
    return out


def dephasing_p(kernel, t_grid, tol=C.ODE_HALVING_TOL, max_substeps=C.ODE_MAX_SUBSTEPS):
    """Coherence factor p_d(t) on ``t_grid`` via the ODE reduction.

    Substeps per grid interval are doubled until halving changes p by less
    than ``tol`` in sup-norm.
    """
    t = np.asarray(t_grid, dtype=float)
    if t.size and (t[0] != 0.0 or np.any(np.diff(t) <= 0.0)):
        raise ValueError("time grid must be strictly ascending from 0")
    n = 1
    prev = _integrate(kernel, t, n)
    while True:
        n *= 2
        if n > max_substeps:
            raise RuntimeError(f"ODE step halving did not reach {tol:g} with {max_substeps} substeps")
        cur = _integrate(kernel, t, n)
        if t.size == 0 or np.max(np.abs(cur - prev)) < tol:
            return DecoherenceFunction(PKind.DEPHASING, t, cur)
        prev = cur


def _volterra_trapezoid(kernel, t_max, h):
    n = int(round(t_max / h))
    fk = kernel(np.arange(n + 1) * h)
    p = np.empty(n + 1, dtype=complex)
    p[0] = 1.0
    dp = 0.0 + 0.0j
    denom = 1.0 + 0.25 * h * h * fk[0]
    for k in range(n):
        m = k + 1
        # trapezoid weights: 1/2 on tau = 0, 1 inside, 1/2 on tau = t (implicit part)
        s = 0.5 * fk[m] * p[0]
        if k >= 1:
            s += np.dot(fk[m - 1:0:-1][: k], p[1:m])
        p[m] = (p[k] + 0.5 * h * dp - 0.5 * h * h * s) / denom
        dp = -h * (s + 0.5 * fk[0] * p[m])
    return p


def volterra_oracle(kernel, t_max, h=0.01):
    """p_d on the grid 0, h, ..., t_max by direct trapezoid quadrature of the
    integro-differential equation, Richardson-extrapolated with step h/2.

    Returns ``(t, p)``. O(n^2); intended for cross-checks only.
    """
    coarse = _volterra_trapezoid(kernel, t_max, h)
    fine = _volterra_trapezoid(kernel, t_max, 0.5 * h)[::2]
    t = np.arange(coarse.size) * h
    return t, (4.0 * fine - coarse) / 3.0


# ---------------------------------------------------------------------------
# evolution
# ---------------------------------------------------------------------------
def amplitude_kraus(pa):
    """Kraus pair diag(1, p) and sqrt(1 - |p|^2) |0><1| for each sample."""
    pa = np.asarray(pa, dtype=complex).reshape(-1)
    q = np.sqrt(np.clip(1.0 - np.abs(pa) ** 2, 0.0, None))
    ops = np.zeros((pa.size, 2, 2, 2), dtype=complex)
    ops[:, 0, 0, 0] = 1.0
    ops[:, 0, 1, 1] = pa
    ops[:, 1, 0, 1] = q
    return ops


def _two_qubit_amplitude(rho0, pa):
    ops = amplitude_kraus(pa)
    stacks = np.einsum("nmij,nrkl->nmrikjl", ops, ops).reshape(pa.size, 4, 4, 4)
    return np.einsum("nkij,jl,nkml->nim", stacks, rho0, stacks.conj())


def _two_qubit_dephasing(rho0, pd):
    # printed map: diagonals fixed, both anti-diagonal coherences scaled by p^2
    # (written for the |+>,|-> ordering, i.e. on rho_41 and rho_32 here)
    n = pd.size
    out = np.repeat(rho0[None, :, :].copy(), n, axis=0)
    f = pd**2
    out[:, 3, 0] = rho0[3, 0] * f
    out[:, 0, 3] = np.conj(out[:, 3, 0])
    out[:, 2, 1] = rho0[2, 1] * f
    out[:, 1, 2] = np.conj(out[:, 2, 1])
    return out


def law_eval_nonmarkov(alpha, pd_abs):
    """Printed MIN and GD for the pure family under non-Markovian dephasing."""
    a = float(alpha)
    c = float(pd_abs) ** 4 * (a - a * a)
    if a == 0.5:
        mn = 0.25 + 2.0 * c - min(0.25, c)
    else:
        mn = 2.0 * c
    gd = 2.0 * c + 0.25 + (0.5 - a) ** 2 - max(0.5 - a + a * a, c)
    return mn, gd


def printed_amplitude_elements(x0, pa):
    """The printed amplitude-damping element list, mapped to this basis."""
    pa2 = abs(pa) ** 2
    q2 = 1.0 - pa2
    # printed ordering: index 1 is |11> here, 4 is |00>
    p11, p22, p33 = x0.rho44, x0.rho33, x0.rho22
    n11 = pa2 * pa2 * p11
    n22 = pa2 * (p22 + q2 * p33)
    n33 = pa2 * (p33 + q2 * p11)
    n44 = 1.0 - p11 - p22 - p33
    return XState(n44, n33, n22, n11, pa2 * x0.rho14, pa2 * x0.rho23)


def evolve_nonmarkov(s0, pfun, family=None):
    """Evolve ``s0`` under identical local noise described by ``pfun``.

    Amplitude damping goes through the Kraus engine; dephasing applies the
    element map directly. When ``family`` is the pure family and the noise is
    dephasing, the printed MIN/GD laws are attached as predictions.
    """
    rho0 = as_state(s0).rho
    if pfun.t.size == 0:
        return []
    if pfun.kind is PKind.AMPLITUDE:
        rhos = _two_qubit_amplitude(rho0, pfun.values)
    else:
        rhos = _two_qubit_dephasing(rho0, pfun.values)
    mins, gds, _ = closed_forms_batch(rhos)
    predict = (
        pfun.kind is PKind.DEPHASING and family is not None and Family(family.family) is Family.PURE
    )
    alpha = family.alpha if family is not None else None
    pabs = pfun.abs
    out = []
    for i in range(pfun.t.size):
        mp = gp = None
        if predict:
            mp, gp = law_eval_nonmarkov(alpha, min(pabs[i], 1.0))
        out.append(
            TrajectoryRecord(
                float(pfun.t[i]), float(pabs[i]), rhos[i],
                float(mins[i]), float(gds[i]), mp, gp, alpha,
            )
        )
    return out


# ---------------------------------------------------------------------------
# figure data
# ---------------------------------------------------------------------------
FIGURES = ("F9", "F10")
FIGURE_SPECTRA = {
    "F9": (PKind.AMPLITUDE, LorentzianSpectrum(1.0, 0.1, 0.0)),
    "F10": (PKind.DEPHASING, LorentzianSpectrum(1.0, 0.1, 0.01)),
}


def decoherence_function(kind, spec, t_grid):
    kind = PKind(kind)
    if kind is PKind.AMPLITUDE:
        return amplitude_function(spec, t_grid)
    return dephasing_p(kernel_from_spectrum(spec), t_grid)


def figure_data_nonmarkov(fig, spec=None, n_alpha=C.ALPHA_POINTS, n_t=C.NONMARKOV_T_POINTS,
                          t_max=C.NONMARKOV_T_MAX, kind=None):
    """Pure-family (alpha, t) surface for F9/F10 or a custom spectrum.

    ``t_max`` is in units of 1/gamma0.
    """
    if fig is not None:
        fig = fig.upper()
        if fig not in FIGURE_SPECTRA:
            raise ValueError(f"unknown figure {fig!r}; expected F9 or F10")
        default_kind, default_spec = FIGURE_SPECTRA[fig]
        kind = kind or default_kind
        spec = spec or default_spec
    if spec is None or kind is None:
        raise ValueError("a custom run needs both a spectrum and a noise kind")
    t = np.linspace(0.0, t_max / spec.gamma0, n_t)
    pfun = decoherence_function(kind, spec, t)
    rows = []
    for a in np.linspace(0.0, 1.0, n_alpha):
        fam = StateFamilyParam(Family.PURE, float(a))
        rows.extend(evolve_nonmarkov(make_family(fam), pfun, fam))
    return rows
