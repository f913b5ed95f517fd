"""Markovian decoherence of MIN and geometric discord.

The generic Kraus pipeline (``channels.apply_local``) is the ground truth.
The printed decay laws for the three state families are kept as independent
predictors; :func:`law_eval` evaluates them as written and the residuals tell
which ones agree with the engine.
"""
import enum
import math
from dataclasses import dataclass

import numpy as np

from . import constants as C
from . import channels as ch
from .correlations import closed_forms_batch
from .records import TrajectoryRecord
from .states import Family, StateFamilyParam, XState, as_state, bell, make_family


class Kind(enum.Enum):
    DEPOLARIZING = "depol"
    DEPHASING = "deph"
    DAMPING = "gad"
    COMBINED = "deph+gad"


@dataclass(frozen=True)
class RateSchedule:
    """gamma(t) = 1 - exp(-rate t)."""

    kind: Kind
    rate: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if not self.rate > 0.0:
            raise ValueError(f"rate must be positive, got {self.rate}")

    def gamma(self, t):
        return -np.expm1(-self.rate * np.asarray(t, dtype=float))


@dataclass(frozen=True)
class ConstantStrength:
    """Time-independent channel strength, for single-gamma runs."""

    kind: Kind
    value: float

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"gamma must lie in [0, 1], got {self.value}")

    def gamma(self, t):
        return np.full(np.shape(t), self.value, dtype=float)


def channel_at(kind, gamma, p=1.0, gamma2=None):
    """Single-qubit channel of the given kind at strength ``gamma``.

    For ``COMBINED``, ``gamma`` drives the damping and ``gamma2`` (default
    ``gamma``) the dephasing, which is applied after the damping.
    """
    kind = Kind(kind)
    gamma = float(min(max(gamma, 0.0), 1.0))
    if kind is Kind.DEPOLARIZING:
        return ch.depolarizing(gamma)
    if kind is Kind.DEPHASING:
        return ch.dephasing(gamma)
    if kind is Kind.DAMPING:
        return ch.gad(gamma, p)
    g2 = gamma if gamma2 is None else float(min(max(gamma2, 0.0), 1.0))
    return ch.compose(ch.gad(gamma, p), ch.dephasing(g2))


# ---------------------------------------------------------------------------
# printed laws
# ---------------------------------------------------------------------------
class Law(enum.Enum):
    DEPOL_PURE = "depol_pure"
    DEPOL_WERNER = "depol_werner"
    DEPH_PURE_MIN = "deph_pure_min"
    DEPH_PURE_GD = "deph_pure_gd"
    DEPH_WERNER_MIN = "deph_werner_min"
    DEPH_WERNER_GD = "deph_werner_gd"
    DEPOL_PURE_ELEMENTS = "depol_pure_elements"
    DEPH_PURE_ELEMENTS = "deph_pure_elements"
    DEPH_WERNER_ELEMENTS = "deph_werner_elements"
    GAD_PURE_ELEMENTS = "gad_pure_elements"
    GAD_WERNER_ELEMENTS = "gad_werner_elements"
    COMBINED_PURE_ELEMENTS = "combined_pure_elements"


@dataclass(frozen=True)
class ClosedFormLaw:
    law: Law
    family: Family
    kind: Kind
    output: str  # "min", "gd", "both" or "elements"
    suspect: bool  # printed form has visible typos; informational only


LAWS = {
    law.law: law
    for law in (
        ClosedFormLaw(Law.DEPOL_PURE, Family.PURE, Kind.DEPOLARIZING, "both", False),
        ClosedFormLaw(Law.DEPOL_WERNER, Family.WERNER, Kind.DEPOLARIZING, "both", False),
        ClosedFormLaw(Law.DEPH_PURE_MIN, Family.PURE, Kind.DEPHASING, "min", False),
        ClosedFormLaw(Law.DEPH_PURE_GD, Family.PURE, Kind.DEPHASING, "gd", False),
        ClosedFormLaw(Law.DEPH_WERNER_MIN, Family.WERNER, Kind.DEPHASING, "min", False),
        ClosedFormLaw(Law.DEPH_WERNER_GD, Family.WERNER, Kind.DEPHASING, "gd", False),
        ClosedFormLaw(Law.DEPOL_PURE_ELEMENTS, Family.PURE, Kind.DEPOLARIZING, "elements", True),
        ClosedFormLaw(Law.DEPH_PURE_ELEMENTS, Family.PURE, Kind.DEPHASING, "elements", False),
        ClosedFormLaw(Law.DEPH_WERNER_ELEMENTS, Family.WERNER, Kind.DEPHASING, "elements", False),
        ClosedFormLaw(Law.GAD_PURE_ELEMENTS, Family.PURE, Kind.DAMPING, "elements", True),
        ClosedFormLaw(Law.GAD_WERNER_ELEMENTS, Family.WERNER, Kind.DAMPING, "elements", True),
        ClosedFormLaw(Law.COMBINED_PURE_ELEMENTS, Family.PURE, Kind.COMBINED, "elements", True),
    )
}


def _x_from_elements(r11, r22, r33, r44, r14, r23):
    return XState(float(r11), float(r22), float(r33), float(r44), float(r14), float(r23))


def law_eval(law, alpha, gamma, p=None):
    """Evaluate a printed law verbatim.

    Correlation laws return a float (``both`` laws give the common value of
    MIN and GD); element laws return an :class:`XState` whose coherences are
    the printed magnitudes. The combined-noise law prints its coherence under
    the label rho23; it is returned in whichever slot the family populates
    (rho14 for the pure family).
    """
    law = Law(law)
    a, g = float(alpha), float(gamma)
    if law is Law.DEPOL_PURE:
        return 2.0 * a * (1.0 - a) * (1.0 - g) ** 4
    if law is Law.DEPOL_WERNER:
        return a * a / 2.0 * (1.0 - g) ** 4
    if law is Law.DEPH_PURE_MIN:
        if a == 0.5:
            return 0.25 + (1.0 - g) ** 2 / 4.0
        return 2.0 * a * (1.0 - a) * (1.0 - g) ** 2
    if law is Law.DEPH_PURE_GD:
        return 2.0 * a * (1.0 - a) * (1.0 - g) ** 2
    if law is Law.DEPH_WERNER_MIN:
        return (a / 2.0) ** 2 * (1.0 - g) ** 2 + (a / 2.0) ** 2
    if law is Law.DEPH_WERNER_GD:
        return 2.0 * (a / 2.0) ** 2 * (1.0 - g) ** 2

    c0 = math.sqrt(a - a * a) if 0.0 < a < 1.0 else 0.0
    if law is Law.DEPOL_PURE_ELEMENTS:
        r11 = (1.0 - a) * (1.0 - g) + g * g / 4.0
        r22 = g / 2.0 * (1.0 - g / 2.0)
        return _x_from_elements(r11, r22, r22, 1.0 - r11 - 2.0 * r22, c0 * (1.0 - g) ** 2, 0.0)
    if law is Law.DEPH_PURE_ELEMENTS:
        return _x_from_elements(1.0 - a, 0.0, 0.0, a, (1.0 - g) * c0, 0.0)
    if law is Law.DEPH_WERNER_ELEMENTS:
        d1, d2 = (1.0 - a) / 4.0, (1.0 + a) / 4.0
        return _x_from_elements(d1, d2, d2, d1, 0.0, a / 2.0 * (1.0 - g))
    if law is Law.COMBINED_PURE_ELEMENTS:
        e = 1.0 - g
        r11 = 1.0 - a + a * (1.0 - e) ** 2
        r22 = a * (1.0 - e) ** 2 * e
        return _x_from_elements(r11, r22, r22, a * e * e, c0 * e * e, 0.0)

    if p is None:
        raise ValueError(f"law {law.value} needs the damping asymmetry p")
    p = float(p)
    if law is Law.GAD_PURE_ELEMENTS:
        r11 = (1.0 - (1.0 - p) * g) ** 2 - a * (1.0 - g) * (1.0 - (1.0 - 2.0 * p) * g)
        r22 = -g * (-1.0 + a + p * (1.0 - 2.0 * a * (1.0 - g) - 2.0 * g) + g * (1.0 + p * p - a))
        return _x_from_elements(r11, r22, r22, 1.0 - r11 - 2.0 * r22, c0 * (1.0 - g), 0.0)
    if law is Law.GAD_WERNER_ELEMENTS:
        # the printed rho22 has an unbalanced parenthesis; read as ((1-2p) g)^2
        r11 = 0.25 * (-a * (1.0 - g) ** 2 + (1.0 + (2.0 * p - 1.0) * g) ** 2)
        r22 = 0.25 * (1.0 + a * (1.0 - g) ** 2 - ((1.0 - 2.0 * p) * g) ** 2)
        return _x_from_elements(r11, r22, r22, 1.0 - r11 - 2.0 * r22, 0.0, a / 2.0 * (1.0 - g))
    raise ValueError(f"unknown law {law}")


def correlation_laws(family, kind):
    """(min law, gd law) for a family/channel pair, or ``None``."""
    family, kind = Family(family), Kind(kind)
    table = {
        (Family.PURE, Kind.DEPOLARIZING): (Law.DEPOL_PURE, Law.DEPOL_PURE),
        (Family.WERNER, Kind.DEPOLARIZING): (Law.DEPOL_WERNER, Law.DEPOL_WERNER),
        (Family.PURE, Kind.DEPHASING): (Law.DEPH_PURE_MIN, Law.DEPH_PURE_GD),
        (Family.WERNER, Kind.DEPHASING): (Law.DEPH_WERNER_MIN, Law.DEPH_WERNER_GD),
    }
    return table.get((family, kind))


def element_law(family, kind):
    family, kind = Family(family), Kind(kind)
    for law in LAWS.values():
        if law.output == "elements" and law.family is family and law.kind is kind:
            return law.law
    return None


def element_residual(predicted, engine):
    """Max absolute difference over the six X parameters.

    Coherences are compared by magnitude; a prediction that places its
    coherence in the other anti-diagonal slot is matched to the engine's
    nonzero one.
    """
    p = predicted.elements()
    e = engine.elements()
    diag = float(np.max(np.abs(p[:4] - e[:4])))
    straight = max(abs(p[4] - e[4]), abs(p[5] - e[5]))
    swapped = max(abs(p[4] - e[5]), abs(p[5] - e[4]))
    return max(diag, min(straight, swapped))


# ---------------------------------------------------------------------------
# evolution
# ---------------------------------------------------------------------------
def kraus_stacks(kind, gammas, p=1.0, gammas2=None):
    """Per-strength two-qubit Kraus stacks, shape (n, k, 4, 4)."""
    gammas = np.asarray(gammas, dtype=float)
    g2 = gammas if gammas2 is None else np.asarray(gammas2, dtype=float)
    pairs = []
    for g, h in zip(gammas, g2):
        c = channel_at(kind, g, p, h)
        pairs.append((c, c))
    return ch.stack_channels(pairs)


def evolve_gammas(s0, kind, gammas, p=1.0, gammas2=None):
    """Evolved matrices for each strength in ``gammas`` (identical channel on
    both qubits)."""
    rho0 = as_state(s0).rho
    if np.size(gammas) == 0:
        return np.zeros((0, 4, 4), dtype=complex)
    return ch.apply_stacked(kraus_stacks(kind, gammas, p, gammas2), rho0)


def _check_grid(t):
    if t.size and (t[0] != 0.0 or np.any(np.diff(t) < 0)):
        raise ValueError("time grid must be ascending and start at 0")


def evolve_markov(s0, sched, t_grid, p=1.0, family=None, gamma2_sched=None):
    """Evolve ``s0`` on ``t_grid`` and compute MIN/GD with the closed forms.

    Parameters
    ----------
    s0 : TwoQubitState or array
    sched : RateSchedule or ConstantStrength
    t_grid : ascending times starting at 0
    p : float
        GAD asymmetry (``DAMPING`` and ``COMBINED`` kinds).
    family : StateFamilyParam, optional
        When given and a printed correlation law exists for the pair, its
        predictions and residuals are attached to every record.
    gamma2_sched : RateSchedule or ConstantStrength, optional
        Separate dephasing strength for the ``COMBINED`` kind.
    """
    t = np.asarray(t_grid, dtype=float)
    _check_grid(t)
    gammas = sched.gamma(t)
    gammas2 = gamma2_sched.gamma(t) if gamma2_sched is not None else None
    rhos = evolve_gammas(s0, sched.kind, gammas, p, gammas2)
    return _records(t, gammas, rhos, sched.kind, family)


def _records(t, gammas, rhos, kind, family):
    if len(t) == 0:
        return []
    mins, gds, _ = closed_forms_batch(rhos)
    laws = correlation_laws(family.family, kind) if family is not None else None
    alpha = family.alpha if family is not None else None
    out = []
    for i in range(len(t)):
        mp = gp = None
        if laws is not None:
            mp = law_eval(laws[0], alpha, gammas[i])
            gp = law_eval(laws[1], alpha, gammas[i])
        out.append(
            TrajectoryRecord(
                float(t[i]), float(gammas[i]), rhos[i],
                float(mins[i]), float(gds[i]), mp, gp, alpha,
            )
        )
    return out


def combined_evolve(s0, Gamma, t_grid, family=None):
    """Simultaneous dephasing and amplitude damping (p = 1) at a common rate."""
    sched = RateSchedule(Kind.COMBINED, Gamma)
    return evolve_markov(s0, sched, t_grid, p=1.0, family=family)


def correlations_at(s0, kind, gamma, p=1.0):
    rho = evolve_gammas(s0, kind, [gamma], p)
    mins, gds, _ = closed_forms_batch(rho)
    return float(mins[0]), float(gds[0])


def find_crossing(s0, sched, t_lo, t_hi, p=1.0, t_tol=1e-6, gap_tol=1e-12):
    """Bisect for the time where MIN meets GD.

    Requires MIN - GD > ``gap_tol`` at ``t_lo`` and <= ``gap_tol`` at
    ``t_hi``. Returns ``(t_star, min, gd)`` at the upper end of the final
    bracket.
    """

    def gap(t):
        m, g = correlations_at(s0, sched.kind, float(sched.gamma(t)), p)
        return m - g, m, g

    if gap(t_lo)[0] <= gap_tol or gap(t_hi)[0] > gap_tol:
        raise ValueError("no MIN/GD meeting point bracketed")
    while t_hi - t_lo > t_tol:
        mid = 0.5 * (t_lo + t_hi)
        if gap(mid)[0] > gap_tol:
            t_lo = mid
        else:
            t_hi = mid
    _, m, g = gap(t_hi)
    return t_hi, m, g


# ---------------------------------------------------------------------------
# figure data
# ---------------------------------------------------------------------------
FIGURES = ("F1", "F2", "F3", "F4", "F5", "F6", "F7", "F8")
GAD_P_VALUES = (1.0, 0.5, 0.67)
_THREE_CHANNELS = (("depol", Kind.DEPOLARIZING), ("deph", Kind.DEPHASING), ("ad", Kind.DAMPING))


def alpha_grid(n=C.ALPHA_POINTS):
    return np.linspace(0.0, 1.0, n)


def time_grid(n=C.MARKOV_T_POINTS, t_max=C.MARKOV_T_MAX, rate=1.0):
    return np.linspace(0.0, t_max / rate, n)


def _family_sweep(family, sched, alphas, t, p=1.0):
    # the channel stack does not depend on alpha, so build it once
    _check_grid(t)
    gammas = sched.gamma(t)
    stacks = kraus_stacks(sched.kind, gammas, p) if t.size else None
    out = []
    for a in alphas:
        fam = StateFamilyParam(family, float(a))
        rhos = ch.apply_stacked(stacks, make_family(fam).rho) if t.size else np.zeros((0, 4, 4), complex)
        out.extend(_records(t, gammas, rhos, sched.kind, fam))
    return out


def figure_data(fig, n_alpha=C.ALPHA_POINTS, n_t=C.MARKOV_T_POINTS, t_max=C.MARKOV_T_MAX, rate=1.0):
    """Rows re-plotting one of the Markovian figures.

    Returns ``{series name: [TrajectoryRecord, ...]}``; single-series figures
    use the name ``""``.
    """
    fig = fig.upper()
    alphas = alpha_grid(n_alpha)
    t = time_grid(n_t, t_max, rate)
    if fig == "F1":
        return {"": _family_sweep(Family.PURE, RateSchedule(Kind.DEPOLARIZING, rate), alphas, t)}
    if fig == "F2":
        return {"": _family_sweep(Family.PURE, RateSchedule(Kind.DEPHASING, rate), alphas, t)}
    if fig == "F3":
        return {"": _family_sweep(Family.WERNER, RateSchedule(Kind.DEPHASING, rate), alphas, t)}
    if fig in ("F4", "F5"):
        family = Family.WERNER if fig == "F4" else Family.PURE
        sched = RateSchedule(Kind.DAMPING, rate)
        return {f"p{p:g}": _family_sweep(family, sched, alphas, t, p=p) for p in GAD_P_VALUES}
    if fig == "F6":
        return {"": _family_sweep(Family.PURE, RateSchedule(Kind.COMBINED, rate), alphas, t)}
    if fig in ("F7", "F8"):
        if fig == "F7":
            fam = StateFamilyParam(Family.VEDRAL_PLENIO, 0.25)
            s0 = make_family(fam)
        else:
            fam, s0 = None, bell("phi+")
        out = {}
        for name, kind in _THREE_CHANNELS:
            recs = evolve_markov(s0, RateSchedule(kind, rate), t, family=fam)
            out[name] = recs
        return out
    raise ValueError(f"unknown figure {fig!r}; expected one of {', '.join(FIGURES)}")
