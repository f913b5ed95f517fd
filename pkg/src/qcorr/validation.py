"""Self-checks behind ``qcorr validate``.

Every suite is a pure function of its inputs and the seed, so the rendered
report is byte-stable. Oracle suites fan out over a thread pool whose size
comes from ``QCORR_THREADS`` (0 or unset means one worker per CPU).
"""
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import channels as ch
from . import markov as mk
from . import nonmarkov as nm
from . import qmat
from .correlations import closed_forms_batch, gd_oracle, min_closed, gd_closed, min_oracle
from .states import Family, StateFamilyParam, as_x_state, bell, make_family, random_density_matrix, random_state, random_unitary2, BELL_KETS

LAW_TOL = 1e-9
ORACLE_AGREEMENT_TOL = 1e-6
LU_TOL = 1e-9


@dataclass(frozen=True)
class LawResult:
    name: str
    max_residual: float
    informational: bool

    @property
    def verified(self):
        return self.max_residual <= LAW_TOL

    @property
    def tag(self):
        return "VERIFIED" if self.verified else "DISCREPANT"


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    detail: str


def thread_count():
    raw = os.environ.get("QCORR_THREADS", "0").strip() or "0"
    n = int(raw)
    if n < 0:
        raise ValueError("QCORR_THREADS must be >= 0")
    return n if n > 0 else (os.cpu_count() or 1)


def _pmap(fn, items):
    workers = thread_count()
    if workers == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


# ---------------------------------------------------------------------------
# printed laws
# ---------------------------------------------------------------------------
LAW_ALPHAS = np.linspace(0.0, 1.0, 21)
LAW_GAMMAS = np.linspace(0.0, 0.99, 34)


def markov_law_residual(law):
    spec = mk.LAWS[law]
    ps = mk.GAD_P_VALUES if spec.kind is mk.Kind.DAMPING else (1.0,)
    worst = 0.0
    for p in ps:
        for a in LAW_ALPHAS:
            fam = StateFamilyParam(spec.family, float(a))
            rhos = mk.evolve_gammas(make_family(fam), spec.kind, LAW_GAMMAS, p)
            if spec.output == "elements":
                for g, rho in zip(LAW_GAMMAS, rhos):
                    pred = mk.law_eval(law, a, g, p)
                    worst = max(worst, mk.element_residual(pred, as_x_state(rho)))
                continue
            mins, gds, _ = closed_forms_batch(rhos)
            for g, m, d in zip(LAW_GAMMAS, mins, gds):
                v = mk.law_eval(law, a, g)
                if spec.output in ("min", "both"):
                    worst = max(worst, abs(v - m))
                if spec.output in ("gd", "both"):
                    worst = max(worst, abs(v - d))
    return LawResult(law.value, worst, spec.suspect)


def nonmarkov_law_residuals(n_alpha=21, n_t=300):
    rows = nm.figure_data_nonmarkov("F10", n_alpha=n_alpha, n_t=n_t)
    worst_min = max(r.residual_min for r in rows)
    worst_gd = max(r.residual_gd for r in rows)
    return [
        LawResult("nonmarkov_deph_pure_min", worst_min, False),
        LawResult("nonmarkov_deph_pure_gd", worst_gd, False),
    ]


def printed_amplitude_residual(n_alpha=11, n_t=300):
    kind, spec = nm.FIGURE_SPECTRA["F9"]
    t = np.linspace(0.0, 30.0, n_t)
    pfun = nm.amplitude_function(spec, t)
    worst = 0.0
    for a in np.linspace(0.0, 1.0, n_alpha):
        fam = StateFamilyParam(Family.PURE, float(a))
        x0 = as_x_state(make_family(fam))
        for rec, pa in zip(nm.evolve_nonmarkov(make_family(fam), pfun), pfun.values):
            worst = max(worst, mk.element_residual(nm.printed_amplitude_elements(x0, pa), rec.state))
    return LawResult("nonmarkov_amplitude_elements", worst, True)


def printed_depolarizing_cptp():
    worst = max(ch.cptp_defect(ch.depolarizing_as_printed(g)) for g in (0.1, 0.5, 1.0))
    return LawResult("depolarizing_printed_kraus_cptp", worst, True)


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------
def suite_bell():
    worst = 0.0
    for name in BELL_KETS:
        s = bell(name)
        vals = (min_closed(s), gd_closed(s), min_oracle(s)[0], gd_oracle(s)[0])
        worst = max(worst, max(abs(v - 0.5) for v in vals))
    return SuiteResult("bell_states_equal_half", worst <= 1e-12, f"max |v - 0.5| = {worst:.3e}")


def suite_ordering(rng, n):
    rhos = np.array([random_density_matrix(rng) for _ in range(n)])
    mins, gds, _ = closed_forms_batch(rhos)
    bad = int(np.sum((gds < -1e-12) | (gds > mins + 1e-12) | (mins > 0.5 + 1e-12)))
    return SuiteResult("min_ge_gd_random", bad == 0, f"{n} states, {bad} violations of 0 <= GD <= MIN <= 0.5")


def _oracle_gap(s):
    return (abs(min_closed(s) - min_oracle(s)[0]), abs(gd_closed(s) - gd_oracle(s)[0]))


def suite_oracle(rng, n):
    states = [random_state(rng) for _ in range(n)]
    gaps = np.array(_pmap(_oracle_gap, states)).reshape(-1, 2)
    wm, wg = (float(gaps[:, 0].max()), float(gaps[:, 1].max())) if n else (0.0, 0.0)
    ok = wm <= ORACLE_AGREEMENT_TOL and wg <= ORACLE_AGREEMENT_TOL
    return SuiteResult("closed_form_vs_oracle", ok, f"{n} states, max gap MIN {wm:.3e}, GD {wg:.3e}")


def suite_local_unitary(rng, n):
    rhos, turned = [], []
    for _ in range(n):
        rho = random_density_matrix(rng)
        u = qmat.kron(random_unitary2(rng), random_unitary2(rng))
        rhos.append(rho)
        turned.append(u @ rho @ u.conj().T)
    if not n:
        return SuiteResult("local_unitary_invariance", True, "0 triples")
    m0, g0, _ = closed_forms_batch(np.array(rhos))
    m1, g1, _ = closed_forms_batch(np.array(turned))
    worst = float(max(np.max(np.abs(m0 - m1)), np.max(np.abs(g0 - g1))))
    return SuiteResult("local_unitary_invariance", worst <= LU_TOL, f"{n} triples, max change {worst:.3e}")


def constructed_channels():
    out = [ch.identity()]
    for g in np.linspace(0.0, 1.0, 11):
        out += [ch.depolarizing(g), ch.dephasing(g)]
        out += [ch.gad(g, p) for p in (0.0, 0.5, 0.67, 1.0)]
        out.append(mk.channel_at(mk.Kind.COMBINED, g))
    return out


def suite_cptp():
    worst = max(ch.cptp_defect(c) for c in constructed_channels())
    return SuiteResult("constructed_channels_cptp", worst <= 1e-10, f"max defect {worst:.3e}")


def suite_decoherence_functions():
    spec0 = nm.LorentzianSpectrum(1.0, 0.1, 0.0)
    t = np.linspace(0.0, 30.0, 3000)
    ode = nm.dephasing_p(nm.kernel_from_spectrum(spec0), t).values
    e_closed = float(np.max(np.abs(ode - nm.resonant_closed_form(1.0, 0.1, t))))
    k = nm.kernel_from_spectrum(nm.FIGURE_SPECTRA["F10"][1])
    tv, pv = nm.volterra_oracle(k, 30.0, 0.01)
    e_volt = float(np.max(np.abs(nm.dephasing_p(k, tv).values - pv)))
    tz = nm.first_zero(spec0)
    ok = e_closed <= 1e-8 and e_volt <= 1e-6 and tz is not None and abs(tz - 8.24) <= 0.05
    return SuiteResult(
        "decoherence_functions",
        ok,
        f"ODE vs analytic {e_closed:.3e}, ODE vs quadrature {e_volt:.3e}, first zero {tz:.4f}",
    )


def run(seed=0, n=10000, n_oracle=1000, n_lu=1000):
    """Run every suite. Returns ``(laws, suites)``."""
    rng = np.random.default_rng(seed)
    laws = [markov_law_residual(law) for law in mk.Law]
    laws += nonmarkov_law_residuals()
    laws.append(printed_amplitude_residual())
    laws.append(printed_depolarizing_cptp())
    suites = [
        suite_bell(),
        suite_ordering(rng, n),
        suite_oracle(rng, n_oracle),
        suite_local_unitary(rng, n_lu),
        suite_cptp(),
        suite_decoherence_functions(),
    ]
    required = [l for l in laws if not l.informational]
    bad = [l.name for l in required if not l.verified]
    suites.append(
        SuiteResult(
            "required_laws_verified",
            not bad,
            f"{len(required) - len(bad)}/{len(required)} verified" + (f"; failing: {', '.join(bad)}" if bad else ""),
        )
    )
    return laws, suites


def render(laws, suites, seed, n, n_oracle, n_lu):
    lines = [f"qcorr validation  seed={seed} n={n} n_oracle={n_oracle} n_lu={n_lu}", "", "laws"]
    w = max(len(l.name) for l in laws)
    for l in laws:
        note = "  (informational)" if l.informational else ""
        lines.append(f"  {l.name:<{w}}  {l.tag:<10}  max_residual={l.max_residual:.3e}{note}")
    lines += ["", "suites"]
    w = max(len(s.name) for s in suites)
    for s in suites:
        lines.append(f"  {s.name:<{w}}  {'PASS' if s.passed else 'FAIL'}  {s.detail}")
    ok = all(s.passed for s in suites)
    lines += ["", f"overall: {'PASS' if ok else 'FAIL'}"]
    return "\n".join(lines) + "\n", ok
