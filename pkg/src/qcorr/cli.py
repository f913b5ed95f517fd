"""``qcorr`` command-line interface.

Exit codes: 0 success, 1 validation failure, 2 bad arguments or specs,
3 invalid density matrix, 4 output not writable.
"""
import argparse
import contextlib
import math
import os
import re
import sys

import numpy as np

from . import constants as C
from . import markov as mk
from . import nonmarkov as nm
from . import validation
from .correlations import correlation_report
from .records import MARKOV_HEADER, NONMARKOV_HEADER, fmt, write_csv
from .states import (
    BELL_KETS,
    Family,
    InvalidStateError,
    StateFamilyParam,
    TwoQubitState,
    bell,
    make_family,
)

EXIT_OK, EXIT_VALIDATE, EXIT_USAGE, EXIT_STATE, EXIT_OUTPUT = 0, 1, 2, 3, 4


class SpecError(ValueError):
    """Unparseable state, channel or parameter specification."""


class OutputError(OSError):
    pass


# ---------------------------------------------------------------------------
# spec parsing
# ---------------------------------------------------------------------------
def _float(text, what):
    try:
        v = float(text)
    except ValueError:
        raise SpecError(f"{what}: {text!r} is not a number") from None
    if not math.isfinite(v):
        raise SpecError(f"{what}: {text!r} is not finite")
    return v


def _unit(text, what):
    v = _float(text, what)
    if not 0.0 <= v <= 1.0:
        raise SpecError(f"{what} must lie in [0, 1], got {v}")
    return v


def parse_literal(text):
    """16 complex entries or 32 reals (re, im interleaved), row-major."""
    tokens = [t for t in re.split(r"[\s,;]+", text.strip()) if t]
    try:
        if len(tokens) == 16:
            vals = [complex(t.replace("i", "j")) for t in tokens]
        elif len(tokens) == 32:
            re_im = [float(t) for t in tokens]
            vals = [complex(re_im[2 * k], re_im[2 * k + 1]) for k in range(16)]
        else:
            raise SpecError(f"matrix literal needs 16 complex or 32 real entries, got {len(tokens)}")
    except ValueError:
        raise SpecError("matrix literal has a malformed entry") from None
    return np.array(vals, dtype=complex).reshape(4, 4)


def parse_state(text):
    """Returns ``(TwoQubitState, StateFamilyParam or None)``.

    Raises :class:`SpecError` for syntax problems and
    :class:`InvalidStateError` for matrices that are not states.
    """
    text = text.strip()
    if text.startswith("@"):
        try:
            with open(text[1:], encoding="utf-8") as fh:
                return TwoQubitState(parse_literal(fh.read())), None
        except OSError as exc:
            raise SpecError(f"cannot read state file: {exc}") from None
    head, _, tail = text.partition(":")
    head = head.lower()
    if head == "bell":
        if tail not in BELL_KETS:
            raise SpecError(f"unknown Bell state {tail!r}; choose from {', '.join(BELL_KETS)}")
        return bell(tail), None
    if head in {f.value for f in Family}:
        fam = StateFamilyParam(Family(head), _unit(tail, f"{head} alpha"))
        return make_family(fam), fam
    return TwoQubitState(parse_literal(text)), None


def parse_strength(text, kind, rate):
    if text == "sched":
        return mk.RateSchedule(kind, rate)
    return mk.ConstantStrength(kind, _unit(text, "gamma"))


def parse_channel(text, rate):
    """Returns ``(schedule, p, dephasing schedule or None)``."""
    parts = text.strip().split(":")
    name, args = parts[0].lower(), parts[1:]
    kinds = {"depol": mk.Kind.DEPOLARIZING, "deph": mk.Kind.DEPHASING, "gad": mk.Kind.DAMPING, "deph+gad": mk.Kind.COMBINED}
    if name not in kinds:
        raise SpecError(f"unknown channel {name!r}; choose from {', '.join(kinds)}")
    kind = kinds[name]
    limits = {mk.Kind.DEPOLARIZING: 1, mk.Kind.DEPHASING: 1, mk.Kind.DAMPING: 2, mk.Kind.COMBINED: 3}
    if not 1 <= len(args) <= limits[kind]:
        raise SpecError(f"channel {name!r} takes 1 to {limits[kind]} ':'-separated arguments")
    sched = parse_strength(args[0], kind, rate)
    p = 1.0
    deph = None
    if kind is mk.Kind.DAMPING and len(args) == 2:
        p = _unit(args[1], "p")
    if kind is mk.Kind.COMBINED:
        if len(args) >= 2:
            deph = parse_strength(args[1], kind, rate)
        if len(args) == 3:
            p = _unit(args[2], "p")
    return sched, p, deph


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------
@contextlib.contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
        return
    try:
        fh = open(path, "w", encoding="utf-8", newline="")
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc.strerror or exc}") from None
    with fh:
        yield fh


def _series_path(out, series):
    if not series:
        return out
    root, ext = os.path.splitext(out)
    return f"{root}_{series}{ext or '.csv'}"


def _write_series(data, out, header):
    if len(data) > 1 and out in (None, "-"):
        raise SpecError("this figure has several series; give --out so one file per series can be written")
    paths = []
    # open everything first so an unwritable target fails before any work is lost
    for series in data:
        paths.append(_series_path(out, series))
    for path, (series, rows) in zip(paths, data.items()):
        with _output(path) as fh:
            write_csv(fh, rows, header)
    return [p for p in paths if p not in (None, "-")]


def _check_writable(out, series_names=("",)):
    if out in (None, "-"):
        return
    for s in series_names:
        path = _series_path(out, s)
        d = os.path.dirname(os.path.abspath(path))
        if not os.path.isdir(d) or not os.access(d, os.W_OK) or (os.path.isdir(path)):
            raise OutputError(f"cannot write {path}")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------
def cmd_compute(args):
    state, _ = parse_state(args.state)
    rep = correlation_report(state)
    row = rep.as_row()
    print(f"state       {args.state}")
    print(f"branch      {row['branch']}")
    print(f"min         {fmt(row['min'])}")
    print(f"gd          {fmt(row['gd'])}")
    print(f"min_oracle  {fmt(row['min_oracle'])}")
    print(f"gd_oracle   {fmt(row['gd_oracle'])}")
    print("min,gd,min_oracle,gd_oracle,branch")
    print(",".join([fmt(row["min"]), fmt(row["gd"]), fmt(row["min_oracle"]), fmt(row["gd_oracle"]), row["branch"]]))
    return EXIT_OK


def _positive(v, what):
    if not (v > 0.0 and math.isfinite(v)):
        raise SpecError(f"{what} must be positive")
    return v


def cmd_evolve(args):
    _positive(args.rate, "--rate")
    _positive(args.tmax, "--tmax")
    if args.steps < 0:
        raise SpecError("--steps must be >= 0")
    state, fam = parse_state(args.state)
    sched, p, deph = parse_channel(args.channel, args.rate)
    _check_writable(args.out)
    t = np.linspace(0.0, args.tmax, args.steps)
    rows = mk.evolve_markov(state, sched, t, p=p, family=fam, gamma2_sched=deph)
    with _output(args.out) as fh:
        write_csv(fh, rows, MARKOV_HEADER)
    return EXIT_OK


def cmd_sweep(args):
    fig = args.figure.upper()
    if fig not in mk.FIGURES:
        raise SpecError(f"unknown figure {args.figure!r}; choose from {', '.join(mk.FIGURES)}")
    _positive(args.tmax, "--tmax")
    if args.n_alpha < 1 or args.steps < 0:
        raise SpecError("--n-alpha must be >= 1 and --steps >= 0")
    series = {"F4": [f"p{p:g}" for p in mk.GAD_P_VALUES], "F5": [f"p{p:g}" for p in mk.GAD_P_VALUES],
              "F7": ["depol", "deph", "ad"], "F8": ["depol", "deph", "ad"]}.get(fig, [""])
    if len(series) > 1 and args.out in (None, "-"):
        raise SpecError("this figure has several series; give --out so one file per series can be written")
    _check_writable(args.out, series)
    data = mk.figure_data(fig, n_alpha=args.n_alpha, n_t=args.steps, t_max=args.tmax)
    for path in _write_series(data, args.out, MARKOV_HEADER):
        print(path, file=sys.stderr)
    return EXIT_OK


def cmd_nonmarkov(args):
    _positive(args.tmax, "--tmax")
    if args.n_alpha < 1 or args.steps < 0:
        raise SpecError("--n-alpha must be >= 1 and --steps >= 0")
    if args.figure is not None:
        fig = args.figure.upper()
        if fig not in nm.FIGURES:
            raise SpecError(f"unknown figure {args.figure!r}; choose F9 or F10")
        kind, spec = nm.FIGURE_SPECTRA[fig]
    else:
        fig = None
        if args.kind is None:
            raise SpecError("give --figure or --kind")
        kind = nm.PKind(args.kind)
        spec = nm.FIGURE_SPECTRA["F9" if kind is nm.PKind.AMPLITUDE else "F10"][1]
    overrides = {k: v for k, v in (("gamma0", args.gamma0), ("lam", args.lam), ("delta", args.delta)) if v is not None}
    if overrides:
        fields = {"gamma0": spec.gamma0, "lam": spec.lam, "delta": spec.delta, **overrides}
        try:
            spec = nm.LorentzianSpectrum(**fields)
        except ValueError as exc:
            raise SpecError(str(exc)) from None
    _check_writable(args.out)
    rows = nm.figure_data_nonmarkov(None, spec=spec, kind=kind, n_alpha=args.n_alpha, n_t=args.steps, t_max=args.tmax)
    with _output(args.out) as fh:
        write_csv(fh, rows, NONMARKOV_HEADER)
    return EXIT_OK


def cmd_validate(args):
    if args.n < 1 or args.n_oracle < 0 or args.n_lu < 0:
        raise SpecError("--n must be >= 1; --n-oracle and --n-lu must be >= 0")
    try:
        validation.thread_count()
    except ValueError as exc:
        raise SpecError(str(exc)) from None
    _check_writable(args.out)
    laws, suites = validation.run(args.seed, args.n, args.n_oracle, args.n_lu)
    text, ok = validation.render(laws, suites, args.seed, args.n, args.n_oracle, args.n_lu)
    with _output(args.out) as fh:
        fh.write(text)
    return EXIT_OK if ok else EXIT_VALIDATE


# ---------------------------------------------------------------------------
def build_parser():
    ap = argparse.ArgumentParser(prog="qcorr", description="MIN and geometric discord of two-qubit states under noise.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="correlations of one state")
    p.add_argument("--state", required=True, help="pure:A | werner:A | vp:A | bell:NAME | 16 complex entries | @FILE")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("evolve", help="Markovian trajectory as CSV")
    p.add_argument("--state", required=True)
    p.add_argument("--channel", required=True, help="depol:G | deph:G | gad:G[:P] | deph+gad:G[:G2[:P]]; G is 'sched' or a number")
    p.add_argument("--rate", type=float, default=1.0)
    p.add_argument("--tmax", type=float, default=C.MARKOV_T_MAX)
    p.add_argument("--steps", type=int, default=C.MARKOV_T_POINTS, help="number of time points")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("sweep", help="figure grid as CSV")
    p.add_argument("--figure", required=True, help="F1 .. F8")
    p.add_argument("--n-alpha", type=int, default=C.ALPHA_POINTS)
    p.add_argument("--steps", type=int, default=C.MARKOV_T_POINTS)
    p.add_argument("--tmax", type=float, default=C.MARKOV_T_MAX)
    p.add_argument("--out", default="-", help="output path; multi-series figures write <stem>_<series>.csv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("nonmarkov", help="Lorentzian-bath surface as CSV")
    p.add_argument("--figure", help="F9 or F10")
    p.add_argument("--kind", choices=[k.value for k in nm.PKind])
    p.add_argument("--gamma0", type=float)
    p.add_argument("--lam", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--n-alpha", type=int, default=C.ALPHA_POINTS)
    p.add_argument("--steps", type=int, default=C.NONMARKOV_T_POINTS)
    p.add_argument("--tmax", type=float, default=C.NONMARKOV_T_MAX, help="in units of 1/gamma0")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_nonmarkov)

    p = sub.add_parser("validate", help="run the self-check suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=10000, help="random states for the ordering suite")
    p.add_argument("--n-oracle", type=int, default=1000, help="random states for the oracle suite")
    p.add_argument("--n-lu", type=int, default=1000, help="random local-unitary triples")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_validate)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SpecError as exc:
        print(f"qcorr: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidStateError as exc:
        if exc.eigenvalue is not None:
            msg = f"qcorr: invalid density matrix: smallest eigenvalue {exc.eigenvalue:.12g}"
        else:
            msg = f"qcorr: invalid density matrix: {exc}"
        print(msg, file=sys.stderr)
        return EXIT_STATE
    except OutputError as exc:
        print(f"qcorr: {exc}", file=sys.stderr)
        return EXIT_OUTPUT


if __name__ == "__main__":
    sys.exit(main())
