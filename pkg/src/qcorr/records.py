"""Trajectory rows and their CSV serialization."""
import csv
import functools
import io
import math
from dataclasses import dataclass

from . import constants as C

MARKOV_HEADER = ("t", "gamma", "alpha", "min_engine", "gd_engine", "min_pred", "gd_pred", "res_min", "res_gd")
NONMARKOV_HEADER = ("t", "p_abs", "alpha", "min_engine", "gd_engine", "min_pred", "gd_pred", "res_min", "res_gd")


@dataclass(frozen=True)
class TrajectoryRecord:
    """One time point of an evolution.

    ``gamma`` is the channel strength at ``t``; non-Markovian runs store
    |p(t)| there. ``state`` is the X-state view of ``rho`` when the evolved
    matrix has X structure, else ``None``; it is computed on first access.
    """

    t: float
    gamma: float
    rho: object
    min_engine: float
    gd_engine: float
    min_predicted: float | None = None
    gd_predicted: float | None = None
    alpha: float | None = None

    @functools.cached_property
    def state(self):
        from .states import NotXStateError, as_x_state

        try:
            return as_x_state(self.rho)
        except NotXStateError:
            return None

    @property
    def residual_min(self):
        if self.min_predicted is None:
            return None
        return abs(self.min_engine - self.min_predicted)

    @property
    def residual_gd(self):
        if self.gd_predicted is None:
            return None
        return abs(self.gd_engine - self.gd_predicted)

    def row(self):
        return (
            self.t,
            self.gamma,
            self.alpha,
            self.min_engine,
            self.gd_engine,
            self.min_predicted,
            self.gd_predicted,
            self.residual_min,
            self.residual_gd,
        )


def fmt(v):
    """12 significant digits, '.' separator, empty for missing values."""
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return ""
    return f"{float(v) + 0.0:.{C.CSV_DIGITS}g}"


def write_csv(fh, records, header=MARKOV_HEADER):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(header)
    for r in records:
        w.writerow([fmt(v) for v in r.row()])


def to_csv_text(records, header=MARKOV_HEADER):
    buf = io.StringIO()
    write_csv(buf, records, header)
    return buf.getvalue()


def read_csv(fh):
    """Parse a CSV written by :func:`write_csv`; empty fields become ``None``."""
    reader = csv.reader(fh)
    header = tuple(next(reader))
    rows = [tuple(float(v) if v != "" else None for v in line) for line in reader]
    return header, rows
