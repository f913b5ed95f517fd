"""Compare the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--states 200] [--repeat 3]

Prints per-call wall times and the speedup for each kernel. Exits with a
message if the extension is not built.
"""
import argparse
import sys
import timeit

import numpy as np

from qcorr import _pykernels, constants as C
from qcorr.correlations import fibonacci_sphere
from qcorr.states import random_density_matrix

try:
    from qcorr import _ckernels
except ImportError:
    _ckernels = None


def _cases(n, seed):
    rng = np.random.default_rng(seed)
    rhos = np.array([random_density_matrix(rng) for _ in range(n)])
    syms = []
    for _ in range(n):
        a = rng.standard_normal((3, 3))
        syms.append(a + a.T)
    return rhos, np.array(syms)


def _workloads(mod, rhos, syms, dirs):
    return {
        "eig_sym3": lambda: [mod.eig_sym3(m) for m in syms],
        "eig_herm4": lambda: [mod.eig_herm4(r) for r in rhos],
        "closed_forms (batch)": lambda: mod.closed_forms(rhos, C.EPS_X),
        "sphere_search max": lambda: [mod.sphere_search(r, dirs, True, C.ORACLE_TOL) for r in rhos[:20]],
        "sphere_search min": lambda: [mod.sphere_search(r, dirs, False, C.ORACLE_TOL) for r in rhos[:20]],
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--states", type=int, default=200)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if _ckernels is None:
        sys.exit("compiled extension not built; run `pip install -e . --no-build-isolation`")

    rhos, syms = _cases(args.states, args.seed)
    dirs = fibonacci_sphere()
    py = _workloads(_pykernels, rhos, syms, dirs)
    cy = _workloads(_ckernels, rhos, syms, dirs)
    print(f"{'kernel':<22}{'python [ms]':>14}{'compiled [ms]':>16}{'speedup':>10}")
    for name in py:
        tp = min(timeit.repeat(py[name], number=1, repeat=args.repeat)) * 1e3
        tc = min(timeit.repeat(cy[name], number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<22}{tp:>14.2f}{tc:>16.2f}{tp / tc:>9.1f}x")


if __name__ == "__main__":
    main()
