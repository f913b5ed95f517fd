"""Kernel backend selection.

The compiled Cython extension is used when it imports; otherwise the
pure-Python module with identical semantics is used. Set
``QCORR_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _pykernels

python = _pykernels

if os.environ.get("QCORR_PURE_PYTHON", "0") not in ("", "0"):
    compiled = None
else:
    try:
        from . import _ckernels as compiled
    except ImportError:
        compiled = None

active = compiled if compiled is not None else python
BACKEND = "compiled" if compiled is not None else "python"

eig_sym3 = active.eig_sym3
eig_herm4 = active.eig_herm4
disturbance = active.disturbance
grid_scan = active.grid_scan
sphere_search = active.sphere_search
bloch_batch = active.bloch_batch
closed_forms = active.closed_forms
