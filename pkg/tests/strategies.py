"""Hypothesis strategies shared by the property tests."""
import numpy as np
from hypothesis import strategies as st

from qcorr.states import random_density_matrix, random_unitary2

seeds = st.integers(min_value=0, max_value=2**32 - 1)
unit = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)
alphas = unit
gammas = st.floats(min_value=0.0, max_value=0.999, allow_nan=False)


@st.composite
def density_matrices(draw):
    return random_density_matrix(np.random.default_rng(draw(seeds)))


@st.composite
def local_unitaries(draw):
    rng = np.random.default_rng(draw(seeds))
    return random_unitary2(rng), random_unitary2(rng)


@st.composite
def symmetric3(draw):
    rng = np.random.default_rng(draw(seeds))
    a = rng.standard_normal((3, 3)) * draw(st.floats(1e-3, 1e3))
    return a + a.T
