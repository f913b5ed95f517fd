"""Numerical tolerances shared by the whole package.

Every tolerance lives here so that the property tests and the runtime checks
agree on a single value.
"""

# matrix structure
SYMMETRY_TOL = 1e-12
HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
POSITIVITY_TOL = -1e-9
CPTP_TOL = 1e-10
X_STATE_TOL = 1e-10
IMAG_DISCARD_TOL = 1e-12

# eigen-solvers
# 1 - |r| below this switches the trigonometric 3x3 solver to Jacobi; the acos
# derivative blows up there and the trig roots lose digits.
EIG3_DISCRIMINANT_TOL = 1e-6
JACOBI3_OFF_TOL = 1e-15
JACOBI4_OFF_TOL = 1e-12
JACOBI_MAX_SWEEPS = 60

# correlations
EPS_X = 1e-9
SPHERE_GRID_SIZE = 2048
GOLDEN_ITERS = 60
REFINE_MIN_ROUNDS = 2
REFINE_MAX_ROUNDS = 6
REFINE_WINDOW = 0.2
HESSIAN_STEP = 1e-3
ORACLE_TOL = 1e-10

# non-Markovian integration
ODE_HALVING_TOL = 1e-8
ODE_MAX_SUBSTEPS = 4096

# figure / CLI defaults
MARKOV_T_POINTS = 400
MARKOV_T_MAX = 8.0
ALPHA_POINTS = 101
NONMARKOV_T_POINTS = 3000
NONMARKOV_T_MAX = 30.0
CSV_DIGITS = 12
