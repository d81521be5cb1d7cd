"""Numerical tolerances shared by the library defaults and the ``verify`` command."""

# quantum propagation
LEAK_TOL = 1e-12
# adaptive runs re-plan well before the hard leak tolerance is approached
GROW_TOL = 1e-16
GROW_FACTOR = 1.3

# pseudoclassical ensembles
POS_TOL = 1e-9
AMP_TOL = 1e-12
SEL_TOL = 1e-9
BRANCH_CAP = 2**24

# model core
EPS_ZERO = 1e-10

# analysis
TDIFF_THRESHOLD = 0.15
PEAK_RADIUS = 3.0  # in units of sqrt(delta / 2)

# verification checks
RESIDUAL_TOL = 1e-8
COMMUTATOR_TOL = 1e-10
UNITARITY_TOL = 1e-12
UNITARITY_DRIFT_TOL = 1e-9
WEIGHT_TOL = 1e-9
GAUSS_NORM_TOL = 1e-12
FACTORIZATION_TOL = 1e-9

DEFAULTS = {
    name.lower(): value
    for name, value in dict(globals()).items()
    if name.isupper() and not name.startswith("_")
}
