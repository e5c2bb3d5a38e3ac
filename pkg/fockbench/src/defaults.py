"""
Numeric defaults for fockbench.

Every tolerance, grid size and probe schedule used by the library lives here so
that runs can be tuned in one place.
"""


# =============================================================================
# QUADRATURE
# =============================================================================

NORM_TOL = 1e-7
TRANSFORM_TOL = 1e-5
MIN_TOL = 1e-12
MAX_TOL = 1e-2

BASE_ORDER = 16
MAX_DOUBLINGS = 12
PANEL_WIDTH = 1.0
MIN_ANGLES = 16
MAX_ANGLES = 1024

# Circles |z| = factor * R0 on which certificates are sanity-checked.
CERT_CIRCLE_FACTORS = (1.0, 1.25, 1.5)
CERT_CIRCLE_POINTS = 64
CERT_SLACK = 1e-9

PATH_BASE_PANELS = 1
PATH_ORDER = 16

SUP_RADIAL_POINTS = 400
SUP_ANGLES = 128


# =============================================================================
# TEST FAMILIES AND PROBES
# =============================================================================

FAMILY_RADIUS = 8.0
FAMILY_RADII = 12
FAMILY_ANGLES = 16
FAMILY_MONOMIALS = 12

B_GRID_RADIUS = 8.0
B_GRID_RADII = 10
B_GRID_ANGLES = 16

PROBE_R0 = 2.0
PROBE_DOUBLINGS = 6
DECAY_FACTOR = 10.0

# Relative spread below which B(w) counts as a plateau.
PLATEAU_SPREAD = 0.5


# =============================================================================
# LATTICES AND DISC MEASURES
# =============================================================================

DISC_TOL = 1e-4
DISC_SUBDIVISION_DEPTH = 8
LATTICE_NMAX = 37
LATTICE_PROBES = 1000
LATTICE_TAIL_RATIO = 1e-12
LATTICE_SEED = 20240101


# =============================================================================
# REPORTING
# =============================================================================

CSV_DIGITS = 17
DEFAULT_OUT_DIR = "./fockbench_runs"
DEFAULT_LOG_LEVEL = "WARNING"
