# numerics
HERMITIAN_RTOL = 1e-10
ORTHONORMAL_TOL = 1e-12
RANK_TOL = 1e-12
JACOBI_OFFDIAG_RTOL = 1e-14
JACOBI_MAX_SWEEPS = 60

# frames
FRAME_GRAM_TOL = 1e-10
EXTERIOR_MIN_NORM = 1e-8
MAX_REDRAWS = 16
PATH_T_MAX = 0.5

# range
SAMPLES = 10_000
SAMPLE_CHUNK = 4096
RESTARTS = 8
ASCENT_MAX_ITER = 2000
ASCENT_GRAD_RTOL = 1e-8
ARMIJO_STEP = 1.0
ARMIJO_FACTOR = 0.5
ARMIJO_SLOPE = 1e-4
ARMIJO_MAX_HALVINGS = 40
ARMIJO_ROUNDOFF = 1e-14
ASCENT_SCALE_FACTOR = 4.0
BB_STEP_MIN = 1e-4
BB_STEP_MAX = 1e4
RESTART_TIE_TOL = 1e-12
WITNESS_RTOL = 1e-10
UNIT_TOL = 1e-10

# corners
DIRECTIONS = 64
DELTA_MIN = 0.1
EPSILON_NN_FACTOR = 5.0
MIN_CONE_NEIGHBOURS = 8
DEDUPE_DISTANCE = 1e-8
COINCIDENCE_RTOL = 1e-7
SUBGRADIENT_STEPS = 100
EXTERIOR_COUNT = 2
PROBE_RTOL = 1e-6

# verify
EIGEN_RESIDUAL_RTOL = 1e-6
SIGMA_MIN_TARGET = 1e-2
SUPPORT_DOMINATION_TOL = 1e-6
SYMMETRY_TOL = 1e-2
PROJECTION_TOL = 2e-2
SUITE_DIRECTIONS = 20
SUITE_COMPRESSIONS = 10

TOLERANCE_KEYS = (
    "HERMITIAN_RTOL",
    "ORTHONORMAL_TOL",
    "RANK_TOL",
    "FRAME_GRAM_TOL",
    "WITNESS_RTOL",
    "UNIT_TOL",
    "COINCIDENCE_RTOL",
    "PROBE_RTOL",
    "EIGEN_RESIDUAL_RTOL",
    "SIGMA_MIN_TARGET",
    "SUPPORT_DOMINATION_TOL",
    "SYMMETRY_TOL",
    "PROJECTION_TOL",
)
