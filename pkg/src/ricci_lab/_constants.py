# Numerical defaults. Every value can be overridden per call.

ENV_THREADS = "RICCI_LAB_THREADS"
ENV_SEED = "RICCI_LAB_SEED"
ENV_LOG = "RICCI_LAB_LOG"

DEFAULT_SEED = 0

# curvature
DEGENERACY_TOL = 1e-7
RANK_TOL = 1e-8
FD_STEP = 1e-5
CRITICAL_TOL = 1e-6
CONSTRAINT_TOL = 1e-9

# invariants
SUP_STARTS = 64
SUP_TOL = 1e-10
BOUNDARY_MATCH_TOL = 1e-7
LOG_BOX = 20.0
START_SPAN = 4.0
T_MAX_FRACTION = 0.9
WITNESS_FLOOR = 1e-4

# dynamics
HEUN_RTOL = 1e-8
HEUN_ATOL = 1e-12
FLOW_GRAD_TOL = 1e-10
FLOW_STALL_GRAD_TOL = 1e-8
FLOW_MAX_STEPS = 200_000
BOUNDARY_EPS = 1e-6
TREND_RATIO = 1e-4
TREND_POINTS = 8
STALL_WINDOW = 2_000
MIN_STEP = 1e-16
DECAY_RATIO = 1e-2
# h times the spectral radius of the velocity Jacobian stays below this bound
STABILITY_BOUND = 1.0
STIFFNESS_REFRESH = 20
STIFFNESS_STEP = 1e-6

NEWTON_MAX_ITER = 100
NEWTON_MAX_HALVINGS = 40
NEWTON_DAMPING = 0.5
NEWTON_TOL = 1e-12
NEWTON_POLISH = 8
NEWTON_STARTS = 128
NEWTON_RANGE = (1e-2, 1e2)
DEDUP_TOL = 1e-6

# mountain pass
PATH_NODES = 201
ROUND_FLOW_TIME = 0.05
STABLE_DELTA = 1e-8
STABLE_ROUNDS = 10
MAX_ROUNDS = 5_000
ANCHOR_DISTANCE = 1e-4
SADDLE_LEVEL_TOL = 1e-3
RELAX_RTOL = 1e-6
CLAMP_FLOOR = 1e-12

# classify
CONTINUATION_STEP = 1e-2
SIGMA_GAP = 1e3
