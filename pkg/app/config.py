"""
Global configuration: defaults for every model and the environment overrides.

Values here are tunable defaults. Anything that
varies per run lives on a pydantic config object (SimConfig, MFHyperparams,
ValueModel) instead.
"""
import os

from dotenv import load_dotenv

load_dotenv()

TOOL_NAME = "bridgerank"
TOOL_VERSION = "0.1.0"
SCHEMA_VERSION = "1.0"

# Environment
LOG_ENV_VAR = "BRIDGERANK_LOG"
SEED_ENV_VAR = "BRIDGERANK_SEED"


def default_seed() -> int:
    """Seed used when --seed is omitted"""
    try:
        return int(os.getenv(SEED_ENV_VAR, "0"))
    except ValueError:
        return 0


# Clustering
K_RANGE_DEFAULT = (2, 5)
KMEANS_RESTARTS = 10
KMEANS_MAX_ITER = 300
KMEANS_TOL = 1e-6
# Silhouette ties within this margin resolve toward the smaller k
SILHOUETTE_TIE_EPS = 1e-12

# PCA
VARIANCE_EPS = 1e-12

# Ranking: scores are compared after normalizing by total |weight| and rounding
SCORE_DECIMALS = 12

# Matrix factorization
MF_FACTORS = 2
MF_LAMBDA_INTERCEPT = 0.15
MF_LAMBDA_FACTOR = 0.03
MF_LEARNING_RATE = 0.05
MF_EPOCHS = 500
MF_INIT_SCALE = 0.1
MF_CONVERGENCE_WINDOW = 10
MF_CONVERGENCE_TOL = 1e-6

# Credibility
CREDIBILITY_DAMPING = 0.85
CREDIBILITY_TOL = 1e-10
CREDIBILITY_MAX_ITER = 10_000

# Distribution signals
BIMODALITY_THRESHOLD = 5.0 / 9.0
BIMODALITY_MIN_SAMPLES = 4

# Metrics
RWC_WALKS = 10_000
RWC_STEPS = 10
DIVERSE_APPROVAL_MOTIF_THRESHOLD = 0.5

# Simulation
PASS_PROBABILITY = 0.1
AGREE_AT_OWN_POSITION = 0.9
INITIAL_AFFECT = 50.0
AFFECT_MIN = 0.0
AFFECT_MAX = 100.0
PANEL_SIZE = 12
SEED_AUDIENCE = 3

# CLI exit codes
EXIT_OK = 0
EXIT_INPUT_ERROR = 2
EXIT_NUMERICAL_ERROR = 3
