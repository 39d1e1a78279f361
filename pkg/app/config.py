# ABOUTME: Application configuration: numerical defaults, thresholds and tolerances
# ABOUTME: Environment only toggles diagnostics and parallelism, never computed outputs

import os
from dotenv import load_dotenv

load_dotenv()


class Config:
    """Application configuration"""

    # Integration
    DEFAULT_METHOD = "rk4"
    DEFAULT_T0 = 0.0

    # Conditioning curve
    DEFAULT_QUERIES = 200
    LOG_SCALE_LIMIT = 1e100  # rescale partial products beyond this magnitude
    JACOBI_RTOL = 1e-14  # off-diagonal Frobenius mass relative to ||S||_F
    JACOBI_MAX_SWEEPS = 50

    # Growth classification
    CONSTANCY_THRESHOLD = 0.05
    R_SQUARED_CUTOFF = 0.99
    MIN_EXP_RATE = 0.1  # per unit time
    MIN_CLASSIFY_POINTS = 16

    # Reference solutions
    REFERENCE_RTOL = 1e-10  # scaled by (1 + max ||x||)
    REFERENCE_BASE_DIVISIONS = 10_000
    REFERENCE_MAX_HALVINGS = 6
    CERTIFICATE_FRACTION = 0.01  # certificate must stay below this share of the smallest error

    # Studies
    DEFAULT_LEVELS = 4
    MIN_LEVELS = 3
    DEFAULT_EPSILON = 0.01
    K_STABILITY_LIMIT = 2.0

    # Jacobian gradient check
    JACOBIAN_CHECK_RTOL = 1e-5
    JACOBIAN_CHECK_POINTS = 10
    JACOBIAN_CHECK_RADIUS = 2.0

    # Thread pool size for study levels (1 = sequential)
    STUDY_WORKERS = int(os.getenv("STUDY_WORKERS", "1"))

    LOG_LEVEL = os.getenv("LOG_LEVEL", "WARNING").upper()

    # Debug mode
    DEBUG = os.getenv("DEBUG", "false").lower() == "true"
