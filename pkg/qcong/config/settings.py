"""
qcong Configuration
Centralized settings for arithmetic thresholds, check defaults and runtime options.
"""

import os

from dotenv import load_dotenv

from qcong.errors import ConfigError

load_dotenv()

# ============================================================================
# Polynomial Arithmetic
# ============================================================================

# Operand length above which dense multiplication switches to Karatsuba
KARATSUBA_THRESHOLD = 64


# ============================================================================
# Series Evaluation Strategy
# ============================================================================

# Series checks with n above this value run in the residue ring
EXACT_SERIES_MAX_N = 60

# Native modulus power per series check
SERIES_NATIVE_POWER = {
    "anew3": 1,
    "anew4": 2,
    "anew5": 1,
    "anew6": 1,
    "wang-yu": 1,
    "a1": 2,
    "a2": 2,
    "b1": 2,
    "c1": 2,
}

# Wang-Yu parameter d ranges over |d| <= this bound by default
WANG_YU_MAX_ABS_D = 5


# ============================================================================
# Carlitz Identity
# ============================================================================

# Monomial parameter grid, written in the CLI grammar
CARLITZ_A_GRID = ("q", "q^3", "-q", "-q^2")
CARLITZ_B_GRID = ("-1", "-q", "-q^2", "q")
CARLITZ_BASE_POWERS = (1, 2)

# Random exact specialisations of (a, b, q)
CARLITZ_RANDOM_COUNT = 100
CARLITZ_RANDOM_SEED = 2023
CARLITZ_RANDOM_MAX_N = 15
CARLITZ_RANDOM_HEIGHT = 9  # numerators and denominators drawn from [-H, H]


# ============================================================================
# Proof Chain
# ============================================================================

# QPOW_LEMMA exponents: fixed values plus n-dependent ones resolved per n
QPOW_FIXED_EXPONENTS = (1, 2, 3)


# ============================================================================
# Classical Congruences
# ============================================================================

CLASSICAL_NATIVE_POWER = {"sun-tauraso": 1, "sun": 2}
Q_TO_1_TARGETS = ("anew3", "anew4", "a1", "a2")
Q_TO_1_MAX_MODULUS = 50


# ============================================================================
# Runtime
# ============================================================================

DEFAULT_PARALLELISM = os.cpu_count() or 1
CACHE_DIR = None
CACHE_FILE_NAME = "cyclotomic.tsv"
LOG_LEVEL = "WARNING"


# ============================================================================
# Helper Functions
# ============================================================================


def native_power(check_name: str) -> int:
    """Get the modulus power a series or classical check is stated with."""
    if check_name in SERIES_NATIVE_POWER:
        return SERIES_NATIVE_POWER[check_name]
    return CLASSICAL_NATIVE_POWER.get(check_name, 2)


def qpow_exponents(n: int) -> tuple:
    """Get the QPOW_LEMMA exponents used for a given odd n, without repeats."""
    values = list(QPOW_FIXED_EXPONENTS) + [(n - 1) // 2, (n - 3) // 2, (n + 1) // 2]
    return tuple(dict.fromkeys(values))


def _env_int(name: str, default: int, minimum: int = 1) -> int:
    """Read a positive integer override from the environment."""
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}")
    if value < minimum:
        raise ConfigError(f"{name} must be >= {minimum}, got {value}")
    return value


# ============================================================================
# Environment-specific Settings
# ============================================================================

KARATSUBA_THRESHOLD = _env_int("QCONG_KARATSUBA_THRESHOLD", KARATSUBA_THRESHOLD, 2)

EXACT_SERIES_MAX_N = _env_int("QCONG_EXACT_MAX_N", EXACT_SERIES_MAX_N, 0)

DEFAULT_PARALLELISM = _env_int("QCONG_PARALLELISM", DEFAULT_PARALLELISM)

CACHE_DIR = os.getenv("QCONG_CACHE_DIR") or CACHE_DIR

LOG_LEVEL = os.getenv("QCONG_LOG_LEVEL", LOG_LEVEL).upper()
