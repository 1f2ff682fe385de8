"""
Runtime configuration.

Every tunable is read once from the environment (optionally populated
from a ``.env`` file) with a safe fallback default.
"""

import os

from dotenv import load_dotenv

load_dotenv(".env")


def _env_float(name: str, default: str) -> float:
    return float(os.getenv(f"POWERBOUND_{name}", default))


def _env_int(name: str, default: str) -> int:
    return int(os.getenv(f"POWERBOUND_{name}", default))


def _env_floats(name: str, default: str) -> tuple[float, ...]:
    raw = os.getenv(f"POWERBOUND_{name}", default)
    return tuple(float(item) for item in raw.split(",") if item.strip())


def _env_ints(name: str, default: str) -> tuple[int, ...]:
    raw = os.getenv(f"POWERBOUND_{name}", default)
    return tuple(int(item) for item in raw.split(",") if item.strip())


# Project root: one level up from this package
PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

LOG_DIR = os.getenv("POWERBOUND_LOG_DIR", os.path.join(PROJECT_ROOT, "logs"))

# -------------------------------
# circle_sets
# -------------------------------

ANGLE_TOLERANCE = _env_float("ANGLE_TOLERANCE", "1e-12")
COVERING_POINT_CAP = _env_int("COVERING_POINT_CAP", "200000")
# Sweep starts are enumerated down to offsets epsilon * this factor.
COVERING_START_DEPTH = _env_float("COVERING_START_DEPTH", "1e-6")

# -------------------------------
# diophantine
# -------------------------------

DIOPHANTINE_SEARCH_CAP = _env_int("DIOPHANTINE_SEARCH_CAP", "50000000")
DIOPHANTINE_SCAN_CHUNK = _env_int("DIOPHANTINE_SCAN_CHUNK", "65536")
RECURRENCE_EPS0 = _env_float("RECURRENCE_EPS0", "0.5")
RECURRENCE_RHO = _env_float("RECURRENCE_RHO", "0.8")
RECURRENCE_MIN_EPS = _env_float("RECURRENCE_MIN_EPS", "1e-12")
RECURRENCE_Q_SCHEDULE = _env_ints("RECURRENCE_Q_SCHEDULE", "10,100,1000,10000,100000")
RECURRENCE_CANDIDATES_PER_Q = _env_int("RECURRENCE_CANDIDATES_PER_Q", "200")

# -------------------------------
# measures
# -------------------------------

FOURIER_SCAN_CHUNK = _env_int("FOURIER_SCAN_CHUNK", "16384")
FOURIER_SNAP_TOLERANCE = _env_float("FOURIER_SNAP_TOLERANCE", "1e-12")
K_CONDITION_WINDOW = _env_ints("K_CONDITION_WINDOW", "1,100000")

# -------------------------------
# wiener_interp
# -------------------------------

L1_TOLERANCE = _env_float("L1_TOLERANCE", "1e-8")
L1_MAX_ITERATIONS = _env_int("L1_MAX_ITERATIONS", "200000")
L1_CHECK_EVERY = _env_int("L1_CHECK_EVERY", "25")

# -------------------------------
# operator_lab
# -------------------------------

SPECTRAL_NORM_MAX_ITERATIONS = _env_int("SPECTRAL_NORM_MAX_ITERATIONS", "20000")
SPECTRAL_NORM_RTOL = _env_float("SPECTRAL_NORM_RTOL", "1e-12")
OVERFLOW_GUARD = _env_float("OVERFLOW_GUARD", "1e12")
DEFAULT_WINDOW = _env_int("DEFAULT_WINDOW", "10000")
DEFAULT_DELTA = _env_float("DEFAULT_DELTA", "0.05")
WINDOW_RECHECKS = _env_int("WINDOW_RECHECKS", "1")
WEAK_LIMIT_TOLERANCES = _env_floats("WEAK_LIMIT_TOLERANCES", "0.5,0.4,0.3")
SPECTRUM_MATCH_TOLERANCE = _env_float("SPECTRUM_MATCH_TOLERANCE", "1e-8")
INVERSE_QUALITY_TOLERANCE = _env_float("INVERSE_QUALITY_TOLERANCE", "1e-10")

# -------------------------------
# cli_reports
# -------------------------------

DEFAULT_THREADS = _env_int("DEFAULT_THREADS", "1")
