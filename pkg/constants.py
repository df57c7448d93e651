"""logpart Constants Module

Contains all application constants for precision control, series truncation,
validation limits, report formatting and file locations.
"""

import os
import sys
from pathlib import Path

# Precision ladder (bits)
DEFAULT_PRECISION_LADDER = (64, 128, 256, 512, 1024, 2048, 4096)
CLI_START_PRECISION = 128  # one rung above the library default
DEFAULT_MAX_PRECISION_BITS = 4096
MIN_PRECISION_BITS = 32
RADIUS_PRECISION = 32  # radii are rounded upward at this precision
GUARD_BITS = 20

# Environment variables
MAX_PRECISION_ENV = "LOGPART_MAX_PRECISION_BITS"
SLOW_TESTS_ENV = "LOGPART_SLOW_TESTS"

# Partition oracle
BRUTE_FORCE_MAX_N = 90  # p(90) ≈ 5.7e7 enumerated partitions
ENUMERATION_CHECK_MAX_N = 60

# Series truncation
ZETA_PARTIAL_TERMS = 10_000
L_SERIES_MAX_TERMS = 200_000
THRESHOLD_SERIES_TERMS = 64  # K_max for the a2/a3 series
THRESHOLD_SERIES_MIN_TERMS = 10
THRESHOLD_PRECISION = 256

# HRR / difference analysis
HRR_TRUNCATION_N = 2
RATIO_BOUNDS_MIN_N = 50  # smallness and F3 bounds need n >= 50
THEOREM31_DIRECT_MIN_N = 12  # r = 1 case is a finite check from here
THEOREM31_ANALYTIC_MIN_N = 200
LOGCONCAVE_MIN_N = 26
CONJECTURE_MIN_N = 45
THEOREM12_MIN_N = 7
BESSENRODT_ONO_MIN_SUM = 10

# Lambert W
LAMBERT_NEWTON_MAX_STEPS = 200
LAMBERT_MAX_WIDENINGS = 400

# Threading
MAX_WORKER_THREADS = 8

# Reports
REPORT_SIGNIFICANT_DIGITS = 17
CSV_COLUMNS = ("statement_id", "n", "r", "margin", "radius", "verdict")

# Exit codes
EXIT_OK = 0
EXIT_FAILURES = 1
EXIT_USAGE = 2

# Version
APP_VERSION = "1.00"

# File paths for persistence
if sys.platform == "win32":
    APP_DATA_DIR = Path(os.environ.get("LOCALAPPDATA", str(Path.home()))) / "logpart"
else:
    APP_DATA_DIR = (
        Path(os.environ.get("XDG_DATA_HOME", str(Path.home() / ".local" / "share"))) / "logpart"
    )
CONFIG_FILE = APP_DATA_DIR / "config.json"
LOG_FILE = APP_DATA_DIR / "logpart.log"
LOG_MAX_BYTES = 1 * 1024 * 1024
