# Configuration settings for stabledrift

import os
from enum import Enum

from dotenv import load_dotenv


class StudyKind(Enum):
    """Monte-Carlo study kinds"""
    CONSISTENCY = "consistency"
    DRIFT_RATE = "drift_rate"
    LIMIT_LAW = "limit_law"
    MULTIPLIER_RATE = "multiplier_rate"
    GRONWALL = "gronwall"

    @classmethod
    def parse(cls, value: str) -> "StudyKind":
        """Accept the canonical names plus the short legacy aliases"""
        value = value.strip().lower()
        aliases = {
            "rate42": cls.DRIFT_RATE,
            "dist43": cls.LIMIT_LAW,
            "rate61": cls.MULTIPLIER_RATE,
        }
        if value in aliases:
            return aliases[value]
        return cls(value)


class SimulationConfig:
    """Path simulation and estimator-window configuration"""
    DEFAULT_HORIZON = 2.0

    # Resolution rule: at least this many grid points inside a kernel window
    MIN_WINDOW_POINTS = 200

    # Gronwall check tolerance is relative: EULER_RTOL * (1 + |X_t|)
    EULER_RTOL = 1e-6

    # Dense sampling used to check |theta| <= L on [0, T]
    BOUND_CHECK_POINTS = 10001

    # Slack when comparing a kernel window edge with 0 or T
    WINDOW_EDGE_TOL = 1e-12

    # Grid used when no kernel window dictates the resolution (gronwall, simulate)
    DEFAULT_N_STEPS = 10000


class KernelConfig:
    """Kernel construction and certification"""
    SUPPORT = (-1.0, 1.0)
    MOMENT_TOL = 1e-10
    QUADRATURE_TOL = 1e-13
    QUADRATURE_LIMIT = 200
    GAUSS_LEGENDRE_NODES = 64
    ROOT_SCAN_POINTS = 2001
    FAMILIES = ("uniform", "epanechnikov", "polynomial")
    INFO_ALPHA = 1.5  # alpha used by kernel-info when --alpha is not given


class StudyDefaults:
    """Monte-Carlo study defaults"""
    N_REPS_RATE = 1000
    N_REPS_DIST = 5000
    MIN_REPLICATES = 100
    MIN_SLOPE_POINTS = 4

    # Acceptance tolerances
    DRIFT_SLOPE_TOLERANCE = 0.15
    MULTIPLIER_SLOPE_TOLERANCE = 0.2
    KS_TARGET = 0.05
    KS_CRITICAL_1PCT = 1.628  # asymptotic two-sample KS constant at the 1% level

    # Uniform-in-t claims are checked on a finite band
    BAND_FRACTIONS = (0.2, 0.8)
    BAND_POINTS = 9

    # Monotone-decrease verdict: at most this many inversions, each within the ratio
    MAX_INVERSIONS = 1
    INVERSION_RATIO = 1.10

    BIAS_BANDWIDTH = 0.1
    KERNEL = "epanechnikov"


class SystemConfig:
    """General system configuration"""
    LOG_LEVEL = "INFO"
    LOG_FILE = None  # console only unless a path is given

    # Event-based logging (only log when these things happen)
    LOG_EVENTS = {
        'study_events': True,         # study start/finish, per-eps summaries
        'replicate_progress': True,   # rate-limited replicate counters
        'acceptance': True,           # verdicts
        'config_warnings': True,      # e.g. multiplier exceeding the declared bound
    }
    PROGRESS_LOG_INTERVAL = 5.0  # seconds between progress messages per key

    CSV_HEADER = "# stabledrift-csv v1"

    BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    STUDIES_DIR = os.path.join(BASE_DIR, "config", "studies")

    @staticmethod
    def worker_count() -> int:
        """Worker threads for replicate runs (STABLEDRIFT_THREADS overrides)"""
        load_dotenv()
        raw = os.getenv("STABLEDRIFT_THREADS")
        if raw:
            try:
                value = int(raw)
            except ValueError:
                raise ValueError(f"STABLEDRIFT_THREADS must be an integer, got {raw!r}")
            if value < 1:
                raise ValueError(f"STABLEDRIFT_THREADS must be >= 1, got {value}")
            return value
        return os.cpu_count() or 1

    @staticmethod
    def log_level() -> str:
        load_dotenv()
        return os.getenv("STABLEDRIFT_LOG_LEVEL", SystemConfig.LOG_LEVEL)
