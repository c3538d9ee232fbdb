"""
Wronsk Configuration

Numeric defaults shared by the engines and the CLI, plus logging setup.

Defaults follow the integration protocol h = 0.01 with bisection to 1e-9.
Two settings can be overridden from the environment:
    WRONSK_LOG_LEVEL  logging level name for the CLI (default WARNING)
    WRONSK_JOBS       worker threads used by scans (default 1)
"""

import logging
import os
import sys

# ---------------------------------------------------------------------------
# INTEGRATION / ROOT FINDING
# ---------------------------------------------------------------------------

DEFAULT_STEP = 0.01
MAX_STEP = 0.1
DEFAULT_TOL = 1e-9
MIN_TOL = 1e-13
DEFAULT_N_SCAN = 400
DEFAULT_MAX_ITER = 200

# Any state component beyond this magnitude aborts the march.
OVERFLOW_LIMIT = 1e300

# ---------------------------------------------------------------------------
# EVALUATION POINT (x_eval = auto)
# ---------------------------------------------------------------------------

AUTO_TAIL_TOL = 1e-10
X_EVAL_CAP = 50.0
DECAY_LENGTHS = 6.0
LOW_CONFIDENCE_KX = 3.0

# Scans stop this far below the lowest asymptotic limit.
THRESHOLD_GAP = 1e-6

# k below this uses the {1, x} threshold basis.
THRESHOLD_K = 1e-12

# ---------------------------------------------------------------------------
# POTENTIAL PROBING
# ---------------------------------------------------------------------------

PARITY_TOL = 1e-10
PARITY_PROBES = 64
PARITY_PROBE_HALF_WIDTH = 10.0
PARITY_SEED = 20111
LIMIT_PROBE_X = 1e3
TAIL_LATTICE_STEP = 0.5
TAIL_REFINE_WIDTH = 1e-3
TAIL_CLAMP = (1.0, 50.0)

# ---------------------------------------------------------------------------
# ENVIRONMENT
# ---------------------------------------------------------------------------

LOG_LEVEL = os.environ.get("WRONSK_LOG_LEVEL", "WARNING").upper()
DEFAULT_JOBS = max(1, int(os.environ.get("WRONSK_JOBS", "1")))


def configure_logging(level: str | int | None = None) -> None:
    """
    Route wronsk log records to stderr.

    stdout carries CSV / table output, so diagnostics never go there.
    """
    logging.basicConfig(
        level=level if level is not None else LOG_LEVEL,
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )
