"""
Numeric tolerances, dimension limits and the worker-pool setting.
Tolerances are module constants so every report can echo the exact values it
was produced with.
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable
from typing import Dict
from typing import Iterable
from typing import List
from typing import TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

# Matrix and state validation
HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
CHANNEL_TOL = 1e-8
PSD_TOL = 1e-10
EIG_CLIP = 1e-15
SUPPORT_TOL = 1e-12

# Certification slacks
CERTIFY_TOL = 1e-9
SANDWICH_TOL = 1e-10

# Truncation targets
COHERENT_LEAK = 1e-10
KRAUS_DEFECT = 1e-8
PARTITION_TAIL = 1e-14
GIBBS_WEIGHT = 1e-12

# Root finding and extrapolation
BETA_RESIDUAL = 1e-12
ETA_RESIDUAL = 1e-3
OMEGA_C_RANGE = (1e-6, 1e6)
OMEGA_C_RTOL = 1e-10

# Dense-matrix limits (operators: dim, superoperators: dim**2)
OPERATOR_SOFT_LIMIT = 200
SUPEROPERATOR_SOFT_LIMIT = 4096
SUPEROPERATOR_HARD_LIMIT = 16384

# Enumeration budgets
TERM_BUDGET = 10_000_000
PAIR_BUDGET = 50_000_000
SUM_CHUNK = 4096

THREADS_ENV = "QDSLIM_THREADS"


def tolerances() -> Dict[str, float]:
    """Tolerances echoed into every report."""
    return {
        "hermitian": HERMITIAN_TOL,
        "trace": TRACE_TOL,
        "channel": CHANNEL_TOL,
        "psd": PSD_TOL,
        "certify": CERTIFY_TOL,
        "sandwich": SANDWICH_TOL,
        "coherent_leak": COHERENT_LEAK,
        "kraus_defect": KRAUS_DEFECT,
        "partition_tail": PARTITION_TAIL,
        "beta_residual": BETA_RESIDUAL,
        "eta_residual": ETA_RESIDUAL,
    }


def thread_count() -> int:
    """
    Number of worker threads for parallel sampling.
    Returns:
        Value of QDSLIM_THREADS when it is a positive integer, else the CPU count
    """
    default = os.cpu_count() or 1
    raw = os.getenv(THREADS_ENV)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning("ignoring %s=%r: not an integer", THREADS_ENV, raw)
        return default
    if value < 1:
        logger.warning("ignoring %s=%r: must be positive", THREADS_ENV, raw)
        return default
    return value


def parallel_map(fn: Callable[[T], R], items: Iterable[T]) -> List[R]:
    """
    Apply fn to every item on a thread pool, preserving input order.
    Args:
        fn: Pure function of one item
        items: Work items
    Returns:
        Results in the same order as items
    """
    work = list(items)
    workers = min(thread_count(), max(len(work), 1))
    if workers == 1:
        return [fn(item) for item in work]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, work))
