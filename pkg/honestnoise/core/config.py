"""
Core configuration for honestnoise

Settings come from environment variables, optionally loaded from a ``.env``
file in the working directory.
"""
import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()


def _get_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}")


def _get_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        return float(raw)
    except ValueError:
        raise ValueError(f"{name} must be a number, got {raw!r}")


def get_debug_mode() -> bool:
    """
    Get debug mode setting from environment variables

    Returns:
        bool: True if debug logging is enabled, False otherwise
    """
    return os.getenv("DEBUG", "False").lower() == "true"


def get_default_seed() -> int:
    """
    Get the base seed for every randomized routine

    Returns:
        int: HONEST_SEED, defaults to 0
    """
    return _get_int("HONEST_SEED", 0)


def get_default_restarts() -> int:
    """
    Get the number of optimizer restarts

    Returns:
        int: HONEST_RESTARTS, defaults to 16

    Raises:
        ValueError: If the value is not a positive integer
    """
    restarts = _get_int("HONEST_RESTARTS", 16)
    if restarts < 1:
        raise ValueError("HONEST_RESTARTS must be at least 1")
    return restarts


def get_default_max_iter() -> int:
    """Outer Nelder-Mead iteration cap (HONEST_MAX_ITER, default 2000)"""
    return _get_int("HONEST_MAX_ITER", 2000)


def get_default_penalty() -> float:
    """Exact-penalty weight on honesty violations (HONEST_PENALTY, default 1e3)"""
    return _get_float("HONEST_PENALTY", 1e3)


def get_default_workers() -> int:
    """
    Get the process pool size used for optimizer restarts

    Returns:
        int: HONEST_WORKERS, defaults to 1 (run restarts in-process)
    """
    return max(1, _get_int("HONEST_WORKERS", 1))


def get_default_samples() -> int:
    """Number of sampled states for empirical honesty checks (HONEST_SAMPLES, default 10000)"""
    return _get_int("HONEST_SAMPLES", 10_000)


def get_sdp_solver() -> str:
    """
    Get the cvxpy solver name for the diamond-norm program

    Returns:
        str: HONEST_SDP_SOLVER, defaults to "CLARABEL"
    """
    return os.getenv("HONEST_SDP_SOLVER", "CLARABEL").upper()


def get_gap_tolerance() -> float:
    """Largest accepted SDP duality gap (HONEST_GAP_TOL, default 1e-8)"""
    return _get_float("HONEST_GAP_TOL", 1e-8)


def get_data_dir() -> Path:
    """
    Get the directory holding golden tables and example channel files

    Returns:
        Path: HONEST_DATA_DIR, defaults to the repository's ``data`` directory
    """
    configured = os.getenv("HONEST_DATA_DIR")
    if configured:
        return Path(configured)
    return Path(__file__).parent.parent.parent / "data"
