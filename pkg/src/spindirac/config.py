"""Configuration defaults for spindirac computations."""

from __future__ import annotations

import os

TOOL_NAME: str = "spindirac"
THREADS_ENV: str = "SPINDIRAC_THREADS"

# Kernel threshold tau(h) = THRESHOLD_CONSTANT * h ** THRESHOLD_EXPONENT.
# Calibrated on the flat 2pi-square torus with the all-periodic structure.
THRESHOLD_CONSTANT: float = 1.0
THRESHOLD_EXPONENT: float = 1.5
CONFIDENT_GAP_RATIO: float = 5.0

# Eigenvalues closer than this are one value when accumulating multiplicities.
EXACT_MERGE_TOL: float = 1e-9
DISCRETE_MERGE_TOL: float = 1e-3

SYMMETRY_TOL: float = 1e-12
RECONSTRUCTION_TOL: float = 1e-10
HERMITICITY_TOL: float = 1e-10
RESIDUAL_TOL: float = 1e-8
DENSE_SOLVE_LIMIT: int = 4096

DEFAULT_CIRCLE_GRID: int = 256
DEFAULT_SURFACE_GRID: int = 512
DEFAULT_TORUS_MODES: float = 8.0
DEFAULT_SPHERE_MODES: float = 2.5

# Neck model on a round sphere of radius SPHERE_RADIUS.
SPHERE_RADIUS: float = 2.0
NECK_R_MAX: float = 3.0
NECK_R0: float = 0.85
NECK_R1: float = 1.8
NECK_CORE_LENGTH: float = 1.0
NECK_MODES: float = 2.5
NECK_GRID: int = 512
DEFAULT_RHOS: tuple[float, ...] = (0.2, 0.1, 0.05, 0.02)
GLUING_TOL: float = 1e-8


def worker_count() -> int:
    """Return the worker cap from SPINDIRAC_THREADS (default 1)."""
    raw = os.environ.get(THREADS_ENV, "").strip()
    if not raw:
        return 1
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from exc
    if value < 1:
        raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return value
