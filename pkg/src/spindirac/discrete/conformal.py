"""Kernel counts of circles under conformal changes of the metric."""

from __future__ import annotations

import logging
from typing import Callable

import numpy as np

from spindirac.discrete.eigensolve import eig_smallest
from spindirac.discrete.kernel import KernelEstimate, ThresholdPolicy, kernel_dim_estimate
from spindirac.discrete.modes import ModeSolution, values_by_mesh
from spindirac.discrete.operator import ConformalFactor, MIN_GRID, assemble_circle_dirac
from spindirac.spectra.models import SpinCircle

logger = logging.getLogger(__name__)

_EIGENPAIRS = 8


def unit_factor(theta: np.ndarray) -> np.ndarray:
    return np.ones_like(np.asarray(theta, dtype=float))


def random_conformal_factor(seed: int, order: int = 3, amplitude: float = 0.5) -> ConformalFactor:
    """exp of a seeded low-order Fourier series; coefficients decay like 1/k."""
    rng = np.random.default_rng(seed)
    cos_coef = amplitude * rng.standard_normal(order) / np.arange(1, order + 1)
    sin_coef = amplitude * rng.standard_normal(order) / np.arange(1, order + 1)
    harmonics = np.arange(1, order + 1)

    def factor(theta: np.ndarray) -> np.ndarray:
        angle = np.multiply.outer(np.asarray(theta, dtype=float), harmonics)
        return np.exp(np.cos(angle) @ cos_coef + np.sin(angle) @ sin_coef)

    return factor


def circle_solutions(
    c: SpinCircle,
    conf: ConformalFactor,
    n: int,
) -> dict[float, list[ModeSolution]]:
    """Eigenpairs on grids n/2 and n, keyed by mesh; a circle is reported as the single mode 0."""
    if n // 2 < MIN_GRID:
        raise ValueError(f"Circle grid size must be >= {2 * MIN_GRID}, got {n}")
    out: dict[float, list[ModeSolution]] = {}
    for size in (n // 2, n):
        op = assemble_circle_dirac(c, conf, size)
        pairs = tuple(eig_smallest(op, _EIGENPAIRS))
        out[op.mesh] = [ModeSolution(mode=0.0, mesh=op.mesh, pairs=pairs, operator=op)]
    return out


def circle_kernel_estimate(
    c: SpinCircle,
    conf: ConformalFactor,
    n: int,
    policy: ThresholdPolicy | None = None,
    solutions: dict[float, list[ModeSolution]] | None = None,
) -> KernelEstimate:
    """Kernel estimate from grids n/2 and n."""
    if solutions is None:
        solutions = circle_solutions(c, conf, n)
    return kernel_dim_estimate(values_by_mesh(solutions), policy)


def conformal_invariance_check(
    c: SpinCircle,
    conf: Callable[[np.ndarray], np.ndarray],
    n: int,
    policy: ThresholdPolicy | None = None,
) -> bool:
    """True iff the kernel count with factor conf equals the count with F = 1."""
    stretched = circle_kernel_estimate(c, conf, n, policy)
    reference = circle_kernel_estimate(c, unit_factor, n, policy)
    logger.debug("conformal check %s: %d vs %d", c.structure.value, stretched.count, reference.count)
    return stretched.count == reference.count
