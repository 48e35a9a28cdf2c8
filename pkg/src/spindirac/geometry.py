"""Pointwise metric comparison, cutoff blending and deviation diagnostics."""

from __future__ import annotations

from dataclasses import dataclass, field
import logging
from typing import Callable, Sequence

import numpy as np

from spindirac.config import RECONSTRUCTION_TOL, SYMMETRY_TOL

logger = logging.getLogger(__name__)

MetricField = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class MetricAtPoint:
    """Gram matrix of a Riemannian metric at one point."""

    gram: np.ndarray
    dim: int = field(init=False)

    def __post_init__(self) -> None:
        gram = np.array(self.gram, dtype=float)
        if gram.ndim != 2 or gram.shape[0] != gram.shape[1]:
            raise ValueError(f"Gram matrix must be square, got shape {gram.shape}")
        if gram.shape[0] not in (1, 2, 3):
            raise ValueError(f"Gram matrix dimension must be 1, 2 or 3, got {gram.shape[0]}")
        scale = max(float(np.max(np.abs(gram))), 1.0)
        asymmetry = float(np.max(np.abs(gram - gram.T)))
        if asymmetry > SYMMETRY_TOL * scale:
            raise ValueError(f"Gram matrix is not symmetric (residual {asymmetry:.3e})")
        gram = 0.5 * (gram + gram.T)
        eigenvalues = np.linalg.eigvalsh(gram)
        if eigenvalues[0] <= 0.0:
            raise ValueError(
                f"Gram matrix is not positive definite (smallest eigenvalue {eigenvalues[0]:.6g})"
            )
        gram.setflags(write=False)
        object.__setattr__(self, "gram", gram)
        object.__setattr__(self, "dim", gram.shape[0])


@dataclass(frozen=True)
class DeviationReport:
    """Size of g - g' and of its covariant derivative at one sample."""

    pointwise_norm: float
    gradient_norm: float
    sample_location: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.pointwise_norm < 0 or self.gradient_norm < 0:
            raise ValueError("Deviation norms must be nonnegative")


@dataclass(frozen=True)
class BlendParams:
    """Cutoff scale delta and a cutoff function eta on [0, inf)."""

    delta: float
    eta: Callable[[np.ndarray | float], np.ndarray | float]

    def __post_init__(self) -> None:
        if not self.delta > 0:
            raise ValueError(f"Cutoff scale delta must be positive, got {self.delta}")


def _spd_power(gram: np.ndarray, power: float) -> np.ndarray:
    eigenvalues, eigenvectors = np.linalg.eigh(gram)
    return (eigenvectors * eigenvalues**power) @ eigenvectors.T


def _require_same_dim(g: MetricAtPoint, gp: MetricAtPoint) -> None:
    if g.dim != gp.dim:
        raise ValueError(f"Metric dimensions differ: {g.dim} != {gp.dim}")


def bg_endomorphism(g: MetricAtPoint, gp: MetricAtPoint) -> np.ndarray:
    """Return the positive g-symmetric b with g(X, Y) = g'(bX, bY).

    With M = g^{-1/2} g' g^{-1/2}, the endomorphism is g^{-1/2} M^{-1/2} g^{1/2}.
    """
    _require_same_dim(g, gp)
    g_half = _spd_power(g.gram, 0.5)
    g_inv_half = _spd_power(g.gram, -0.5)
    m = g_inv_half @ gp.gram @ g_inv_half
    b = g_inv_half @ _spd_power(0.5 * (m + m.T), -0.5) @ g_half

    scale = float(np.max(np.abs(g.gram)))
    residual = float(np.max(np.abs(b.T @ gp.gram @ b - g.gram)))
    if residual > RECONSTRUCTION_TOL * scale:
        raise ValueError(f"Endomorphism reconstruction residual too large: {residual:.3e}")
    return b


def deviation_norm(g: MetricAtPoint, gp: MetricAtPoint) -> float:
    """Return |g - g'|_g, the largest absolute eigenvalue of g^{-1}(g - g')."""
    _require_same_dim(g, gp)
    g_inv_half = _spd_power(g.gram, -0.5)
    relative = g_inv_half @ (g.gram - gp.gram) @ g_inv_half
    return float(np.max(np.abs(np.linalg.eigvalsh(0.5 * (relative + relative.T)))))


def _coordinate_derivatives(field_: MetricField, x: np.ndarray, step: float) -> np.ndarray:
    n = x.shape[0]
    out = np.empty((n, n, n))
    for k in range(n):
        offset = np.zeros(n)
        offset[k] = step
        out[k] = (np.asarray(field_(x + offset)) - np.asarray(field_(x - offset))) / (2.0 * step)
    return out


def gradient_deviation(
    g_field: MetricField,
    gp_field: MetricField,
    x: Sequence[float],
    step: float = 1e-5,
) -> float:
    """Estimate |nabla^g (g - g')|_g at x by centered finite differences.

    Both fields map coordinates to Gram matrices. Christoffel symbols of g are
    differenced from g_field with the same step.
    """
    point = np.asarray(x, dtype=float)
    g_val = np.asarray(g_field(point), dtype=float)
    g_inv = np.linalg.inv(g_val)
    d_g = _coordinate_derivatives(g_field, point, step)
    d_gp = _coordinate_derivatives(gp_field, point, step)
    diff = g_val - np.asarray(gp_field(point), dtype=float)
    d_diff = d_g - d_gp

    christoffel = 0.5 * (
        np.einsum("lm,imj->lij", g_inv, d_g)
        + np.einsum("lm,jmi->lij", g_inv, d_g)
        - np.einsum("lm,mij->lij", g_inv, d_g)
    )
    nabla = (
        d_diff
        - np.einsum("lki,lj->kij", christoffel, diff)
        - np.einsum("lkj,il->kij", christoffel, diff)
    )
    squared = np.einsum("ka,ib,jc,kij,abc->", g_inv, g_inv, g_inv, nabla, nabla)
    return float(np.sqrt(max(squared, 0.0)))


def deviation_bound_rhs(report: DeviationReport) -> float:
    """Right-hand side |g - g'|_g + |nabla^g(g - g')|_g of the zeroth-order term bound."""
    return report.pointwise_norm + report.gradient_norm


def _polar_round(point: np.ndarray) -> np.ndarray:
    return np.diag([1.0, np.sin(point[0]) ** 2])


def _polar_product(point: np.ndarray) -> np.ndarray:
    return np.diag([1.0, point[0] ** 2])


def product_form_deviation(r_samples: Sequence[float]) -> list[DeviationReport]:
    """Compare the unit sphere with its product-form model about a point.

    In polar normal coordinates the sphere is dr^2 + sin^2(r) dtheta^2 and the
    product form g = dr^2 + r^2 dtheta^2. G is the sphere's deviation from g,
    measured with g, so |G|_g = |sin^2 r - r^2| / r^2.
    """
    reports: list[DeviationReport] = []
    for r in r_samples:
        if not r > 0:
            raise ValueError(f"Radial samples must be positive, got {r}")
        if r > 1.0:
            raise ValueError(f"Radial samples must lie in (0, 1], got {r}")
        point = np.array([float(r), 0.0])
        product = MetricAtPoint(_polar_product(point))
        sphere = MetricAtPoint(_polar_round(point))
        reports.append(
            DeviationReport(
                pointwise_norm=deviation_norm(product, sphere),
                gradient_norm=gradient_deviation(_polar_product, _polar_round, point, step=min(1e-5, r / 10)),
                sample_location=(float(r), 0.0),
            )
        )
    logger.debug("product_form_deviation evaluated %d samples", len(reports))
    return reports


def smoothstep(x: np.ndarray | float) -> np.ndarray | float:
    """Quintic smoothstep, C^2, equal to 0 below 0 and 1 above 1."""
    t = np.clip(x, 0.0, 1.0)
    return t * t * t * (t * (6.0 * t - 15.0) + 10.0)


def cutoff_params(delta: float) -> BlendParams:
    """Cutoff equal to 1 on [0, delta], 0 beyond 2 delta, slope at most 15/(8 delta)."""

    def eta(t: np.ndarray | float) -> np.ndarray | float:
        return 1.0 - smoothstep((np.asarray(t, dtype=float) - delta) / delta)

    return BlendParams(delta=delta, eta=eta)


def check_cutoff(params: BlendParams, samples: int = 2001) -> bool:
    """Check the plateau and slope constraints of a cutoff on a sample grid."""
    delta = params.delta
    grid = np.linspace(0.0, 3.0 * delta, samples)
    values = np.asarray(params.eta(grid), dtype=float)
    inner = grid <= delta
    outer = grid >= 2.0 * delta
    if not np.allclose(values[inner], 1.0, atol=1e-12, rtol=0.0):
        return False
    if not np.allclose(values[outer], 0.0, atol=1e-12, rtol=0.0):
        return False
    if np.any(values < -1e-12) or np.any(values > 1.0 + 1e-12):
        return False
    slopes = np.abs(np.diff(values) / np.diff(grid))
    return bool(np.all(slopes <= 2.0 / delta + 1e-9))


def blend_metric(
    g_val: MetricAtPoint,
    product_val: MetricAtPoint,
    r: float,
    p: BlendParams,
) -> MetricAtPoint:
    """Return eta(r) * product + (1 - eta(r)) * g."""
    if r < 0:
        raise ValueError(f"Distance r must be nonnegative, got {r}")
    _require_same_dim(g_val, product_val)
    weight = float(p.eta(r))
    return MetricAtPoint(weight * product_val.gram + (1.0 - weight) * g_val.gram)


def blended_sphere_radius(
    r: np.ndarray | float,
    p: BlendParams,
    sphere_radius: float = 1.0,
) -> np.ndarray | float:
    """Theta-circle radius of the blended metric on a round sphere about a pole.

    This is the square root of the dtheta^2 entry of blend_metric applied to
    dr^2 + a^2 sin^2(r/a) dtheta^2 and dr^2 + r^2 dtheta^2, vectorised over r.
    """
    r_arr = np.asarray(r, dtype=float)
    weight = np.asarray(p.eta(r_arr), dtype=float)
    round_sq = (sphere_radius * np.sin(r_arr / sphere_radius)) ** 2
    return np.sqrt(weight * r_arr**2 + (1.0 - weight) * round_sq)
