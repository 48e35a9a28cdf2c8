"""Weighted spinor mass near the surgery locus and the restricted L^2 Gram matrix."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
import logging
import math
from typing import Callable, Sequence

import numpy as np
import scipy.linalg

from spindirac.discrete.kernel import ThresholdPolicy
from spindirac.discrete.operator import DiscreteDirac
from spindirac.discrete.quadrature import interval_integral
from spindirac.surgery.model import SurgeryModel

logger = logging.getLogger(__name__)

# (n - k - 1)^2 / 32 for n = 2, k = 0
ENERGY_CONSTANT = 1.0 / 32.0
_RANK_TOL = 1e-10


class EnergyVerdict(str, Enum):
    SATISFIED = "satisfied"
    VIOLATED = "violated"
    NOT_APPLICABLE = "not_applicable"


@dataclass(frozen=True)
class SampledSpinor:
    """Two spinor components sampled on their staggered grids."""

    a_points: np.ndarray
    a_values: np.ndarray
    b_points: np.ndarray
    b_values: np.ndarray
    mesh: float
    period: float | None

    @classmethod
    def from_vector(cls, op: DiscreteDirac, vector: np.ndarray) -> "SampledSpinor":
        if op.grid is None:
            raise ValueError("Operator carries no staggered grid")
        a_values, b_values = op.grid.split(vector)
        return cls(op.grid.a_points, a_values, op.grid.b_points, b_values, op.mesh, op.grid.period)

    @classmethod
    def from_function(
        cls,
        op: DiscreteDirac,
        a_fn: Callable[[np.ndarray], np.ndarray],
        b_fn: Callable[[np.ndarray], np.ndarray],
    ) -> "SampledSpinor":
        if op.grid is None:
            raise ValueError("Operator carries no staggered grid")
        grid = op.grid
        return cls(
            grid.a_points,
            np.asarray(a_fn(grid.a_points), dtype=float),
            grid.b_points,
            np.asarray(b_fn(grid.b_points), dtype=float),
            op.mesh,
            grid.period,
        )


@dataclass(frozen=True)
class EnergyRatio:
    lhs: float
    rhs: float
    verdict: EnergyVerdict

    @property
    def satisfied(self) -> bool | None:
        if self.verdict is EnergyVerdict.NOT_APPLICABLE:
            return None
        return self.verdict is EnergyVerdict.SATISFIED


def _intervals(model: SurgeryModel, r_low: float, r_high: float) -> list[tuple[float, float]]:
    low, high = model.t_at(r_low), model.t_at(r_high)
    return [(low, high), (model.period - high, model.period - low)]


def _annulus_mass(spinor: SampledSpinor, model: SurgeryModel, r_low: float, r_high: float) -> float:
    # |F^{1/2} psi|^2 dv^g = 2 pi (a^2 + b^2) / F dt after the phi^{1/2} conjugation
    total = 0.0
    for points, values in ((spinor.a_points, spinor.a_values), (spinor.b_points, spinor.b_values)):
        density = 2.0 * math.pi * np.asarray(values) ** 2 / model.conformal_factor_at(points)
        for lower, upper in _intervals(model, r_low, r_high):
            total += interval_integral(points, density, lower, upper, spinor.period)
    return total


def _check_scale(model: SurgeryModel, s: float) -> None:
    p = model.profile
    if not 2.0 * p.rho < s < p.r_1 / 2.0:
        raise ValueError(f"Scale s must lie in (2*rho, r_1/2) = ({2.0 * p.rho}, {p.r_1 / 2.0}), got {s}")


def energy_integrals(spinor: SampledSpinor, model: SurgeryModel, s: float | None = None) -> tuple[float, float]:
    """Weighted masses over U(s) minus U(2 rho) and over U(2 s) minus U(s), both poles."""
    scale = model.profile.r_0 / 2.0 if s is None else s
    _check_scale(model, scale)
    inner = _annulus_mass(spinor, model, 2.0 * model.profile.rho, scale)
    outer = _annulus_mass(spinor, model, scale, 2.0 * scale)
    return inner, outer


def neck_energy_ratio(
    psi: SampledSpinor | np.ndarray,
    eigval: float,
    model: SurgeryModel,
    s: float | None = None,
    policy: ThresholdPolicy | None = None,
    *,
    op: DiscreteDirac | None = None,
) -> EnergyRatio:
    """Compare (1/32) x inner mass with the outer mass; asserted only for |eigval| <= tau.

    `psi` is either a sampled spinor or an eigenvector of `op`, the operator it
    was computed from. The neck profile (rho, r_0, r_1) is read from `model`.
    """
    if isinstance(psi, SampledSpinor):
        spinor = psi
    elif op is None:
        raise ValueError("An eigenvector needs the operator it belongs to (op=...)")
    else:
        spinor = SampledSpinor.from_vector(op, np.asarray(psi, dtype=float))
    inner, outer = energy_integrals(spinor, model, s)
    lhs = ENERGY_CONSTANT * inner
    tau = (policy or ThresholdPolicy()).threshold(spinor.mesh)
    if abs(eigval) > tau:
        verdict = EnergyVerdict.NOT_APPLICABLE
    elif lhs <= outer:
        verdict = EnergyVerdict.SATISFIED
    else:
        verdict = EnergyVerdict.VIOLATED
    logger.debug("energy ratio lhs=%.6g rhs=%.6g eig=%.3g tau=%.3g", lhs, outer, eigval, tau)
    return EnergyRatio(lhs=lhs, rhs=outer, verdict=verdict)


@dataclass(frozen=True)
class DofRegion:
    """Per-entry quadrature weights of a region; zero outside it."""

    weights: np.ndarray

    def __post_init__(self) -> None:
        weights = np.asarray(self.weights, dtype=float)
        if weights.ndim != 1 or np.any(weights < 0):
            raise ValueError("Region weights must be a nonnegative vector")
        object.__setattr__(self, "weights", weights)

    @classmethod
    def everywhere(cls, dimension: int) -> "DofRegion":
        return cls(np.ones(dimension))


def outer_region(model: SurgeryModel, op: DiscreteDirac, s: float | None = None) -> DofRegion:
    """Points with r >= s, weighted by 1/F^2 so sums approximate the L^2(g) product."""
    scale = model.profile.r_0 / 2.0 if s is None else s
    _check_scale(model, scale)
    if op.grid is None:
        raise ValueError("Operator carries no staggered grid")
    weights = np.zeros(op.dimension)
    for points, index in ((op.grid.a_points, op.grid.a_index), (op.grid.b_points, op.grid.b_index)):
        r = model.radius_at(points)
        weights[index] = np.where(r >= scale, 1.0 / model.conformal_factor_at(points) ** 2, 0.0)
    return DofRegion(weights)


@dataclass(frozen=True)
class GramResult:
    matrix: np.ndarray
    rank: int
    region: DofRegion

    @property
    def singular(self) -> bool:
        return self.rank < self.matrix.shape[0]

    def orthonormalize(self, eigvecs: Sequence[np.ndarray]) -> np.ndarray:
        """Columns spanning the same space, orthonormal for the restricted product."""
        if self.singular:
            raise ValueError(f"Gram matrix is singular (rank {self.rank} of {self.matrix.shape[0]})")
        vectors = np.column_stack([np.asarray(v, dtype=float) for v in eigvecs])
        lower = scipy.linalg.cholesky(self.matrix, lower=True)
        return scipy.linalg.solve_triangular(lower, vectors.T, lower=True).T


def normalization_gram(eigvecs: Sequence[np.ndarray], region: DofRegion) -> GramResult:
    """Gram matrix of the restricted inner products sum_i w_i x_i y_i."""
    if not eigvecs:
        raise ValueError("normalization_gram needs at least one vector")
    if not np.any(region.weights > 0):
        raise ValueError("Region is empty on this mesh")
    vectors = np.column_stack([np.asarray(v, dtype=float) for v in eigvecs])
    if vectors.shape[0] != region.weights.shape[0]:
        raise ValueError(f"Vectors of length {vectors.shape[0]} do not match region of {region.weights.shape[0]}")
    gram = vectors.T @ (region.weights[:, None] * vectors)
    gram = 0.5 * (gram + gram.T)
    scale = max(float(np.max(np.abs(gram))), 1e-300)
    rank = int(np.linalg.matrix_rank(gram, tol=_RANK_TOL * scale))
    return GramResult(matrix=gram, rank=rank, region=region)
