"""Mesh-aware classification of discrete eigenvalues as numerical zero modes."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
import logging
import math
from typing import Mapping, Sequence

import numpy as np

from spindirac.config import CONFIDENT_GAP_RATIO, THRESHOLD_CONSTANT, THRESHOLD_EXPONENT

logger = logging.getLogger(__name__)

_MESH_RATIO_TOL = 0.02


@dataclass(frozen=True)
class ThresholdPolicy:
    """tau(h) = constant * h**exponent; calibrated once on the flat torus and frozen."""

    constant: float = THRESHOLD_CONSTANT
    exponent: float = THRESHOLD_EXPONENT
    confident_gap_ratio: float = CONFIDENT_GAP_RATIO

    def __post_init__(self) -> None:
        if not self.constant > 0:
            raise ValueError(f"Threshold constant must be positive, got {self.constant}")
        if not self.exponent > 0:
            raise ValueError(f"Threshold exponent must be positive, got {self.exponent}")

    def threshold(self, mesh: float) -> float:
        return self.constant * mesh**self.exponent


class KernelVerdict(str, Enum):
    CONFIDENT = "confident"
    LOW_GAP = "low_gap"
    UNSTABLE = "unstable"


@dataclass(frozen=True)
class KernelEstimate:
    count: int
    threshold: float
    gap_ratio: float
    meshes_used: tuple[float, ...]
    verdict: KernelVerdict
    counts_by_mesh: tuple[int, ...] = ()

    @property
    def confident(self) -> bool:
        return self.verdict is KernelVerdict.CONFIDENT


@dataclass(frozen=True)
class ThresholdWindow:
    """Threshold constants for which the finest meshes count exactly `expected` zeros."""

    lower: float
    upper: float
    expected: int

    def contains(self, constant: float) -> bool:
        return self.lower <= constant < self.upper

    @property
    def empty(self) -> bool:
        return not self.lower < self.upper


def _finest_two(spectra_by_mesh: Mapping[float, Sequence[float]]) -> list[float]:
    if len(spectra_by_mesh) < 2:
        raise ValueError("Kernel estimation needs spectra on at least two meshes")
    meshes = sorted(spectra_by_mesh)
    for mesh in meshes:
        if not mesh > 0:
            raise ValueError(f"Mesh spacing must be positive, got {mesh}")
    finest, second = meshes[0], meshes[1]
    ratio = second / finest
    if abs(ratio - 2.0) > _MESH_RATIO_TOL * 2.0:
        raise ValueError(f"The two finest meshes must differ by a factor of 2, got ratio {ratio:.4f}")
    return meshes


def _count_below(values: np.ndarray, tau: float) -> int:
    return int(np.count_nonzero(values <= tau))


def kernel_dim_estimate(
    spectra_by_mesh: Mapping[float, Sequence[float]],
    policy: ThresholdPolicy | None = None,
) -> KernelEstimate:
    """Count |lambda| <= tau(h) on the finest mesh and grade the verdict.

    The verdict is unstable when the two finest meshes disagree, low_gap when
    the smallest above-threshold |lambda| is within the policy's gap ratio of
    tau, and confident otherwise.
    """
    policy = policy or ThresholdPolicy()
    meshes = _finest_two(spectra_by_mesh)
    finest, second = meshes[0], meshes[1]

    counts: list[int] = []
    for mesh in (finest, second):
        magnitudes = np.abs(np.asarray(spectra_by_mesh[mesh], dtype=float))
        counts.append(_count_below(magnitudes, policy.threshold(mesh)))

    tau = policy.threshold(finest)
    magnitudes = np.abs(np.asarray(spectra_by_mesh[finest], dtype=float))
    above = magnitudes[magnitudes > tau]
    gap_ratio = float(above.min() / tau) if above.size else math.inf

    if counts[0] != counts[1]:
        verdict = KernelVerdict.UNSTABLE
    elif gap_ratio >= policy.confident_gap_ratio:
        verdict = KernelVerdict.CONFIDENT
    else:
        verdict = KernelVerdict.LOW_GAP
    logger.debug("kernel estimate counts=%s tau=%.3e gap=%.3g verdict=%s", counts, tau, gap_ratio, verdict.value)
    return KernelEstimate(
        count=counts[0],
        threshold=tau,
        gap_ratio=gap_ratio,
        meshes_used=tuple(meshes),
        verdict=verdict,
        counts_by_mesh=tuple(counts),
    )


def calibrate_threshold(
    spectra_by_mesh: Mapping[float, Sequence[float]],
    expected: int,
    exponent: float = THRESHOLD_EXPONENT,
) -> ThresholdWindow:
    """Range of constants C with exactly `expected` values below C h**exponent on both finest meshes."""
    if expected < 0:
        raise ValueError(f"Expected kernel count must be nonnegative, got {expected}")
    meshes = _finest_two(spectra_by_mesh)
    lower, upper = 0.0, math.inf
    for mesh in meshes[:2]:
        magnitudes = np.sort(np.abs(np.asarray(spectra_by_mesh[mesh], dtype=float)))
        if magnitudes.shape[0] < expected:
            raise ValueError(f"Mesh {mesh:g} has only {magnitudes.shape[0]} eigenvalues")
        scale = mesh**exponent
        if expected:
            lower = max(lower, float(magnitudes[expected - 1]) / scale)
        if magnitudes.shape[0] > expected:
            upper = min(upper, float(magnitudes[expected]) / scale)
    return ThresholdWindow(lower=lower, upper=upper, expected=expected)
