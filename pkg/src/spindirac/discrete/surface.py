"""Rotationally symmetric surfaces dt^2 + phi(t)^2 dtheta^2."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
import math
from typing import Callable

import numpy as np

from spindirac.spectra.models import SpinStructure

Profile = Callable[[np.ndarray], np.ndarray]

_CAP_TOL = 1e-6
_PERIODIC_TOL = 1e-10
_SLOPE_STEP = 1e-4
_INTERIOR_SAMPLES = 2049


class Topology(str, Enum):
    TWO_CAPS = "two_caps"
    PERIODIC = "periodic"


def _end_slope(profile: Profile, t0: float, direction: float) -> float:
    """Second-order one-sided derivative at t0, stepping into the interval."""
    step = direction * _SLOPE_STEP
    samples = np.asarray(profile(np.array([t0, t0 + step, t0 + 2.0 * step])), dtype=float)
    return float((-3.0 * samples[0] + 4.0 * samples[1] - samples[2]) / (2.0 * step))


@dataclass(frozen=True)
class RevolutionSurface:
    """Surface of revolution with circle radius profile(t) on [0, length].

    The profile must accept numpy arrays. t_spin is ignored for two_caps.
    """

    profile: Profile
    length: float
    topology: Topology
    theta_spin: SpinStructure
    t_spin: SpinStructure = SpinStructure.NON_BOUNDING
    label: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "topology", Topology(self.topology))
        object.__setattr__(self, "theta_spin", SpinStructure(self.theta_spin))
        object.__setattr__(self, "t_spin", SpinStructure(self.t_spin))
        if not self.length > 0:
            raise ValueError(f"Surface length must be positive, got {self.length}")

        interior = np.linspace(0.0, self.length, _INTERIOR_SAMPLES)[1:-1]
        values = np.asarray(self.profile(interior), dtype=float)
        if values.shape != interior.shape:
            raise ValueError("Surface profile must evaluate elementwise on arrays")
        if not np.all(np.isfinite(values)) or np.any(values <= 0.0):
            raise ValueError("Surface profile must be finite and positive on the open interval")

        if self.topology is Topology.TWO_CAPS:
            self._check_caps()
        else:
            self._check_periodic()

    def _check_caps(self) -> None:
        if self.theta_spin is not SpinStructure.BOUNDING:
            raise ValueError("two_caps surfaces need the bounding theta spin structure")
        ends = np.asarray(self.profile(np.array([0.0, self.length])), dtype=float)
        if np.any(np.abs(ends) > _CAP_TOL):
            raise ValueError(f"Cap condition violated: profile at the ends is {ends.tolist()}")
        left = _end_slope(self.profile, 0.0, 1.0)
        right = _end_slope(self.profile, self.length, -1.0)
        if abs(left - 1.0) > _CAP_TOL or abs(right + 1.0) > _CAP_TOL:
            raise ValueError(f"Cap condition violated: end slopes are {left:.8g} and {right:.8g}")

    def _check_periodic(self) -> None:
        ends = np.asarray(self.profile(np.array([0.0, self.length])), dtype=float)
        if abs(ends[0] - ends[1]) > _PERIODIC_TOL * max(1.0, abs(ends[0])):
            raise ValueError(f"Periodicity residual {abs(ends[0] - ends[1]):.3e} exceeds tolerance")
        left = _end_slope(self.profile, 0.0, 1.0)
        right = _end_slope(self.profile, self.length, -1.0)
        if abs(left - right) > _CAP_TOL * max(1.0, abs(left)):
            raise ValueError(f"Profile slopes do not match across the seam: {left:.8g} vs {right:.8g}")

    def allowed_mode(self, m: float) -> bool:
        twice = 2.0 * m
        if abs(twice - round(twice)) > 1e-12:
            return False
        odd = int(round(twice)) % 2 == 1
        return odd if self.theta_spin is SpinStructure.BOUNDING else not odd


def round_sphere_surface(radius: float = 1.0) -> RevolutionSurface:
    def profile(t: np.ndarray) -> np.ndarray:
        return radius * np.sin(np.asarray(t, dtype=float) / radius)

    return RevolutionSurface(
        profile=profile,
        length=math.pi * radius,
        topology=Topology.TWO_CAPS,
        theta_spin=SpinStructure.BOUNDING,
        label=f"round sphere radius={radius:g}",
    )


def flat_torus_surface(
    length: float,
    circumference: float,
    theta_spin: SpinStructure,
    t_spin: SpinStructure,
) -> RevolutionSurface:
    """Rectangular flat torus as a surface of revolution with constant profile."""
    radius = circumference / (2.0 * math.pi)

    def profile(t: np.ndarray) -> np.ndarray:
        return np.full(np.shape(t), radius, dtype=float)

    return RevolutionSurface(
        profile=profile,
        length=length,
        topology=Topology.PERIODIC,
        theta_spin=theta_spin,
        t_spin=t_spin,
        label=f"flat torus {length:g}x{circumference:g}",
    )
