"""Rotationally symmetric 0-surgery on a round sphere: two polar necks joined by a flat core.

The circle coordinate t starts at the middle of the core. Moving outwards it
crosses the flat neck (r < r_0, where r F = 1), the conformal transition, the
blended and then round sphere up to the equator at t = period / 2, and comes
back through the mirror image around the other pole.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import logging
import math

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import CubicSpline

from spindirac.config import GLUING_TOL, NECK_CORE_LENGTH, SPHERE_RADIUS
from spindirac.discrete.surface import RevolutionSurface, Topology
from spindirac.errors import HierarchyError
from spindirac.geometry import BlendParams, blended_sphere_radius, cutoff_params
from spindirac.spectra.models import SpinStructure
from spindirac.surgery.profile import NeckProfile

logger = logging.getLogger(__name__)

_TABLE_SAMPLES = 4097
_DERIVATIVE_STEP = 1e-5
_CURVATURE_STEP = 1e-3


@dataclass(frozen=True)
class SurgeryModel:
    profile: NeckProfile
    surface: RevolutionSurface
    sphere_radius: float
    core_length: float
    plateau_end: float
    neck_length: float
    curvature_jump: float
    junctions: tuple[float, ...]
    _u_of_t: CubicSpline = field(repr=False)
    _t_of_u: CubicSpline = field(repr=False)

    @property
    def period(self) -> float:
        return self.surface.length

    @property
    def equator(self) -> float:
        return 0.5 * self.surface.length

    def distance_from_core(self, t: np.ndarray | float) -> np.ndarray:
        wrapped = np.mod(np.asarray(t, dtype=float), self.period)
        return np.minimum(wrapped, self.period - wrapped)

    def radius_at(self, t: np.ndarray | float) -> np.ndarray:
        """Distance r to the nearer pole; points of the core report rho/2."""
        d = self.distance_from_core(t)
        half_core = 0.5 * self.core_length
        flat = 0.5 * self.profile.rho * np.exp(np.maximum(d - half_core, 0.0))
        curved = np.exp(self._u_of_t(np.clip(d, self.plateau_end, self.equator)))
        return np.where(d <= self.plateau_end, flat, curved)

    def t_at(self, r: float) -> float:
        """Coordinate t of the circle at distance r from the first pole."""
        p = self.profile
        if not p.rho / 2.0 <= r <= 0.5 * math.pi * self.sphere_radius:
            raise ValueError(f"r={r} lies outside the modelled range")
        if r <= p.r_0:
            return 0.5 * self.core_length + math.log(2.0 * r / p.rho)
        return float(self._t_of_u(math.log(r)))

    def conformal_factor_at(self, t: np.ndarray | float) -> np.ndarray:
        return self.profile.F(self.radius_at(t))


def neck_length_closed_form(p: NeckProfile, core_length: float = NECK_CORE_LENGTH) -> float:
    """Core half-length plus log(2 r_0 / rho), the arclength of the flat part on one side."""
    return 0.5 * core_length + math.log(2.0 * p.r_0 / p.rho)


def _one_sided_slopes(profile, t0: float) -> tuple[float, float]:
    h = _DERIVATIVE_STEP
    left = np.asarray(profile(np.array([t0, t0 - h, t0 - 2 * h])), dtype=float)
    right = np.asarray(profile(np.array([t0, t0 + h, t0 + 2 * h])), dtype=float)
    return (
        float((3.0 * left[0] - 4.0 * left[1] + left[2]) / (2.0 * h)),
        float((-3.0 * right[0] + 4.0 * right[1] - right[2]) / (2.0 * h)),
    )


def _one_sided_curvatures(profile, t0: float) -> tuple[float, float]:
    h = _CURVATURE_STEP
    offsets = np.arange(4) * h
    left = np.asarray(profile(t0 - offsets), dtype=float)
    right = np.asarray(profile(t0 + offsets), dtype=float)
    stencil = np.array([2.0, -5.0, 4.0, -1.0])
    # Gaussian curvature of dt^2 + phi^2 dtheta^2 is -phi''/phi
    return (
        float(-(stencil @ left) / (h * h) / left[0]),
        float(-(stencil @ right) / (h * h) / right[0]),
    )


def assemble_surgery_model(
    p: NeckProfile,
    sphere_radius: float = SPHERE_RADIUS,
    core_length: float = NECK_CORE_LENGTH,
    t_spin: SpinStructure = SpinStructure.BOUNDING,
) -> SurgeryModel:
    """Build the surgered torus carrying the neck metric as a periodic surface of revolution."""
    equator_r = 0.5 * math.pi * sphere_radius
    if not p.R_max < equator_r:
        raise HierarchyError(
            f"R_max < pi * a / 2 violated (R_max={p.R_max}, pi*a/2={equator_r}); polar regions overlap"
        )
    if not core_length > 0:
        raise ValueError(f"Core length must be positive, got {core_length}")

    blend: BlendParams = cutoff_params(p.r_0)
    u = np.linspace(math.log(p.r_0), math.log(equator_r), _TABLE_SAMPLES)
    r = np.exp(u)
    dt_du = p.F(r) * r
    plateau_end = neck_length_closed_form(p, core_length)
    t_grid = plateau_end + CubicSpline(u, dt_du).antiderivative()(u)
    t_of_u = CubicSpline(u, t_grid)
    u_of_t = CubicSpline(t_grid, u)
    period = 2.0 * float(t_grid[-1])

    def phi(t: np.ndarray) -> np.ndarray:
        wrapped = np.mod(np.asarray(t, dtype=float), period)
        d = np.minimum(wrapped, period - wrapped)
        out = np.ones_like(d)
        outside = d > plateau_end
        radius = np.exp(u_of_t(d[outside]))
        out[outside] = p.F(radius) * blended_sphere_radius(radius, blend, sphere_radius)
        return out

    surface = RevolutionSurface(
        profile=phi,
        length=period,
        topology=Topology.PERIODIC,
        theta_spin=SpinStructure.BOUNDING,
        t_spin=t_spin,
        label=f"surgered sphere rho={p.rho:g}",
    )

    junctions = (
        plateau_end,
        float(t_of_u(math.log(2.0 * p.r_0))),
        float(t_of_u(-math.log(p.r_0))),
        0.5 * period,
    )
    jump = 0.0
    for t0 in junctions:
        left, right = _one_sided_slopes(phi, t0)
        if abs(left - right) > GLUING_TOL * max(1.0, abs(left)):
            raise ValueError(f"Profile leaves the C1 gluing tolerance at t={t0:.6g}: slopes {left:.3e} vs {right:.3e}")
        k_left, k_right = _one_sided_curvatures(phi, t0)
        jump = max(jump, abs(k_left - k_right))

    measured = 0.5 * core_length + quad(lambda x: float(p.F(x)), p.rho / 2.0, p.r_0, limit=200)[0]
    logger.info(
        "surgery model rho=%g period=%.6g neck_length=%.6g curvature_jump=%.3e",
        p.rho,
        period,
        measured,
        jump,
    )
    return SurgeryModel(
        profile=p,
        surface=surface,
        sphere_radius=sphere_radius,
        core_length=core_length,
        plateau_end=plateau_end,
        neck_length=measured,
        curvature_jump=jump,
        junctions=junctions,
        _u_of_t=u_of_t,
        _t_of_u=t_of_u,
    )
