"""Radial profiles F and f_rho of the neck metric F^2 (dr^2 + r^2 dtheta^2 + f_rho^2 h)."""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from spindirac.errors import HierarchyError
from spindirac.geometry import smoothstep


def _smoothstep_integral(x: np.ndarray) -> np.ndarray:
    """Antiderivative of the quintic smoothstep on [0, 1], zero at 0."""
    return x**4 * (x * (x - 3.0) + 2.5)


@dataclass(frozen=True)
class NeckProfile:
    """Plateau parameters of the neck; F and f_rho are evaluated by the methods.

    In u = log r, F has d(log F)/du = -1 + S((u - log r_0) / w) with the quintic
    smoothstep S and w = -2 log r_0, so F equals 1/r below r_0, equals 1 from
    1/r_0 on, is nonincreasing, and r F is nondecreasing.
    """

    R_max: float
    r_0: float
    r_1: float
    rho: float

    @property
    def transition_width(self) -> float:
        return -2.0 * math.log(self.r_0)

    def F(self, r: np.ndarray | float) -> np.ndarray:
        r_arr = np.asarray(r, dtype=float)
        u = np.log(r_arr)
        u0 = math.log(self.r_0)
        width = self.transition_width
        x = np.clip((u - u0) / width, 0.0, 1.0)
        log_f = np.where(u <= u0, -u, np.where(x >= 1.0, 0.0, -u + width * _smoothstep_integral(x)))
        return np.exp(log_f)

    def f_rho(self, r: np.ndarray | float) -> np.ndarray:
        r_arr = np.asarray(r, dtype=float)
        x = np.log(np.maximum(r_arr, 1e-300) / self.rho) / math.log(2.0)
        weight = smoothstep(x)
        return (1.0 - weight) * r_arr + weight


def build_neck_profile(R_max: float, r_0: float, r_1: float, rho: float) -> NeckProfile:
    """Validate the hierarchy 0 < rho < r_0/4, r_0 < r_1/2 < R_max/2 and build the profile."""
    checks = (
        (rho > 0, f"rho > 0 violated (rho={rho})"),
        (rho < r_0 / 4.0, f"rho < r_0/4 violated (rho={rho}, r_0/4={r_0 / 4.0})"),
        (2.0 * rho < r_0, f"2*rho < r_0 violated (2*rho={2.0 * rho}, r_0={r_0})"),
        (r_0 < r_1 / 2.0, f"r_0 < r_1/2 violated (r_0={r_0}, r_1/2={r_1 / 2.0})"),
        (r_1 / 2.0 < R_max / 2.0, f"r_1/2 < R_max/2 violated (r_1={r_1}, R_max={R_max})"),
        (r_0 < 1.0, f"r_0 < 1 violated (r_0={r_0}); F must decrease from 1/r_0 to 1"),
        (r_0 * r_1 >= 1.0, f"r_0 * r_1 >= 1 violated (r_0*r_1={r_0 * r_1}); F must reach 1 before r_1"),
    )
    for ok, message in checks:
        if not ok:
            raise HierarchyError(message)
    return NeckProfile(R_max=float(R_max), r_0=float(r_0), r_1=float(r_1), rho=float(rho))


@dataclass(frozen=True)
class ProfileCheck:
    plateaus: bool
    f_nonincreasing: bool
    rf_nondecreasing: bool
    f_rho_nondecreasing: bool

    @property
    def passed(self) -> bool:
        return self.plateaus and self.f_nonincreasing and self.rf_nondecreasing and self.f_rho_nondecreasing


def check_profile(p: NeckProfile, samples: int = 10_000) -> ProfileCheck:
    """Check plateaus and monotonicity of F, r F and f_rho on a log-spaced grid in (0, R_max)."""
    r = np.geomspace(p.rho * 1e-3, p.R_max, samples)
    f = p.F(r)
    rf = r * f
    f_rho = p.f_rho(r)
    tol = 1e-12
    inner = r < p.r_0
    outer = r > p.r_1
    plateaus = (
        bool(np.allclose(rf[inner], 1.0, rtol=0.0, atol=1e-12))
        and bool(np.allclose(f[outer], 1.0, rtol=0.0, atol=1e-12))
        and bool(np.allclose(f_rho[r < p.rho], r[r < p.rho], rtol=1e-12, atol=0.0))
        and bool(np.allclose(f_rho[r > 2.0 * p.rho], 1.0, rtol=0.0, atol=1e-12))
    )
    return ProfileCheck(
        plateaus=plateaus,
        f_nonincreasing=bool(np.all(np.diff(f) <= tol)),
        rf_nondecreasing=bool(np.all(np.diff(rf) >= -tol)),
        f_rho_nondecreasing=bool(np.all(np.diff(f_rho) >= -tol)),
    )
