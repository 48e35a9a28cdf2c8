"""Spline quadrature of sampled grid functions."""

from __future__ import annotations

import numpy as np
from scipy.interpolate import CubicSpline


def interval_integral(
    points: np.ndarray,
    values: np.ndarray,
    lower: float,
    upper: float,
    period: float | None = None,
) -> float:
    """Integrate the cubic spline through (points, values) over [lower, upper].

    Periodic samples are closed with the wrap-around point and a periodic spline.
    """
    x = np.asarray(points, dtype=float)
    y = np.asarray(values, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or x.shape[0] < 4:
        raise ValueError("Quadrature needs matching one-dimensional samples of length >= 4")
    if upper < lower:
        raise ValueError(f"Empty interval [{lower}, {upper}]")
    if period is None:
        spline = CubicSpline(x, y)
    else:
        spline = CubicSpline(np.append(x, x[0] + period), np.append(y, y[0]), bc_type="periodic")
    return float(spline.integrate(lower, upper))
