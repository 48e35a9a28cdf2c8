"""Metric comparison, cutoff and blending tests."""

from __future__ import annotations

import math

import numpy as np
import pytest

from spindirac.geometry import (
    BlendParams,
    DeviationReport,
    MetricAtPoint,
    bg_endomorphism,
    blend_metric,
    blended_sphere_radius,
    check_cutoff,
    cutoff_params,
    deviation_bound_rhs,
    deviation_norm,
    gradient_deviation,
    product_form_deviation,
    smoothstep,
)


def test_bg_endomorphism_of_equal_metrics_is_identity() -> None:
    g = MetricAtPoint(np.array([[2.0, 0.3], [0.3, 1.0]]))

    b = bg_endomorphism(g, g)

    assert np.allclose(b, np.eye(2), atol=1e-12)


def test_bg_endomorphism_reconstructs_g_from_g_prime() -> None:
    g = MetricAtPoint(np.array([[2.0, 0.5, 0.0], [0.5, 1.5, 0.2], [0.0, 0.2, 1.0]]))
    gp = MetricAtPoint(np.array([[1.0, 0.1, 0.0], [0.1, 3.0, -0.4], [0.0, -0.4, 2.0]]))

    b = bg_endomorphism(g, gp)

    assert np.allclose(b.T @ gp.gram @ b, g.gram, atol=1e-10)
    # g-symmetric and positive: g b is symmetric positive definite
    gb = g.gram @ b
    assert np.allclose(gb, gb.T, atol=1e-10)
    assert np.all(np.linalg.eigvalsh(0.5 * (gb + gb.T)) > 0)


def test_bg_endomorphism_scales_conformal_metrics() -> None:
    g = MetricAtPoint(np.eye(2))
    gp = MetricAtPoint(4.0 * np.eye(2))

    assert np.allclose(bg_endomorphism(g, gp), 0.5 * np.eye(2))


def test_metric_rejects_indefinite_gram() -> None:
    with pytest.raises(ValueError, match="positive definite"):
        MetricAtPoint(np.array([[1.0, 0.0], [0.0, -1.0]]))


def test_metric_rejects_asymmetric_gram() -> None:
    with pytest.raises(ValueError, match="not symmetric"):
        MetricAtPoint(np.array([[1.0, 0.5], [0.0, 1.0]]))


def test_metric_rejects_dimension_four() -> None:
    with pytest.raises(ValueError, match="dimension"):
        MetricAtPoint(np.eye(4))


def test_deviation_norm_rejects_mismatched_dimensions() -> None:
    with pytest.raises(ValueError, match="dimensions differ"):
        deviation_norm(MetricAtPoint(np.eye(2)), MetricAtPoint(np.eye(3)))


def test_deviation_norm_is_largest_relative_eigenvalue() -> None:
    g = MetricAtPoint(np.eye(2))
    gp = MetricAtPoint(np.diag([1.0, 1.5]))

    assert deviation_norm(g, gp) == pytest.approx(0.5)


def test_product_form_deviation_at_half_radius() -> None:
    r = 0.5

    report = product_form_deviation([r])[0]

    # measured with the product metric: |sin^2 r - r^2| / r^2
    assert report.pointwise_norm == pytest.approx(abs(math.sin(r) ** 2 - r * r) / (r * r), rel=1e-10)
    assert report.pointwise_norm == pytest.approx(0.080605, abs=1e-6)
    assert report.sample_location == (0.5, 0.0)


def test_product_form_deviation_uses_product_metric_as_reference() -> None:
    point_round = MetricAtPoint(np.diag([1.0, math.sin(0.5) ** 2]))
    point_product = MetricAtPoint(np.diag([1.0, 0.25]))

    report = product_form_deviation([0.5])[0]

    assert report.pointwise_norm == pytest.approx(deviation_norm(point_product, point_round), rel=1e-12)
    # the round metric as reference gives a different, larger value
    assert deviation_norm(point_round, point_product) == pytest.approx(0.087671, abs=1e-5)


def test_product_form_gradient_matches_closed_form() -> None:
    r = 0.3
    q = 1.0 - math.sin(r) ** 2 / (r * r)
    dq = -(2.0 * math.sin(r) * math.cos(r) / (r * r) - 2.0 * math.sin(r) ** 2 / r**3)
    expected = math.sqrt(dq * dq + 2.0 * q * q / (r * r))

    report = product_form_deviation([r])[0]

    assert report.gradient_norm == pytest.approx(expected, rel=1e-4)


def test_product_form_deviation_decays_linearly() -> None:
    radii = np.geomspace(1e-3, 0.5, 50)

    reports = product_form_deviation(radii)

    assert max(rep.pointwise_norm / r for rep, r in zip(reports, radii)) <= 0.35


@pytest.mark.parametrize("r", [0.0, -0.1, 1.5])
def test_product_form_deviation_rejects_out_of_range_samples(r: float) -> None:
    with pytest.raises(ValueError, match="Radial samples"):
        product_form_deviation([r])


def test_gradient_deviation_vanishes_for_constant_difference() -> None:
    def flat(_: np.ndarray) -> np.ndarray:
        return np.eye(2)

    def scaled(_: np.ndarray) -> np.ndarray:
        return 2.0 * np.eye(2)

    assert gradient_deviation(flat, scaled, [0.2, 0.4]) == pytest.approx(0.0, abs=1e-8)


def test_deviation_bound_rhs_adds_both_norms() -> None:
    report = DeviationReport(pointwise_norm=0.25, gradient_norm=0.5, sample_location=(0.1,))

    assert deviation_bound_rhs(report) == pytest.approx(0.75)


def test_deviation_report_rejects_negative_norm() -> None:
    with pytest.raises(ValueError, match="nonnegative"):
        DeviationReport(pointwise_norm=-1.0, gradient_norm=0.0, sample_location=(0.0,))


def test_smoothstep_shape() -> None:
    assert smoothstep(-1.0) == 0.0
    assert smoothstep(2.0) == 1.0
    assert smoothstep(0.5) == pytest.approx(0.5)


def test_cutoff_params_pass_check() -> None:
    params = cutoff_params(0.3)

    assert check_cutoff(params)
    assert params.eta(0.1) == pytest.approx(1.0)
    assert params.eta(0.7) == pytest.approx(0.0)


def test_check_cutoff_rejects_slow_decay() -> None:
    params = BlendParams(delta=0.3, eta=lambda t: np.clip(1.0 - np.asarray(t) / 0.9, 0.0, 1.0))

    assert not check_cutoff(params)


def test_blend_params_reject_nonpositive_delta() -> None:
    with pytest.raises(ValueError, match="delta"):
        cutoff_params(0.0)


def test_blend_metric_matches_product_inside_and_g_outside() -> None:
    params = cutoff_params(0.2)
    g = MetricAtPoint(np.diag([1.0, 2.0]))
    product = MetricAtPoint(np.diag([1.0, 3.0]))

    assert np.allclose(blend_metric(g, product, 0.1, params).gram, product.gram)
    assert np.allclose(blend_metric(g, product, 0.5, params).gram, g.gram)
    with pytest.raises(ValueError, match="nonnegative"):
        blend_metric(g, product, -0.1, params)


def test_blended_sphere_radius_plateaus() -> None:
    params = cutoff_params(0.5)
    inner = np.array([0.1, 0.3, 0.5])
    outer = np.array([1.0, 1.5, 2.5])

    assert np.allclose(blended_sphere_radius(inner, params, 2.0), inner)
    assert np.allclose(blended_sphere_radius(outer, params, 2.0), 2.0 * np.sin(outer / 2.0))
