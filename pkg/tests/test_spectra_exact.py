"""Closed-form spectra of the model manifolds."""

from __future__ import annotations

import math

import numpy as np
import pytest

from spindirac.errors import InsufficientCutoffError
from spindirac.spectra.exact import (
    check_product_bound,
    circle_kernel_dim,
    circle_spectrum,
    flat_torus_spectrum,
    point_spectrum,
    product_square_spectrum,
    sphere_spectrum,
    torus_kernel_dim,
)
from spindirac.spectra.models import FlatTorus, SpinCircle, SpinStructure

TWO_PI = 2.0 * math.pi


def test_non_bounding_circle_has_integer_spectrum() -> None:
    circle = SpinCircle(TWO_PI, SpinStructure.NON_BOUNDING)

    table = circle_spectrum(circle, 2.5)

    assert table.entries == ((-2.0, 1), (-1.0, 1), (0.0, 1), (1.0, 1), (2.0, 1))
    assert circle_kernel_dim(circle) == 1


def test_bounding_circle_has_half_integer_spectrum() -> None:
    circle = SpinCircle(TWO_PI, SpinStructure.BOUNDING)

    table = circle_spectrum(circle, 2.0)

    assert [v for v, _ in table.entries] == pytest.approx([-1.5, -0.5, 0.5, 1.5])
    assert table.min_abs() == pytest.approx(0.5)
    assert circle_kernel_dim(circle) == 0


def test_circle_spectrum_scales_with_length() -> None:
    table = circle_spectrum(SpinCircle(math.pi, SpinStructure.NON_BOUNDING), 2.0)

    assert [v for v, _ in table.entries] == pytest.approx([-2.0, 0.0, 2.0])


def test_circle_rejects_nonpositive_length_and_cutoff() -> None:
    with pytest.raises(ValueError, match="length"):
        SpinCircle(0.0, SpinStructure.BOUNDING)
    with pytest.raises(ValueError, match="cutoff"):
        circle_spectrum(SpinCircle(TWO_PI, SpinStructure.BOUNDING), 0.0)


def test_square_torus_periodic_spectrum() -> None:
    torus = FlatTorus.square(TWO_PI, (0, 0))

    table = flat_torus_spectrum(torus, 2.0)

    assert table.multiplicity_of(0.0) == 2
    assert table.multiplicity_of(1.0) == 4
    assert table.multiplicity_of(-1.0) == 4
    assert table.multiplicity_of(math.sqrt(2.0)) == 4
    assert table.multiplicity_of(2.0) == 4
    assert table.symmetric
    assert torus_kernel_dim(torus) == 2


@pytest.mark.parametrize(
    ("spin", "smallest"),
    [((1, 0), 0.5), ((0, 1), 0.5), ((1, 1), math.sqrt(0.5))],
)
def test_shifted_torus_has_no_kernel(spin: tuple[int, int], smallest: float) -> None:
    torus = FlatTorus.square(TWO_PI, spin)

    table = flat_torus_spectrum(torus, 3.0)

    assert table.min_abs() == pytest.approx(smallest)
    assert torus_kernel_dim(torus) == 0


def test_one_dimensional_torus_matches_circle() -> None:
    for spin, structure in (((0,), SpinStructure.NON_BOUNDING), ((1,), SpinStructure.BOUNDING)):
        torus = flat_torus_spectrum(FlatTorus.square(TWO_PI, spin), 3.0)
        circle = circle_spectrum(SpinCircle(TWO_PI, structure), 3.0)
        assert torus.values() == pytest.approx(circle.values())


def test_three_torus_kernel_and_multiplicities() -> None:
    torus = FlatTorus.square(TWO_PI, (0, 0, 0))

    table = flat_torus_spectrum(torus, 1.0)

    assert table.multiplicity_of(0.0) == 2
    assert table.multiplicity_of(1.0) == 6
    assert torus_kernel_dim(torus) == 2


def test_torus_spectrum_handles_sheared_lattice() -> None:
    torus = FlatTorus(basis=np.array([[TWO_PI, 0.0], [math.pi, TWO_PI]]), spin=(0, 0))

    table = flat_torus_spectrum(torus, 3.0)

    assert table.multiplicity_of(0.0) == 2
    assert table.mirror_closed()


def test_flat_torus_validation() -> None:
    with pytest.raises(ValueError, match="singular"):
        FlatTorus(basis=np.array([[1.0, 2.0], [2.0, 4.0]]), spin=(0, 0))
    with pytest.raises(ValueError, match="Spin vector has 1 entries"):
        FlatTorus(basis=np.eye(2), spin=(0,))
    with pytest.raises(ValueError, match="dimension must be 1, 2 or 3"):
        FlatTorus.square(1.0, (0, 0, 0, 0))
    with pytest.raises(ValueError, match="Spin entries"):
        FlatTorus.square(1.0, (0, 2))


def test_spin_structure_shift_round_trip() -> None:
    assert SpinStructure.BOUNDING.shift == 1
    assert SpinStructure.NON_BOUNDING.shift == 0
    assert SpinStructure.from_shift(1) is SpinStructure.BOUNDING
    with pytest.raises(ValueError, match="Spin shift"):
        SpinStructure.from_shift(2)


def test_two_sphere_spectrum() -> None:
    table = sphere_spectrum(2, 3.0)

    assert table.entries == ((-3.0, 6), (-2.0, 4), (-1.0, 2), (1.0, 2), (2.0, 4), (3.0, 6))
    assert table.count(2.5) == 12


def test_three_sphere_spectrum() -> None:
    table = sphere_spectrum(3, 2.5)

    assert table.multiplicity_of(1.5) == 2
    assert table.multiplicity_of(2.5) == 6
    assert table.min_abs() == pytest.approx(1.5)


def test_one_sphere_is_bounding_circle() -> None:
    assert sphere_spectrum(1, 2.0).values() == pytest.approx([-1.5, -0.5, 0.5, 1.5])
    with pytest.raises(ValueError, match="Sphere dimension"):
        sphere_spectrum(0, 1.0)


def test_point_spectrum_is_single_zero_mode() -> None:
    table = point_spectrum()

    assert table.entries == ((0.0, 1),)
    assert math.isinf(table.cutoff)


def test_product_with_bounding_circle_meets_bound() -> None:
    circle = circle_spectrum(SpinCircle(TWO_PI, SpinStructure.NON_BOUNDING), 4.0)
    sphere = sphere_spectrum(1, 4.0)

    product = product_square_spectrum(circle, sphere, 9.0)
    check = check_product_bound(product, 1)

    assert product.min_abs() == pytest.approx(0.25)
    assert product.multiplicity_of(0.25) == 2
    assert check.passed
    assert check.margin == pytest.approx(0.0, abs=1e-12)


def test_product_with_two_sphere_has_margin() -> None:
    torus = flat_torus_spectrum(FlatTorus.square(TWO_PI, (1, 0)), 4.0)

    product = product_square_spectrum(torus, sphere_spectrum(2, 4.0), 9.0)
    check = check_product_bound(product, 2)

    assert check.passed
    assert check.margin == pytest.approx(0.25)


def test_product_rejects_truncated_factor() -> None:
    circle = circle_spectrum(SpinCircle(TWO_PI, SpinStructure.NON_BOUNDING), 1.0)
    sphere = sphere_spectrum(1, 1.0)

    with pytest.raises(InsufficientCutoffError, match="complete only to 1"):
        product_square_spectrum(circle, sphere, 10.0)


def test_check_product_bound_flags_violation() -> None:
    circle = circle_spectrum(SpinCircle(TWO_PI, SpinStructure.NON_BOUNDING), 3.0)
    product = product_square_spectrum(circle, point_spectrum(), 4.0)

    check = check_product_bound(product, 1)

    assert not check.passed
    assert check.margin == pytest.approx(-0.25)
