"""Circle kernel counts under conformal changes."""

from __future__ import annotations

import math

import numpy as np
import pytest

from spindirac.discrete.conformal import (
    circle_kernel_estimate,
    conformal_invariance_check,
    random_conformal_factor,
    unit_factor,
)
from spindirac.discrete.kernel import KernelVerdict
from spindirac.spectra.models import SpinCircle, SpinStructure

TWO_PI = 2.0 * math.pi


def test_random_factor_is_seeded_and_positive() -> None:
    theta = np.linspace(0.0, TWO_PI, 50)

    first = random_conformal_factor(7)(theta)
    again = random_conformal_factor(7)(theta)
    other = random_conformal_factor(8)(theta)

    assert np.array_equal(first, again)
    assert not np.allclose(first, other)
    assert np.all(first > 0)
    assert first[0] == pytest.approx(first[-1])


@pytest.mark.parametrize(
    ("structure", "expected"),
    [(SpinStructure.NON_BOUNDING, 1), (SpinStructure.BOUNDING, 0)],
)
def test_circle_kernel_estimate_with_unit_factor(structure: SpinStructure, expected: int) -> None:
    estimate = circle_kernel_estimate(SpinCircle(TWO_PI, structure), unit_factor, 128)

    assert estimate.count == expected
    assert estimate.verdict is KernelVerdict.CONFIDENT


@pytest.mark.parametrize("seed", [0, 1, 2])
@pytest.mark.parametrize("structure", [SpinStructure.NON_BOUNDING, SpinStructure.BOUNDING])
def test_kernel_count_is_conformally_invariant(seed: int, structure: SpinStructure) -> None:
    circle = SpinCircle(TWO_PI, structure)

    assert conformal_invariance_check(circle, random_conformal_factor(seed), 128)


def test_circle_kernel_estimate_needs_two_usable_grids() -> None:
    with pytest.raises(ValueError, match="Circle grid size must be >= 32"):
        circle_kernel_estimate(SpinCircle(TWO_PI, SpinStructure.BOUNDING), unit_factor, 30)
