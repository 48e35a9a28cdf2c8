"""Smallest-magnitude eigenpairs across the dense, tridiagonal and shift-invert paths."""

from __future__ import annotations

import math

import numpy as np
import pytest

from spindirac.config import DENSE_SOLVE_LIMIT
from spindirac.discrete.eigensolve import eig_smallest
from spindirac.discrete.operator import assemble_revolution_dirac
from spindirac.discrete.surface import flat_torus_surface, round_sphere_surface
from spindirac.spectra.models import SpinStructure


def test_dense_matrix_sorted_by_magnitude_then_value() -> None:
    matrix = np.diag([3.0, -1.0, 2.0, 0.5, 1.0, -0.5, 4.0, -4.0])

    pairs = eig_smallest(matrix, 4)

    assert [pair.value for pair in pairs] == pytest.approx([-0.5, 0.5, -1.0, 1.0])
    for pair in pairs:
        assert np.linalg.norm(matrix @ pair.vector - pair.value * pair.vector) <= 1e-12
        assert pair.residual <= 1e-12


def test_rejects_too_many_pairs() -> None:
    with pytest.raises(ValueError, match="Requested 9 eigenpairs"):
        eig_smallest(np.eye(8), 9)
    with pytest.raises(ValueError, match="square"):
        eig_smallest(np.ones((3, 4)), 1)


def test_tridiagonal_window_on_large_cap_operator() -> None:
    op = assemble_revolution_dirac(round_sphere_surface(), 0.5, 2100)
    assert op.dimension > DENSE_SOLVE_LIMIT
    assert op.is_tridiagonal()

    values = [pair.value for pair in eig_smallest(op, 4)]

    assert values == pytest.approx([-1.0, 1.0, -2.0, 2.0], abs=1e-4)


def test_shift_invert_on_large_periodic_operator() -> None:
    torus = flat_torus_surface(2.0 * math.pi, 2.0 * math.pi, SpinStructure.NON_BOUNDING, SpinStructure.BOUNDING)
    op = assemble_revolution_dirac(torus, 0.0, 2100)
    assert op.dimension > DENSE_SOLVE_LIMIT
    assert not op.is_tridiagonal()

    first = eig_smallest(op, 4)
    second = eig_smallest(op, 4)

    assert [abs(pair.value) for pair in first] == pytest.approx([0.5] * 4, abs=1e-4)
    assert [pair.value for pair in first] == [pair.value for pair in second]
