"""Staggered Dirac matrices on circles and surfaces of revolution."""

from __future__ import annotations

import math

import numpy as np
import pytest
import scipy.sparse as sp

from spindirac.discrete.eigensolve import eig_smallest
from spindirac.discrete.operator import (
    DiscreteDirac,
    assemble_circle_dirac,
    assemble_revolution_dirac,
    hermiticity_residual,
    mesh_spacing,
)
from spindirac.discrete.conformal import unit_factor
from spindirac.discrete.surface import RevolutionSurface, Topology, flat_torus_surface, round_sphere_surface
from spindirac.spectra.models import SpinCircle, SpinStructure

TWO_PI = 2.0 * math.pi


def test_circle_operator_is_symmetric_and_doubled() -> None:
    op = assemble_circle_dirac(SpinCircle(TWO_PI, SpinStructure.NON_BOUNDING), unit_factor, 64)

    assert op.dimension == 128
    assert op.copies == 2
    assert op.mesh == pytest.approx(TWO_PI / 64)
    assert hermiticity_residual(op.matrix) == 0.0


def test_non_bounding_circle_eigenvalues() -> None:
    op = assemble_circle_dirac(SpinCircle(TWO_PI, SpinStructure.NON_BOUNDING), unit_factor, 256)

    values = [pair.value for pair in eig_smallest(op, 5)]

    # realified copies are merged, so each circle eigenvalue appears once
    assert values == pytest.approx([0.0, -1.0, 1.0, -2.0, 2.0], abs=1e-3)


def test_bounding_circle_has_no_zero_mode() -> None:
    op = assemble_circle_dirac(SpinCircle(TWO_PI, SpinStructure.BOUNDING), unit_factor, 256)

    values = [pair.value for pair in eig_smallest(op, 2)]

    assert values == pytest.approx([-0.5, 0.5], abs=1e-3)


def test_circle_operator_rejects_small_grid_and_bad_factor() -> None:
    circle = SpinCircle(TWO_PI, SpinStructure.BOUNDING)
    with pytest.raises(ValueError, match="grid size must be >= 16"):
        assemble_circle_dirac(circle, unit_factor, 8)
    with pytest.raises(ValueError, match="positive at every grid point"):
        assemble_circle_dirac(circle, lambda theta: np.cos(theta), 32)


def test_discrete_dirac_validates_matrix() -> None:
    with pytest.raises(ValueError, match="not symmetric"):
        DiscreteDirac(matrix=sp.csr_matrix(np.triu(np.ones((8, 8)))), mesh=0.1)
    with pytest.raises(ValueError, match="dimension must be >= 8"):
        DiscreteDirac(matrix=sp.identity(4, format="csr"), mesh=0.1)
    with pytest.raises(ValueError, match="Mesh spacing"):
        DiscreteDirac(matrix=sp.identity(8, format="csr"), mesh=0.0)


def test_sphere_lowest_mode_matches_exact_value() -> None:
    sphere = round_sphere_surface()

    op = assemble_revolution_dirac(sphere, 0.5, 256)
    values = [pair.value for pair in eig_smallest(op, 4)]

    assert op.is_tridiagonal()
    assert op.mesh == pytest.approx(math.pi / 256.5)
    assert values == pytest.approx([-1.0, 1.0, -2.0, 2.0], abs=2e-3)


def test_negative_mode_has_the_same_spectrum() -> None:
    sphere = round_sphere_surface()

    plus = [pair.value for pair in eig_smallest(assemble_revolution_dirac(sphere, 1.5, 128), 4)]
    minus = [pair.value for pair in eig_smallest(assemble_revolution_dirac(sphere, -1.5, 128), 4)]

    assert sorted(plus) == pytest.approx(sorted(minus), abs=1e-12)


def test_mode_must_match_theta_spin_structure() -> None:
    with pytest.raises(ValueError, match="does not match the bounding theta spin structure"):
        assemble_revolution_dirac(round_sphere_surface(), 1.0, 64)


def test_flat_torus_zero_mode_count() -> None:
    periodic = flat_torus_surface(TWO_PI, TWO_PI, SpinStructure.NON_BOUNDING, SpinStructure.NON_BOUNDING)
    shifted = flat_torus_surface(TWO_PI, TWO_PI, SpinStructure.NON_BOUNDING, SpinStructure.BOUNDING)

    zero = [pair.value for pair in eig_smallest(assemble_revolution_dirac(periodic, 0.0, 128), 3)]
    half = [pair.value for pair in eig_smallest(assemble_revolution_dirac(shifted, 0.0, 128), 2)]

    assert zero[:2] == pytest.approx([0.0, 0.0], abs=1e-10)
    assert abs(zero[2]) == pytest.approx(1.0, abs=1e-3)
    assert [abs(v) for v in half] == pytest.approx([0.5, 0.5], abs=1e-3)
    assert mesh_spacing(periodic, 128) == pytest.approx(TWO_PI / 128)


def test_revolution_surface_validation() -> None:
    with pytest.raises(ValueError, match="bounding theta spin"):
        RevolutionSurface(
            profile=np.sin, length=math.pi, topology=Topology.TWO_CAPS, theta_spin=SpinStructure.NON_BOUNDING
        )
    with pytest.raises(ValueError, match="Cap condition violated"):
        RevolutionSurface(
            profile=lambda t: 2.0 * np.sin(t),
            length=math.pi,
            topology=Topology.TWO_CAPS,
            theta_spin=SpinStructure.BOUNDING,
        )
    with pytest.raises(ValueError, match="Periodicity residual"):
        RevolutionSurface(
            profile=lambda t: 1.0 + np.asarray(t),
            length=1.0,
            topology=Topology.PERIODIC,
            theta_spin=SpinStructure.BOUNDING,
        )


def test_allowed_modes() -> None:
    sphere = round_sphere_surface()
    torus = flat_torus_surface(1.0, 1.0, SpinStructure.NON_BOUNDING, SpinStructure.NON_BOUNDING)

    assert sphere.allowed_mode(0.5)
    assert not sphere.allowed_mode(1.0)
    assert torus.allowed_mode(-2.0)
    assert not torus.allowed_mode(0.5)
    assert not torus.allowed_mode(0.3)
