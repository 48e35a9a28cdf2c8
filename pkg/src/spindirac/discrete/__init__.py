"""Discretized Dirac operators, eigensolvers and kernel estimates."""

from spindirac.discrete.conformal import conformal_invariance_check, random_conformal_factor
from spindirac.discrete.eigensolve import Eigenpair, eig_smallest
from spindirac.discrete.kernel import (
    KernelEstimate,
    KernelVerdict,
    ThresholdPolicy,
    ThresholdWindow,
    calibrate_threshold,
    kernel_dim_estimate,
)
from spindirac.discrete.operator import DiscreteDirac, assemble_circle_dirac, assemble_revolution_dirac
from spindirac.discrete.surface import RevolutionSurface, Topology, flat_torus_surface, round_sphere_surface

__all__ = [
    "DiscreteDirac",
    "Eigenpair",
    "KernelEstimate",
    "KernelVerdict",
    "RevolutionSurface",
    "ThresholdPolicy",
    "ThresholdWindow",
    "Topology",
    "assemble_circle_dirac",
    "assemble_revolution_dirac",
    "calibrate_threshold",
    "conformal_invariance_check",
    "eig_smallest",
    "flat_torus_surface",
    "kernel_dim_estimate",
    "random_conformal_factor",
    "round_sphere_surface",
]
