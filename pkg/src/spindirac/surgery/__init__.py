"""Neck metrics on the rotationally symmetric surgery model."""

from spindirac.surgery.energy import (
    DofRegion,
    EnergyRatio,
    EnergyVerdict,
    GramResult,
    SampledSpinor,
    neck_energy_ratio,
    normalization_gram,
    outer_region,
)
from spindirac.surgery.model import SurgeryModel, assemble_surgery_model, neck_length_closed_form
from spindirac.surgery.profile import NeckProfile, build_neck_profile, check_profile
from spindirac.surgery.sweep import SweepReport, SweepRow, neck_sweep

__all__ = [
    "DofRegion",
    "EnergyRatio",
    "EnergyVerdict",
    "GramResult",
    "NeckProfile",
    "SampledSpinor",
    "SurgeryModel",
    "SweepReport",
    "SweepRow",
    "assemble_surgery_model",
    "build_neck_profile",
    "check_profile",
    "neck_energy_ratio",
    "neck_length_closed_form",
    "neck_sweep",
    "normalization_gram",
    "outer_region",
]
