"""Tomographic entanglement indicators for Talbot carpets and biphoton combs."""

__version__ = "0.1.0"

from .numerics import (
    Axis1D,
    DiscreteJoint,
    JointGrid,
    Marginal1D,
    NumericalInvariantError,
    discrete_mutual_information,
    entropy_continuous,
    marginals,
    mutual_information,
    normalize,
)
from .talbot import TalbotParams, cglmp_id, coeff_matrix, svne, tei_discrete_basis, tei_position
from .biphoton import BiphotonParams, TimeWindow, closed_form_slice, tei_time_slice

__all__ = [
    "Axis1D",
    "BiphotonParams",
    "DiscreteJoint",
    "JointGrid",
    "Marginal1D",
    "NumericalInvariantError",
    "TalbotParams",
    "TimeWindow",
    "cglmp_id",
    "closed_form_slice",
    "coeff_matrix",
    "discrete_mutual_information",
    "entropy_continuous",
    "marginals",
    "mutual_information",
    "normalize",
    "svne",
    "tei_discrete_basis",
    "tei_position",
    "tei_time_slice",
]
