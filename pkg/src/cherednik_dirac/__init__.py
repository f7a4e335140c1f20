"""Exact Koszul and Dirac cohomology of rational Cherednik algebra modules."""

from .exact_scalars import CycScalar, ExactMatrix, Subspace, format_scalar, parse_scalar
from .reflection_groups import ParamC, catalog
from .cherednik_modules import (
    CherednikParams,
    GradedModule,
    baby_verma,
    contravariant_form,
    simple_quotient,
    standard_module,
)
from .cohomology import (
    dirac_cohomology,
    h_homology,
    hstar_cohomology,
    hstar_homology,
    pin_cover,
)

__version__ = "0.1.0"

__all__ = [
    "CycScalar",
    "ExactMatrix",
    "Subspace",
    "format_scalar",
    "parse_scalar",
    "ParamC",
    "catalog",
    "CherednikParams",
    "GradedModule",
    "baby_verma",
    "contravariant_form",
    "simple_quotient",
    "standard_module",
    "dirac_cohomology",
    "h_homology",
    "hstar_cohomology",
    "hstar_homology",
    "pin_cover",
]
