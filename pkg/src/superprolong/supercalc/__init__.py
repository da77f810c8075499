"""Calculus on flat superdomains R^{n|m}."""

from .grassmann import DomainMismatchError, GrassmannPoly, gp_add, gp_mul, gp_partial, gp_scale
from .fields import ParityMismatchError, SuperVectorField, is_even_real_vf, vf_apply, vf_bracket
from .killing import (
    DegenerateFrameError,
    KillingResult,
    evaluation_rank,
    is_bracket_closed,
    is_parallelization_automorphism,
    killing_metric,
    killing_parallelization,
    pushforward_frame,
    standard_frame,
)
from .families import Family, NotInvertibleError, all_fields_satisfy, family_decompose, polynomial_inverse, recompose
from .flow import FlowError, FlowResult, flow, flow_residual, group_law_residual, lie_derivative_check


def body(f: GrassmannPoly) -> GrassmannPoly:
    return f.body_poly()


def is_real_function(f: GrassmannPoly) -> bool:
    return f.is_real()


__all__ = [
    "DomainMismatchError", "GrassmannPoly", "gp_add", "gp_mul", "gp_partial", "gp_scale",
    "ParityMismatchError", "SuperVectorField", "is_even_real_vf", "vf_apply", "vf_bracket",
    "DegenerateFrameError", "KillingResult", "evaluation_rank", "is_bracket_closed",
    "is_parallelization_automorphism", "killing_metric", "killing_parallelization",
    "pushforward_frame", "standard_frame",
    "Family", "NotInvertibleError", "all_fields_satisfy", "family_decompose", "polynomial_inverse", "recompose",
    "FlowError", "FlowResult", "flow", "flow_residual", "group_law_residual", "lie_derivative_check",
    "body", "is_real_function",
]
