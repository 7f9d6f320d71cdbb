"""Entropy LP encodings of two-message two-database retrieval"""

from .base import (
    ALPHA,
    BETA,
    ModelOptions,
    ObjectiveMinimum,
    PirLpModel,
    Role,
    build_base_model,
    minimize_objective,
    parse_scalar_bound,
)
from .pseudo import build_pseudo_model


def build_model(options: ModelOptions) -> PirLpModel:
    """Base or pseudo-message model depending on the options"""
    if options.include_pseudo:
        return build_pseudo_model(options)
    return build_base_model(options)


__all__ = [
    "ALPHA",
    "BETA",
    "ModelOptions",
    "ObjectiveMinimum",
    "PirLpModel",
    "Role",
    "build_base_model",
    "build_model",
    "build_pseudo_model",
    "minimize_objective",
    "parse_scalar_bound",
]
