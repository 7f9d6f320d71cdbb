"""pytest automagics"""

from fractions import Fraction

import pytest

from pirbounds.models import (
    ModelOptions,
    ObjectiveMinimum,
    PirLpModel,
    build_base_model,
    build_pseudo_model,
    minimize_objective,
)


@pytest.fixture(scope="session")
def base_model() -> PirLpModel:
    """Answer-variety model with symmetry, shared by every test"""
    return build_base_model()


@pytest.fixture(scope="session")
def base_model_asymmetric() -> PirLpModel:
    """Answer-variety model without the symmetry rows"""
    return build_base_model(ModelOptions(include_symmetry=False))


@pytest.fixture(scope="session")
def pseudo_model() -> PirLpModel:
    """Pseudo-message model, about 28 thousand rows"""
    return build_pseudo_model()


@pytest.fixture(scope="session")
def pseudo_weighted(pseudo_model: PirLpModel) -> ObjectiveMinimum:
    """3·α + 8·β on the pseudo-message model, solved once for the slow tests"""
    return minimize_objective(pseudo_model, Fraction(3), Fraction(8))
