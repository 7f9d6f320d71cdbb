"""Storage/download tradeoff toolkit for private information retrieval: closed-form outer bounds,
entropy LP models with exact dual certificates, and exhaustive verification of concrete schemes"""

__version__ = "1.0.0"  # NOTE Use `bump2version --config-file patch` to bump versions correctly
from .bounds import PirParameters, TradeoffPoint, BoundLine
from .errors import PirBoundsError

__all__ = ["PirParameters", "TradeoffPoint", "BoundLine", "PirBoundsError"]
