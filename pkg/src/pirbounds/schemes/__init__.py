"""Concrete PIR storage codes and their verification"""

from .baseclass import PirScheme, RelabeledScheme, relabel_messages
from . import download_all, xor2
from .download_all import DownloadAllScheme
from .tabular import TabularScheme, materialize
from .verify import (
    ENUMERATION_LIMIT,
    AnswerVariable,
    CostReport,
    MessageVariable,
    StorageVariable,
    VerificationReport,
    check_point,
    measure_costs,
    scheme_entropy_bridge,
    verify_correctness,
    verify_privacy,
    verify_scheme,
)
from .xor2 import Xor2Scheme


def builtin_download_all(n: int, k: int, length: int = 1, alphabet: int = 2) -> DownloadAllScheme:
    """Uncoded minimum-storage scheme, N must divide K·L"""
    return download_all.get(n, k, length, alphabet)


def builtin_xor2(k: int, length: int = 1) -> Xor2Scheme:
    """Two-server XOR scheme over binary messages"""
    return xor2.get(k, length)


__all__ = [
    "ENUMERATION_LIMIT",
    "AnswerVariable",
    "CostReport",
    "DownloadAllScheme",
    "MessageVariable",
    "PirScheme",
    "RelabeledScheme",
    "StorageVariable",
    "TabularScheme",
    "VerificationReport",
    "Xor2Scheme",
    "builtin_download_all",
    "builtin_xor2",
    "check_point",
    "materialize",
    "measure_costs",
    "relabel_messages",
    "scheme_entropy_bridge",
    "verify_correctness",
    "verify_privacy",
    "verify_scheme",
]
