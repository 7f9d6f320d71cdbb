"""pirbounds module specific errors"""

from typing import Any, Mapping, Optional, Sequence


class PirBoundsError(RuntimeError):
    """Baseclass for all errors raised by this package"""


class ExpressionError(PirBoundsError, ValueError):
    """Invalid variable set in an information expression"""

    def __init__(self, message: str, label: Optional[str] = None) -> None:
        """initialize the error"""
        self.message = message
        self.label = label
        super().__init__()

    def __str__(self) -> str:
        """format as string"""
        if self.label is None:
            return self.message
        return f"{self.message}: '{self.label}'"


class DistributionError(PirBoundsError, ValueError):
    """Joint distribution is not a probability distribution over the declared alphabets"""

    def __init__(self, message: str) -> None:
        """initialize the error"""
        self.message = message
        super().__init__()

    def __str__(self) -> str:
        """format as string"""
        return self.message


class EvaluationError(PirBoundsError, KeyError):
    """A linear form references a coordinate or scalar that has no value"""

    def __init__(self, name: str) -> None:
        """initialize the error"""
        self.name = name
        super().__init__()

    def __str__(self) -> str:
        """format as string"""
        return f"unbound coordinate or scalar '{self.name}'"


class ModelError(PirBoundsError, ValueError):
    """Malformed linear program or model options"""

    def __init__(self, message: str) -> None:
        """initialize the error"""
        self.message = message
        super().__init__()

    def __str__(self) -> str:
        """format as string"""
        return self.message


class SolverError(PirBoundsError):
    """The LP backend could not produce a trustworthy answer"""

    def __init__(self, message: str, pivot: Optional[Sequence[int]] = None) -> None:
        """initialize the error"""
        self.message = message
        self.pivot = tuple(pivot) if pivot is not None else None
        super().__init__()

    def __str__(self) -> str:
        """format as string"""
        if self.pivot is None:
            return f"solver failure: {self.message}"
        return f"solver failure at pivot (row {self.pivot[0]:d}, column {self.pivot[1]:d}): {self.message}"


class CertificateError(PirBoundsError):
    """Dual weights could not be turned into an exactly verified certificate"""

    def __init__(self, message: str, float_duals: Optional[Mapping[str, float]] = None) -> None:
        """initialize the error"""
        self.message = message
        self.float_duals = dict(float_duals) if float_duals is not None else {}
        super().__init__()

    def __str__(self) -> str:
        """format as string"""
        return f"certificate extraction failed: {self.message} ({len(self.float_duals):d} nonzero float duals)"


class UnknownTagError(PirBoundsError, KeyError):
    """A certificate refers to a constraint tag the program does not have"""

    def __init__(self, tag: str) -> None:
        """initialize the error"""
        self.tag = tag
        super().__init__()

    def __str__(self) -> str:
        """format as string"""
        return f"unknown constraint tag '{self.tag}'"


class ParameterError(PirBoundsError, ValueError):
    """System parameters outside the hypothesis of the requested bound"""

    def __init__(self, message: str, **params: Any) -> None:
        """initialize the error"""
        self.message = message
        self.params = params
        super().__init__()

    def __str__(self) -> str:
        """format as string"""
        if not self.params:
            return self.message
        rendered = ", ".join(f"{key}={value}" for key, value in sorted(self.params.items()))
        return f"{self.message} ({rendered})"


class SchemeError(PirBoundsError, ValueError):
    """Invalid scheme construction or selection"""

    def __init__(self, message: str) -> None:
        """initialize the error"""
        self.message = message
        super().__init__()

    def __str__(self) -> str:
        """format as string"""
        return self.message


class SizeGuardError(PirBoundsError):
    """Exhaustive enumeration refused because the domain is too large"""

    def __init__(self, what: str, count: int, limit: int) -> None:
        """initialize the error"""
        self.what = what
        self.count = count
        self.limit = limit
        super().__init__()

    def __str__(self) -> str:
        """format as string"""
        return f"refusing to enumerate {self.count:d} {self.what} (limit {self.limit:d})"


class DocumentError(PirBoundsError, ValueError):
    """Malformed, mismatched or wrong-version document"""

    def __init__(self, message: str, path: Optional[str] = None) -> None:
        """initialize the error"""
        self.message = message
        self.path = path
        super().__init__()

    def __str__(self) -> str:
        """format as string"""
        if self.path is None:
            return self.message
        return f"{self.path}: {self.message}"
