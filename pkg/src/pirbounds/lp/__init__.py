"""LP engine: programs over entropy coordinates, interchangeable solver backends, exact certificates"""

from typing import Callable, Dict, Optional
import logging
import time

from ..errors import ModelError
from .baseclass import BaseBackend
from .bland import RevisedSimplexBackend
from .certificate import CertificateReport, DualCertificate, extract_certificate, verify_certificate
from .highs import HighsBackend
from .program import LinearProgram, Solution, SolutionStatus, SolverSettings, StandardForm

LOGGER = logging.getLogger(__name__)
BACKENDS: Dict[str, Callable[[], BaseBackend]] = {
    "highs": HighsBackend,
    "bland": RevisedSimplexBackend,
}


def get(name: str) -> BaseBackend:
    """Shorthand for instantiating a backend by name"""
    try:
        return BACKENDS[name]()
    except KeyError:
        raise ModelError(f"unknown LP backend '{name}', choose one of {', '.join(sorted(BACKENDS))}") from None


def solve_min(program: LinearProgram, settings: Optional[SolverSettings] = None) -> Solution:
    """Minimize the program's objective"""
    settings = settings or SolverSettings()
    backend = get(settings.backend)
    form = StandardForm.from_program(program, presolve=settings.presolve)
    started = time.monotonic()
    solution = backend.solve_standard(form, settings)
    LOGGER.info(
        "{} solve of {} rows x {} columns: {} {!r} in {:.2f}s".format(
            backend.name,
            form.ge_matrix.shape[0] + form.eq_matrix.shape[0],
            form.layout.width,
            solution.status.value,
            solution.objective_value,
            time.monotonic() - started,
        )
    )
    return solution


__all__ = [
    "CertificateReport",
    "DualCertificate",
    "LinearProgram",
    "Solution",
    "SolutionStatus",
    "SolverSettings",
    "extract_certificate",
    "get",
    "solve_min",
    "verify_certificate",
]
