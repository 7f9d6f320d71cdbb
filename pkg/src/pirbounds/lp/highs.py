"""HiGHS dual simplex through scipy.optimize.linprog, the default backend for the large models"""

from typing import Any, Dict
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from ..errors import SolverError
from .baseclass import BaseBackend
from .program import SolverSettings, Solution, SolutionStatus, StandardForm


LOGGER = logging.getLogger(__name__)
# linprog status codes
STATUS_OPTIMAL = 0
STATUS_ITERATION_LIMIT = 1
STATUS_INFEASIBLE = 2
STATUS_UNBOUNDED = 3


def _marginals(section: Any, size: int) -> np.ndarray:
    if not size or section is None:
        return np.zeros(size, dtype=np.float64)
    return np.asarray(section.marginals, dtype=np.float64)


@dataclass
class HighsBackend(BaseBackend):
    """Sparse dual simplex, deterministic for identical input"""

    name: str = field(default="highs")
    method: str = field(default="highs-ds")

    def solve_standard(self, form: StandardForm, settings: SolverSettings) -> Solution:
        """Solve with linprog and translate the marginals into constraint weights"""
        has_ge = form.ge_matrix.shape[0] > 0
        has_eq = form.eq_matrix.shape[0] > 0
        options: Dict[str, Any] = {
            "presolve": True,
            "primal_feasibility_tolerance": max(settings.feasibility_tolerance / 10, 1e-10),
            "dual_feasibility_tolerance": max(settings.feasibility_tolerance / 10, 1e-10),
            "maxiter": settings.max_iterations,
        }
        LOGGER.debug("linprog({}) on {} columns".format(self.method, form.layout.width))
        # A_ub x <= b_ub is the negated inequality block
        result = linprog(
            form.cost,
            A_ub=-form.ge_matrix if has_ge else None,
            b_ub=-form.ge_rhs if has_ge else None,
            A_eq=form.eq_matrix if has_eq else None,
            b_eq=form.eq_rhs if has_eq else None,
            bounds=form.bounds(),
            method=self.method,
            options=options,
        )
        iterations = int(getattr(result, "nit", 0))
        if result.status == STATUS_INFEASIBLE:
            return self.failed_solution(SolutionStatus.INFEASIBLE, iterations)
        if result.status == STATUS_UNBOUNDED:
            return self.failed_solution(SolutionStatus.UNBOUNDED, iterations)
        if result.status == STATUS_ITERATION_LIMIT:
            raise SolverError(f"iteration limit {settings.max_iterations:d} reached")
        if result.status != STATUS_OPTIMAL:
            raise SolverError(f"HiGHS status {result.status:d}: {result.message}")
        # d(objective)/d(b_ub) is nonpositive; the weight on a >= row is its negation
        ge_duals = -_marginals(getattr(result, "ineqlin", None), form.ge_matrix.shape[0])
        eq_duals = _marginals(getattr(result, "eqlin", None), form.eq_matrix.shape[0])
        return self.optimal_solution(
            form, settings, np.asarray(result.x, dtype=np.float64), ge_duals, eq_duals, iterations
        )


def get() -> HighsBackend:
    """Shorthand for creating the backend"""
    return HighsBackend()
