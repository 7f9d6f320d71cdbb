"""Baseclass for all the LP backends, common result handling is defined here

All backends must define solve_standard (check the abstractmethod)
"""

from typing import Dict
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from ..errors import SolverError
from .program import SolverSettings, Solution, SolutionStatus, StandardForm


LOGGER = logging.getLogger(__name__)


@dataclass
class BaseBackend(ABC):
    """Baseclass for LP backends, subclasses implement solve_standard"""

    name: str = "base"

    @abstractmethod
    def solve_standard(self, form: StandardForm, settings: SolverSettings) -> Solution:
        """Must minimize the assembled problem and report duals in constraint orientation"""
        raise NotImplementedError()

    def optimal_solution(  # pylint: disable=R0913
        self,
        form: StandardForm,
        settings: SolverSettings,
        x: np.ndarray,
        ge_duals: np.ndarray,
        eq_duals: np.ndarray,
        iterations: int,
    ) -> Solution:
        """Map an optimal column vector and row duals back to coordinates and tags, checking feasibility"""
        violation = form.max_violation(x)
        if violation > settings.feasibility_tolerance:
            raise SolverError(
                "{} returned a point violating the constraints by {:.3e} (tolerance {:.1e})".format(
                    self.name, violation, settings.feasibility_tolerance
                )
            )
        layout = form.layout
        entropy = {mask: float(x[pos]) for pos, mask in enumerate(layout.masks)}
        scalars = {name: float(x[layout.num_entropy + pos]) for pos, name in enumerate(layout.scalars)}
        row_duals: Dict[str, float] = {}
        for tag, value in zip(form.ge_tags, ge_duals):
            if value:
                row_duals[tag] = float(value)
        for tag, value in zip(form.eq_tags, eq_duals):
            if value:
                row_duals[tag] = float(value)
        objective = float(form.cost @ x) + form.offset
        LOGGER.debug("{}: optimum {!r} after {} iterations".format(self.name, objective, iterations))
        return Solution(
            status=SolutionStatus.OPTIMAL,
            objective_value=objective,
            entropy=entropy,
            scalars=scalars,
            iterations=iterations,
            row_duals=row_duals,
            max_violation=violation,
            backend=self.name,
        )

    def failed_solution(self, status: SolutionStatus, iterations: int) -> Solution:
        """Result for infeasible and unbounded problems"""
        value = float("inf") if status is SolutionStatus.INFEASIBLE else float("-inf")
        LOGGER.info("{}: problem is {}".format(self.name, status.value))
        return Solution(status=status, objective_value=value, iterations=iterations, backend=self.name)
