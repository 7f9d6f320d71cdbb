"""Two-phase revised simplex with Bland's anti-cycling rule on a dense working basis

Meant for small programs and as an independent cross-check of the sparse backend: every
iteration refactors the basis, so the cost per pivot is cubic in the row count.
"""

from typing import List, Optional, Tuple
import logging
from dataclasses import dataclass, field

import numpy as np

from ..errors import SolverError
from .baseclass import BaseBackend
from .program import SolverSettings, Solution, SolutionStatus, StandardForm


LOGGER = logging.getLogger(__name__)


@dataclass
class _Tableau:  # pylint: disable=R0902
    """Equality form A·z = b, z >= 0, with one artificial column per row appended"""

    matrix: np.ndarray
    rhs: np.ndarray
    cost: np.ndarray
    row_sign: np.ndarray
    num_structural: int
    basis: List[int]
    iterations: int = 0
    last_pivot: Tuple[int, int] = (-1, -1)


@dataclass
class RevisedSimplexBackend(BaseBackend):
    """Revised simplex, smallest-index entering column and smallest-index leaving row on ties"""

    name: str = field(default="bland")

    def solve_standard(self, form: StandardForm, settings: SolverSettings) -> Solution:
        """Phase I on artificials, then phase II on the real cost"""
        tableau = self._build(form)
        num_rows = tableau.matrix.shape[0]
        total = tableau.matrix.shape[1]
        num_structural = tableau.num_structural
        phase1_cost = np.concatenate([np.zeros(num_structural), np.ones(num_rows)])
        status = self._iterate(tableau, phase1_cost, total, settings)
        if status is not SolutionStatus.OPTIMAL:
            raise SolverError("phase I cannot be unbounded")
        values = self._basic_values(tableau, settings)
        infeasibility = float(phase1_cost[tableau.basis] @ values)
        if infeasibility > settings.feasibility_tolerance:
            return self.failed_solution(SolutionStatus.INFEASIBLE, tableau.iterations)
        self._drive_out_artificials(tableau, settings)
        phase2_cost = np.concatenate([tableau.cost, np.zeros(num_rows)])
        status = self._iterate(tableau, phase2_cost, num_structural, settings)
        if status is SolutionStatus.UNBOUNDED:
            return self.failed_solution(SolutionStatus.UNBOUNDED, tableau.iterations)
        values = self._basic_values(tableau, settings)
        z = np.zeros(total)
        z[tableau.basis] = values
        duals = self._solve(tableau, transpose=True, rhs=phase2_cost[tableau.basis])
        weights = tableau.row_sign * duals
        num_ge = form.ge_matrix.shape[0]
        layout = form.layout
        num_entropy = layout.num_entropy
        num_scalars = len(layout.scalars)
        positive = z[num_entropy : num_entropy + num_scalars]
        negative = z[num_entropy + num_scalars : num_entropy + 2 * num_scalars]
        x = np.concatenate([z[:num_entropy], positive - negative])
        return self.optimal_solution(form, settings, x, weights[:num_ge], weights[num_ge:], tableau.iterations)

    @staticmethod
    def _build(form: StandardForm) -> _Tableau:
        """Split free scalars, add surplus columns for >= rows, make the right hand side nonnegative"""
        layout = form.layout
        num_entropy = layout.num_entropy
        ge_block = form.ge_matrix.toarray()
        eq_block = form.eq_matrix.toarray()
        num_ge = ge_block.shape[0]
        rows = np.vstack([ge_block, eq_block]) if eq_block.shape[0] else ge_block
        entropy_part = rows[:, :num_entropy]
        scalar_part = rows[:, num_entropy:]
        surplus = np.vstack([-np.eye(num_ge), np.zeros((eq_block.shape[0], num_ge))])
        matrix = np.hstack([entropy_part, scalar_part, -scalar_part, surplus])
        rhs = np.concatenate([form.ge_rhs, form.eq_rhs])
        row_sign = np.where(rhs < 0, -1.0, 1.0)
        matrix = matrix * row_sign[:, None]
        rhs = rhs * row_sign
        cost = np.concatenate(
            [form.cost[:num_entropy], form.cost[num_entropy:], -form.cost[num_entropy:], np.zeros(num_ge)]
        )
        num_rows = matrix.shape[0]
        num_structural = matrix.shape[1]
        matrix = np.hstack([matrix, np.eye(num_rows)])
        return _Tableau(
            matrix=matrix,
            rhs=rhs,
            cost=cost,
            row_sign=row_sign,
            num_structural=num_structural,
            basis=list(range(num_structural, num_structural + num_rows)),
        )

    @staticmethod
    def _solve(tableau: _Tableau, transpose: bool, rhs: np.ndarray) -> np.ndarray:
        basis_matrix = tableau.matrix[:, tableau.basis]
        try:
            return np.linalg.solve(basis_matrix.T if transpose else basis_matrix, rhs)
        except np.linalg.LinAlgError:
            raise SolverError("singular basis", pivot=tableau.last_pivot) from None

    def _basic_values(self, tableau: _Tableau, settings: SolverSettings) -> np.ndarray:
        values = self._solve(tableau, transpose=False, rhs=tableau.rhs)
        values[np.abs(values) < settings.feasibility_tolerance] = 0.0
        return values

    def _iterate(
        self, tableau: _Tableau, cost: np.ndarray, entering_limit: int, settings: SolverSettings
    ) -> SolutionStatus:
        """Pivot until no column below entering_limit has negative reduced cost"""
        tolerance = settings.feasibility_tolerance
        while True:
            if tableau.iterations >= settings.max_iterations:
                raise SolverError(f"iteration limit {settings.max_iterations:d} reached")
            values = self._basic_values(tableau, settings)
            duals = self._solve(tableau, transpose=True, rhs=cost[tableau.basis])
            reduced = cost[:entering_limit] - tableau.matrix[:, :entering_limit].T @ duals
            reduced[[var for var in tableau.basis if var < entering_limit]] = 0.0
            candidates = np.flatnonzero(reduced < -tolerance)
            if candidates.size == 0:
                return SolutionStatus.OPTIMAL
            entering = int(candidates[0])
            direction = self._solve(tableau, transpose=False, rhs=tableau.matrix[:, entering])
            leaving = self._ratio_test(tableau, values, direction, settings)
            if leaving is None:
                return SolutionStatus.UNBOUNDED
            self._pivot(tableau, leaving, entering, direction, settings)

    @staticmethod
    def _ratio_test(
        tableau: _Tableau, values: np.ndarray, direction: np.ndarray, settings: SolverSettings
    ) -> Optional[int]:
        """Minimum ratio row, ties broken by the smallest basic variable index"""
        best: Tuple[float, int, int] = (np.inf, -1, -1)
        for row in np.flatnonzero(direction > settings.pivot_tolerance):
            ratio = max(values[row], 0.0) / direction[row]
            variable = tableau.basis[row]
            if ratio < best[0] - settings.feasibility_tolerance or (
                abs(ratio - best[0]) <= settings.feasibility_tolerance and variable < best[1]
            ):
                best = (ratio, variable, int(row))
        return None if best[2] < 0 else best[2]

    @staticmethod
    def _pivot(
        tableau: _Tableau, leaving: int, entering: int, direction: np.ndarray, settings: SolverSettings
    ) -> None:
        if abs(direction[leaving]) <= settings.pivot_tolerance:
            raise SolverError(f"pivot element {direction[leaving]:.3e} too small", pivot=(leaving, entering))
        LOGGER.debug("pivot row {} column {} (leaving {})".format(leaving, entering, tableau.basis[leaving]))
        tableau.basis[leaving] = entering
        tableau.last_pivot = (leaving, entering)
        tableau.iterations += 1

    def _drive_out_artificials(self, tableau: _Tableau, settings: SolverSettings) -> None:
        """Replace zero-level artificials by structural columns, rows where none fits are redundant"""
        num_structural = tableau.num_structural
        for row, variable in enumerate(list(tableau.basis)):
            if variable < num_structural:
                continue
            unit = np.zeros(len(tableau.basis))
            unit[row] = 1.0
            tableau_row = self._solve(tableau, transpose=True, rhs=unit) @ tableau.matrix[:, :num_structural]
            for column in np.flatnonzero(np.abs(tableau_row) > settings.pivot_tolerance * 1e3):
                if int(column) not in tableau.basis:
                    direction = self._solve(tableau, transpose=False, rhs=tableau.matrix[:, int(column)])
                    self._pivot(tableau, row, int(column), direction, settings)
                    break
            else:
                LOGGER.debug("row {} is redundant, its artificial stays basic at zero".format(row))


def get() -> RevisedSimplexBackend:
    """Shorthand for creating the backend"""
    return RevisedSimplexBackend()
