"""Linear programs over entropy coordinates and named scalars, and their solutions"""

from __future__ import annotations

import dataclasses
import enum
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse

from ..entropy import Constraint, GroundSet, LinearForm, Sense, SubsetId
from ..errors import ModelError, UnknownTagError

LOGGER = logging.getLogger(__name__)
FEASIBILITY_TOLERANCE = 1e-9
OPTIMALITY_TOLERANCE = 1e-6
MAX_DENOMINATOR = 10**6
NONNEG_PREFIX = "nonneg:"


@dataclass(frozen=True)
class SolverSettings:  # pylint: disable=R0902
    """Tunables of solve_min and extract_certificate"""

    backend: str = field(default="highs")
    feasibility_tolerance: float = field(default=FEASIBILITY_TOLERANCE)
    optimality_tolerance: float = field(default=OPTIMALITY_TOLERANCE)
    max_denominator: int = field(default=MAX_DENOMINATOR)
    max_iterations: int = field(default=1_000_000)
    pivot_tolerance: float = field(default=1e-9)
    presolve: bool = field(default=True)


def nonnegativity_tag(ground: GroundSet, mask: SubsetId) -> str:
    """Tag of the implicit bound H(S) >= 0"""
    return f"{NONNEG_PREFIX}H({ground.render(mask)})>=0"


@dataclass(frozen=True)
class LinearProgram:
    """Minimize the objective subject to the constraints, entropy coordinates are bounded below by
    zero and scalars are free unless constrained"""

    ground: GroundSet
    scalars: Tuple[str, ...]
    constraints: Tuple[Constraint, ...]
    objective: LinearForm

    def __post_init__(self) -> None:
        """Check that everything referenced is declared and that tags are unique"""
        object.__setattr__(self, "scalars", tuple(self.scalars))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        if len(set(self.scalars)) != len(self.scalars):
            raise ModelError("duplicate scalar names")
        seen = set()
        for constraint in self.constraints:
            if constraint.tag in seen:
                raise ModelError(f"duplicate constraint tag '{constraint.tag}'")
            if constraint.tag.startswith(NONNEG_PREFIX):
                raise ModelError(f"tag prefix '{NONNEG_PREFIX}' is reserved for variable bounds")
            seen.add(constraint.tag)
            self._check_form(constraint.form, constraint.tag)
        self._check_form(self.objective, "objective")

    def _check_form(self, form: LinearForm, where: str) -> None:
        full = self.ground.full_mask
        for mask in form.entropy_terms:
            if not 1 <= mask <= full:
                raise ModelError(f"{where}: coordinate {mask:d} outside the ground set")
        for name in form.scalar_terms:
            if name not in self.scalars:
                raise ModelError(f"{where}: undeclared scalar '{name}'")

    @cached_property
    def referenced(self) -> Tuple[SubsetId, ...]:
        """Entropy coordinates used by any constraint or the objective, ascending"""
        masks = set(self.objective.entropy_terms)
        for constraint in self.constraints:
            masks.update(constraint.form.entropy_terms)
        return tuple(sorted(masks))

    @cached_property
    def nonnegativity_rows(self) -> Tuple[Constraint, ...]:
        """The variable bounds H(S) >= 0 as tagged constraints, so certificates can cite them"""
        return tuple(
            Constraint(LinearForm.entropy(mask), Sense.GE, nonnegativity_tag(self.ground, mask))
            for mask in self.referenced
        )

    @cached_property
    def _rows_by_tag(self) -> Dict[str, Constraint]:
        rows = {constraint.tag: constraint for constraint in self.constraints}
        rows.update((constraint.tag, constraint) for constraint in self.nonnegativity_rows)
        return rows

    def row(self, tag: str) -> Constraint:
        """Constraint (or variable bound) by tag"""
        try:
            return self._rows_by_tag[tag]
        except KeyError:
            raise UnknownTagError(tag) from None

    def has_tag(self, tag: str) -> bool:
        """True for constraint and variable bound tags"""
        return tag in self._rows_by_tag

    def with_objective(self, objective: LinearForm) -> LinearProgram:
        """Same feasible region, new objective"""
        return dataclasses.replace(self, objective=objective)

    def with_constraints(self, extra: Iterable[Constraint]) -> LinearProgram:
        """Same objective, more constraints"""
        return dataclasses.replace(self, constraints=self.constraints + tuple(extra))

    def count(self, prefix: str) -> int:
        """Number of constraints whose tag starts with prefix"""
        return sum(1 for constraint in self.constraints if constraint.tag.startswith(prefix))


@dataclass(frozen=True)
class ColumnLayout:
    """Column order of the assembled matrices: entropy coordinates ascending, then scalars"""

    masks: Tuple[SubsetId, ...]
    scalars: Tuple[str, ...]

    @property
    def num_entropy(self) -> int:
        """Number of entropy columns"""
        return len(self.masks)

    @property
    def width(self) -> int:
        """Total number of columns"""
        return len(self.masks) + len(self.scalars)

    def row_vector(self, form: LinearForm) -> Tuple[List[int], List[float]]:
        """Sparse column indices and float coefficients of the homogeneous part of a form"""
        index = self.index
        cols: List[int] = []
        vals: List[float] = []
        for mask, value in form.entropy_terms.items():
            cols.append(index[mask])
            vals.append(float(value))
        for name, value in form.scalar_terms.items():
            cols.append(index[name])
            vals.append(float(value))
        return cols, vals

    @cached_property
    def index(self) -> Dict[object, int]:
        """Column position by mask or scalar name"""
        result: Dict[object, int] = {mask: pos for pos, mask in enumerate(self.masks)}
        result.update((name, len(self.masks) + pos) for pos, name in enumerate(self.scalars))
        return result


def _sparse_rows(layout: ColumnLayout, forms: Sequence[LinearForm]) -> scipy.sparse.csr_matrix:
    rows: List[int] = []
    cols: List[int] = []
    vals: List[float] = []
    for row_no, form in enumerate(forms):
        row_cols, row_vals = layout.row_vector(form)
        rows.extend([row_no] * len(row_cols))
        cols.extend(row_cols)
        vals.extend(row_vals)
    return scipy.sparse.csr_matrix((vals, (rows, cols)), shape=(len(forms), layout.width), dtype=np.float64)


@dataclass(frozen=True)
class StandardForm:  # pylint: disable=R0902
    """Float assembly of a LinearProgram: minimize cost·x + offset s.t. ge_matrix·x >= ge_rhs,
    eq_matrix·x = eq_rhs, entropy columns >= 0"""

    layout: ColumnLayout
    cost: np.ndarray
    offset: float
    ge_matrix: scipy.sparse.csr_matrix
    ge_rhs: np.ndarray
    ge_tags: Tuple[str, ...]
    eq_matrix: scipy.sparse.csr_matrix
    eq_rhs: np.ndarray
    eq_tags: Tuple[str, ...]

    @classmethod
    def from_program(cls, program: LinearProgram, presolve: bool = True) -> StandardForm:
        """Assemble the sparse matrices, optionally dropping unreferenced coordinates"""
        masks = program.referenced if presolve else tuple(program.ground.subsets())
        layout = ColumnLayout(tuple(masks), program.scalars)
        ge_rows = [constraint for constraint in program.constraints if constraint.sense is Sense.GE]
        eq_rows = [constraint for constraint in program.constraints if constraint.sense is Sense.EQ]
        cost_cols, cost_vals = layout.row_vector(program.objective)
        cost = np.zeros(layout.width, dtype=np.float64)
        cost[cost_cols] = cost_vals
        LOGGER.debug(
            "assembled {} columns ({} dropped by presolve), {} inequality rows, {} equality rows".format(
                layout.width, program.ground.full_mask - layout.num_entropy, len(ge_rows), len(eq_rows)
            )
        )
        return cls(
            layout=layout,
            cost=cost,
            offset=float(program.objective.constant),
            ge_matrix=_sparse_rows(layout, [row.form for row in ge_rows]),
            ge_rhs=np.array([-float(row.form.constant) for row in ge_rows], dtype=np.float64),
            ge_tags=tuple(row.tag for row in ge_rows),
            eq_matrix=_sparse_rows(layout, [row.form for row in eq_rows]),
            eq_rhs=np.array([-float(row.form.constant) for row in eq_rows], dtype=np.float64),
            eq_tags=tuple(row.tag for row in eq_rows),
        )

    def bounds(self) -> List[Tuple[Optional[float], Optional[float]]]:
        """Column bounds: entropies nonnegative, scalars free"""
        return [(0.0, None)] * self.layout.num_entropy + [(None, None)] * len(self.layout.scalars)

    def max_violation(self, x: np.ndarray) -> float:
        """Largest constraint or bound violation of the point"""
        worst = 0.0
        if self.ge_matrix.shape[0]:
            worst = max(worst, float(np.max(self.ge_rhs - self.ge_matrix @ x)))
        if self.eq_matrix.shape[0]:
            worst = max(worst, float(np.max(np.abs(self.eq_matrix @ x - self.eq_rhs))))
        if self.layout.num_entropy:
            worst = max(worst, float(np.max(-x[: self.layout.num_entropy])))
        return worst


class SolutionStatus(enum.Enum):
    """Outcome of a solve"""

    OPTIMAL = "optimal"
    UNBOUNDED = "unbounded"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class Solution:  # pylint: disable=R0902
    """Result of solve_min; row_duals are weights on the constraint forms in their own orientation,
    nonnegative for inequality rows, such that objective − Σ weight·form is nonnegative on entropies"""

    status: SolutionStatus
    objective_value: float
    entropy: Mapping[SubsetId, float] = field(default_factory=dict)
    scalars: Mapping[str, float] = field(default_factory=dict)
    iterations: int = field(default=0)
    row_duals: Mapping[str, float] = field(default_factory=dict)
    max_violation: float = field(default=0.0)
    backend: str = field(default="")

    @property
    def optimal(self) -> bool:
        """Shorthand for the status check"""
        return self.status is SolutionStatus.OPTIMAL
