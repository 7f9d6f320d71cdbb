"""Exact dual certificates: nonnegative rational combinations of constraints reproducing the objective

A certificate (weights w, bound b) for "minimize f" proves f >= b on the feasible region when
Σ w_t·form_t = f − b holds coefficient-exactly and w_t >= 0 on every inequality row. Solver
duals are floats; they are rounded to small-denominator rationals, rows in use are re-solved exactly
when rounding leaves a residue, and the identity is then
re-checked in rational arithmetic, so nothing here trusts the solver.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from ..entropy import LinearForm, Sense, linear_sum
from ..errors import CertificateError
from .program import LinearProgram, Solution, SolverSettings, nonnegativity_tag

LOGGER = logging.getLogger(__name__)
Coefficients = Dict[str, Fraction]


@dataclass(frozen=True)
class DualCertificate:
    """Weights per constraint tag and the bound they prove"""

    weights: Mapping[str, Fraction]
    certified_bound: Fraction
    model_hash: Optional[str] = field(default=None)

    def __post_init__(self) -> None:
        """Exact rationals only, zero weights dropped"""
        object.__setattr__(
            self, "weights", {tag: Fraction(value) for tag, value in self.weights.items() if value != 0}
        )
        object.__setattr__(self, "certified_bound", Fraction(self.certified_bound))


@dataclass(frozen=True)
class CertificateReport:
    """Outcome of verify_certificate, residual is objective − bound − Σ weight·form"""

    valid: bool
    certified_bound: Fraction
    sign_violations: Tuple[str, ...]
    residual: LinearForm

    def describe(self, program: LinearProgram) -> List[str]:
        """Human readable findings, empty when valid"""
        lines = [f"negative weight on inequality row '{tag}'" for tag in self.sign_violations]
        if not self.residual.is_zero():
            lines.append(f"residual row: {self.residual.render(program.ground)}")
        return lines


def verify_certificate(program: LinearProgram, certificate: DualCertificate) -> CertificateReport:
    """Check signs and the exact identity Σ weight·form = objective − bound, no floating point"""
    sign_violations = []
    terms = []
    for tag, weight in certificate.weights.items():
        row = program.row(tag)
        if row.sense is Sense.GE and weight < 0:
            sign_violations.append(tag)
        terms.append((weight, row.form))
    combined = linear_sum(terms)
    residual = program.objective - LinearForm.const(certificate.certified_bound) - combined
    valid = not sign_violations and residual.is_zero()
    LOGGER.info(
        "certificate for bound {} {}".format(certificate.certified_bound, "verified" if valid else "REJECTED")
    )
    return CertificateReport(valid, certificate.certified_bound, tuple(sign_violations), residual)


def _rationalize(
    program: LinearProgram, solution: Solution, settings: SolverSettings
) -> Tuple[Dict[str, Fraction], Dict[str, float]]:
    weights: Dict[str, Fraction] = {}
    for constraint in program.constraints:
        dual = solution.row_duals.get(constraint.tag, 0.0)
        if not dual:
            continue
        weight = Fraction(dual).limit_denominator(settings.max_denominator)
        if constraint.sense is Sense.GE and weight < 0:
            if abs(dual) > settings.optimality_tolerance:
                raise CertificateError(
                    f"inequality row '{constraint.tag}' has negative dual {dual!r}", solution.row_duals
                )
            weight = Fraction(0)
        if weight:
            weights[constraint.tag] = weight
    return weights, dict(solution.row_duals)


def _leftover(program: LinearProgram, weights: Mapping[str, Fraction]) -> Tuple[LinearForm, LinearForm]:
    """Weighted row sum and objective minus that sum"""
    combined = linear_sum((weight, program.row(tag).form) for tag, weight in weights.items())
    return combined, program.objective - combined


def _rounding_problem(program: LinearProgram, residual: LinearForm) -> Optional[str]:
    if residual.scalar_terms:
        return "scalar coefficients do not cancel after rounding: " + ", ".join(
            f"{name}:{value}" for name, value in residual.scalar_terms.items()
        )
    for mask, value in residual.entropy_terms.items():
        if value < 0:
            return f"coefficient {value} on H({program.ground.render(mask)}) cannot come from a variable bound"
    return None


def _solve_exact(equations: Sequence[Tuple[Coefficients, Fraction]], rank: Mapping[str, int]) -> Optional[Coefficients]:
    """Sparse rational elimination, unknowns that never become pivots are zero; None when inconsistent"""
    order: List[str] = []
    pivot_rows: Dict[str, Tuple[Coefficients, Fraction]] = {}
    for coefficients, rhs in sorted(equations, key=lambda equation: len(equation[0])):
        row = dict(coefficients)
        for pivot in order:
            factor = row.get(pivot)
            if factor is None:
                continue
            pivot_coefficients, pivot_rhs = pivot_rows[pivot]
            for name, value in pivot_coefficients.items():
                updated = row.get(name, Fraction(0)) - factor * value
                if updated:
                    row[name] = updated
                else:
                    row.pop(name, None)
            rhs -= factor * pivot_rhs
        if not row:
            if rhs:
                return None
            continue
        pivot = min(row, key=lambda name: rank[name])
        scale = row[pivot]
        pivot_rows[pivot] = ({name: value / scale for name, value in row.items()}, rhs / scale)
        order.append(pivot)
    solution: Coefficients = {}
    for pivot in reversed(order):
        coefficients, rhs = pivot_rows[pivot]
        solution[pivot] = rhs - sum(
            (value * solution.get(name, Fraction(0)) for name, value in coefficients.items() if name != pivot),
            Fraction(0),
        )
    return solution


def _repair(
    program: LinearProgram, weights: Mapping[str, Fraction], solution: Solution, settings: SolverSettings
) -> Optional[Coefficients]:
    """Correct the rounded weights so that every coordinate with a numerically zero reduced cost
    cancels exactly; only equality rows and rows already in use may move"""
    tolerance = Fraction(settings.optimality_tolerance)
    unknowns = [constraint.tag for constraint in program.constraints if constraint.sense is Sense.EQ]
    unknowns += sorted(
        (tag for tag in weights if program.row(tag).sense is Sense.GE), key=lambda tag: (-weights[tag], tag)
    )
    rank = {tag: position for position, tag in enumerate(unknowns)}
    entropy_columns: Dict[int, Coefficients] = {}
    scalar_columns: Dict[str, Coefficients] = {}
    constant_column: Coefficients = {}
    for tag in unknowns:
        form = program.row(tag).form
        for mask, value in form.entropy_terms.items():
            entropy_columns.setdefault(mask, {})[tag] = value
        for name, value in form.scalar_terms.items():
            scalar_columns.setdefault(name, {})[tag] = value
        if form.constant:
            constant_column[tag] = form.constant
    _, residual = _leftover(program, weights)
    equations: List[Tuple[Coefficients, Fraction]] = []
    for name in sorted(set(residual.scalar_terms) | set(scalar_columns)):
        value = residual.scalar_terms.get(name, Fraction(0))
        if abs(value) > tolerance:
            return None
        equations.append((scalar_columns.get(name, {}), value))
    for mask in sorted(set(residual.entropy_terms) | set(entropy_columns)):
        value = residual.entropy_terms.get(mask, Fraction(0))
        if value < -tolerance or (value < 0 and mask not in entropy_columns):
            return None
        if value <= tolerance and mask in entropy_columns:
            equations.append((entropy_columns[mask], value))
    target = Fraction(solution.objective_value).limit_denominator(settings.max_denominator)
    gap = residual.constant - target
    attempts = [equations]
    if abs(gap) <= tolerance:
        attempts.insert(0, equations + [(constant_column, gap)])
    for attempt in attempts:
        delta = _solve_exact(attempt, rank)
        if delta is None:
            continue
        repaired = {tag: weights.get(tag, Fraction(0)) + delta.get(tag, Fraction(0)) for tag in unknowns}
        if all(value >= 0 for tag, value in repaired.items() if program.row(tag).sense is Sense.GE):
            return {tag: value for tag, value in repaired.items() if value}
    return None


def extract_certificate(
    program: LinearProgram, solution: Solution, settings: Optional[SolverSettings] = None
) -> DualCertificate:
    """Round the optimal duals, re-solve the identity exactly when rounding leaves residue, absorb
    the remaining entropy coefficients into variable bounds and verify the result exactly"""
    settings = settings or SolverSettings()
    if not solution.optimal:
        raise CertificateError(f"solution status is {solution.status.value}, certificates need an optimum")
    weights, float_duals = _rationalize(program, solution, settings)
    combined, residual = _leftover(program, weights)
    problem = _rounding_problem(program, residual)
    if problem is not None:
        LOGGER.info("{}; solving for exact weights".format(problem))
        repaired = _repair(program, weights, solution, settings)
        if repaired is None:
            raise CertificateError(problem, float_duals)
        weights = repaired
        combined, residual = _leftover(program, weights)
        problem = _rounding_problem(program, residual)
        if problem is not None:
            raise CertificateError(problem, float_duals)
    for mask, value in residual.entropy_terms.items():
        weights[nonnegativity_tag(program.ground, mask)] = value
    certificate = DualCertificate(weights, program.objective.constant - combined.constant)
    report = verify_certificate(program, certificate)
    if not report.valid:
        raise CertificateError("; ".join(report.describe(program)), float_duals)
    if float(certificate.certified_bound) > solution.objective_value + settings.optimality_tolerance:
        raise CertificateError(
            f"certified bound {certificate.certified_bound} exceeds the optimum {solution.objective_value!r}",
            float_duals,
        )
    LOGGER.debug(
        "certificate uses {} rows, bound {} against optimum {!r}".format(
            len(certificate.weights), certificate.certified_bound, solution.objective_value
        )
    )
    return certificate
