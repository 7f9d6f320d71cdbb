"""Entropy LP of the two-message two-database retrieval problem with fixed-query answers

Database 1 answers X1, X2, X3 and database 2 answers Y1, Y2 are the answers forced to exist by
decodability and privacy: (X1,Y1) decodes W1, (X1,Y2) decodes W2, (X2,Y1) decodes W2 and
(X3,Y2) decodes W1. Y1 and Y2 need not be distinct; nothing forces them apart. The random key
plays no role here and is not modelled.
"""

from __future__ import annotations

import enum
import itertools
import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from ..entropy import (
    Constraint,
    GroundSet,
    LinearForm,
    Sense,
    compile_conditional_entropy,
    elemental_inequalities,
)
from ..errors import ModelError, SolverError
from ..lp import LinearProgram, SolverSettings, extract_certificate, solve_min
from ..lp.certificate import DualCertificate
from ..lp.program import Solution

LOGGER = logging.getLogger(__name__)
ALPHA = "alpha"
BETA = "beta"
SCALARS = (ALPHA, BETA)
MESSAGES = ("W1", "W2")
DB1_ANSWERS = ("X1", "X2", "X3")
DB2_ANSWERS = ("Y1", "Y2")
ANSWERS = DB1_ANSWERS + DB2_ANSWERS
BASE_VARIABLES = MESSAGES + ANSWERS
# (message, db1 answer, db2 answer)
DECODING = (("W1", "X1", "Y1"), ("W2", "X1", "Y2"), ("W2", "X2", "Y1"), ("W1", "X3", "Y2"))
SCALAR_BOUND_RE = re.compile(r"^\s*(alpha|beta)\s*(<=|>=|=)\s*([+-]?\d+(?:/\d+)?)\s*$")


class Role(enum.Enum):
    """What a model variable stands for"""

    MESSAGE = "message"
    DB1_ANSWER = "db1-answer"
    DB2_ANSWER = "db2-answer"
    PSEUDO = "pseudo"


@dataclass(frozen=True)
class ModelOptions:
    """Switches of the model builders"""

    include_symmetry: bool = field(default=True)
    include_pseudo: bool = field(default=False)
    objective: Tuple[Fraction, Fraction] = field(default=(Fraction(1), Fraction(1)))

    def __post_init__(self) -> None:
        """Objective weights must be nonnegative and not both zero"""
        c_alpha, c_beta = (Fraction(value) for value in self.objective)
        if c_alpha < 0 or c_beta < 0 or (c_alpha == 0 and c_beta == 0):
            raise ModelError(f"objective weights must be nonnegative and not both zero, got ({c_alpha}, {c_beta})")
        object.__setattr__(self, "objective", (c_alpha, c_beta))


@dataclass(frozen=True)
class PirLpModel:
    """A built LinearProgram together with the meaning of its variables"""

    program: LinearProgram
    role_map: Mapping[str, Role]
    options: ModelOptions

    @property
    def ground(self) -> GroundSet:
        """Ground set of the program"""
        return self.program.ground

    def count(self, kind: str) -> int:
        """Number of constraints of a provenance kind, e.g. 'decode' or 'mirror'"""
        return self.program.count(f"{kind}:")


@dataclass(frozen=True)
class ObjectiveMinimum:
    """Optimum of a model objective with its exactly verified certificate"""

    value: float
    certificate: DualCertificate
    solution: Solution
    program: LinearProgram


def objective_form(c_alpha: Fraction, c_beta: Fraction) -> LinearForm:
    """c_α·α + c_β·β"""
    return LinearForm(scalar_terms={ALPHA: c_alpha, BETA: c_beta})


def _equal(ground: GroundSet, left: Sequence[str], right: Sequence[str], tag: str) -> Constraint:
    form = compile_conditional_entropy(ground, left) - compile_conditional_entropy(ground, right)
    return Constraint(form, Sense.EQ, tag)


def _label(names: Sequence[str]) -> str:
    return ",".join(names)


def problem_constraints(ground: GroundSet, include_symmetry: bool) -> List[Constraint]:
    """Message, coding, storage, download and symmetry constraints on a ground set holding the
    base variables (more variables may be present)"""
    entropy = compile_conditional_entropy
    rows = [
        Constraint(entropy(ground, ["W1"]) - LinearForm.const(1), Sense.EQ, "message:H(W1)=1"),
        Constraint(entropy(ground, ["W2"]) - LinearForm.const(1), Sense.EQ, "message:H(W2)=1"),
        Constraint(entropy(ground, MESSAGES) - LinearForm.const(2), Sense.EQ, "message:H(W1,W2)=2"),
        Constraint(
            entropy(ground, ANSWERS, MESSAGES), Sense.EQ, f"determinism:H({_label(ANSWERS)}|{_label(MESSAGES)})=0"
        ),
    ]
    for message, x_answer, y_answer in DECODING:
        rows.append(
            Constraint(
                entropy(ground, [message], [x_answer, y_answer]),
                Sense.EQ,
                f"decode:H({message}|{x_answer},{y_answer})=0",
            )
        )
    for answers in (DB1_ANSWERS, DB2_ANSWERS):
        rows.append(
            Constraint(
                LinearForm.scalar(ALPHA) - entropy(ground, answers), Sense.GE, f"storage:alpha>=H({_label(answers)})"
            )
        )
    for answer in ANSWERS:
        download = LinearForm.scalar(BETA) - entropy(ground, [answer])
        rows.append(Constraint(download, Sense.GE, f"download:beta>=H({answer})"))
    if include_symmetry:
        rows.extend(symmetry_constraints(ground))
    return rows


def symmetry_constraints(ground: GroundSet) -> List[Constraint]:
    """Every answer has the same entropy, every (answer, message) pair has the same joint entropy"""
    first = ANSWERS[0]
    rows = [_equal(ground, [first], [answer], f"symmetry:H({first})=H({answer})") for answer in ANSWERS[1:]]
    pairs = list(itertools.product(ANSWERS, MESSAGES))
    anchor = pairs[0]
    rows.extend(
        _equal(ground, anchor, pair, f"symmetry:H({_label(anchor)})=H({_label(pair)})") for pair in pairs[1:]
    )
    return rows


def base_role_map() -> Dict[str, Role]:
    """Roles of the seven base variables"""
    roles = {name: Role.MESSAGE for name in MESSAGES}
    roles.update((name, Role.DB1_ANSWER) for name in DB1_ANSWERS)
    roles.update((name, Role.DB2_ANSWER) for name in DB2_ANSWERS)
    return roles


def assemble(ground: GroundSet, rows: List[Constraint], options: ModelOptions, roles: Dict[str, Role]) -> PirLpModel:
    """Prepend the elemental inequalities and wrap everything into a model"""
    constraints = elemental_inequalities(ground) + rows
    program = LinearProgram(ground, SCALARS, tuple(constraints), objective_form(*options.objective))
    LOGGER.info(
        "built model over {} variables: {} constraints ({} elemental)".format(
            ground.size, len(constraints), len(constraints) - len(rows)
        )
    )
    return PirLpModel(program, roles, options)


def build_base_model(options: Optional[ModelOptions] = None) -> PirLpModel:
    """Answer-variety model on (W1, W2, X1, X2, X3, Y1, Y2)"""
    options = options or ModelOptions()
    if options.include_pseudo:
        raise ModelError("the base model has no pseudo messages, use build_pseudo_model")
    ground = GroundSet(BASE_VARIABLES)
    return assemble(ground, problem_constraints(ground, options.include_symmetry), options, base_role_map())


def parse_scalar_bound(text: str) -> Constraint:
    """Constraint from text like 'beta<=3/4' or 'alpha>=1'"""
    match = SCALAR_BOUND_RE.match(text)
    if not match:
        raise ModelError(f"cannot parse scalar bound '{text}', expected e.g. 'beta<=3/4'")
    name, operator, value = match.groups()
    try:
        bound = Fraction(value)
    except ZeroDivisionError:
        raise ModelError(f"scalar bound '{text}' has a zero denominator") from None
    scalar = LinearForm.scalar(name)
    canonical = f"extra:{name}{operator}{bound}"
    if operator == "<=":
        return Constraint(LinearForm.const(bound) - scalar, Sense.GE, canonical)
    if operator == ">=":
        return Constraint(scalar - LinearForm.const(bound), Sense.GE, canonical)
    return Constraint(scalar - LinearForm.const(bound), Sense.EQ, canonical)


def minimize_objective(
    model: PirLpModel,
    c_alpha: Fraction,
    c_beta: Fraction,
    extra: Sequence[Constraint] = (),
    settings: Optional[SolverSettings] = None,
) -> ObjectiveMinimum:
    """Minimize c_α·α + c_β·β over the model (plus extra rows) and certify the optimum exactly"""
    program = model.program.with_objective(objective_form(Fraction(c_alpha), Fraction(c_beta)))
    if extra:
        program = program.with_constraints(extra)
    solution = solve_min(program, settings)
    if not solution.optimal:
        raise SolverError(f"objective ({c_alpha}, {c_beta}) is {solution.status.value} on this model")
    certificate = extract_certificate(program, solution, settings)
    return ObjectiveMinimum(solution.objective_value, certificate, solution, program)
