"""Pseudo-message extension of the answer-variety model

V1, V2 are generated from database 2's answers the way W1, W2 would be, U1, U2 from database 1's
answers. Only entropy consequences of the identical marginal distributions are imposed.
"""

import itertools
import logging
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from ..entropy import (
    Constraint,
    GroundSet,
    Sense,
    compile_conditional_entropy,
    compile_conditional_mutual_information,
)
from ..errors import ModelError
from .base import (
    BASE_VARIABLES,
    DB1_ANSWERS,
    DB2_ANSWERS,
    MESSAGES,
    ModelOptions,
    PirLpModel,
    Role,
    assemble,
    base_role_map,
    problem_constraints,
)

LOGGER = logging.getLogger(__name__)
DB1_PSEUDO = ("U1", "U2")
DB2_PSEUDO = ("V1", "V2")
PSEUDO_VARIABLES = DB1_PSEUDO + DB2_PSEUDO
PSEUDO_GROUND = BASE_VARIABLES + PSEUDO_VARIABLES


def _subsets(names: Sequence[str], nonempty: bool = False) -> Iterator[Tuple[str, ...]]:
    for size in range(1 if nonempty else 0, len(names) + 1):
        yield from itertools.combinations(names, size)


def markov_constraints(ground: GroundSet) -> List[Constraint]:
    """Each pseudo pair depends on the rest only through its database's answers"""
    rows = []
    couplings = (
        (DB2_PSEUDO, MESSAGES + DB1_ANSWERS, DB2_ANSWERS),
        (DB1_PSEUDO, MESSAGES + DB2_ANSWERS + DB2_PSEUDO, DB1_ANSWERS),
    )
    for pseudo, rest, given in couplings:
        tag = "markov:I({};{}|{})=0".format(",".join(pseudo), ",".join(rest), ",".join(given))
        rows.append(Constraint(compile_conditional_mutual_information(ground, pseudo, rest, given), Sense.EQ, tag))
    return rows


def mirror_constraints(ground: GroundSet) -> List[Constraint]:
    """H(S ∪ T) = H(S ∪ σ(T)) for S within the answers and nonempty T within the pseudo pair,
    σ maps the i-th pseudo message to W_i"""
    rows = []
    for answers, pseudo in ((DB2_ANSWERS, DB2_PSEUDO), (DB1_ANSWERS, DB1_PSEUDO)):
        sigma: Dict[str, str] = dict(zip(pseudo, MESSAGES))
        for answer_set in _subsets(answers):
            for pseudo_set in _subsets(pseudo, nonempty=True):
                left = answer_set + pseudo_set
                right = answer_set + tuple(sigma[name] for name in pseudo_set)
                form = compile_conditional_entropy(ground, left) - compile_conditional_entropy(ground, right)
                tag = "mirror:H({})=H({})".format(",".join(left), ",".join(right))
                rows.append(Constraint(form, Sense.EQ, tag))
    return rows


def build_pseudo_model(options: Optional[ModelOptions] = None) -> PirLpModel:
    """Base model lifted to (W1, W2, X1, X2, X3, Y1, Y2, U1, U2, V1, V2) plus couplings and mirrors"""
    options = options or ModelOptions(include_pseudo=True)
    if not options.include_pseudo:
        raise ModelError("build_pseudo_model needs include_pseudo set")
    ground = GroundSet(PSEUDO_GROUND)
    rows = problem_constraints(ground, options.include_symmetry)
    markov = markov_constraints(ground)
    mirrors = mirror_constraints(ground)
    LOGGER.debug("pseudo model adds {} markov and {} mirror rows".format(len(markov), len(mirrors)))
    rows.extend(markov + mirrors)
    roles = base_role_map()
    roles.update((name, Role.PSEUDO) for name in PSEUDO_VARIABLES)
    return assemble(ground, rows, options, roles)
