"""Exhaustive correctness and privacy checks, cost meters and the bridge to entropy vectors

Everything is enumerated under uniform messages and a uniform key. Enumerations above
ENUMERATION_LIMIT are refused, except for built-in schemes that are GF(p)-linear by construction
(tables never are): their correctness follows from the zero message and the unit message tuples,
and their entropies from ranks.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from ..bounds import BoundLine, PirParameters, TradeoffPoint, applicable_lines
from ..entropy import (
    ENTROPY_TOLERANCE,
    EntropyVector,
    GroundSet,
    JointDistribution,
    Number,
    entropy_vector_from_distribution,
    shannon_entropy_bits,
)
from ..errors import SchemeError, SizeGuardError
from .baseclass import Messages, PirScheme, Query, Symbols

LOGGER = logging.getLogger(__name__)
ENUMERATION_LIMIT = 10**7
EXHAUSTIVE = "exhaustive"
SUPERPOSITION = "superposition"


def _guard(what: str, count: int, limit: int) -> None:
    if count > limit:
        raise SizeGuardError(what, count, limit)


def _integer_root(value: int) -> Tuple[int, int]:
    """Smallest r with value = r^e, and e"""
    for exponent in range(value.bit_length(), 1, -1):
        guess = round(math.exp(math.log(value) / exponent))
        for candidate in (guess - 1, guess, guess + 1):
            if candidate >= 2 and candidate**exponent == value:
                return candidate, exponent
    return value, 1


def log_ratio(numerator: int, denominator: int) -> Number:
    """log(numerator)/log(denominator), exact when both are powers of a common integer"""
    if numerator == 1:
        return Fraction(0)
    base_num, exp_num = _integer_root(numerator)
    base_den, exp_den = _integer_root(denominator)
    if base_num == base_den:
        return Fraction(exp_num, exp_den)
    return math.log(numerator) / math.log(denominator)


def gf_rank(matrix: np.ndarray, prime: int) -> int:
    """Rank over GF(prime) by Gauss-Jordan elimination"""
    work = np.array(matrix, dtype=np.int64).reshape(matrix.shape) % prime
    num_rows, num_cols = work.shape
    rank = 0
    for col in range(num_cols):
        if rank == num_rows:
            break
        nonzero = np.flatnonzero(work[rank:, col])
        if nonzero.size == 0:
            continue
        pivot = rank + int(nonzero[0])
        work[[rank, pivot]] = work[[pivot, rank]]
        work[rank] = work[rank] * pow(int(work[rank, col]), -1, prime) % prime
        others = np.flatnonzero(work[:, col])
        others = others[others != rank]
        if others.size:
            work[others] = (work[others] - np.outer(work[others, col], work[rank])) % prime
        rank += 1
    return rank


def basis_message_tuples(scheme: PirScheme) -> List[Messages]:
    """The zero tuple followed by every unit tuple, in symbol order"""
    size = scheme.k * scheme.length
    tuples = [scheme.split([0] * size)]
    for position in range(size):
        unit = [0] * size
        unit[position] = 1
        tuples.append(scheme.split(unit))
    return tuples


@dataclass(frozen=True)
class Counterexample:
    """A protocol run that retrieved the wrong message; desired counts from zero"""

    messages: Messages
    key: int
    desired: int
    estimate: Symbols


@dataclass(frozen=True)
class CorrectnessReport:
    """Outcome of verify_correctness"""

    passed: bool
    cases: int
    method: str
    counterexample: Optional[Counterexample] = field(default=None)


@dataclass(frozen=True)
class PrivacyReport:
    """Exact query distribution per database and desired index, and the databases where they differ"""

    passed: bool
    distributions: Tuple[Tuple[Mapping[Query, Fraction], ...], ...]
    leaking: Tuple[int, ...] = field(default=())


@dataclass(frozen=True)
class DatabaseCosts:
    """Costs of one database in message units; beta_by_index holds β_n recomputed per desired index"""

    alpha: Number
    beta: Number
    alpha_info: Number
    beta_info: Number
    beta_by_index: Tuple[Number, ...]


@dataclass(frozen=True)
class CostReport:
    """Per-database costs and their averages"""

    per_database: Tuple[DatabaseCosts, ...]
    alpha: Number
    beta: Number
    alpha_info: Number
    beta_info: Number
    method: str

    def point(self) -> TradeoffPoint:
        """Operational (α, β); float costs enter as their exact binary value"""
        return TradeoffPoint(Fraction(self.alpha), Fraction(self.beta))

    def invariant_violations(self, tolerance: float = ENTROPY_TOLERANCE) -> List[str]:
        """Operational costs below informational ones, or download depending on the desired index"""
        problems = []
        for db, costs in enumerate(self.per_database):
            if costs.alpha < costs.alpha_info - tolerance:
                problems.append(f"database {db:d}: α_n={costs.alpha} below α′_n={costs.alpha_info}")
            if costs.beta < costs.beta_info - tolerance:
                problems.append(f"database {db:d}: β_n={costs.beta} below β′_n={costs.beta_info}")
            if len(set(costs.beta_by_index)) > 1:
                problems.append(f"database {db:d}: β_n depends on the desired index {costs.beta_by_index}")
        return problems


@dataclass(frozen=True)
class BoundCheck:
    """One bound line evaluated at a measured point"""

    line: BoundLine
    lhs: Fraction
    satisfied: bool


@dataclass(frozen=True)
class VerificationReport:
    """Correctness, privacy and costs of one scheme"""

    correctness: CorrectnessReport
    privacy: PrivacyReport
    costs: CostReport
    bounds: Tuple[BoundCheck, ...] = field(default=())

    @property
    def passed(self) -> bool:
        """Correct, private, cost invariants hold and no outer bound is violated"""
        return (
            self.correctness.passed
            and self.privacy.passed
            and not self.costs.invariant_violations()
            and all(check.satisfied for check in self.bounds)
        )


def verify_correctness(scheme: PirScheme, limit: int = ENUMERATION_LIMIT) -> CorrectnessReport:
    """Every (message tuple, key, desired index) retrieves the desired message; the first failure
    in lexicographic order is reported"""
    runs = scheme.key_space_size * scheme.k
    count = scheme.message_tuple_count * runs
    if count <= limit:
        method, candidates = EXHAUSTIVE, scheme.message_tuples()
    elif scheme.linear is not None:
        count = (scheme.k * scheme.length + 1) * runs
        _guard("linear protocol runs", count, limit)
        method, candidates = SUPERPOSITION, iter(basis_message_tuples(scheme))
    else:
        raise SizeGuardError("protocol runs", count, limit)
    for messages in candidates:
        for desired in range(scheme.k):
            for key in range(scheme.key_space_size):
                estimate = scheme.retrieve(messages, desired, key)
                if estimate != messages[desired]:
                    LOGGER.info("{}: wrong message for desired index {} under key {}".format(scheme.name, desired, key))
                    return CorrectnessReport(False, count, method, Counterexample(messages, key, desired, estimate))
    LOGGER.info("{}: {} protocol runs correct ({})".format(scheme.name, count, method))
    return CorrectnessReport(True, count, method)


def query_distribution(scheme: PirScheme, db: int, desired: int) -> Dict[Query, Fraction]:
    """Exact distribution of the query to database db under the uniform key"""
    keys = scheme.key_space_size
    counts = Counter(scheme.query(db, desired, key) for key in range(keys))
    return {query: Fraction(counts[query], keys) for query in sorted(counts)}


def verify_privacy(scheme: PirScheme, limit: int = ENUMERATION_LIMIT) -> PrivacyReport:
    """Each database sees the same query distribution whatever message is wanted"""
    _guard("query evaluations", scheme.key_space_size * scheme.k * scheme.n, limit)
    distributions = tuple(
        tuple(query_distribution(scheme, db, desired) for desired in range(scheme.k)) for db in range(scheme.n)
    )
    leaking = tuple(db for db, per_index in enumerate(distributions) if any(dist != per_index[0] for dist in per_index))
    LOGGER.info("{}: privacy {}".format(scheme.name, "holds" if not leaking else f"broken at databases {leaking}"))
    return PrivacyReport(not leaking, distributions, leaking)


def _entropy_units(scheme: PirScheme, values: Iterable[Tuple[int, ...]]) -> float:
    counts = Counter(values)
    total = sum(counts.values())
    bits = shannon_entropy_bits(Fraction(count, total) for count in counts.values())
    return bits / (scheme.length * math.log2(scheme.message_alphabet))


def _rank_units(scheme: PirScheme, images: Sequence[Tuple[int, ...]]) -> Fraction:
    """Entropy of a GF(p)-linear function from its images of the unit tuples"""
    assert scheme.linear is not None
    width = len(images[0]) if images else 0
    matrix = np.array(images, dtype=np.int64).reshape(len(images), width).T
    return Fraction(gf_rank(matrix, scheme.linear), scheme.length)


def _mean(values: Sequence[Number]) -> Number:
    return sum(values, Fraction(0)) / len(values)


def measure_costs(scheme: PirScheme, limit: int = ENUMERATION_LIMIT) -> CostReport:
    """Operational costs from the declared sizes and informational ones from entropies, in
    units of one message"""
    if scheme.message_tuple_count <= limit:
        method = EXHAUSTIVE
        all_messages = list(scheme.message_tuples())
    elif scheme.linear is not None:
        method = SUPERPOSITION
        units = basis_message_tuples(scheme)[1:]
    else:
        raise SizeGuardError("message tuples", scheme.message_tuple_count, limit)
    assert scheme.answer_alphabet is not None
    answer_ratio = log_ratio(scheme.answer_alphabet, scheme.message_alphabet)
    keys = scheme.key_space_size
    per_database = []
    for db in range(scheme.n):
        alpha = log_ratio(scheme.storage_sizes[db], scheme.message_alphabet) / scheme.length
        beta_by_index = tuple(
            Fraction(sum(scheme.answer_length(db, scheme.query(db, desired, key)) for key in range(keys)), keys)
            * answer_ratio
            / scheme.length
            for desired in range(scheme.k)
        )
        answer_entropy: Dict[Query, Number] = {}
        if method == EXHAUSTIVE:
            stored = [scheme.store(db, messages) for messages in all_messages]
            alpha_info: Number = _entropy_units(scheme, stored)
            for query in scheme.queries(db):
                answer_entropy[query] = _entropy_units(scheme, (scheme.answer(db, query, s) for s in stored))
        else:
            unit_storage = [scheme.store(db, messages) for messages in units]
            alpha_info = _rank_units(scheme, unit_storage)
            for query in scheme.queries(db):
                answer_entropy[query] = _rank_units(scheme, [scheme.answer(db, query, s) for s in unit_storage])
        beta_info = sum(
            (Fraction(1, keys) * answer_entropy[scheme.query(db, 0, key)] for key in range(keys)), Fraction(0)
        )
        per_database.append(DatabaseCosts(alpha, beta_by_index[0], alpha_info, beta_info, beta_by_index))
    report = CostReport(
        tuple(per_database),
        _mean([costs.alpha for costs in per_database]),
        _mean([costs.beta for costs in per_database]),
        _mean([costs.alpha_info for costs in per_database]),
        _mean([costs.beta_info for costs in per_database]),
        method,
    )
    LOGGER.info("{}: alpha={} beta={} ({})".format(scheme.name, report.alpha, report.beta, method))
    return report


def check_point(params: PirParameters, point: TradeoffPoint) -> Tuple[BoundCheck, ...]:
    """Every applicable bound line evaluated at the point"""
    checks = []
    for line in applicable_lines(params):
        lhs = line.lhs(point)
        checks.append(BoundCheck(line, lhs, lhs >= line.rhs))
        if lhs < line.rhs:
            LOGGER.warning("point ({}, {}) violates {}".format(point.alpha, point.beta, line.render()))
    return tuple(checks)


def verify_scheme(scheme: PirScheme, limit: int = ENUMERATION_LIMIT) -> VerificationReport:
    """Correctness, privacy, costs and the outer bounds at the measured point"""
    costs = measure_costs(scheme, limit)
    bounds = check_point(PirParameters(scheme.n, scheme.k), costs.point())
    return VerificationReport(verify_correctness(scheme, limit), verify_privacy(scheme, limit), costs, bounds)


@dataclass(frozen=True)
class MessageVariable:
    """Message W_index"""

    index: int


@dataclass(frozen=True)
class StorageVariable:
    """Content S_db of a database"""

    db: int


@dataclass(frozen=True)
class AnswerVariable:
    """Answer of database db to a fixed query, or to the query for (desired, key) with the key fixed"""

    db: int
    query: Optional[Query] = field(default=None)
    desired: Optional[int] = field(default=None)
    key: Optional[int] = field(default=None)

    def resolve(self, scheme: PirScheme) -> Query:
        """The fixed query this variable answers"""
        if self.query is not None:
            query = tuple(self.query)
        elif self.desired is not None and self.key is not None:
            query = scheme.query(self.db, self.desired, self.key)
        else:
            raise SchemeError(f"answer of database {self.db:d} depends on the random key, fix a query or a key")
        if query not in scheme.queries(self.db):
            raise SchemeError(f"database {self.db:d} never receives the query {query}")
        return query


BridgeVariable = Union[MessageVariable, StorageVariable, AnswerVariable]


def scheme_entropy_bridge(
    scheme: PirScheme, selection: Mapping[str, BridgeVariable], limit: int = ENUMERATION_LIMIT
) -> EntropyVector:
    """Entropy vector, in message units, of the selected message-determined variables under
    uniform messages; the selection order fixes the ground set order"""
    if not selection:
        raise SchemeError("empty variable selection")
    _guard("message tuples", scheme.message_tuple_count, limit)
    queries = {
        label: variable.resolve(scheme) for label, variable in selection.items() if isinstance(variable, AnswerVariable)
    }
    rows = []
    for messages in scheme.message_tuples():
        row = []
        for label, variable in selection.items():
            if isinstance(variable, MessageVariable):
                row.append(messages[variable.index])
            elif isinstance(variable, StorageVariable):
                row.append(scheme.store(variable.db, messages))
            else:
                row.append(scheme.answer(variable.db, queries[label], scheme.store(variable.db, messages)))
        rows.append(tuple(row))
    codebooks = [sorted({row[pos] for row in rows}) for pos in range(len(selection))]
    lookup = [{value: idx for idx, value in enumerate(book)} for book in codebooks]
    outcomes = [tuple(lookup[pos][value] for pos, value in enumerate(row)) for row in rows]
    distribution = JointDistribution.from_outcomes(
        GroundSet(tuple(selection)), [len(book) for book in codebooks], outcomes
    )
    return entropy_vector_from_distribution(distribution, unit_bits=scheme.length * math.log2(scheme.message_alphabet))
