"""Entropy vectors and information expressions over a finite ground set of random variables.

Each variable of the ground set is identified with its position i, a nonempty subset with the
bitmask that has bit i set for every member, e.g. for the ground set (W1, W2, X1, X2)::

        13 = 1101₂ ~ H(W1,X1,X2)

H(∅) is zero and has no coordinate. All entropies are in normalized message units
(L·log2|X| = 1). Linear forms keep exact rational coefficients, distribution-derived entropies
are floats (logarithms of rationals are irrational) and compare with ENTROPY_TOLERANCE.
"""

from __future__ import annotations

import enum
import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import DistributionError, EvaluationError, ExpressionError

LOGGER = logging.getLogger(__name__)
MAX_GROUND_SIZE = 24
ENTROPY_TOLERANCE = 1e-9

SubsetId = int
Number = Union[Fraction, float]
Rational = Union[Fraction, int]


def _insert_zero_bit(pool: int, bit_index: int) -> int:
    """Insert a zero bit at specified position."""
    bit = 1 << bit_index
    left = (pool & ~(bit - 1)) << 1
    right = pool & (bit - 1)
    return left | right


@dataclass(frozen=True)
class GroundSet:
    """Ordered set of distinct random variable labels, the order fixes the bit positions"""

    names: Tuple[str, ...]

    def __post_init__(self) -> None:
        """Validate size and uniqueness"""
        object.__setattr__(self, "names", tuple(self.names))
        if not 1 <= len(self.names) <= MAX_GROUND_SIZE:
            raise ExpressionError(f"ground set size must be between 1 and {MAX_GROUND_SIZE:d}, got {len(self.names):d}")
        seen = set()
        for name in self.names:
            if not name:
                raise ExpressionError("variable labels must be nonempty")
            if name in seen:
                raise ExpressionError("duplicate variable label", name)
            seen.add(name)

    @property
    def size(self) -> int:
        """Number of variables"""
        return len(self.names)

    @property
    def full_mask(self) -> SubsetId:
        """Mask of the whole ground set"""
        return (1 << len(self.names)) - 1

    def index(self, label: str) -> int:
        """Bit position of the label"""
        try:
            return self.names.index(label)
        except ValueError:
            raise ExpressionError("unknown variable label", label) from None

    def mask(self, labels: Iterable[str]) -> SubsetId:
        """Mask of the given labels, may be 0 for an empty selection"""
        result = 0
        for label in labels:
            result |= 1 << self.index(label)
        return result

    def labels(self, mask: SubsetId) -> Tuple[str, ...]:
        """Labels selected by the mask, in ground set order"""
        self.check_mask(mask, allow_empty=True)
        return tuple(name for idx, name in enumerate(self.names) if mask & (1 << idx))

    def check_mask(self, mask: SubsetId, allow_empty: bool = False) -> None:
        """Raise if the mask is not a valid subset id"""
        low = 0 if allow_empty else 1
        if not low <= mask <= self.full_mask:
            raise ExpressionError(f"subset mask {mask:d} out of range for {self.size:d} variables")

    def subsets(self) -> range:
        """All nonempty subset ids in ascending order"""
        return range(1, self.full_mask + 1)

    def render(self, mask: SubsetId) -> str:
        """Comma separated labels of the subset"""
        return ",".join(self.labels(mask))

    def extend(self, *names: str) -> GroundSet:
        """New ground set with the extra labels appended, existing bit positions are kept"""
        return GroundSet(self.names + tuple(names))


def _clean(terms: Mapping[SubsetId, Rational]) -> Dict[SubsetId, Fraction]:
    return {key: Fraction(value) for key, value in sorted(terms.items()) if value != 0}


def _clean_scalars(terms: Mapping[str, Rational]) -> Dict[str, Fraction]:
    return {key: Fraction(value) for key, value in sorted(terms.items()) if value != 0}


@dataclass(frozen=True, eq=True)
class LinearForm:
    """Sparse rational linear functional over entropy coordinates and named scalars, plus a constant

    Absent keys mean coefficient zero, zero coefficients are never stored so that equality of
    two forms is coefficient-exact equality."""

    entropy_terms: Mapping[SubsetId, Fraction] = field(default_factory=dict)
    scalar_terms: Mapping[str, Fraction] = field(default_factory=dict)
    constant: Fraction = field(default=Fraction(0))

    def __post_init__(self) -> None:
        """Normalize to exact rationals without zero entries"""
        object.__setattr__(self, "entropy_terms", _clean(self.entropy_terms))
        object.__setattr__(self, "scalar_terms", _clean_scalars(self.scalar_terms))
        object.__setattr__(self, "constant", Fraction(self.constant))

    @classmethod
    def entropy(cls, mask: SubsetId, coefficient: Rational = 1) -> LinearForm:
        """Single joint entropy term"""
        return cls(entropy_terms={mask: coefficient})

    @classmethod
    def scalar(cls, name: str, coefficient: Rational = 1) -> LinearForm:
        """Single scalar term"""
        return cls(scalar_terms={name: coefficient})

    @classmethod
    def const(cls, value: Rational) -> LinearForm:
        """Constant form"""
        return cls(constant=Fraction(value))

    def is_zero(self) -> bool:
        """True when every coefficient and the constant vanish"""
        return not self.entropy_terms and not self.scalar_terms and self.constant == 0

    def homogeneous(self) -> LinearForm:
        """Same form without the constant"""
        return LinearForm(self.entropy_terms, self.scalar_terms)

    def __add__(self, other: LinearForm) -> LinearForm:
        if not isinstance(other, LinearForm):
            return NotImplemented
        entropy_terms: Dict[SubsetId, Fraction] = dict(self.entropy_terms)
        for key, value in other.entropy_terms.items():
            entropy_terms[key] = entropy_terms.get(key, Fraction(0)) + value
        scalar_terms: Dict[str, Fraction] = dict(self.scalar_terms)
        for name, value in other.scalar_terms.items():
            scalar_terms[name] = scalar_terms.get(name, Fraction(0)) + value
        return LinearForm(entropy_terms, scalar_terms, self.constant + other.constant)

    def __neg__(self) -> LinearForm:
        return self * -1

    def __sub__(self, other: LinearForm) -> LinearForm:
        if not isinstance(other, LinearForm):
            return NotImplemented
        return self + (-other)

    def __mul__(self, factor: Rational) -> LinearForm:
        if not isinstance(factor, (int, Fraction)):
            return NotImplemented
        factor = Fraction(factor)
        return LinearForm(
            {key: value * factor for key, value in self.entropy_terms.items()},
            {name: value * factor for name, value in self.scalar_terms.items()},
            self.constant * factor,
        )

    __rmul__ = __mul__

    def render(self, ground: GroundSet) -> str:
        """Human readable rendering, entropy terms in ascending mask order"""
        parts = [f"{_signed(value)}*H({ground.render(mask)})" for mask, value in self.entropy_terms.items()]
        parts += [f"{_signed(value)}*{name}" for name, value in self.scalar_terms.items()]
        if self.constant != 0 or not parts:
            parts.append(_signed(self.constant))
        return " ".join(parts)


def _signed(value: Fraction) -> str:
    return f"+{value}" if value >= 0 else str(value)


def linear_sum(forms: Iterable[Tuple[Rational, LinearForm]]) -> LinearForm:
    """Weighted sum of forms, accumulated in place to avoid quadratic copying"""
    entropy_terms: Dict[SubsetId, Fraction] = defaultdict(Fraction)
    scalar_terms: Dict[str, Fraction] = defaultdict(Fraction)
    constant = Fraction(0)
    for weight, form in forms:
        if weight == 0:
            continue
        for key, value in form.entropy_terms.items():
            entropy_terms[key] += weight * value
        for name, value in form.scalar_terms.items():
            scalar_terms[name] += weight * value
        constant += weight * form.constant
    return LinearForm(entropy_terms, scalar_terms, constant)


class Sense(enum.Enum):
    """Constraint sense, the form is compared against zero"""

    GE = ">=0"
    EQ = "=0"


@dataclass(frozen=True)
class Constraint:
    """A linear form constrained to be nonnegative or zero, the tag names its origin"""

    form: LinearForm
    sense: Sense
    tag: str

    def __post_init__(self) -> None:
        """Tags are the join key of certificates, they must be present"""
        if not self.tag:
            raise ExpressionError("constraint tag must be nonempty")


def _disjoint_masks(ground: GroundSet, *groups: Sequence[str]) -> Tuple[SubsetId, ...]:
    masks = []
    seen = set()
    for group in groups:
        mask = 0
        for label in group:
            bit = 1 << ground.index(label)
            if label in seen:
                raise ExpressionError("variable sets overlap", label)
            seen.add(label)
            mask |= bit
        masks.append(mask)
    return tuple(masks)


def compile_conditional_entropy(ground: GroundSet, a: Sequence[str], b: Sequence[str] = ()) -> LinearForm:
    """H(A|B) = H(A∪B) − H(B)"""
    if not a:
        raise ExpressionError("conditional entropy needs a nonempty first argument")
    mask_a, mask_b = _disjoint_masks(ground, a, b)
    terms: Dict[SubsetId, int] = {mask_a | mask_b: 1}
    if mask_b:
        terms[mask_b] = -1
    return LinearForm(entropy_terms=terms)


def compile_conditional_mutual_information(
    ground: GroundSet, a: Sequence[str], b: Sequence[str], c: Sequence[str] = ()
) -> LinearForm:
    """I(A;B|C) = H(A∪C) + H(B∪C) − H(A∪B∪C) − H(C)"""
    if not a or not b:
        raise ExpressionError("mutual information needs nonempty first and second arguments")
    mask_a, mask_b, mask_c = _disjoint_masks(ground, a, b, c)
    terms: Dict[SubsetId, int] = defaultdict(int)
    terms[mask_a | mask_c] += 1
    terms[mask_b | mask_c] += 1
    terms[mask_a | mask_b | mask_c] -= 1
    if mask_c:
        terms[mask_c] -= 1
    return LinearForm(entropy_terms=terms)


def elemental_count(num_vars: int) -> int:
    """Number of elemental inequalities on num_vars variables: n + C(n,2)·2^(n−2)"""
    if num_vars < 1:
        raise ExpressionError(f"invalid number of variables: {num_vars:d}")
    if num_vars == 1:
        return 1
    return num_vars + math.comb(num_vars, 2) * (1 << (num_vars - 2))


def iter_elemental_inequalities(ground: GroundSet) -> Iterator[Constraint]:
    """Iterate all elemental inequalities, conditional entropies first, then conditional mutual
    informations per pair (a < b) with the conditioning set in ascending mask order"""
    num_vars = ground.size
    full = ground.full_mask
    for a in range(num_vars):
        rest = full ^ (1 << a)
        terms: Dict[SubsetId, int] = {full: 1}
        if rest:
            terms[rest] = -1
        rest_label = f"|{ground.render(rest)}" if rest else ""
        yield Constraint(LinearForm(terms), Sense.GE, f"elemental:H({ground.names[a]}{rest_label})>=0")
    if num_vars < 2:
        return
    sub = 1 << (num_vars - 2)
    for a in range(num_vars - 1):
        for b in range(a + 1, num_vars):
            bit_a = 1 << a
            bit_b = 1 << b
            for i in range(sub):
                cond = _insert_zero_bit(_insert_zero_bit(i, a), b)
                terms = {bit_a | cond: 1, bit_b | cond: 1, bit_a | bit_b | cond: -1}
                if cond:
                    terms[cond] = -1
                cond_label = f"|{ground.render(cond)}" if cond else ""
                tag = f"elemental:I({ground.names[a]};{ground.names[b]}{cond_label})>=0"
                yield Constraint(LinearForm(terms), Sense.GE, tag)


def elemental_inequalities(ground: GroundSet) -> List[Constraint]:
    """The elemental Shannon-type inequalities generating the polymatroid cone"""
    result = list(iter_elemental_inequalities(ground))
    LOGGER.debug("generated {} elemental inequalities on {} variables".format(len(result), ground.size))
    return result


@dataclass(frozen=True)
class JointDistribution:
    """Probability table over outcome tuples, one coordinate per ground set variable"""

    ground: GroundSet
    alphabet_sizes: Tuple[int, ...]
    table: Mapping[Tuple[int, ...], Fraction]

    def __post_init__(self) -> None:
        """Validate alphabets and probabilities, drop zero entries"""
        object.__setattr__(self, "alphabet_sizes", tuple(self.alphabet_sizes))
        if len(self.alphabet_sizes) != self.ground.size:
            raise DistributionError(
                f"{len(self.alphabet_sizes):d} alphabet sizes declared for {self.ground.size:d} variables"
            )
        if any(size < 1 for size in self.alphabet_sizes):
            raise DistributionError("alphabet sizes must be positive")
        cleaned: Dict[Tuple[int, ...], Fraction] = {}
        total = Fraction(0)
        for outcome, probability in sorted(self.table.items()):
            probability = Fraction(probability)
            if probability < 0:
                raise DistributionError(f"negative probability {probability} for outcome {outcome}")
            if len(outcome) != self.ground.size or any(
                not 0 <= value < size for value, size in zip(outcome, self.alphabet_sizes)
            ):
                raise DistributionError(f"outcome {outcome} outside the declared alphabets")
            total += probability
            if probability:
                cleaned[tuple(outcome)] = probability
        if total != 1:
            raise DistributionError(f"probabilities sum to {total}, not 1")
        object.__setattr__(self, "table", cleaned)

    @classmethod
    def from_outcomes(
        cls, ground: GroundSet, alphabet_sizes: Sequence[int], outcomes: Iterable[Sequence[int]]
    ) -> JointDistribution:
        """Equiprobable distribution over the listed outcomes, repeated outcomes add up"""
        counts: Dict[Tuple[int, ...], int] = defaultdict(int)
        total = 0
        for outcome in outcomes:
            counts[tuple(outcome)] += 1
            total += 1
        if not total:
            raise DistributionError("no outcomes given")
        return cls(ground, tuple(alphabet_sizes), {key: Fraction(value, total) for key, value in counts.items()})

    def marginal(self, mask: SubsetId) -> Dict[Tuple[int, ...], Fraction]:
        """Exact marginal over the variables of the mask"""
        self.ground.check_mask(mask)
        positions = [idx for idx in range(self.ground.size) if mask & (1 << idx)]
        result: Dict[Tuple[int, ...], Fraction] = defaultdict(Fraction)
        for outcome, probability in self.table.items():
            result[tuple(outcome[idx] for idx in positions)] += probability
        return dict(result)


def shannon_entropy_bits(probabilities: Iterable[Fraction]) -> float:
    """Entropy in bits of a probability vector given as exact rationals"""
    values = np.array([float(p) for p in probabilities if p], dtype=np.float64)
    if values.size == 0:
        return 0.0
    return float(max(0.0, -np.sum(values * np.log2(values))))


@dataclass(frozen=True)
class EntropyVector:
    """Joint entropy for every nonempty subset of the ground set"""

    ground: GroundSet
    values: Mapping[SubsetId, Number]

    def __post_init__(self) -> None:
        """Every coordinate must be present and nonnegative"""
        values = dict(self.values)
        for mask in self.ground.subsets():
            if mask not in values:
                raise EvaluationError(f"H({self.ground.render(mask)})")
            if values[mask] < 0:
                raise ExpressionError(f"negative entropy {values[mask]} for subset", self.ground.render(mask))
        if len(values) != self.ground.full_mask:
            raise ExpressionError("entropy vector has coordinates outside the ground set")
        object.__setattr__(self, "values", values)

    def __getitem__(self, mask: SubsetId) -> Number:
        if mask == 0:
            return Fraction(0)
        return self.values[mask]

    def h(self, *labels: str) -> Number:
        """Joint entropy of the labelled variables"""
        return self[self.ground.mask(labels)]


def entropy_vector_from_distribution(distribution: JointDistribution, unit_bits: float = 1.0) -> EntropyVector:
    """Joint entropies of every marginal, in bits divided by unit_bits"""
    if unit_bits <= 0:
        raise DistributionError("normalization unit must be positive")
    values: Dict[SubsetId, Number] = {}
    for mask in distribution.ground.subsets():
        values[mask] = shannon_entropy_bits(distribution.marginal(mask).values()) / unit_bits
    LOGGER.debug(
        "entropy vector over {} variables from {} outcomes".format(distribution.ground.size, len(distribution.table))
    )
    return EntropyVector(distribution.ground, values)


def evaluate(form: LinearForm, vector: EntropyVector, scalars: Optional[Mapping[str, Number]] = None) -> Number:
    """Inner product of the form with the vector and scalar assignment, plus the constant"""
    result: Number = form.constant
    for mask, coefficient in form.entropy_terms.items():
        if not 1 <= mask <= vector.ground.full_mask:
            raise EvaluationError(f"subset {mask:d}")
        result = result + coefficient * vector[mask]
    bound = scalars or {}
    for name, coefficient in form.scalar_terms.items():
        if name not in bound:
            raise EvaluationError(name)
        result = result + coefficient * bound[name]
    return result


def violated_constraints(
    constraints: Iterable[Constraint],
    vector: EntropyVector,
    scalars: Optional[Mapping[str, Number]] = None,
    tolerance: float = ENTROPY_TOLERANCE,
) -> List[str]:
    """Tags of the constraints the point does not satisfy within tolerance"""
    violated = []
    for constraint in constraints:
        value = evaluate(constraint.form, vector, scalars)
        if constraint.sense is Sense.GE and value < -tolerance:
            violated.append(constraint.tag)
        elif constraint.sense is Sense.EQ and abs(value) > tolerance:
            violated.append(constraint.tag)
    return violated
