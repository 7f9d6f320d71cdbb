"""Closed-form storage/download outer bounds, evaluated in exact rational arithmetic

Costs are in message units: α is the storage per database, β the expected download per
database, both divided by the size of one message.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from .errors import ParameterError

LOGGER = logging.getLogger(__name__)
RationalInput = Union[Fraction, int, str]


class Provenance(enum.Enum):
    """Which result a bound line comes from"""

    STORAGE = "storage"
    CAPACITY = "capacity"
    THEOREM1 = "theorem1"
    THEOREM2 = "theorem2"
    THEOREM3 = "theorem3"


@dataclass(frozen=True)
class PirParameters:
    """N databases holding K messages"""

    n: int
    k: int

    def __post_init__(self) -> None:
        """Both counts are positive integers"""
        for name, value in (("N", self.n), ("K", self.k)):
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ParameterError(f"{name} must be a positive integer", **{name: value})

    @property
    def n_pow_k(self) -> int:
        """N^K as an exact integer"""
        return self.n**self.k

    @property
    def min_storage(self) -> Fraction:
        """K/N, the messages have to be stored somewhere"""
        return Fraction(self.k, self.n)


@dataclass(frozen=True)
class TradeoffPoint:
    """A (storage, download) pair"""

    alpha: Fraction
    beta: Fraction

    def __post_init__(self) -> None:
        """Costs are nonnegative"""
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        object.__setattr__(self, "beta", Fraction(self.beta))
        if self.alpha < 0 or self.beta < 0:
            raise ParameterError("costs must be nonnegative", alpha=self.alpha, beta=self.beta)


@dataclass(frozen=True)
class BoundLine:
    """c_α·α + c_β·β ≥ rhs"""

    c_alpha: Fraction
    c_beta: Fraction
    rhs: Fraction
    provenance: Provenance

    def __post_init__(self) -> None:
        """At least one coefficient is nonzero, both are nonnegative"""
        for name in ("c_alpha", "c_beta", "rhs"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.c_alpha < 0 or self.c_beta < 0 or (self.c_alpha == 0 and self.c_beta == 0):
            raise ParameterError("invalid bound line coefficients", c_alpha=self.c_alpha, c_beta=self.c_beta)

    def lhs(self, point: TradeoffPoint) -> Fraction:
        """c_α·α + c_β·β at the point"""
        return self.c_alpha * point.alpha + self.c_beta * point.beta

    def satisfied_by(self, point: TradeoffPoint) -> bool:
        """True when the point lies on the feasible side"""
        return self.lhs(point) >= self.rhs

    def min_alpha(self, beta: Fraction) -> Optional[Fraction]:
        """Smallest α the line allows at this β, None for lines not involving α"""
        if self.c_alpha == 0:
            return None
        return (self.rhs - self.c_beta * Fraction(beta)) / self.c_alpha

    def min_beta(self, alpha: Fraction) -> Optional[Fraction]:
        """Smallest β the line allows at this α, None for lines not involving β"""
        if self.c_beta == 0:
            return None
        return (self.rhs - self.c_alpha * Fraction(alpha)) / self.c_beta

    def render(self) -> str:
        """e.g. '3·α + 8·β ≥ 10'"""
        parts = [f"{value}·{name}" for value, name in ((self.c_alpha, "α"), (self.c_beta, "β")) if value]
        return f"{' + '.join(parts)} ≥ {self.rhs}"


@dataclass(frozen=True)
class BetaBound:
    """Lower bound on β at a storage level and which constraint is the binding one"""

    value: Fraction
    theorem1: Fraction
    capacity: Optional[Fraction]
    binding: Provenance


@dataclass(frozen=True)
class EnvelopePoint:
    """Outer envelope sample: lowest α allowed at β and the lines attaining it"""

    beta: Fraction
    alpha_lower: Fraction
    binding: Tuple[Provenance, ...] = field(default=())


def parse_rational(text: RationalInput) -> Fraction:
    """Integers and 'p/q' only, decimal inputs are refused so the pipeline stays exact"""
    if isinstance(text, (Fraction, int)) and not isinstance(text, bool):
        return Fraction(text)
    candidate = str(text).strip()
    body = candidate.lstrip("+-")
    if not body or any(not part.isdigit() for part in body.split("/", 1)):
        raise ParameterError(f"'{candidate}' is not an integer or p/q rational")
    try:
        return Fraction(candidate)
    except ZeroDivisionError:
        raise ParameterError(f"'{candidate}' has a zero denominator") from None


def capacity_beta(params: PirParameters) -> Fraction:
    """(N^K − 1)/(N^K·(N − 1)), the smallest download of any private scheme"""
    if params.n < 2:
        raise ParameterError("capacity needs at least two databases", N=params.n)
    power = params.n_pow_k
    return Fraction(power - 1, power * (params.n - 1))


def storage_line(params: PirParameters) -> BoundLine:
    """α ≥ K/N"""
    return BoundLine(Fraction(1), Fraction(0), params.min_storage, Provenance.STORAGE)


def capacity_line(params: PirParameters) -> BoundLine:
    """β ≥ capacity"""
    return BoundLine(Fraction(0), Fraction(1), capacity_beta(params), Provenance.CAPACITY)


def theorem1_line(params: PirParameters) -> BoundLine:
    """(N − 1)·α + β ≥ K"""
    return BoundLine(Fraction(params.n - 1), Fraction(1), Fraction(params.k), Provenance.THEOREM1)


def theorem1_min_beta(params: PirParameters, alpha: RationalInput) -> BetaBound:
    """Smallest β allowed by the cut-set-like line and by capacity, capacity wins ties"""
    alpha = parse_rational(alpha)
    if alpha < params.min_storage:
        raise ParameterError("storage below K/N cannot hold the messages", alpha=alpha, N=params.n, K=params.k)
    line_value = theorem1_line(params).min_beta(alpha)
    assert line_value is not None
    if params.n == 1:
        return BetaBound(line_value, line_value, None, Provenance.THEOREM1)
    capacity = capacity_beta(params)
    if capacity >= line_value:
        return BetaBound(capacity, line_value, capacity, Provenance.CAPACITY)
    return BetaBound(line_value, line_value, capacity, Provenance.THEOREM1)


def _require_theorem2(params: PirParameters) -> None:
    if params.n < 3:
        raise ParameterError("the bound needs N >= 3", N=params.n)


def theorem2_line(params: PirParameters) -> BoundLine:
    """(α + (N−1)·β)/(N−2) + N^(K−1)·β ≥ K/(N−2) + (N^K − 1)/(N·(N−1))"""
    _require_theorem2(params)
    n = params.n
    c_beta = Fraction(n - 1, n - 2) + n ** (params.k - 1)
    rhs = Fraction(params.k, n - 2) + Fraction(params.n_pow_k - 1, n * (n - 1))
    return BoundLine(Fraction(1, n - 2), c_beta, rhs, Provenance.THEOREM2)


def theorem2_min_alpha(params: PirParameters, beta: RationalInput) -> Fraction:
    """K + (N−2)(N^K − 1)/(N(N−1)) − ((N−1) + (N−2)·N^(K−1))·β"""
    _require_theorem2(params)
    beta = parse_rational(beta)
    if beta < 0:
        raise ParameterError("download must be nonnegative", beta=beta)
    n = params.n
    return (
        params.k
        + Fraction((n - 2) * (params.n_pow_k - 1), n * (n - 1))
        - ((n - 1) + (n - 2) * n ** (params.k - 1)) * beta
    )


def _require_two_by_two(params: Optional[PirParameters]) -> None:
    if params is not None and (params.n, params.k) != (2, 2):
        raise ParameterError("the bound is only established for N = K = 2", N=params.n, K=params.k)


def theorem3_line(params: Optional[PirParameters] = None) -> BoundLine:
    """3·α + 8·β ≥ 10 for two databases and two messages"""
    _require_two_by_two(params)
    return BoundLine(Fraction(3), Fraction(8), Fraction(10), Provenance.THEOREM3)


def min_storage_point(params: PirParameters) -> TradeoffPoint:
    """At minimum storage the download cannot drop below K/N"""
    return TradeoffPoint(params.min_storage, params.min_storage)


def storage_at_capacity(params: PirParameters) -> Fraction:
    """Storage needed at the capacity point, K − (N^K − 1)/N^K > K − 1"""
    return theorem2_min_alpha(params, capacity_beta(params))


def two_by_two_storage_at_capacity() -> Fraction:
    """Storage needed by capacity-achieving codes for N = K = 2"""
    alpha = theorem3_line().min_alpha(capacity_beta(PirParameters(2, 2)))
    assert alpha is not None
    return alpha


def applicable_lines(params: PirParameters) -> List[BoundLine]:
    """Every line that holds for these parameters"""
    lines = [storage_line(params), theorem1_line(params)]
    if params.n >= 2:
        lines.append(capacity_line(params))
    if params.n >= 3:
        lines.append(theorem2_line(params))
    if (params.n, params.k) == (2, 2):
        lines.append(theorem3_line(params))
    return lines


def theorem1_region_minimum(
    params: PirParameters, c_alpha: RationalInput, c_beta: RationalInput
) -> Tuple[Fraction, TradeoffPoint]:
    """Minimum of c_α·α + c_β·β over {α ≥ K/N, β ≥ capacity, (N−1)·α + β ≥ K}"""
    c_alpha, c_beta = parse_rational(c_alpha), parse_rational(c_beta)
    if c_alpha < 0 or c_beta < 0:
        raise ParameterError("objective weights must be nonnegative", c_alpha=c_alpha, c_beta=c_beta)
    corner = min_storage_point(params)
    if params.n == 1:
        vertices = [TradeoffPoint(params.min_storage, Fraction(params.k))]
    else:
        capacity = capacity_beta(params)
        vertices = [corner, TradeoffPoint((params.k - capacity) / (params.n - 1), capacity)]
    return min(((c_alpha * point.alpha + c_beta * point.beta, point) for point in vertices), key=lambda item: item[0])


def envelope_at(lines: Sequence[BoundLine], beta: Fraction) -> EnvelopePoint:
    """Largest α lower bound among the lines at β"""
    candidates = [(line.min_alpha(beta), line.provenance) for line in lines]
    values = [(value, provenance) for value, provenance in candidates if value is not None]
    best = max(value for value, _ in values)
    return EnvelopePoint(beta, best, tuple(provenance for value, provenance in values if value == best))


def outer_envelope(params: PirParameters, samples: int) -> List[EnvelopePoint]:
    """Samples uniform in β from capacity to K/N, both ends included; the part beyond K/N, where
    α = K/N, is not sampled (curve_document records it separately)"""
    if samples < 2:
        raise ParameterError("the envelope needs at least two samples", samples=samples)
    if params.n < 2:
        raise ParameterError("the tradeoff needs at least two databases", N=params.n)
    lines = applicable_lines(params)
    low, high = capacity_beta(params), params.min_storage
    points = [envelope_at(lines, low + (high - low) * Fraction(step, samples - 1)) for step in range(samples)]
    LOGGER.debug("outer envelope for N={} K={}: {} samples".format(params.n, params.k, len(points)))
    return points
