"""Closed-form outer bounds and the outer envelope"""

from fractions import Fraction

import pytest

from pirbounds.bounds import (
    BoundLine,
    PirParameters,
    Provenance,
    TradeoffPoint,
    applicable_lines,
    capacity_beta,
    min_storage_point,
    storage_at_capacity,
    two_by_two_storage_at_capacity,
    envelope_at,
    outer_envelope,
    parse_rational,
    theorem1_line,
    theorem1_min_beta,
    theorem2_line,
    theorem2_min_alpha,
    theorem3_line,
)
from pirbounds.errors import ParameterError


@pytest.mark.parametrize(
    "n,k,expected",
    [
        (2, 2, Fraction(3, 4)),
        (2, 1, Fraction(1, 2)),
        (3, 2, Fraction(4, 9)),
        (6, 10, Fraction(1, 5) - Fraction(1, 5 * 6**10)),
    ],
)
def test_capacity(n: int, k: int, expected: Fraction) -> None:
    """(N^K − 1)/(N^K·(N − 1))"""
    assert capacity_beta(PirParameters(n, k)) == expected


def test_capacity_needs_two_databases() -> None:
    """A single database has no private download below K"""
    with pytest.raises(ParameterError):
        capacity_beta(PirParameters(1, 3))


@pytest.mark.parametrize("n,k", [(0, 1), (1, 0), (-2, 2)])
def test_parameters_validation(n: int, k: int) -> None:
    """Counts are positive integers"""
    with pytest.raises(ParameterError):
        PirParameters(n, k)


def test_theorem1_line() -> None:
    """(N − 1)·α + β >= K"""
    line = theorem1_line(PirParameters(3, 4))
    assert (line.c_alpha, line.c_beta, line.rhs) == (2, 1, 4)
    assert line.provenance is Provenance.THEOREM1
    assert line.render() == "2·α + 1·β ≥ 4"


@pytest.mark.parametrize(
    "n,k,alpha,expected,binding",
    [
        (2, 2, Fraction(1), Fraction(1), Provenance.THEOREM1),
        (2, 2, Fraction(5, 4), Fraction(3, 4), Provenance.CAPACITY),
        (2, 2, Fraction(2), Fraction(3, 4), Provenance.CAPACITY),
        (3, 3, Fraction(1), Fraction(1), Provenance.THEOREM1),
        (1, 3, Fraction(3), Fraction(3), Provenance.THEOREM1),
    ],
)
def test_theorem1_min_beta(n: int, k: int, alpha: Fraction, expected: Fraction, binding: Provenance) -> None:
    """The larger of the cut-set-like line and capacity, capacity on ties"""
    bound = theorem1_min_beta(PirParameters(n, k), alpha)
    assert bound.value == expected
    assert bound.binding is binding


def test_theorem1_min_beta_storage_floor() -> None:
    """Storage below K/N is impossible"""
    with pytest.raises(ParameterError):
        theorem1_min_beta(PirParameters(2, 2), Fraction(1, 2))


def test_min_storage_point() -> None:
    """Minimum storage forces download K/N"""
    params = PirParameters(6, 10)
    point = min_storage_point(params)
    assert point == TradeoffPoint(Fraction(5, 3), Fraction(5, 3))
    assert theorem1_min_beta(params, point.alpha).value == point.beta


def test_theorem2_line() -> None:
    """Coefficients for N = 3, K = 2: α + 5·β >= 10/3"""
    line = theorem2_line(PirParameters(3, 2))
    assert line.c_alpha == 1
    assert line.c_beta == 2 + 3
    assert line.rhs == 2 + Fraction(8, 6)


def test_theorem2_needs_three_databases() -> None:
    """N >= 3"""
    with pytest.raises(ParameterError):
        theorem2_line(PirParameters(2, 2))
    with pytest.raises(ParameterError):
        theorem2_min_alpha(PirParameters(2, 2), Fraction(1))


def test_storage_at_capacity_spot_value() -> None:
    """At capacity with N = 6, K = 10 storage exceeds K − 1 by exactly 1/6^10"""
    params = PirParameters(6, 10)
    assert theorem2_min_alpha(params, capacity_beta(params)) == 9 + Fraction(1, 60466176)
    assert storage_at_capacity(params) > params.k - 1
    assert storage_at_capacity(params) == params.k - Fraction(params.n_pow_k - 1, params.n_pow_k)


def test_theorem2_min_alpha_is_on_the_line() -> None:
    """The solved form agrees with the line wherever it is a valid storage value"""
    params = PirParameters(4, 3)
    line = theorem2_line(params)
    for beta in (capacity_beta(params), Fraction(1, 3), Fraction(7, 20)):
        alpha = theorem2_min_alpha(params, beta)
        assert alpha >= params.min_storage
        assert line.lhs(TradeoffPoint(alpha, beta)) == line.rhs
    assert theorem2_min_alpha(params, capacity_beta(params)) == Fraction(129, 64)


def test_theorem2_min_alpha_drops_below_minimum_storage() -> None:
    """For large β the solved form goes under K/N, even negative; the bound verb floors it"""
    params = PirParameters(4, 3)
    assert theorem2_min_alpha(params, Fraction(2, 5)) == Fraction(-1, 2)


def test_theorem3() -> None:
    """3·α + 8·β >= 10 only for N = K = 2"""
    line = theorem3_line()
    assert line.min_alpha(Fraction(3, 4)) == Fraction(4, 3)
    assert two_by_two_storage_at_capacity() == Fraction(4, 3)
    assert theorem3_line(PirParameters(2, 2)) == line
    with pytest.raises(ParameterError):
        theorem3_line(PirParameters(3, 2))


@pytest.mark.parametrize("text,expected", [("3/4", Fraction(3, 4)), ("-2", Fraction(-2)), (7, Fraction(7))])
def test_parse_rational(text: str, expected: Fraction) -> None:
    """Integers and p/q"""
    assert parse_rational(text) == expected


@pytest.mark.parametrize("text", ["0.75", "1e3", "3/0", "", "a/b", "1/2/3"])
def test_parse_rational_rejects(text: str) -> None:
    """Decimals, zero denominators and garbage are refused"""
    with pytest.raises(ParameterError):
        parse_rational(text)


def test_bound_line_validation() -> None:
    """Coefficients are nonnegative and not both zero"""
    with pytest.raises(ParameterError):
        BoundLine(Fraction(0), Fraction(0), Fraction(1), Provenance.STORAGE)
    with pytest.raises(ParameterError):
        TradeoffPoint(Fraction(-1), Fraction(0))


def test_applicable_lines() -> None:
    """Which results hold depends on N and K"""
    assert {line.provenance for line in applicable_lines(PirParameters(2, 2))} == {
        Provenance.STORAGE,
        Provenance.THEOREM1,
        Provenance.CAPACITY,
        Provenance.THEOREM3,
    }
    assert Provenance.THEOREM2 in {line.provenance for line in applicable_lines(PirParameters(3, 2))}
    assert {line.provenance for line in applicable_lines(PirParameters(1, 2))} == {
        Provenance.STORAGE,
        Provenance.THEOREM1,
    }


def test_envelope_corner_six_ten() -> None:
    """At β = K/N the envelope meets minimum storage"""
    params = PirParameters(6, 10)
    point = envelope_at(applicable_lines(params), Fraction(10, 6))
    assert point.alpha_lower == Fraction(10, 6)
    assert Provenance.STORAGE in point.binding


def test_envelope_two_two() -> None:
    """At capacity the N = K = 2 line binds with 4/3"""
    points = outer_envelope(PirParameters(2, 2), 5)
    assert len(points) == 5
    assert points[0].beta == Fraction(3, 4)
    assert points[0].alpha_lower == Fraction(4, 3)
    assert points[0].binding == (Provenance.THEOREM3,)
    assert points[-1].beta == 1
    assert points[-1].alpha_lower == 1


@pytest.mark.parametrize("samples", [2, 3, 101])
def test_envelope_sampling(samples: int) -> None:
    """Uniform in β, both ends included, α nonincreasing"""
    params = PirParameters(6, 10)
    points = outer_envelope(params, samples)
    assert len(points) == samples
    assert points[0].beta == capacity_beta(params)
    assert points[-1].beta == params.min_storage
    assert all(left.alpha_lower >= right.alpha_lower for left, right in zip(points, points[1:]))
    assert points[0].alpha_lower == storage_at_capacity(params)


def test_envelope_validation() -> None:
    """At least two samples and two databases"""
    with pytest.raises(ParameterError):
        outer_envelope(PirParameters(2, 2), 1)
    with pytest.raises(ParameterError):
        outer_envelope(PirParameters(1, 2), 10)
