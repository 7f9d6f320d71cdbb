"""Storage codes, their exhaustive verification and the bridge to entropy vectors"""

import dataclasses
from fractions import Fraction
from pathlib import Path
from typing import List, Sequence, Tuple

import numpy as np
import pytest

from pirbounds.bounds import PirParameters, TradeoffPoint
from pirbounds.documents import load_scheme, save_scheme, scheme_document, scheme_from_document
from pirbounds.entropy import EntropyVector, evaluate, violated_constraints
from pirbounds.errors import SchemeError, SizeGuardError
from pirbounds.models import PirLpModel, minimize_objective
from pirbounds.models.base import problem_constraints
from pirbounds.schemes import (
    AnswerVariable,
    MessageVariable,
    StorageVariable,
    Xor2Scheme,
    builtin_download_all,
    builtin_xor2,
    check_point,
    materialize,
    measure_costs,
    relabel_messages,
    scheme_entropy_bridge,
    verify_correctness,
    verify_privacy,
    verify_scheme,
)
from pirbounds.schemes.baseclass import Answer, Query, Symbols
from pirbounds.schemes.verify import gf_rank, log_ratio


@pytest.mark.parametrize(
    "n,k,length,method",
    [(2, 2, 1, "exhaustive"), (3, 2, 3, "exhaustive"), (6, 10, 3, "superposition")],
)
def test_download_all(n: int, k: int, length: int, method: str) -> None:
    """Minimum storage K/N with download K/N, whatever the size of the message space"""
    report = verify_scheme(builtin_download_all(n, k, length))
    assert report.passed
    assert report.correctness.method == method
    assert report.costs.method == method
    assert report.costs.alpha == Fraction(k, n)
    assert report.costs.beta == Fraction(k, n)
    assert report.costs.alpha_info == pytest.approx(k / n)
    assert report.costs.beta_info == pytest.approx(k / n)
    assert all(check.satisfied for check in report.bounds)


def test_download_all_needs_divisible_length() -> None:
    """Three databases cannot split two one-symbol messages evenly"""
    with pytest.raises(SchemeError):
        builtin_download_all(3, 2, 1)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_xor2_correct_and_private(k: int) -> None:
    """Every key and desired index retrieves the right message, queries are uniform subsets"""
    scheme = builtin_xor2(k)
    correctness = verify_correctness(scheme)
    assert correctness.passed
    assert correctness.cases == 2**k * 2**k * k
    privacy = verify_privacy(scheme)
    assert privacy.passed
    assert privacy.leaking == ()
    for per_index in privacy.distributions:
        assert all(dist == {query: Fraction(1, 2**k) for query in scheme.queries(0)} for dist in per_index)


def test_xor2_costs() -> None:
    """Full replication, one symbol per database, and the empty query answers a constant"""
    costs = measure_costs(builtin_xor2(2))
    assert costs.alpha == 2
    assert costs.beta == 1
    assert costs.alpha_info == pytest.approx(2.0)
    assert costs.beta_info == pytest.approx(0.75)
    assert costs.invariant_violations() == []
    assert measure_costs(builtin_xor2(3)).alpha == 3


def test_xor2_validation() -> None:
    """Two binary databases only"""
    with pytest.raises(SchemeError):
        Xor2Scheme(n=3, k=2)
    with pytest.raises(SchemeError):
        Xor2Scheme(k=2, message_alphabet=3, answer_alphabet=3)


class FirstAnswerOnly(Xor2Scheme):
    """Forgets to combine the two answers"""

    def reconstruct(self, answers: Sequence[Answer], desired: int, key: int) -> Symbols:
        """Returns the answer of the first database"""
        return tuple(answers[0])


def test_wrong_reconstruction_is_caught() -> None:
    """The first failing run in lexicographic order is reported"""
    report = verify_correctness(FirstAnswerOnly(k=2))
    assert not report.passed
    assert report.counterexample is not None
    assert report.counterexample.messages == ((0,), (1,))
    assert report.counterexample.desired == 0
    assert report.counterexample.key == 2
    assert report.counterexample.estimate == (1,)


class Leaky(Xor2Scheme):
    """Correct, but the second database is told the desired index"""

    def query(self, db: int, desired: int, key: int) -> Query:
        """Empty subset to the first database, the bare index to the second"""
        return () if db == 0 else (desired,)


def test_leaky_queries_are_caught() -> None:
    """Privacy breaks exactly where the query depends on the desired index"""
    scheme = Leaky(k=2)
    assert verify_correctness(scheme).passed
    privacy = verify_privacy(scheme)
    assert not privacy.passed
    assert privacy.leaking == (1,)
    assert privacy.distributions[1][0] == {(0,): Fraction(1)}
    assert privacy.distributions[1][1] == {(1,): Fraction(1)}
    assert not verify_scheme(scheme).passed


@pytest.mark.parametrize("permutation", [(0, 1, 2), (2, 0, 1), (1, 2, 0)])
def test_relabel_invariance(permutation: Tuple[int, ...]) -> None:
    """Permuting message indices changes neither correctness nor privacy nor costs"""
    inner = builtin_xor2(3)
    relabeled = relabel_messages(inner, permutation)
    report = verify_scheme(relabeled)
    assert report.passed
    reference = measure_costs(inner)
    assert (report.costs.alpha, report.costs.beta) == (reference.alpha, reference.beta)
    assert report.costs.beta_info == pytest.approx(reference.beta_info)


def test_relabel_rejects_non_permutation() -> None:
    """Indices must be a permutation of 0..K-1"""
    with pytest.raises(SchemeError):
        relabel_messages(builtin_xor2(2), (0, 0))
    with pytest.raises(SchemeError):
        relabel_messages(builtin_xor2(2), (0, 1, 2))


def test_materialize_keeps_behaviour() -> None:
    """A tabulated scheme verifies exactly like the scheme it came from"""
    table = materialize(builtin_xor2(2), 10**4)
    assert table.key_space_size == 4
    assert table.storage_sizes == (4, 4)
    report = verify_scheme(table)
    assert report.passed
    assert (report.costs.alpha, report.costs.beta) == (2, 1)


def test_scheme_document_round_trip(tmp_path: Path) -> None:
    """Tables survive the trip through JSON"""
    table = materialize(builtin_download_all(2, 2, 1), 10**4)
    assert scheme_from_document(scheme_document(table, 10**4)) == table
    save_scheme(tmp_path / "scheme.json", builtin_xor2(2), 10**4)
    loaded = load_scheme(tmp_path / "scheme.json")
    assert loaded.name == "xor2"
    assert verify_scheme(loaded).passed


def test_tabular_must_be_total() -> None:
    """Missing table entries are refused when the table is built"""
    document = scheme_document(builtin_xor2(1), 10**4)
    document["tables"]["storage"][0].pop()
    with pytest.raises(SchemeError):
        scheme_from_document(document)


def test_size_guard() -> None:
    """Enumerations over the limit are refused unless the scheme is linear"""
    with pytest.raises(SizeGuardError):
        materialize(builtin_xor2(3), 10)
    with pytest.raises(SizeGuardError):
        verify_correctness(builtin_download_all(2, 2, 1, alphabet=4), limit=5)
    assert verify_correctness(builtin_download_all(2, 2, 1), limit=6).method == "superposition"


def test_tables_are_never_superposed() -> None:
    """One edited reconstruction entry breaks linearity, so a table is enumerated or refused"""
    table = materialize(builtin_xor2(3), 10**4)
    assert table.linear is None
    messages = ((1,), (1,), (1,))
    desired, key = 0, table.key_space_size - 1
    answers = tuple(
        table.answer(db, table.query(db, desired, key), table.store(db, messages)) for db in range(table.n)
    )
    entries = dict(table.reconstruction_table)
    entries[(desired, key, answers)] = (1 - entries[(desired, key, answers)][0],)
    tampered = dataclasses.replace(table, reconstruction_table=entries)
    with pytest.raises(SizeGuardError):
        verify_correctness(tampered, limit=100)
    with pytest.raises(SizeGuardError):
        measure_costs(tampered, limit=4)
    report = verify_correctness(tampered)
    assert not report.passed
    assert report.method == "exhaustive"
    document = scheme_document(tampered, 10**4)
    document["params"]["linear"] = 2
    loaded = scheme_from_document(document)
    assert loaded.linear is None
    assert not verify_correctness(loaded).passed


def test_bridge_answers() -> None:
    """Answers of the XOR scheme are uniform bits except for the empty query"""
    scheme = builtin_xor2(2)
    vector = scheme_entropy_bridge(
        scheme,
        {
            "W1": MessageVariable(0),
            "S": StorageVariable(0),
            "A": AnswerVariable(1, query=(0, 1)),
            "E": AnswerVariable(0, desired=1, key=0),
        },
    )
    assert vector.h("A") == pytest.approx(1.0)
    assert vector.h("E") == pytest.approx(0.0)
    assert vector.h("S") == pytest.approx(2.0)
    assert vector.h("W1", "A") == pytest.approx(2.0)


def test_bridge_rejects_unfixed_answer() -> None:
    """An answer depends on the key unless the query is fixed"""
    with pytest.raises(SchemeError):
        scheme_entropy_bridge(builtin_xor2(2), {"A": AnswerVariable(0)})
    with pytest.raises(SchemeError):
        scheme_entropy_bridge(builtin_xor2(2), {"A": AnswerVariable(0, query=(5,))})
    with pytest.raises(SchemeError):
        scheme_entropy_bridge(builtin_xor2(2), {})


def xor2_bridge_vector() -> EntropyVector:
    """Answers of the XOR scheme named the way the two-by-two model names them"""
    return scheme_entropy_bridge(
        builtin_xor2(2),
        {
            "W1": MessageVariable(0),
            "W2": MessageVariable(1),
            "X1": AnswerVariable(0, query=(0,)),
            "X2": AnswerVariable(0, query=(1,)),
            "X3": AnswerVariable(0, query=(1,)),
            "Y1": AnswerVariable(1, query=()),
            "Y2": AnswerVariable(1, query=(0, 1)),
        },
    )


def test_bridge_satisfies_model(base_model_asymmetric: PirLpModel) -> None:
    """The XOR scheme is a feasible point of the LP model at α = 2, β = 1"""
    vector = xor2_bridge_vector()
    assert vector.ground == base_model_asymmetric.ground
    rows = problem_constraints(vector.ground, include_symmetry=False)
    assert violated_constraints(rows, vector, {"alpha": 2, "beta": 1}) == []
    assert violated_constraints(rows, vector, {"alpha": 2, "beta": Fraction(1, 2)}) == [
        "download:beta>=H(X1)",
        "download:beta>=H(X2)",
        "download:beta>=H(X3)",
        "download:beta>=H(Y2)",
    ]


@pytest.mark.parametrize("objective", [(1, 1), (3, 8)])
def test_certificate_holds_at_xor_scheme(base_model_asymmetric: PirLpModel, objective: Tuple[int, int]) -> None:
    """A certified lower bound is met by a real scheme: at the XOR point every weighted row is
    nonnegative and the objective minus the bound equals their sum"""
    c_alpha, c_beta = (Fraction(value) for value in objective)
    minimum = minimize_objective(base_model_asymmetric, c_alpha, c_beta)
    vector = xor2_bridge_vector()
    scalars = {"alpha": 2, "beta": 1}
    weighted = [
        weight * evaluate(minimum.program.row(tag).form, vector, scalars)
        for tag, weight in minimum.certificate.weights.items()
    ]
    assert min(weighted) >= -1e-9
    value = evaluate(minimum.program.objective, vector, scalars)
    assert value == 2 * c_alpha + c_beta
    assert value >= minimum.certificate.certified_bound
    assert float(value - minimum.certificate.certified_bound) == pytest.approx(sum(weighted), abs=1e-9)


def test_check_point() -> None:
    """A point below the N = K = 2 line is flagged"""
    checks = check_point(PirParameters(2, 2), TradeoffPoint(Fraction(5, 4), Fraction(3, 4)))
    violated = [check.line.render() for check in checks if not check.satisfied]
    assert violated == ["3·α + 8·β ≥ 10"]


@pytest.mark.parametrize(
    "rows,prime,expected",
    [
        ([[1, 0], [0, 1]], 2, 2),
        ([[1, 1], [1, 1]], 2, 1),
        ([[1, 2], [2, 1]], 3, 1),
        ([[1, 2], [2, 1]], 5, 2),
        ([[0, 0, 0]], 7, 0),
    ],
)
def test_gf_rank(rows: List[List[int]], prime: int, expected: int) -> None:
    """Rank over the prime field, not the rationals"""
    assert gf_rank(np.array(rows), prime) == expected


def test_log_ratio() -> None:
    """Exact for powers of a common base, float otherwise"""
    assert log_ratio(8, 4) == Fraction(3, 2)
    assert log_ratio(1, 2) == 0
    assert log_ratio(27, 3) == 3
    assert log_ratio(3, 2) == pytest.approx(1.5849625, rel=1e-6)
