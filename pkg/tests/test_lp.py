"""LP engine: backends, certificates, program validation"""

from fractions import Fraction

import pytest

import pirbounds.lp
from pirbounds.entropy import (
    Constraint,
    GroundSet,
    LinearForm,
    Sense,
    compile_conditional_entropy,
    elemental_inequalities,
)
from pirbounds.errors import CertificateError, ModelError, UnknownTagError
from pirbounds.lp import (
    DualCertificate,
    LinearProgram,
    Solution,
    SolutionStatus,
    SolverSettings,
    extract_certificate,
    solve_min,
    verify_certificate,
)


def toy_program() -> LinearProgram:
    """min β s.t. β >= H(A,B), H(A) >= 1, H(B) >= 1 and the Shannon cone on (A, B); optimum 1"""
    ground = GroundSet(("A", "B"))
    rows = elemental_inequalities(ground) + [
        Constraint(compile_conditional_entropy(ground, ["A"]) - LinearForm.const(1), Sense.GE, "h:A>=1"),
        Constraint(compile_conditional_entropy(ground, ["B"]) - LinearForm.const(1), Sense.GE, "h:B>=1"),
        Constraint(LinearForm.scalar("beta") - compile_conditional_entropy(ground, ["A", "B"]), Sense.GE, "cost"),
    ]
    return LinearProgram(ground, ("beta",), tuple(rows), LinearForm.scalar("beta"))


@pytest.mark.parametrize("backend", sorted(pirbounds.lp.BACKENDS))
def test_toy_optimum(backend: str) -> None:
    """Both backends find the optimum and a certificate proving it"""
    program = toy_program()
    settings = SolverSettings(backend=backend)
    solution = solve_min(program, settings)
    assert solution.optimal
    assert solution.objective_value == pytest.approx(1.0, abs=1e-6)
    assert solution.scalars["beta"] == pytest.approx(1.0, abs=1e-6)
    certificate = extract_certificate(program, solution, settings)
    assert certificate.certified_bound == 1
    assert verify_certificate(program, certificate).valid


def test_infeasible() -> None:
    """Contradicting rows give an infeasible status from phase I, not an exception"""
    program = toy_program().with_constraints(
        [Constraint(LinearForm.const(Fraction(1, 2)) - LinearForm.entropy(1), Sense.GE, "h:A<=1/2")]
    )
    assert solve_min(program, SolverSettings(backend="bland")).status is SolutionStatus.INFEASIBLE


def test_unbounded() -> None:
    """A free scalar with nothing holding it down, detected by the ratio test"""
    ground = GroundSet(("A",))
    program = LinearProgram(ground, ("beta",), tuple(elemental_inequalities(ground)), LinearForm.scalar("beta"))
    assert solve_min(program, SolverSettings(backend="bland")).status is SolutionStatus.UNBOUNDED


def test_hand_certificate() -> None:
    """β − 1 = cost + H(A|B) + (H(B) − 1), written down by hand"""
    program = toy_program()
    certificate = DualCertificate(
        {"cost": Fraction(1), "elemental:H(A|B)>=0": Fraction(1), "h:B>=1": Fraction(1)}, Fraction(1)
    )
    report = verify_certificate(program, certificate)
    assert report.valid
    assert report.describe(program) == []


def test_single_weight_mutations_rejected() -> None:
    """Changing any one weight, adding a row or raising the bound breaks the identity"""
    program = toy_program()
    certificate = extract_certificate(program, solve_min(program))
    tags = list(certificate.weights) + ["h:A>=1", "elemental:I(A;B)>=0"]
    rejected = 0
    for tag in tags:
        for delta in (Fraction(1, 7), Fraction(-3, 2)):
            weights = dict(certificate.weights)
            weights[tag] = weights.get(tag, Fraction(0)) + delta
            mutated = DualCertificate(weights, certificate.certified_bound)
            rejected += not verify_certificate(program, mutated).valid
    assert rejected == 2 * len(tags)
    assert not verify_certificate(program, DualCertificate(certificate.weights, Fraction(2))).valid


def test_negative_inequality_weight_is_a_sign_violation() -> None:
    """Inequality rows may only be used with nonnegative weight"""
    program = toy_program()
    weights = {"cost": Fraction(1), "elemental:H(A|B)>=0": Fraction(1), "h:B>=1": Fraction(1)}
    weights["elemental:I(A;B)>=0"] = Fraction(-1)
    weights["elemental:H(A|B)>=0"] = Fraction(0)
    report = verify_certificate(program, DualCertificate(weights, Fraction(1)))
    assert not report.valid
    assert report.sign_violations == ("elemental:I(A;B)>=0",)


def test_unknown_tag() -> None:
    """Certificates citing rows the program does not have are refused outright"""
    with pytest.raises(UnknownTagError):
        verify_certificate(toy_program(), DualCertificate({"decode:H(W1|X1,Y1)=0": Fraction(1)}, Fraction(0)))


def test_program_validation() -> None:
    """Duplicate tags, reserved prefixes, undeclared scalars and foreign coordinates are refused"""
    ground = GroundSet(("A",))
    row = Constraint(LinearForm.entropy(1), Sense.GE, "x")
    with pytest.raises(ModelError):
        LinearProgram(ground, (), (row, row), LinearForm())
    with pytest.raises(ModelError):
        LinearProgram(ground, (), (Constraint(LinearForm.entropy(1), Sense.GE, "nonneg:H(A)>=0"),), LinearForm())
    with pytest.raises(ModelError):
        LinearProgram(ground, (), (row,), LinearForm.scalar("alpha"))
    with pytest.raises(ModelError):
        LinearProgram(ground, (), (Constraint(LinearForm.entropy(2), Sense.GE, "y"),), LinearForm())
    with pytest.raises(ModelError):
        pirbounds.lp.get("simplex-by-hand")


def test_nonnegativity_rows_are_citable() -> None:
    """Variable bounds appear as tagged rows for certificates"""
    program = toy_program()
    assert program.has_tag("nonneg:H(A,B)>=0")
    assert program.row("nonneg:H(A)>=0").form == LinearForm.entropy(1)
    assert program.count("elemental:") == 3


def test_rounding_residue_is_solved_exactly() -> None:
    """Duals a few 1e-7 off the exact ones leave a residue on β after rounding; the identity is
    re-solved over the rows in use and the exact certificate comes back"""
    program = toy_program()
    solution = Solution(
        SolutionStatus.OPTIMAL,
        1.0,
        row_duals={"cost": 1.0000003, "elemental:H(A|B)>=0": 0.9999996, "h:B>=1": 1.0000002},
    )
    certificate = extract_certificate(program, solution, SolverSettings(max_denominator=10**8))
    assert certificate.certified_bound == 1
    assert certificate.weights == {"cost": 1, "elemental:H(A|B)>=0": 1, "h:B>=1": 1}
    assert verify_certificate(program, certificate).valid


def test_far_off_duals_are_refused() -> None:
    """A residue well above the tolerance is not papered over"""
    solution = Solution(SolutionStatus.OPTIMAL, 1.0, row_duals={"cost": 0.5, "h:B>=1": 0.5})
    with pytest.raises(CertificateError):
        extract_certificate(toy_program(), solution)
