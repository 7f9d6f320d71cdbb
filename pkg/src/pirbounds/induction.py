"""Coefficient-exact replay of the induction behind the N >= 3 storage/download bound

The two recursions are taken as axioms over formal nonnegative quantities T^k (joint
answer entropy given the first k messages) and V^k (averaged storage-plus-other-answers
entropy given the first k messages), in units of one message. T^K and V^K vanish. For
k = K−1, ..., 1 the replay checks

    storage_recursion(k) + (N^(K−k−1) − 1)·answer_recursion(k) + claim(k+1) = claim(k)

coefficient by coefficient, claim(K) being the empty inequality 0 >= 0, so the step at K−1 is
the base case. A last axiom bounds the first-index quantities by the costs α and β; adding it
to claim(1) has to reproduce the closed-form line exactly.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

from .bounds import PirParameters, theorem2_line
from .entropy import LinearForm
from .errors import ParameterError
from .models import ALPHA, BETA

LOGGER = logging.getLogger(__name__)


def t_symbol(k: int) -> str:
    """Name of the indeterminate T^k"""
    return f"T^{k:d}"


def v_symbol(k: int) -> str:
    """Name of the indeterminate V^k"""
    return f"V^{k:d}"


@dataclass(frozen=True)
class InductionStep:
    """One replayed step; residual = combination − claim(k), zero when the step holds"""

    k: int
    rhs: Fraction
    claim: LinearForm
    storage_recursion_multiplier: int
    answer_recursion_multiplier: int
    residual: LinearForm

    @property
    def holds(self) -> bool:
        """True when the combination reproduces the claim exactly"""
        return self.residual.is_zero()


@dataclass(frozen=True)
class InductionLedger:
    """All replayed steps (k descending), the final assembly and the verdict"""

    params: PirParameters
    steps: Tuple[InductionStep, ...]
    assembly_residual: LinearForm
    final_rhs: Fraction
    failure: Optional[Tuple[int, LinearForm]] = field(default=None)

    @property
    def passed(self) -> bool:
        """True when every step and the assembly are exact identities"""
        return self.failure is None

    def step(self, k: int) -> InductionStep:
        """Record of the step producing claim(k)"""
        for record in self.steps:
            if record.k == k:
                return record
        raise KeyError(k)


@dataclass
class Theorem2Induction:
    """Axioms and claims of the induction for fixed (N, K); override a method to replay a variant"""

    params: PirParameters

    def __post_init__(self) -> None:
        """N >= 3 for the divisions by N − 2, K >= 2 for at least one step"""
        if self.params.n < 3 or self.params.k < 2:
            raise ParameterError("the induction needs N >= 3 and K >= 2", N=self.params.n, K=self.params.k)

    def t(self, k: int, coefficient: Fraction = Fraction(1)) -> LinearForm:
        """coefficient·T^k, zero past the last message"""
        if k >= self.params.k:
            return LinearForm()
        return LinearForm.scalar(t_symbol(k), coefficient)

    def v(self, k: int, coefficient: Fraction = Fraction(1)) -> LinearForm:
        """coefficient·V^k, zero past the last message"""
        if k >= self.params.k:
            return LinearForm()
        return LinearForm.scalar(v_symbol(k), coefficient)

    def answer_recursion(self, k: int) -> LinearForm:
        """T^k − T^(k+1)/N − 1/N >= 0"""
        n = self.params.n
        return self.t(k) - self.t(k + 1, Fraction(1, n)) - LinearForm.const(Fraction(1, n))

    def storage_recursion(self, k: int) -> LinearForm:
        """V^k/(N−2) + T^k − V^(k+1)/(N−2) − T^(k+1)/N − (1/(N−2) + 1/N) >= 0"""
        n = self.params.n
        inv = Fraction(1, n - 2)
        return (
            self.v(k, inv)
            + self.t(k)
            - self.v(k + 1, inv)
            - self.t(k + 1, Fraction(1, n))
            - LinearForm.const(inv + Fraction(1, n))
        )

    def rhs(self, k: int) -> Fraction:
        """(N^(K−k) − 1)/(N(N−1)) + (K−k)/(N−2)"""
        n, big_k = self.params.n, self.params.k
        return Fraction(n ** (big_k - k) - 1, n * (n - 1)) + Fraction(big_k - k, n - 2)

    def claim(self, k: int) -> LinearForm:
        """V^k/(N−2) + N^(K−k−1)·T^k − rhs(k) >= 0, the empty inequality at k = K"""
        if k >= self.params.k:
            return LinearForm()
        n = self.params.n
        return self.v(k, Fraction(1, n - 2)) + self.t(k, Fraction(n ** (self.params.k - k - 1))) - LinearForm.const(
            self.rhs(k)
        )

    def answer_recursion_multiplier(self, k: int) -> int:
        """How often the answer recursion at k enters the step producing claim(k)"""
        return self.params.n ** (self.params.k - k - 1) - 1

    def cost_assembly(self) -> LinearForm:
        """Cost averaging step

        (α + (N−1)·β)/(N−2) + N^(K−1)·β − 1/(N−2) − N^(K−2) − V^1/(N−2) − N^(K−2)·T^1 >= 0
        """
        n, big_k = self.params.n, self.params.k
        inv = Fraction(1, n - 2)
        costs = LinearForm(scalar_terms={ALPHA: inv, BETA: (n - 1) * inv + n ** (big_k - 1)})
        return (
            costs
            - LinearForm.const(inv + Fraction(n ** (big_k - 2)))
            - self.v(1, inv)
            - self.t(1, Fraction(n ** (big_k - 2)))
        )

    def target(self) -> LinearForm:
        """The closed-form line as a form that is >= 0"""
        line = theorem2_line(self.params)
        return LinearForm(scalar_terms={ALPHA: line.c_alpha, BETA: line.c_beta}, constant=-line.rhs)

    def replay(self) -> InductionLedger:
        """Check every step from K−1 down to 1, then the assembly"""
        steps: List[InductionStep] = []
        failure: Optional[Tuple[int, LinearForm]] = None
        for k in range(self.params.k - 1, 0, -1):
            multiplier = self.answer_recursion_multiplier(k)
            combined = self.storage_recursion(k) + self.answer_recursion(k) * multiplier + self.claim(k + 1)
            record = InductionStep(k, self.rhs(k), self.claim(k), 1, multiplier, combined - self.claim(k))
            steps.append(record)
            if not record.holds and failure is None:
                failure = (k, record.residual)
                LOGGER.info(
                    "induction step k={} leaves residue {} constant {}".format(
                        k, dict(record.residual.scalar_terms), record.residual.constant
                    )
                )
        assembly_residual = self.cost_assembly() + self.claim(1) - self.target()
        if failure is None and not assembly_residual.is_zero():
            failure = (0, assembly_residual)
        ledger = InductionLedger(self.params, tuple(steps), assembly_residual, theorem2_line(self.params).rhs, failure)
        LOGGER.debug(
            "induction replay N={} K={}: {}".format(self.params.n, self.params.k, "pass" if ledger.passed else "FAIL")
        )
        return ledger


def replay_theorem2_induction(params: PirParameters) -> InductionLedger:
    """Shorthand for replaying the unmodified induction"""
    return Theorem2Induction(params).replay()
