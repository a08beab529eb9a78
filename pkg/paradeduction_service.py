"""
ParadeductionService - paradeduction verification and construction,
paradeducibility through consistent premise subsets, the paraconsistent
closure Cn_P and the weak / strong maximal-subset consequences.
"""

import logging
import random
import re
import time
from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, List, Optional, Tuple

import config
from consistency_service import ConsistencyService, ConsistencyVerdict
from deduction_service import (
    AxiomUse,
    Deduction,
    DeductionService,
    Justification,
    Premise,
    RuleUse,
    SearchBudget,
    SearchResult,
    VerificationResult,
    Verdict,
    Violation,
    ViolationKind,
    check_justification,
    parse_justification,
    rebind,
    render_justification,
)
from errors import (
    LemmaFalsifiedError,
    ParadeductionError,
    PreconditionError,
    UndecidedError,
    WitnessFormatError,
)
from formula_service import Formula, FormulaSet, Signature, parse_formula, parse_formula_list, render_formula, sort_formulas
from subset_lattice import check_cap
from system_service import axiom_witnesses, rule_applications
from valuation_service import ValuationStructure

# Configure logging
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ParaStep:
    support: FormulaSet
    formula: Formula
    justification: Justification


@dataclass(frozen=True)
class Paradeduction:
    """Sequence of (support, formula) pairs from a premise set"""
    premises: FormulaSet
    steps: Tuple[ParaStep, ...]
    oracle: str = field(default="", compare=False)

    def __post_init__(self):
        if not self.steps:
            raise WitnessFormatError("a paradeduction needs at least one step")

    @property
    def conclusion(self) -> Formula:
        return self.steps[-1].formula


def project1(sigma: Paradeduction) -> List[FormulaSet]:
    return [step.support for step in sigma.steps]


def project2(sigma: Paradeduction) -> List[Formula]:
    return [step.formula for step in sigma.steps]


class Strategy(Enum):
    MAXIMAL = "maximal"
    ALL = "all"


@dataclass
class ParaSearchResult:
    """Paradeducibility verdict with the winning subset and witness"""
    verdict: Verdict
    witness: Optional[Paradeduction] = None
    support: Optional[FormulaSet] = None
    delegated: bool = False
    subsets_scanned: int = 0
    unknown_branches: int = 0
    execution_time: Optional[float] = None
    message: Optional[str] = None


# ---------------------------------------------------------------------------
# Entailment selectors for weak / strong consequence
# ---------------------------------------------------------------------------

class Entailment(ABC):
    name: str

    @abstractmethod
    def holds(self, premises: FormulaSet, goal: Formula) -> Optional[bool]:
        """True / False, or None when undecided"""


class SyntacticEntailment(Entailment):
    name = "syntactic"

    def __init__(self, deductions: DeductionService, budget: Optional[SearchBudget] = None):
        self.deductions = deductions
        self.budget = budget

    def holds(self, premises: FormulaSet, goal: Formula) -> Optional[bool]:
        verdict = self.deductions.deducible(premises, goal, self.budget).verdict
        if verdict is Verdict.UNKNOWN:
            return None
        return verdict is Verdict.YES


class SemanticEntailment(Entailment):
    name = "semantic"

    def __init__(self, structure: ValuationStructure):
        self.structure = structure

    def holds(self, premises: FormulaSet, goal: Formula) -> Optional[bool]:
        return self.structure.entails(premises, goal)


class ParadeductionService:
    """
    Service for paradeductions in one formal system under one consistency oracle.
    """

    def __init__(
        self,
        deductions: DeductionService,
        consistency: ConsistencyService,
        workers: int = config.WORKERS,
        strategy: Strategy = Strategy.MAXIMAL,
        subset_cap: Optional[int] = None,
    ):
        """
        Initialize the paradeduction service.

        Args:
            deductions: Deduction service of the formal system
            consistency: Consistency service supplying subset verdicts
            workers: Threads evaluating subset branches of paradeducible
            strategy: Scan maximal consistent subsets only, or every consistent subset
            subset_cap: Largest premise set scanned (defaults to config.SUBSET_CAP)
        """
        self.deductions = deductions
        self.consistency = consistency
        self.workers = max(1, workers)
        self.strategy = strategy
        self.subset_cap = subset_cap
        logger.info(
            f"ParadeductionService initialized for '{self.system.name}' "
            f"(strategy {strategy.value}, {self.workers} worker(s))"
        )

    @property
    def system(self):
        return self.deductions.system

    # -- verification ------------------------------------------------------

    def _support_violation(self, number: int, support: FormulaSet) -> Optional[Violation]:
        try:
            verdict = self.consistency.check_consistency(support)
        except ParadeductionError as exc:
            return Violation(number, ViolationKind.UNDECIDED_SUPPORT, f"support could not be checked: {exc}")
        if verdict is ConsistencyVerdict.INCONSISTENT:
            return Violation(number, ViolationKind.INCONSISTENT_SUPPORT, f"support of step {number} is inconsistent")
        if verdict is ConsistencyVerdict.UNKNOWN:
            return Violation(number, ViolationKind.UNDECIDED_SUPPORT, f"consistency of the support of step {number} is Unknown")
        return None

    def verify_paradeduction(self, premises: Iterable[Formula], sigma: Paradeduction) -> VerificationResult:
        """
        Check every step's clause, its support equation and the consistency of its support.

        Args:
            premises: Premise set A
            sigma: Candidate paradeduction

        Returns:
            VerificationResult with step-numbered violations; Unknown supports are never accepted
        """
        premises = frozenset(premises)
        bound = self.system.universe_set if self.system.is_finite else None
        violations: List[Violation] = []
        formulas: List[Formula] = []
        supports: List[FormulaSet] = []

        for number, step in enumerate(sigma.steps, 1):
            justification = step.justification
            violation = check_justification(self.system, premises, formulas, number, step.formula, justification)
            if violation is not None:
                violations.append(violation)

            if isinstance(justification, Premise) and step.support != frozenset([step.formula]):
                violations.append(Violation(number, ViolationKind.BAD_SUPPORT_FOR_PREMISE, "premise support must be the premise itself"))
            elif isinstance(justification, AxiomUse) and step.support:
                violations.append(Violation(number, ViolationKind.BAD_SUPPORT_FOR_AXIOM, "axiom support must be empty"))
            elif isinstance(justification, RuleUse) and all(1 <= j < number for j in justification.premise_steps):
                union: FormulaSet = frozenset()
                for j in justification.premise_steps:
                    union |= supports[j - 1]
                if union != step.support:
                    violations.append(Violation(
                        number, ViolationKind.SUPPORT_UNION_MISMATCH,
                        f"support must be the union of the supports of steps {list(justification.premise_steps)}",
                    ))

            if bound is not None and not (step.support | {step.formula}) <= bound:
                violations.append(Violation(number, ViolationKind.NOT_IN_UNIVERSE, "step mentions formulas outside the universe"))
            else:
                support_violation = self._support_violation(number, step.support)
                if support_violation is not None:
                    violations.append(support_violation)

            formulas.append(step.formula)
            supports.append(step.support)

        if violations:
            logger.info(f"Paradeduction rejected with {len(violations)} violation(s)")
        return VerificationResult(not violations, violations)

    def lemma2_check(self, premises: Iterable[Formula], sigma: Paradeduction) -> VerificationResult:
        """
        Confirm for every step that its support is consistent, lies inside A and deduces the step formula.

        Raises:
            PreconditionError: when sigma does not verify
            LemmaFalsifiedError: when some step breaks the lemma
        """
        premises = frozenset(premises)
        verification = self.verify_paradeduction(premises, sigma)
        if not verification.is_valid:
            raise PreconditionError(f"paradeduction does not verify: {verification.violations[0].message}")

        for number, step in enumerate(sigma.steps, 1):
            problems = []
            if not step.support <= premises:
                problems.append("support is not contained in the premises")
            if self.consistency.check_consistency(step.support) is not ConsistencyVerdict.CONSISTENT:
                problems.append("support is not consistent")
            if self.deductions.deducible(step.support, step.formula).verdict is not Verdict.YES:
                problems.append("support does not deduce the step formula")
            if problems:
                logger.error(f"Support lemma falsified at step {number}: {'; '.join(problems)}")
                raise LemmaFalsifiedError(f"step {number}: {'; '.join(problems)}", step=number)
        return VerificationResult(True)

    # -- construction ------------------------------------------------------

    def deduction_to_paradeduction(self, subset: Iterable[Formula], deduction: Deduction, premises: Optional[Iterable[Formula]] = None) -> Paradeduction:
        """
        Turn a deduction from a consistent subset into a paradeduction.

        Supports follow the case table: {a} for premises, empty for axioms,
        the union of the cited supports for rule steps.

        Args:
            subset: Consistent premise set A' the deduction starts from
            deduction: Deduction verifying against A'
            premises: Premise set recorded on the result (defaults to A')
        """
        subset = frozenset(subset)
        if not self.consistency.is_consistent(subset):
            raise PreconditionError("the premise subset is inconsistent")
        verification = self.deductions.verify_deduction(subset, deduction)
        if not verification.is_valid:
            raise PreconditionError(f"deduction does not verify: {verification.violations[0].message}")

        supports: List[FormulaSet] = []
        steps: List[ParaStep] = []
        for step in deduction.steps:
            justification = step.justification
            if isinstance(justification, Premise):
                support = frozenset([step.formula])
            elif isinstance(justification, AxiomUse):
                support = frozenset()
            else:
                support = frozenset()
                for j in justification.premise_steps:
                    support |= supports[j - 1]
            supports.append(support)
            steps.append(ParaStep(support, step.formula, justification))

        recorded = frozenset(premises) if premises is not None else subset
        return Paradeduction(recorded, tuple(steps), oracle=self.consistency.oracle.describe())

    # -- paradeducibility --------------------------------------------------

    def _branches(self, items: Tuple[Formula, ...]) -> List[FormulaSet]:
        if self.strategy is Strategy.MAXIMAL:
            try:
                return self.consistency.maximal_consistent_subsets(items, self.subset_cap)
            except UndecidedError:
                logger.warning("Maximal subsets are undecidable; scanning every decided consistent subset")
        return list(self.consistency.consistent_subsets(items, self.subset_cap))

    def paradeducible(self, premises: Iterable[Formula], goal: Formula, budget: Optional[SearchBudget] = None) -> ParaSearchResult:
        """
        Decide A |-P a: some consistent A' within A deduces a.

        Args:
            premises: Finite premise set A
            goal: Target formula a
            budget: Search budget for schematic branches

        Returns:
            ParaSearchResult; the witness comes from the canonically first successful branch
        """
        start_time = time.time()
        items = sort_formulas(premises)
        check_cap(items, self.subset_cap)
        skipped_before = self.consistency.stats().unknown_skipped
        branches = self._branches(items)
        unknown_consistency = self.consistency.stats().unknown_skipped - skipped_before

        def search(subset: FormulaSet) -> SearchResult:
            return self.deductions.deducible(subset, goal, budget)

        if self.workers > 1 and len(branches) > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                outcomes = list(pool.map(search, branches))
        else:
            outcomes = []
            for subset in branches:
                outcome = search(subset)
                outcomes.append(outcome)
                if outcome.verdict is Verdict.YES:
                    break

        unknown = unknown_consistency + sum(1 for o in outcomes if o.verdict is Verdict.UNKNOWN)
        for subset, outcome in zip(branches, outcomes):
            if outcome.verdict is not Verdict.YES:
                continue
            result = ParaSearchResult(
                Verdict.YES,
                support=subset,
                delegated=outcome.delegated,
                subsets_scanned=len(outcomes),
                unknown_branches=unknown,
                message=outcome.message,
            )
            if outcome.witness is not None:
                result.witness = self.deduction_to_paradeduction(outcome.witness.used_premises, outcome.witness, items)
                result.support = outcome.witness.used_premises
            result.execution_time = time.time() - start_time
            return result

        verdict = Verdict.UNKNOWN if unknown else Verdict.NO
        if unknown:
            logger.warning(f"Paradeducibility of '{goal}' is Unknown: {unknown} undecided branch(es)")
        return ParaSearchResult(
            verdict,
            delegated=any(o.delegated for o in outcomes),
            subsets_scanned=len(outcomes),
            unknown_branches=unknown,
            execution_time=time.time() - start_time,
        )

    def cn_para(self, premises: Iterable[Formula], universe: Optional[Iterable[Formula]] = None) -> FormulaSet:
        """Cn_P(A): union of Cn_S(A') over the maximal consistent A' within A"""
        bound = self.deductions.resolve_universe(universe)
        result: FormulaSet = frozenset()
        for subset in self.consistency.maximal_consistent_subsets(premises, self.subset_cap):
            result |= self.deductions.closure(subset, bound)
        return result

    # -- maximal-subset consequences ----------------------------------------

    def _mcs_verdicts(self, entailment: Entailment, premises: Iterable[Formula], goal: Formula) -> List[bool]:
        verdicts = []
        for subset in self.consistency.maximal_consistent_subsets(premises, self.subset_cap):
            holds = entailment.holds(subset, goal)
            if holds is None:
                raise UndecidedError(f"{entailment.name} entailment of '{goal}' from a maximal subset is Unknown")
            verdicts.append(holds)
        return verdicts

    def weak_consequence(self, entailment: Entailment, premises: Iterable[Formula], goal: Formula) -> bool:
        """Some maximal consistent subset entails the goal"""
        return any(self._mcs_verdicts(entailment, premises, goal))

    def strong_consequence(self, entailment: Entailment, premises: Iterable[Formula], goal: Formula) -> bool:
        """Every maximal consistent subset entails the goal"""
        return all(self._mcs_verdicts(entailment, premises, goal))

    # -- random witnesses --------------------------------------------------

    def random_paradeduction(
        self,
        rng: random.Random,
        universe: Optional[Iterable[Formula]] = None,
        max_premises: int = 4,
        max_steps: int = 8,
    ) -> Tuple[FormulaSet, Paradeduction]:
        """
        Generate a random verified paradeduction on a finite universe.

        Each step is drawn among the premise, axiom and rule steps whose
        support stays consistent.

        Returns:
            (premise set, paradeduction)
        """
        bound = sort_formulas(self.deductions.resolve_universe(universe))
        axioms = axiom_witnesses(self.system, bound)
        usable = [f for f in bound if self.consistency.is_consistent([f])]
        if not axioms and not usable:
            raise PreconditionError("no axiom instance and no consistent singleton to start a paradeduction")
        while True:
            size = rng.randint(0, min(max_premises, len(bound)))
            premises = frozenset(rng.sample(bound, size))
            singles = [f for f in usable if f in premises]
            if singles or axioms:
                break

        steps: List[ParaStep] = []
        for _ in range(rng.randint(1, max_steps)):
            options: List[ParaStep] = [ParaStep(frozenset([f]), f, Premise()) for f in singles]
            options += [ParaStep(frozenset(), f, AxiomUse(n, b)) for f, (n, b) in axioms.items()]
            positions = {}
            for number, step in enumerate(steps, 1):
                positions.setdefault(step.formula, []).append(number)
            for application in rule_applications(self.system, positions, bound):
                cited = tuple(rng.choice(positions[p]) for p in application.premises)
                support: FormulaSet = frozenset()
                for j in cited:
                    support |= steps[j - 1].support
                if self.consistency.is_consistent(support):
                    options.append(ParaStep(support, application.conclusion, RuleUse(application.rule.name, cited, application.binding)))
            steps.append(rng.choice(options))

        return premises, Paradeduction(premises, tuple(steps), oracle=self.consistency.oracle.describe())


# ---------------------------------------------------------------------------
# Witness serialization
# ---------------------------------------------------------------------------

PARA_STEP_RE = re.compile(r"^\s*(\d+)\.\s+\[([^\]]*)\]\s+(.*?)\s*\[([^\]]+)\]\s*$")


def render_paradeduction(sigma: Paradeduction, signature: Optional[Signature] = None) -> str:
    lines = []
    for number, step in enumerate(sigma.steps, 1):
        support = ", ".join(render_formula(f, signature) for f in sort_formulas(step.support))
        lines.append(
            f"{number}. [{support}] {render_formula(step.formula, signature)} [{render_justification(step.justification)}]"
        )
    return "\n".join(lines) + "\n"


def parse_paradeduction(text: str, system, premises: Optional[Iterable[Formula]] = None) -> Paradeduction:
    """
    Parse `<i>. [<support>] <formula> [justification]` lines.

    Args:
        text: Serialized paradeduction
        system: System whose signature parses the formulas
        premises: Premise set A; defaults to the formulas of Premise steps
    """
    formulas: List[Formula] = []
    supports: List[FormulaSet] = []
    justifications: List[Justification] = []
    for line, raw in enumerate(text.splitlines(), 1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        match = PARA_STEP_RE.match(raw)
        if not match:
            raise WitnessFormatError(f"expected '<i>. [support] <formula> [justification]', got '{raw.strip()}'", line)
        number = int(match.group(1))
        if number != len(formulas) + 1:
            raise WitnessFormatError(f"expected step {len(formulas) + 1}, got {number}", line)
        supports.append(frozenset(parse_formula_list(match.group(2), system.signature)))
        formulas.append(parse_formula(match.group(3), system.signature))
        justifications.append(parse_justification(match.group(4), line))

    if not formulas:
        raise WitnessFormatError("a paradeduction needs at least one step")
    steps = tuple(
        ParaStep(support, formula, rebind(system, formulas, number, justification))
        for number, (support, formula, justification) in enumerate(zip(supports, formulas, justifications), 1)
    )
    if premises is None:
        premises = [s.formula for s in steps if isinstance(s.justification, Premise)]
    return Paradeduction(frozenset(premises), steps)
