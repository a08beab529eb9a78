"""
MetatheoryService - runs the executable metatheorem battery on a finite
formal system: adequacy of the theory-built structure, consistency versus
satisfiability, support soundness of paradeductions, the subset
characterization of paradeducibility, its agreement with paraconsequence,
and the consequence-operator properties.
"""

import logging
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import psutil

from consistency_service import ConsistencyService, ConsistencyVerdict, EnumerativeOracle, SemanticOracle
from deduction_service import DeductionService, Verdict
from errors import ParadeductionError, PreconditionError
from formula_service import Formula, FormulaSet, sort_formulas
from paradeduction_service import ParadeductionService, SyntacticEntailment
from subset_lattice import ascending_subsets
from valuation_service import (
    ExplicitStructure,
    build_adequate_structure,
    check_adequacy,
    check_lemma1,
    para_entails,
)

# Configure logging
logger = logging.getLogger(__name__)


@dataclass
class ProcessMetrics:
    """Resource usage of the current process"""
    cpu_seconds: float
    rss_bytes: int
    timestamp: float


@dataclass
class ClaimResult:
    name: str
    passed: bool
    checked: int
    detail: str = ""
    execution_time: Optional[float] = None


@dataclass
class MetatheoryReport:
    system: str
    claims: List[ClaimResult] = field(default_factory=list)
    metrics: Optional[ProcessMetrics] = None

    @property
    def passed(self) -> bool:
        return all(claim.passed for claim in self.claims)

    @property
    def overall_status(self) -> str:
        return "pass" if self.passed else "fail"


def collect_process_metrics() -> ProcessMetrics:
    process = psutil.Process()
    cpu = process.cpu_times()
    return ProcessMetrics(
        cpu_seconds=cpu.user + cpu.system,
        rss_bytes=process.memory_info().rss,
        timestamp=time.time(),
    )


class ClaimFailed(Exception):
    """Internal signal carrying the first counterexample of a claim"""


class MetatheoryService:
    """
    Service checking the metatheorems exhaustively on a finite universe.
    """

    def __init__(self, deductions: DeductionService, max_premises: int = 4, samples: int = 1000, seed: int = 0):
        """
        Initialize the metatheory service.

        Args:
            deductions: DeductionService of a finite-universe system
            max_premises: Largest premise set in the exhaustive grids
            samples: Random paradeductions and subset pairs drawn for the sampled claims
            seed: Seed of the random generator
        """
        if not deductions.system.is_finite:
            raise PreconditionError("the metatheory battery needs a finite-universe system")
        self.deductions = deductions
        self.max_premises = max_premises
        self.samples = samples
        self.seed = seed
        self.universe: Tuple[Formula, ...] = sort_formulas(deductions.system.universe_set)
        self.universe_set: FormulaSet = frozenset(self.universe)

        self.structure: ExplicitStructure = build_adequate_structure(deductions)
        self.enumerative = ConsistencyService(EnumerativeOracle(deductions))
        self.semantic = ConsistencyService(SemanticOracle(self.structure))
        self.paradeductions = ParadeductionService(deductions, self.enumerative)

        self.claims: Dict[str, Callable[[], int]] = {
            "fact-adequacy": self._fact_adequacy,
            "lemma1": self._lemma1,
            "lemma2": self._lemma2,
            "prop1": self._prop1,
            "theorem": self._theorem,
            "oracle-agreement": self._oracle_agreement,
            "deduction-properties": self._deduction_properties,
            "semantic-properties": self._semantic_properties,
            "property-vii": self._property_vii,
            "non-explosion": self._non_explosion,
            "para-monotonicity": self._para_monotonicity,
            "weak-strong": self._weak_strong,
        }
        logger.info(
            f"MetatheoryService initialized for '{deductions.system.name}': "
            f"{len(self.universe)} formulas, premise sets up to {max_premises}"
        )

    def premise_sets(self) -> List[FormulaSet]:
        return list(ascending_subsets(self.universe, self.max_premises))

    def run(self, names: Optional[Sequence[str]] = None) -> MetatheoryReport:
        """
        Run the selected claims (all by default).

        Returns:
            MetatheoryReport with one ClaimResult per claim and process metrics
        """
        selected = list(names) if names else list(self.claims)
        unknown = [name for name in selected if name not in self.claims]
        if unknown:
            raise PreconditionError(f"unknown claims {unknown}; available: {', '.join(self.claims)}")

        report = MetatheoryReport(self.deductions.system.name)
        for name in selected:
            start_time = time.time()
            try:
                checked = self.claims[name]()
                result = ClaimResult(name, True, checked)
            except ClaimFailed as failure:
                result = ClaimResult(name, False, 0, str(failure))
            except ParadeductionError as exc:
                result = ClaimResult(name, False, 0, f"{exc.code}: {exc}")
            result.execution_time = time.time() - start_time
            if not result.passed:
                logger.error(f"Claim '{name}' failed: {result.detail}")
            report.claims.append(result)

        report.metrics = collect_process_metrics()
        return report

    # -- helpers -----------------------------------------------------------

    def _show(self, formulas) -> str:
        return "{" + ", ".join(str(f) for f in sort_formulas(formulas)) + "}"

    def _expect(self, condition: bool, message: str) -> None:
        if not condition:
            raise ClaimFailed(message)

    def _closure(self, premises: FormulaSet) -> FormulaSet:
        return self.deductions.closure(premises, self.universe_set)

    def _consistent_by_brute_force(self, premises: FormulaSet) -> List[FormulaSet]:
        return [s for s in ascending_subsets(premises) if self._closure(s) != self.universe_set]

    # -- claims ------------------------------------------------------------

    def _fact_adequacy(self) -> int:
        report = check_adequacy(self.deductions, self.structure)
        self._expect(report.adequate, f"sound={report.sound} complete={report.complete}")
        return report.checked_sets

    def _lemma1(self) -> int:
        report = check_lemma1(self.deductions, self.structure)
        if not report.holds:
            premises, reason = report.counterexamples[0]
            raise ClaimFailed(f"{self._show(premises)} is {reason}")
        return report.checked_sets

    def _lemma2(self) -> int:
        rng = random.Random(self.seed)
        for _ in range(self.samples):
            premises, sigma = self.paradeductions.random_paradeduction(rng, max_premises=self.max_premises)
            self._expect(
                self.paradeductions.verify_paradeduction(premises, sigma).is_valid,
                "random paradeduction does not verify",
            )
            self.paradeductions.lemma2_check(premises, sigma)
        return self.samples

    def _prop1(self) -> int:
        checked = 0
        for premises in self.premise_sets():
            consistent = self._consistent_by_brute_force(premises)
            for goal in self.universe:
                expected = any(goal in self._closure(s) for s in consistent)
                result = self.paradeductions.paradeducible(premises, goal)
                self._expect(
                    (result.verdict is Verdict.YES) == expected,
                    f"{self._show(premises)} |-P {goal}: got {result.verdict.value}, subsets say {expected}",
                )
                if result.witness is not None:
                    self._expect(
                        self.paradeductions.verify_paradeduction(premises, result.witness).is_valid,
                        f"witness for {self._show(premises)} |-P {goal} does not verify",
                    )
                checked += 1
        return checked

    def _theorem(self) -> int:
        checked = 0
        for premises in self.premise_sets():
            for goal in self.universe:
                syntactic = self.paradeductions.paradeducible(premises, goal).verdict is Verdict.YES
                semantic = para_entails(self.structure, premises, goal)
                self._expect(syntactic == semantic, f"{self._show(premises)}, {goal}: |-P {syntactic}, |=P {semantic}")
                checked += 1
        return checked

    def _oracle_agreement(self) -> int:
        checked = 0
        for subset in ascending_subsets(self.universe):
            enumerative = self.enumerative.check_consistency(subset)
            semantic = self.semantic.check_consistency(subset)
            self._expect(enumerative is semantic, f"{self._show(subset)}: {enumerative.value} vs {semantic.value}")
            checked += 1
        return checked

    def _deduction_properties(self) -> int:
        sets = self.premise_sets()
        checked = 0
        for a_set in sets:
            closure_a = self._closure(a_set)
            self._expect(a_set <= closure_a, f"(IV) fails for {self._show(a_set)}")
            self._expect(self._closure(closure_a) == closure_a, f"(VI) fails for {self._show(a_set)}")
            for goal in a_set:
                self._expect(self.deductions.deducible(a_set, goal).verdict is Verdict.YES, f"(I) fails for {goal}")
            for goal in closure_a:
                result = self.deductions.deducible(a_set, goal)
                self._expect(result.witness is not None, f"no witness for {self._show(a_set)} |- {goal}")
                self._expect(
                    self.deductions.verify_deduction(a_set, result.witness).is_valid,
                    f"witness for {self._show(a_set)} |- {goal} does not verify",
                )
                used = result.witness.used_premises
                self._expect(
                    used <= a_set and goal in self._closure(used),
                    f"(VIII) fails for {self._show(a_set)} |- {goal}",
                )
            for b_set in sets:
                if a_set <= b_set:
                    self._expect(closure_a <= self._closure(b_set), f"(II)/(V) fail for {self._show(a_set)} within {self._show(b_set)}")
                if b_set <= closure_a:
                    self._expect(self._closure(b_set) <= closure_a, f"(III) fails for {self._show(a_set)}, {self._show(b_set)}")
                checked += 1
        return checked

    def _semantic_properties(self) -> int:
        sets = self.premise_sets()
        checked = 0
        for a_set in sets:
            closure_a = self.structure.semantic_closure(a_set)
            self._expect(a_set <= closure_a, f"(I)/(IV) fail for {self._show(a_set)}")
            self._expect(self.structure.semantic_closure(closure_a) == closure_a, f"(VI) fails for {self._show(a_set)}")
            satisfiable = self.structure.satisfiable(a_set)
            for b_set in sets:
                if a_set <= b_set:
                    self._expect(
                        closure_a <= self.structure.semantic_closure(b_set),
                        f"(II)/(V) fail for {self._show(a_set)} within {self._show(b_set)}",
                    )
                if b_set <= a_set and satisfiable:
                    self._expect(self.structure.satisfiable(b_set), f"(VII) fails for {self._show(b_set)}")
                if b_set <= closure_a:
                    self._expect(
                        self.structure.semantic_closure(b_set) <= closure_a,
                        f"(III) fails for {self._show(a_set)}, {self._show(b_set)}",
                    )
                checked += 1
        return checked

    def _property_vii(self) -> int:
        rng = random.Random(self.seed + 1)
        for _ in range(self.samples):
            larger = frozenset(f for f in self.universe if rng.random() < 0.5)
            smaller = frozenset(f for f in larger if rng.random() < 0.5)
            if self.enumerative.check_consistency(larger) is ConsistencyVerdict.CONSISTENT:
                self._expect(
                    self.enumerative.check_consistency(smaller) is ConsistencyVerdict.CONSISTENT,
                    f"{self._show(smaller)} inconsistent inside consistent {self._show(larger)}",
                )
            if self.structure.satisfiable(larger):
                self._expect(
                    self.structure.satisfiable(smaller),
                    f"{self._show(smaller)} unsatisfiable inside satisfiable {self._show(larger)}",
                )
        return self.samples

    def _non_explosion(self) -> int:
        checked = 0
        for premises in self.premise_sets():
            para = self.paradeductions.cn_para(premises)
            closure = self._closure(premises)
            self._expect(para <= closure, f"Cn_P not inside Cn for {self._show(premises)}")
            if closure != self.universe_set:
                self._expect(para == closure, f"Cn_P differs from Cn on consistent {self._show(premises)}")
            reachable: FormulaSet = frozenset()
            for subset in self._consistent_by_brute_force(premises):
                reachable |= self._closure(subset)
            if reachable != self.universe_set:
                self._expect(para != self.universe_set, f"Cn_P explodes on {self._show(premises)}")
            checked += 1
        return checked

    def _para_monotonicity(self) -> int:
        sets = self.premise_sets()
        closures = {s: self.paradeductions.cn_para(s) for s in sets}
        checked = 0
        for smaller in sets:
            for larger in sets:
                if not smaller <= larger:
                    continue
                self._expect(
                    closures[smaller] <= closures[larger],
                    f"Cn_P not monotone from {self._show(smaller)} to {self._show(larger)}",
                )
                checked += 1
        return checked

    def _weak_strong(self) -> int:
        entailment = SyntacticEntailment(self.deductions)
        checked = 0
        for premises in self.premise_sets():
            for goal in self.universe:
                weak = self.paradeductions.weak_consequence(entailment, premises, goal)
                strong = self.paradeductions.strong_consequence(entailment, premises, goal)
                paradeducible = self.paradeductions.paradeducible(premises, goal).verdict is Verdict.YES
                self._expect(weak == paradeducible, f"weak and |-P disagree on {self._show(premises)}, {goal}")
                self._expect(weak or not strong, f"strong without weak on {self._show(premises)}, {goal}")
                checked += 1
        return checked
