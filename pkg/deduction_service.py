"""
DeductionService - S-deduction verification, consequence closure Cn_S on finite
universes, deducibility search with witness extraction, and theory enumeration.
"""

import itertools
import logging
import re
import threading
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import config
from errors import (
    BudgetError,
    PreconditionError,
    UniverseTooLargeError,
    WitnessFormatError,
)
from formula_service import (
    Binding,
    Compound,
    Formula,
    FormulaSet,
    Signature,
    parse_formula,
    render_formula,
    sort_formulas,
    subformulas,
)
from subset_lattice import ascending_subsets
from system_service import FormalSystem, RuleApplication, axiom_witnesses, rule_applications

# Configure logging
logger = logging.getLogger(__name__)


class Verdict(Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Premise:
    pass


@dataclass(frozen=True)
class AxiomUse:
    axiom_number: int
    binding: Binding = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class RuleUse:
    rule: str
    premise_steps: Tuple[int, ...]
    binding: Binding = field(default_factory=dict, compare=False)


Justification = Union[Premise, AxiomUse, RuleUse]


@dataclass(frozen=True)
class DeductionStep:
    formula: Formula
    justification: Justification


@dataclass(frozen=True)
class Deduction:
    """Finite sequence of justified formulas deduced from a premise set"""
    premises: FormulaSet
    steps: Tuple[DeductionStep, ...]

    def __post_init__(self):
        if not self.steps:
            raise WitnessFormatError("a deduction needs at least one step")

    @property
    def conclusion(self) -> Formula:
        return self.steps[-1].formula

    @property
    def used_premises(self) -> FormulaSet:
        """Formulas entering through Premise steps: the finite A' of property (VIII)"""
        return frozenset(s.formula for s in self.steps if isinstance(s.justification, Premise))


class ViolationKind(Enum):
    NOT_A_PREMISE = "NotAPremise"
    AXIOM_MISMATCH = "AxiomMismatch"
    BAD_RULE_INSTANCE = "BadRuleInstance"
    FORWARD_REFERENCE = "ForwardReference"
    NOT_IN_UNIVERSE = "NotInUniverse"
    BAD_SUPPORT_FOR_PREMISE = "BadSupportForPremise"
    BAD_SUPPORT_FOR_AXIOM = "BadSupportForAxiom"
    SUPPORT_UNION_MISMATCH = "SupportUnionMismatch"
    INCONSISTENT_SUPPORT = "InconsistentSupport"
    UNDECIDED_SUPPORT = "UndecidedSupport"


@dataclass
class Violation:
    step: int
    kind: ViolationKind
    message: str


@dataclass
class VerificationResult:
    """Outcome of checking a witness step by step"""
    is_valid: bool
    violations: List[Violation] = field(default_factory=list)

    def kinds(self) -> List[ViolationKind]:
        return [v.kind for v in self.violations]


@dataclass(frozen=True)
class SearchBudget:
    max_nodes: int = config.NODE_BUDGET
    max_depth: int = config.SEARCH_DEPTH

    def __post_init__(self):
        if self.max_nodes <= 0:
            raise BudgetError(f"max_nodes must be positive, got {self.max_nodes}")
        if self.max_depth < 0:
            raise BudgetError(f"max_depth must be non-negative, got {self.max_depth}")


@dataclass
class SearchResult:
    """Three-valued deducibility verdict with an optional witness"""
    verdict: Verdict
    witness: Optional[Deduction] = None
    delegated: bool = False
    nodes: int = 0
    execution_time: Optional[float] = None
    message: Optional[str] = None


@dataclass
class TheoryReport:
    universe: Tuple[Formula, ...]
    theories: Tuple[FormulaSet, ...]
    consistent_theories: Tuple[FormulaSet, ...]


# closure bookkeeping: how each formula entered the fixpoint
TraceEntry = Union[Premise, AxiomUse, RuleApplication]
EntailmentDelegate = Callable[[FormulaSet, Formula], bool]


# ---------------------------------------------------------------------------
# Step checks shared with paradeduction verification
# ---------------------------------------------------------------------------

def check_justification(
    system: FormalSystem,
    premises: FormulaSet,
    earlier: Sequence[Formula],
    number: int,
    formula: Formula,
    justification: Justification,
) -> Optional[Violation]:
    """
    Check one step against its claimed justification.

    Args:
        system: Formal system
        premises: Premise set A
        earlier: Formulas of steps 1..number-1
        number: 1-based step number
        formula: Step formula
        justification: Claimed justification

    Returns:
        The violation, or None when the step is justified
    """
    if isinstance(justification, Premise):
        if formula not in premises:
            return Violation(number, ViolationKind.NOT_A_PREMISE, f"'{formula}' is not a premise")
        return None

    if isinstance(justification, AxiomUse):
        index = justification.axiom_number
        if not 1 <= index <= len(system.axioms):
            return Violation(number, ViolationKind.AXIOM_MISMATCH, f"there is no axiom {index}")
        if system.axioms[index - 1].match(formula) is None:
            return Violation(number, ViolationKind.AXIOM_MISMATCH, f"'{formula}' is not an instance of axiom {index}")
        return None

    rule = system.rule(justification.rule)
    if rule is None:
        return Violation(number, ViolationKind.BAD_RULE_INSTANCE, f"unknown rule '{justification.rule}'")
    for cited in justification.premise_steps:
        if cited >= number:
            return Violation(number, ViolationKind.FORWARD_REFERENCE, f"step {number} cites step {cited}")
        if cited < 1:
            return Violation(number, ViolationKind.BAD_RULE_INSTANCE, f"step {number} cites step {cited}")
    cited_formulas = [earlier[j - 1] for j in justification.premise_steps]
    if rule.match_instance(cited_formulas, formula) is None:
        return Violation(
            number,
            ViolationKind.BAD_RULE_INSTANCE,
            f"'{formula}' does not follow by {rule.name} from steps {list(justification.premise_steps)}",
        )
    return None


class DeductionService:
    """
    Service for S-deductions over one formal system.

    Finite-universe systems are decided exactly through the closure fixpoint;
    schematic systems are searched within a budget, or answered by an
    injected semantic delegate declared adequate for the system.
    """

    def __init__(
        self,
        system: FormalSystem,
        delegate: Optional[EntailmentDelegate] = None,
        delegate_label: str = "semantic",
    ):
        """
        Initialize the deduction service.

        Args:
            system: Formal system to reason in
            delegate: Entailment relation adequate for the system, used for schematic verdicts
            delegate_label: Name reported when a verdict is delegated
        """
        self.system = system
        self.delegate = delegate
        self.delegate_label = delegate_label
        self._axiom_cache: Dict[FormulaSet, Dict[Formula, Tuple[int, Binding]]] = {}
        self._closure_cache: Dict[Tuple[FormulaSet, FormulaSet], FormulaSet] = {}
        self._lock = threading.Lock()

        mode = "finite" if system.is_finite else "schematic"
        logger.info(
            f"DeductionService initialized for '{system.name}' ({mode} universe"
            f"{', delegate ' + delegate_label if delegate else ''})"
        )

    # -- universes ---------------------------------------------------------

    def resolve_universe(self, universe: Optional[Iterable[Formula]] = None) -> FormulaSet:
        if universe is not None:
            return frozenset(universe)
        if self.system.is_finite:
            return self.system.universe_set
        raise PreconditionError(f"system '{self.system.name}' has a schematic universe; pass an explicit universe")

    def _axioms(self, universe: FormulaSet) -> Dict[Formula, Tuple[int, Binding]]:
        with self._lock:
            cached = self._axiom_cache.get(universe)
        if cached is None:
            cached = axiom_witnesses(self.system, universe)
            with self._lock:
                self._axiom_cache[universe] = cached
        return cached

    def _require_inside(self, formulas: Iterable[Formula], universe: FormulaSet) -> None:
        outside = [f for f in formulas if f not in universe]
        if outside:
            shown = ", ".join(render_formula(f, self.system.signature) for f in sort_formulas(outside))
            raise PreconditionError(f"formulas outside the universe: {shown}", code="NOT_IN_UNIVERSE")

    # -- closure -----------------------------------------------------------

    def _trace(self, premises: FormulaSet, universe: FormulaSet, stop_at: Optional[Formula] = None) -> Dict[Formula, TraceEntry]:
        trace: Dict[Formula, TraceEntry] = {}
        for formula in sort_formulas(premises):
            trace[formula] = Premise()
        for formula, (number, binding) in self._axioms(universe).items():
            trace.setdefault(formula, AxiomUse(number, binding))

        rounds = 0
        while stop_at is None or stop_at not in trace:
            rounds += 1
            snapshot = tuple(trace)
            added = 0
            for application in rule_applications(self.system, snapshot, universe):
                if application.conclusion not in trace:
                    trace[application.conclusion] = application
                    added += 1
            logger.debug(f"Closure round {rounds}: {added} new formula(s), {len(trace)} total")
            if not added:
                break
        return trace

    def closure(self, premises: Iterable[Formula], universe: Optional[Iterable[Formula]] = None) -> FormulaSet:
        """
        Compute Cn_S(A) within a finite universe.

        For a schematic system with a delegate, the closure over the given
        universe is {a in U : A |= a}.

        Args:
            premises: Premise set A, a subset of the universe
            universe: Finite universe (defaults to the system's own)

        Returns:
            The least fixpoint of axioms, premises and immediate consequences
        """
        premises = frozenset(premises)
        bound = self.resolve_universe(universe)
        key = (premises, bound)
        with self._lock:
            cached = self._closure_cache.get(key)
        if cached is not None:
            return cached

        if not self.system.is_finite and self.delegate is not None:
            result = frozenset(f for f in bound if self.delegate(premises, f))
        else:
            self._require_inside(premises, bound)
            result = frozenset(self._trace(premises, bound))

        with self._lock:
            if len(self._closure_cache) >= config.CACHE_SIZE:
                del self._closure_cache[next(iter(self._closure_cache))]
            self._closure_cache[key] = result
        return result

    def is_consistent(self, premises: Iterable[Formula], universe: Optional[Iterable[Formula]] = None) -> bool:
        bound = self.resolve_universe(universe)
        return self.closure(premises, bound) != bound

    # -- witnesses ---------------------------------------------------------

    @staticmethod
    def _extract_witness(trace: Dict[Formula, TraceEntry], goal: Formula, premises: FormulaSet) -> Deduction:
        needed = set()
        stack = [goal]
        while stack:
            formula = stack.pop()
            if formula in needed:
                continue
            needed.add(formula)
            entry = trace[formula]
            if isinstance(entry, RuleApplication):
                stack.extend(entry.premises)

        # insertion order puts every rule premise before its conclusion
        order = [f for f in trace if f in needed]
        numbers = {formula: index for index, formula in enumerate(order, 1)}
        steps = []
        for formula in order:
            entry = trace[formula]
            if isinstance(entry, RuleApplication):
                entry = RuleUse(entry.rule.name, tuple(numbers[p] for p in entry.premises), entry.binding)
            steps.append(DeductionStep(formula, entry))
        return Deduction(premises, tuple(steps))

    def verify_deduction(
        self,
        premises: Iterable[Formula],
        deduction: Deduction,
        universe: Optional[Iterable[Formula]] = None,
    ) -> VerificationResult:
        """
        Check every step of a deduction against its claimed justification.

        Args:
            premises: Premise set A
            deduction: Candidate deduction
            universe: Finite universe; steps outside it are reported (defaults to the system's own when finite)

        Returns:
            VerificationResult listing step-numbered violations
        """
        premises = frozenset(premises)
        bound = frozenset(universe) if universe is not None else (
            self.system.universe_set if self.system.is_finite else None
        )
        violations: List[Violation] = []
        earlier: List[Formula] = []
        for number, step in enumerate(deduction.steps, 1):
            violation = check_justification(self.system, premises, earlier, number, step.formula, step.justification)
            if violation is not None:
                violations.append(violation)
            if bound is not None and step.formula not in bound:
                violations.append(Violation(number, ViolationKind.NOT_IN_UNIVERSE, f"'{step.formula}' is outside the universe"))
            earlier.append(step.formula)

        if violations:
            logger.info(f"Deduction rejected with {len(violations)} violation(s)")
        return VerificationResult(not violations, violations)

    # -- deducibility ------------------------------------------------------

    def deducible(self, premises: Iterable[Formula], goal: Formula, budget: Optional[SearchBudget] = None) -> SearchResult:
        """
        Decide or search A |-_S a.

        Args:
            premises: Premise set A
            goal: Target formula a
            budget: Node and depth limits for schematic search

        Returns:
            SearchResult; Yes carries a witness unless the verdict is delegated
        """
        start_time = time.time()
        premises = frozenset(premises)
        budget = budget or SearchBudget()

        if self.system.is_finite:
            universe = self.system.universe_set
            self._require_inside(premises | {goal}, universe)
            if goal not in self.closure(premises, universe):
                return SearchResult(Verdict.NO, execution_time=time.time() - start_time)
            trace = self._trace(premises, universe, stop_at=goal)
            witness = self._extract_witness(trace, goal, premises)
            return SearchResult(Verdict.YES, witness, nodes=len(trace), execution_time=time.time() - start_time)

        if self.delegate is not None:
            logger.info(f"Verdict for '{goal}' delegated to {self.delegate_label} entailment")
            if not self.delegate(premises, goal):
                return SearchResult(Verdict.NO, delegated=True, execution_time=time.time() - start_time)
            witness, nodes, _ = self._bounded_search(premises, goal, budget)
            if witness is None:
                logger.warning(f"No witness for '{goal}' within budget; Yes is certified by {self.delegate_label} entailment")
            return SearchResult(
                Verdict.YES,
                witness,
                delegated=True,
                nodes=nodes,
                execution_time=time.time() - start_time,
                message=None if witness else f"certified by {self.delegate_label} entailment; no witness within budget",
            )

        witness, nodes, exhausted = self._bounded_search(premises, goal, budget)
        if witness is not None:
            return SearchResult(Verdict.YES, witness, nodes=nodes, execution_time=time.time() - start_time)

        reason = "node budget exhausted" if exhausted else "depth budget exhausted"
        logger.warning(f"Search for '{goal}' returned Unknown: {reason}")
        return SearchResult(Verdict.UNKNOWN, nodes=nodes, execution_time=time.time() - start_time, message=reason)

    def _deepen(self, universe: FormulaSet) -> Tuple[Formula, ...]:
        ordered = sort_formulas(universe)
        grown = list(ordered)
        for connective in self.system.signature.connectives:
            if connective.arity == 0:
                grown.append(Compound(connective.name))
                continue
            for children in itertools.product(ordered, repeat=connective.arity):
                grown.append(Compound(connective.name, children))
        return tuple(grown)

    def _projected_growth(self, size: int) -> int:
        return size + sum(size ** c.arity for c in self.system.signature.connectives)

    def _bounded_search(self, premises: FormulaSet, goal: Formula, budget: SearchBudget) -> Tuple[Optional[Deduction], int, bool]:
        universe = frozenset()
        for formula in premises | {goal}:
            universe |= subformulas(formula)

        nodes = 0
        for level in range(budget.max_depth + 1):
            if level > 0:
                if self._projected_growth(len(universe)) > budget.max_nodes:
                    return None, nodes, True
                universe = frozenset(self._deepen(universe))
            if len(universe) > budget.max_nodes:
                return None, nodes, True
            trace = self._trace(premises, universe, stop_at=goal)
            nodes += len(trace)
            logger.debug(f"Search level {level}: universe {len(universe)}, derived {len(trace)}")
            if goal in trace:
                return self._extract_witness(trace, goal, premises), nodes, False
        return None, nodes, False

    # -- theories ----------------------------------------------------------

    def theories(self, universe: Optional[Iterable[Formula]] = None) -> TheoryReport:
        """
        Enumerate THE_S and THE*_S on a finite universe.

        Raises:
            UniverseTooLargeError: when 2^|universe| exceeds the theory guard
        """
        bound = self.resolve_universe(universe)
        if len(bound) > config.THEORY_GUARD:
            raise UniverseTooLargeError(
                f"theory enumeration over {len(bound)} formulas needs {2 ** len(bound)} closures",
                projected=2 ** len(bound),
                cap=2 ** config.THEORY_GUARD,
            )
        theories = tuple(s for s in ascending_subsets(bound) if self.closure(s, bound) == s)
        consistent = tuple(t for t in theories if t != bound)
        logger.info(f"Found {len(theories)} theories, {len(consistent)} consistent, over {len(bound)} formulas")
        return TheoryReport(sort_formulas(bound), theories, consistent)


# ---------------------------------------------------------------------------
# Witness serialization
# ---------------------------------------------------------------------------

STEP_RE = re.compile(r"^\s*(\d+)\.\s+(.*?)\s*\[([^\]]+)\]\s*$")


def render_justification(justification: Justification) -> str:
    if isinstance(justification, Premise):
        return "premise"
    if isinstance(justification, AxiomUse):
        return f"axiom {justification.axiom_number}"
    return f"rule {justification.rule} {','.join(str(j) for j in justification.premise_steps)}"


def parse_justification(text: str, line: int) -> Justification:
    parts = text.split()
    if parts == ["premise"]:
        return Premise()
    if len(parts) == 2 and parts[0] == "axiom" and parts[1].isdigit():
        return AxiomUse(int(parts[1]))
    if len(parts) == 3 and parts[0] == "rule":
        cited = parts[2].split(",")
        if all(c.strip().isdigit() for c in cited):
            return RuleUse(parts[1], tuple(int(c) for c in cited))
    raise WitnessFormatError(f"unrecognized justification '[{text}]'", line)


def render_deduction(deduction: Deduction, signature: Optional[Signature] = None) -> str:
    lines = [
        f"{number}. {render_formula(step.formula, signature)} [{render_justification(step.justification)}]"
        for number, step in enumerate(deduction.steps, 1)
    ]
    return "\n".join(lines) + "\n"


def rebind(system: FormalSystem, formulas: Sequence[Formula], number: int, justification: Justification) -> Justification:
    """Recompute the binding of a parsed justification where it is determined"""
    formula = formulas[number - 1]
    if isinstance(justification, AxiomUse) and 1 <= justification.axiom_number <= len(system.axioms):
        binding = system.axioms[justification.axiom_number - 1].match(formula)
        return AxiomUse(justification.axiom_number, binding or {})
    if isinstance(justification, RuleUse):
        rule = system.rule(justification.rule)
        if rule is not None and all(1 <= j < number for j in justification.premise_steps):
            binding = rule.match_instance([formulas[j - 1] for j in justification.premise_steps], formula)
            return RuleUse(justification.rule, justification.premise_steps, binding or {})
    return justification


def parse_deduction(text: str, system: FormalSystem, premises: Optional[Iterable[Formula]] = None) -> Deduction:
    """
    Parse a serialized deduction witness.

    Args:
        text: One step per line, `<i>. <formula> [premise|axiom <i>|rule <name> <j,k>]`
        system: System whose signature parses the formulas
        premises: Premise set A; defaults to the formulas of Premise steps

    Returns:
        Deduction with bindings recomputed by matching
    """
    formulas: List[Formula] = []
    justifications: List[Justification] = []
    for line, raw in enumerate(text.splitlines(), 1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        match = STEP_RE.match(raw)
        if not match:
            raise WitnessFormatError(f"expected '<i>. <formula> [justification]', got '{raw.strip()}'", line)
        number = int(match.group(1))
        if number != len(formulas) + 1:
            raise WitnessFormatError(f"expected step {len(formulas) + 1}, got {number}", line)
        formulas.append(parse_formula(match.group(2), system.signature))
        justifications.append(parse_justification(match.group(3), line))

    if not formulas:
        raise WitnessFormatError("a deduction needs at least one step")
    steps = tuple(
        DeductionStep(formula, rebind(system, formulas, number, justification))
        for number, (formula, justification) in enumerate(zip(formulas, justifications), 1)
    )
    if premises is None:
        premises = [s.formula for s in steps if isinstance(s.justification, Premise)]
    return Deduction(frozenset(premises), steps)
