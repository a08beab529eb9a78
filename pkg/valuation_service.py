"""
Valuation structures: models, satisfiability, semantic consequence,
paraconsequence, the adequate structure built from consistent theories, and
exhaustive soundness, completeness and consistency-versus-satisfiability checks.
"""

import itertools
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Tuple

import config
from errors import (
    CarrierError,
    DegenerateSystemError,
    UniverseTooLargeError,
    ValuationStructureError,
)
from formula_service import (
    Atom,
    Formula,
    FormulaSet,
    Signature,
    atoms_of,
    connectives_of,
    parse_formula,
    render_formula,
    sort_formulas,
)
from subset_lattice import ascending_subsets, check_cap, maximal_subsets

# Configure logging
logger = logging.getLogger(__name__)

TRUTH_FUNCTIONS: Dict[str, Callable[..., int]] = {
    "~": lambda x: 1 - x,
    "->": lambda x, y: int(not x or y),
    "&": lambda x, y: x & y,
    "|": lambda x, y: x | y,
    "<->": lambda x, y: int(x == y),
    "top": lambda: 1,
    "bot": lambda: 0,
}

MAX_COUNTEREXAMPLES = 5


# ---------------------------------------------------------------------------
# Valuations
# ---------------------------------------------------------------------------

class Valuation(ABC):
    """A function v: X -> {0, 1}"""

    @abstractmethod
    def value(self, formula: Formula) -> int:
        ...

    def satisfies(self, formulas: Iterable[Formula]) -> bool:
        return all(self.value(f) == 1 for f in formulas)


@dataclass(frozen=True)
class ExplicitValuation(Valuation):
    """Characteristic function of `true_formulas` on a finite carrier"""
    true_formulas: FormulaSet

    def value(self, formula: Formula) -> int:
        return int(formula in self.true_formulas)


@dataclass(frozen=True)
class AtomAssignment(Valuation):
    """Atom assignment extended to compounds by classical truth tables"""
    true_atoms: FrozenSet[str]

    def value(self, formula: Formula) -> int:
        if isinstance(formula, Atom):
            return int(formula.name in self.true_atoms)
        function = TRUTH_FUNCTIONS.get(formula.connective)
        if function is None:
            raise CarrierError(f"no truth table for connective '{formula.connective}'")
        return function(*(self.value(child) for child in formula.children))


# ---------------------------------------------------------------------------
# Structures
# ---------------------------------------------------------------------------

class ValuationStructure(ABC):
    """
    A pair (X, V) where V never contains the constant-1 function.

    Args:
        name: Label used in reports
        adequate_for: Name of the formal system this structure is declared adequate for
    """

    def __init__(self, name: str, adequate_for: Optional[str] = None):
        self.name = name
        self.adequate_for = adequate_for

    @abstractmethod
    def check_carrier(self, formulas: Iterable[Formula]) -> None:
        """Raise CarrierError when a formula lies outside X"""

    @abstractmethod
    def models_of(self, premises: Iterable[Formula]) -> Tuple[Valuation, ...]:
        ...

    @property
    def carrier(self) -> Optional[Tuple[Formula, ...]]:
        """The finite carrier in universe order, or None when X is a whole language"""
        return None

    def satisfiable(self, premises: Iterable[Formula]) -> bool:
        return bool(self.models_of(premises))

    def entails(self, premises: Iterable[Formula], goal: Formula) -> bool:
        """A |= a iff Mod(A) is a subset of Mod(a)"""
        self.check_carrier([goal])
        return all(v.value(goal) == 1 for v in self.models_of(premises))

    def semantic_closure(self, premises: Iterable[Formula], universe: Optional[Iterable[Formula]] = None) -> FormulaSet:
        """Cn_V(A) restricted to a finite universe (defaults to the carrier)"""
        premises = frozenset(premises)
        bound = self._finite(universe)
        models = self.models_of(premises)
        return frozenset(a for a in bound if all(v.value(a) == 1 for v in models))

    def _finite(self, universe: Optional[Iterable[Formula]]) -> Tuple[Formula, ...]:
        if universe is not None:
            bound = sort_formulas(universe)
            self.check_carrier(bound)
            return bound
        if self.carrier is None:
            raise CarrierError(f"structure '{self.name}' has an infinite carrier; pass a finite universe")
        return self.carrier

    def describe(self) -> str:
        suffix = f", adequate for {self.adequate_for}" if self.adequate_for else ""
        return f"{self.name}{suffix}"


class ExplicitStructure(ValuationStructure):
    """Finite carrier with an explicit family of valuations"""

    def __init__(
        self,
        carrier: Iterable[Formula],
        valuations: Iterable[ExplicitValuation],
        name: str = "explicit",
        adequate_for: Optional[str] = None,
    ):
        super().__init__(name, adequate_for)
        self._carrier = sort_formulas(carrier)
        self.carrier_set: FormulaSet = frozenset(self._carrier)

        family: List[ExplicitValuation] = []
        for index, valuation in enumerate(valuations, 1):
            if not valuation.true_formulas <= self.carrier_set:
                raise ValuationStructureError(f"valuation {index} is true outside the carrier")
            if valuation.true_formulas == self.carrier_set:
                raise ValuationStructureError(
                    f"valuation {index} is the constant-1 function", code="CONSTANT_ONE_VALUATION"
                )
            if valuation not in family:
                family.append(valuation)
        if not family and self.carrier_set:
            raise ValuationStructureError("a non-empty carrier needs at least one valuation")
        self.valuations: Tuple[ExplicitValuation, ...] = tuple(family)

        logger.info(f"ExplicitStructure '{name}' initialized: {len(self.valuations)} valuation(s) over {len(self._carrier)} formulas")

    @property
    def carrier(self) -> Tuple[Formula, ...]:
        return self._carrier

    def check_carrier(self, formulas: Iterable[Formula]) -> None:
        outside = [f for f in formulas if f not in self.carrier_set]
        if outside:
            raise CarrierError(
                f"formulas outside the carrier of '{self.name}': {', '.join(str(f) for f in sort_formulas(outside))}"
            )

    def models_of(self, premises: Iterable[Formula]) -> Tuple[ExplicitValuation, ...]:
        premises = frozenset(premises)
        self.check_carrier(premises)
        return tuple(v for v in self.valuations if premises <= v.true_formulas)


class ClassicalStructure(ValuationStructure):
    """
    Classical two-valued semantics over a signature's atoms.

    Valuations are atom assignments; only the atoms occurring in a query are
    enumerated. Negation must be primitive so that no valuation is constant 1.
    """

    def __init__(self, signature: Signature, name: str = "classical truth tables", adequate_for: Optional[str] = None):
        super().__init__(name, adequate_for)
        if signature.arity("~") != 1:
            raise ValuationStructureError("classical structure needs a primitive unary '~'")
        unknown = [c.name for c in signature.connectives if c.name not in TRUTH_FUNCTIONS]
        if unknown:
            raise ValuationStructureError(f"no truth table for connectives {unknown}")
        self.signature = signature

    def check_carrier(self, formulas: Iterable[Formula]) -> None:
        known = {c.name for c in self.signature.connectives}
        for formula in formulas:
            if not atoms_of(formula) <= self.signature.atom_set or not connectives_of(formula) <= known:
                raise CarrierError(f"'{formula}' is not a formula of '{self.name}'")

    def assignments(self, formulas: Iterable[Formula]) -> Iterable[AtomAssignment]:
        atoms: FrozenSet[str] = frozenset()
        for formula in formulas:
            atoms |= atoms_of(formula)
        ordered = sorted(atoms)
        if len(ordered) > config.TRUTH_TABLE_ATOMS:
            raise UniverseTooLargeError(
                f"truth table over {len(ordered)} atoms is above the cap of {config.TRUTH_TABLE_ATOMS}",
                projected=2 ** len(ordered),
                cap=2 ** config.TRUTH_TABLE_ATOMS,
            )
        for bits in itertools.product((0, 1), repeat=len(ordered)):
            yield AtomAssignment(frozenset(a for a, bit in zip(ordered, bits) if bit))

    def models_of(self, premises: Iterable[Formula]) -> Tuple[AtomAssignment, ...]:
        premises = frozenset(premises)
        self.check_carrier(premises)
        return tuple(v for v in self.assignments(premises) if v.satisfies(premises))

    def satisfiable(self, premises: Iterable[Formula]) -> bool:
        premises = frozenset(premises)
        self.check_carrier(premises)
        return any(v.satisfies(premises) for v in self.assignments(premises))

    def entails(self, premises: Iterable[Formula], goal: Formula) -> bool:
        premises = frozenset(premises)
        self.check_carrier(premises | {goal})
        return all(v.value(goal) == 1 for v in self.assignments(premises | {goal}) if v.satisfies(premises))

    def semantic_closure(self, premises: Iterable[Formula], universe: Optional[Iterable[Formula]] = None) -> FormulaSet:
        # models_of only assigns premise atoms, so each goal gets its own table
        premises = frozenset(premises)
        return frozenset(a for a in self._finite(universe) if self.entails(premises, a))


# ---------------------------------------------------------------------------
# Paraconsequence
# ---------------------------------------------------------------------------

def maximal_satisfiable_subsets(vs: ValuationStructure, premises: Iterable[Formula], cap: Optional[int] = None) -> List[FormulaSet]:
    items = sort_formulas(premises)
    check_cap(items, cap)
    vs.check_carrier(items)
    return maximal_subsets(items, vs.satisfiable)


def para_entails(vs: ValuationStructure, premises: Iterable[Formula], goal: Formula, cap: Optional[int] = None) -> bool:
    """
    A |=P a: some satisfiable subset of A entails a.

    Only maximal satisfiable subsets are scanned; entailment transfers to
    satisfiable supersets by monotonicity.
    """
    vs.check_carrier([goal])
    return any(vs.entails(subset, goal) for subset in maximal_satisfiable_subsets(vs, premises, cap))


def semantic_para_closure(
    vs: ValuationStructure,
    premises: Iterable[Formula],
    universe: Optional[Iterable[Formula]] = None,
    cap: Optional[int] = None,
) -> FormulaSet:
    """Cn_V^P(A): union of Cn_V(A') over maximal satisfiable A' within a finite universe"""
    result: FormulaSet = frozenset()
    for subset in maximal_satisfiable_subsets(vs, premises, cap):
        result |= vs.semantic_closure(subset, universe)
    return result


def paraclassical_entails(signature: Signature, premises: Iterable[Formula], goal: Formula, cap: Optional[int] = None) -> bool:
    """Paraclassical consequence: paraconsequence over classical truth tables"""
    return para_entails(ClassicalStructure(signature), premises, goal, cap)


# ---------------------------------------------------------------------------
# Adequacy
# ---------------------------------------------------------------------------

@dataclass
class AdequacyReport:
    """Exhaustive soundness / completeness comparison of |-_S and |=_V"""
    sound: bool
    complete: bool
    checked_sets: int
    soundness_counterexamples: List[Tuple[FormulaSet, Formula]] = field(default_factory=list)
    completeness_counterexamples: List[Tuple[FormulaSet, Formula]] = field(default_factory=list)

    @property
    def adequate(self) -> bool:
        return self.sound and self.complete


@dataclass
class Lemma1Report:
    """Consistency vs satisfiability on every subset of a finite universe"""
    consistent_implies_satisfiable: bool
    satisfiable_implies_consistent: bool
    checked_sets: int
    counterexamples: List[Tuple[FormulaSet, str]] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return self.consistent_implies_satisfiable and self.satisfiable_implies_consistent


def _subsets_to_check(universe: Tuple[Formula, ...], subset_cap: Optional[int]) -> Iterable[FormulaSet]:
    if len(universe) <= config.THEORY_GUARD:
        return ascending_subsets(universe)
    if subset_cap is None:
        raise UniverseTooLargeError(
            f"exhaustive check over {len(universe)} formulas needs {2 ** len(universe)} subsets; pass a subset cap",
            projected=2 ** len(universe),
            cap=2 ** config.THEORY_GUARD,
        )
    return ascending_subsets(universe, subset_cap)


def build_adequate_structure(deductions, universe: Optional[Iterable[Formula]] = None) -> ExplicitStructure:
    """
    Build the valuation structure of characteristic functions of consistent theories.

    Args:
        deductions: DeductionService of a finite-universe system
        universe: Finite universe (defaults to the system's own)

    Returns:
        ExplicitStructure adequate for the system

    Raises:
        DegenerateSystemError: when the system has no consistent theory
    """
    report = deductions.theories(universe)
    if not report.consistent_theories:
        raise DegenerateSystemError(f"'{deductions.system.name}' has no consistent theory")
    structure = ExplicitStructure(
        report.universe,
        [ExplicitValuation(theory) for theory in report.consistent_theories],
        name=f"theories of {deductions.system.name}",
        adequate_for=deductions.system.name,
    )
    logger.info(f"Built adequate structure with {len(structure.valuations)} valuation(s)")
    return structure


def check_adequacy(
    deductions,
    vs: ValuationStructure,
    universe: Optional[Iterable[Formula]] = None,
    subset_cap: Optional[int] = None,
) -> AdequacyReport:
    """
    Compare closure-based |-_S with |=_V on every premise set.

    Args:
        deductions: DeductionService of the formal system
        vs: Valuation structure to test
        universe: Finite universe (defaults to the system's own)
        subset_cap: Largest premise set checked when the universe is above the theory guard

    Returns:
        AdequacyReport with the first counterexamples of each kind
    """
    bound = sort_formulas(deductions.resolve_universe(universe))
    vs.check_carrier(bound)
    report = AdequacyReport(sound=True, complete=True, checked_sets=0)
    for premises in _subsets_to_check(bound, subset_cap):
        report.checked_sets += 1
        syntactic = deductions.closure(premises, bound)
        semantic = vs.semantic_closure(premises, bound)
        for goal in bound:
            if goal in syntactic and goal not in semantic:
                report.sound = False
                if len(report.soundness_counterexamples) < MAX_COUNTEREXAMPLES:
                    report.soundness_counterexamples.append((premises, goal))
            elif goal in semantic and goal not in syntactic:
                report.complete = False
                if len(report.completeness_counterexamples) < MAX_COUNTEREXAMPLES:
                    report.completeness_counterexamples.append((premises, goal))

    if not report.adequate:
        logger.warning(f"Structure '{vs.name}' is not adequate: sound={report.sound}, complete={report.complete}")
    return report


def check_lemma1(deductions, vs: ValuationStructure, universe: Optional[Iterable[Formula]] = None) -> Lemma1Report:
    """Check both directions of consistency <=> satisfiability on every subset of a finite universe"""
    bound = sort_formulas(deductions.resolve_universe(universe))
    report = Lemma1Report(True, True, 0)
    for premises in _subsets_to_check(bound, None):
        report.checked_sets += 1
        consistent = deductions.closure(premises, bound) != frozenset(bound)
        satisfiable = vs.satisfiable(premises)
        if consistent and not satisfiable:
            report.consistent_implies_satisfiable = False
            report.counterexamples.append((premises, "consistent but unsatisfiable"))
        elif satisfiable and not consistent:
            report.satisfiable_implies_consistent = False
            report.counterexamples.append((premises, "satisfiable but inconsistent"))
    return report


# ---------------------------------------------------------------------------
# Structure files
# ---------------------------------------------------------------------------

def load_valuation_structure(text: str, signature: Signature, name: str = "explicit") -> ExplicitStructure:
    """
    Parse `valuations <m> over <n>`, then n carrier formulas, then m rows of n bits.

    Raises:
        ValuationStructureError: on malformed files; an all-ones row has code CONSTANT_ONE_VALUATION
    """
    lines = [line.strip() for line in text.splitlines() if line.strip() and not line.strip().startswith("#")]
    if not lines:
        raise ValuationStructureError("empty valuation-structure file")
    header = lines[0].split()
    if len(header) != 4 or header[0] != "valuations" or header[2] != "over" or not (header[1].isdigit() and header[3].isdigit()):
        raise ValuationStructureError(f"expected header 'valuations <m> over <n>', got '{lines[0]}'")
    m, n = int(header[1]), int(header[3])
    if len(lines) != 1 + n + m:
        raise ValuationStructureError(f"expected {n} carrier lines and {m} rows, got {len(lines) - 1} lines")

    carrier = [parse_formula(line, signature) for line in lines[1:1 + n]]
    if len(set(carrier)) != n:
        raise ValuationStructureError("carrier formulas must be distinct")
    valuations = []
    for row_number, row in enumerate(lines[1 + n:], 1):
        bits = row.split()
        if len(bits) != n or any(bit not in ("0", "1") for bit in bits):
            raise ValuationStructureError(f"row {row_number} must hold {n} bits")
        if all(bit == "1" for bit in bits):
            raise ValuationStructureError(f"row {row_number} is the constant-1 function", code="CONSTANT_ONE_VALUATION")
        valuations.append(ExplicitValuation(frozenset(f for f, bit in zip(carrier, bits) if bit == "1")))
    return ExplicitStructure(carrier, valuations, name=name)


def render_valuation_structure(vs: ExplicitStructure, signature: Optional[Signature] = None) -> str:
    lines = [f"valuations {len(vs.valuations)} over {len(vs.carrier)}"]
    lines += [render_formula(f, signature) for f in vs.carrier]
    for valuation in vs.valuations:
        lines.append(" ".join(str(valuation.value(f)) for f in vs.carrier))
    return "\n".join(lines) + "\n"
