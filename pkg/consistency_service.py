"""
ConsistencyService - S-consistency verdicts through pluggable oracles, with a
memo table, provenance counters and canonical subset enumeration.
"""

import logging
import threading
from abc import ABC, abstractmethod
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, Iterator, List, Optional, Sequence

import config
from deduction_service import DeductionService, SearchBudget, Verdict
from errors import DegenerateSystemError, PreconditionError, UndecidedError, UniverseTooLargeError
from formula_service import Formula, FormulaSet, Signature, parse_formula, sort_formulas
from subset_lattice import ascending_subsets, check_cap, maximal_subsets
from valuation_service import ValuationStructure

# Configure logging
logger = logging.getLogger(__name__)


class ConsistencyVerdict(Enum):
    CONSISTENT = "Consistent"
    INCONSISTENT = "Inconsistent"
    UNKNOWN = "Unknown"


class OracleKind(Enum):
    ENUMERATIVE = "enumerative"
    SEMANTIC = "semantic"
    BOUNDED = "bounded"


class ConsistencyOracle(ABC):
    """Decides Cn_S(A) != X for premise sets A"""

    kind: OracleKind

    @abstractmethod
    def decide(self, premises: FormulaSet) -> ConsistencyVerdict:
        ...

    @abstractmethod
    def describe(self) -> str:
        ...


class EnumerativeOracle(ConsistencyOracle):
    """Consistent iff the closure within a finite universe is not the whole universe"""

    kind = OracleKind.ENUMERATIVE

    def __init__(self, deductions: DeductionService, universe: Optional[Iterable[Formula]] = None):
        self.deductions = deductions
        self.universe = deductions.resolve_universe(universe)

    def decide(self, premises: FormulaSet) -> ConsistencyVerdict:
        if self.deductions.closure(premises, self.universe) == self.universe:
            return ConsistencyVerdict.INCONSISTENT
        return ConsistencyVerdict.CONSISTENT

    def describe(self) -> str:
        return f"enumerative (closure over {len(self.universe)} formulas of {self.deductions.system.name})"


class SemanticOracle(ConsistencyOracle):
    """Consistent iff satisfiable; valid only for a structure adequate for the system"""

    kind = OracleKind.SEMANTIC

    def __init__(self, structure: ValuationStructure, adequate_for: Optional[str] = None):
        adequate_for = adequate_for or structure.adequate_for
        if not adequate_for:
            raise PreconditionError(
                f"semantic oracle over '{structure.name}' needs a declared adequacy pairing with a formal system"
            )
        self.structure = structure
        self.adequate_for = adequate_for

    def decide(self, premises: FormulaSet) -> ConsistencyVerdict:
        if self.structure.satisfiable(premises):
            return ConsistencyVerdict.CONSISTENT
        return ConsistencyVerdict.INCONSISTENT

    def describe(self) -> str:
        return f"semantic ({self.structure.name}, adequate for {self.adequate_for})"


class BoundedSyntacticOracle(ConsistencyOracle):
    """
    Budgeted refutation search.

    Inconsistent when every probe formula is deducible, Consistent when some
    probe is decidably not deducible, Unknown otherwise.
    """

    kind = OracleKind.BOUNDED

    def __init__(self, deductions: DeductionService, probes: Sequence[Formula], budget: Optional[SearchBudget] = None):
        if not probes:
            raise PreconditionError("bounded oracle needs at least one probe formula")
        self.deductions = deductions
        self.probes = sort_formulas(probes)
        self.budget = budget or SearchBudget()

    def decide(self, premises: FormulaSet) -> ConsistencyVerdict:
        unknown = False
        for probe in self.probes:
            verdict = self.deductions.deducible(premises, probe, self.budget).verdict
            if verdict is Verdict.NO:
                return ConsistencyVerdict.CONSISTENT
            if verdict is Verdict.UNKNOWN:
                unknown = True
        return ConsistencyVerdict.UNKNOWN if unknown else ConsistencyVerdict.INCONSISTENT

    def describe(self) -> str:
        return f"bounded (refutation probes {', '.join(str(p) for p in self.probes)}; {self.budget.max_nodes} nodes)"


def default_probes(signature: Signature) -> List[Formula]:
    """Each atom and, when negation is available, its negation"""
    probes = [parse_formula(atom, signature) for atom in signature.atoms]
    if signature.arity("~") == 1:
        probes += [parse_formula(f"~{atom}", signature) for atom in signature.atoms]
    return probes


@dataclass
class ConsistencyStats:
    oracle: str
    oracle_calls: int
    memo_hits: int
    unknown_skipped: int
    verdicts: Dict[str, int]


class ConsistencyService:
    """
    Service answering consistency queries through one oracle.

    Verdicts are memoized by premise set; the memo is the only mutable state,
    holds at most config.CACHE_SIZE verdicts and is filled with an atomic
    get-or-compute.
    """

    def __init__(self, oracle: ConsistencyOracle, check_empty: bool = True):
        """
        Initialize the consistency service.

        Args:
            oracle: Oracle deciding each premise set
            check_empty: Verify that the empty set is consistent

        Raises:
            DegenerateSystemError: when the empty set is inconsistent
        """
        self.oracle = oracle
        self._memo: Dict[FormulaSet, ConsistencyVerdict] = {}
        self._lock = threading.Lock()
        self._calls = 0
        self._hits = 0
        self._unknown_skipped = 0
        self._verdicts: Counter = Counter()

        if check_empty:
            verdict = self.check_consistency(frozenset())
            if verdict is ConsistencyVerdict.INCONSISTENT:
                raise DegenerateSystemError(f"the empty set is inconsistent under {oracle.describe()}")

        logger.info(f"ConsistencyService initialized with oracle: {oracle.describe()}")

    def check_consistency(self, premises: Iterable[Formula]) -> ConsistencyVerdict:
        """Verdict for one premise set, memoized"""
        key = frozenset(premises)
        with self._lock:
            cached = self._memo.get(key)
            if cached is not None:
                self._hits += 1
                return cached

        verdict = self.oracle.decide(key)
        if not key and verdict is ConsistencyVerdict.UNKNOWN:
            logger.warning("Consistency of the empty set is Unknown; recording it as consistent")
            verdict = ConsistencyVerdict.CONSISTENT
        with self._lock:
            if key in self._memo:
                return self._memo[key]
            if len(self._memo) >= config.CACHE_SIZE:
                del self._memo[next(iter(self._memo))]
            self._memo[key] = verdict
            self._calls += 1
            self._verdicts[verdict.value] += 1
        return verdict

    def is_consistent(self, premises: Iterable[Formula]) -> bool:
        """True only for a Consistent verdict; Unknown raises"""
        verdict = self.check_consistency(premises)
        if verdict is ConsistencyVerdict.UNKNOWN:
            raise UndecidedError(f"consistency of {{{', '.join(str(f) for f in sort_formulas(premises))}}} is Unknown")
        return verdict is ConsistencyVerdict.CONSISTENT

    def consistent_subsets(self, premises: Iterable[Formula], cap: Optional[int] = None) -> Iterator[FormulaSet]:
        """
        Stream the Consistent subsets of a finite premise set in canonical order.

        Supersets of an Inconsistent subset are skipped without a query;
        Unknown subsets are skipped and counted.

        Args:
            premises: Finite premise set
            cap: Maximum premise-set size (defaults to config.SUBSET_CAP)
        """
        items = sort_formulas(premises)
        check_cap(items, cap)
        inconsistent: List[FormulaSet] = []
        for subset in ascending_subsets(items):
            if any(known <= subset for known in inconsistent):
                continue
            verdict = self.check_consistency(subset)
            if verdict is ConsistencyVerdict.CONSISTENT:
                yield subset
            elif verdict is ConsistencyVerdict.INCONSISTENT:
                inconsistent.append(subset)
            else:
                with self._lock:
                    self._unknown_skipped += 1
                logger.warning(f"Skipping subset of size {len(subset)} with Unknown consistency")

    def maximal_consistent_subsets(self, premises: Iterable[Formula], cap: Optional[int] = None) -> List[FormulaSet]:
        """
        Maximal consistent subsets, top-down over the subset lattice.

        Raises:
            UndecidedError: when an Unknown verdict makes maximality undecidable
        """
        items = sort_formulas(premises)
        check_cap(items, cap)
        result = maximal_subsets(items, self.is_consistent)
        logger.info(f"{len(result)} maximal consistent subset(s) of {len(items)} premises")
        return result

    def consistent_sets(self, universe: Iterable[Formula]) -> List[FormulaSet]:
        """CON_S restricted to the subsets of a finite universe"""
        items = sort_formulas(universe)
        if len(items) > config.THEORY_GUARD:
            raise UniverseTooLargeError(
                f"enumerating consistent sets over {len(items)} formulas needs {2 ** len(items)} checks",
                projected=2 ** len(items),
                cap=2 ** config.THEORY_GUARD,
            )
        return list(self.consistent_subsets(items, cap=len(items)))

    def stats(self) -> ConsistencyStats:
        with self._lock:
            return ConsistencyStats(
                oracle=self.oracle.describe(),
                oracle_calls=self._calls,
                memo_hits=self._hits,
                unknown_skipped=self._unknown_skipped,
                verdicts=dict(self._verdicts),
            )
