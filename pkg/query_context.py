"""
Shared CLI flags and their resolution into services.
"""

import argparse
import logging
from functools import cached_property
from typing import Optional, Tuple

import config
from consistency_service import (
    BoundedSyntacticOracle,
    ConsistencyOracle,
    ConsistencyService,
    EnumerativeOracle,
    OracleKind,
    SemanticOracle,
    default_probes,
)
from deduction_service import DeductionService, SearchBudget
from errors import UsageError
from formula_service import Formula, FormulaSet, enumerate_universe, parse_formula, parse_formula_list
from paradeduction_service import Entailment, ParadeductionService, SemanticEntailment, Strategy, SyntacticEntailment
from preset_service import Preset, load_preset, preset_names
from system_service import FormalSystem, parse_system_definition
from valuation_service import ValuationStructure, build_adequate_structure, load_valuation_structure

# Configure logging
logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Argument groups
# ---------------------------------------------------------------------------

def system_arguments(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--preset", choices=preset_names(), help="shipped system")
    source.add_argument("--system", metavar="FILE", help="system-definition file")
    parser.add_argument("--structure", metavar="FILE", help="valuation-structure file declared adequate for the system")


def oracle_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--oracle", choices=[kind.value for kind in OracleKind], help="consistency oracle")
    parser.add_argument("--budget", type=int, default=config.NODE_BUDGET, help="search node budget")
    parser.add_argument("--depth", type=int, default=config.SEARCH_DEPTH, help="search deepening levels")
    parser.add_argument("--subset-cap", type=int, default=config.SUBSET_CAP, help="largest premise set for subset scans")
    parser.add_argument("--workers", type=int, default=config.WORKERS, help="threads for subset branches")
    parser.add_argument("--strategy", choices=[s.value for s in Strategy], default=Strategy.MAXIMAL.value,
                        help="subsets scanned by paradeduce")


def premise_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--premises", default="", help="comma-separated premise formulas")
    parser.add_argument("--premises-file", metavar="FILE", help="premise formulas, one per line")


def goal_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--goal", required=True, help="target formula")


def universe_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--universe", help="comma-separated finite universe")
    parser.add_argument("--universe-depth", type=int, help="universe of all formulas up to this depth")


def output_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=["text", "records"], default="text", help="report format")


QUERY_ARGUMENTS = (system_arguments, oracle_arguments, premise_arguments, universe_arguments, output_arguments)


def read_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise UsageError(f"cannot read '{path}': {exc.strerror}") from None


class QueryContext:
    """
    Services for one CLI invocation, built lazily from its arguments.
    """

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.preset: Optional[Preset] = None
        self._structure: Optional[ValuationStructure] = None

        if getattr(args, "preset", None):
            self.preset = load_preset(args.preset)
            self.system: FormalSystem = self.preset.system
            self.deductions: DeductionService = self.preset.deductions
            self._structure = self.preset.structure
        else:
            self.system = parse_system_definition(read_text(args.system), name=args.system)
            self.deductions = DeductionService(self.system)

        if getattr(args, "structure", None):
            self._structure = load_valuation_structure(read_text(args.structure), self.signature, name=args.structure)
            self._structure.adequate_for = self.system.name

        logger.info(f"Query context ready for '{self.system.name}'")

    @property
    def signature(self):
        return self.system.signature

    def premises(self) -> Tuple[Formula, ...]:
        formulas = list(parse_formula_list(getattr(self.args, "premises", "") or "", self.signature))
        path = getattr(self.args, "premises_file", None)
        if path:
            for line in read_text(path).splitlines():
                if line.strip() and not line.strip().startswith("#"):
                    formulas.append(parse_formula(line.strip(), self.signature))
        return tuple(dict.fromkeys(formulas))

    def goal(self) -> Formula:
        return parse_formula(self.args.goal, self.signature)

    def universe(self) -> Optional[FormulaSet]:
        if getattr(self.args, "universe", None):
            return frozenset(parse_formula_list(self.args.universe, self.signature))
        if getattr(self.args, "universe_depth", None) is not None:
            return frozenset(enumerate_universe(self.signature, self.args.universe_depth))
        return None

    def budget(self) -> SearchBudget:
        return SearchBudget(getattr(self.args, "budget", config.NODE_BUDGET), getattr(self.args, "depth", config.SEARCH_DEPTH))

    def subset_cap(self) -> int:
        return getattr(self.args, "subset_cap", config.SUBSET_CAP)

    def valuation_structure(self) -> ValuationStructure:
        if self._structure is None:
            if not self.system.is_finite:
                raise UsageError(f"'{self.system.name}' has no valuation structure; pass --structure")
            self._structure = build_adequate_structure(self.deductions, self.universe())
        return self._structure

    def _oracle(self) -> ConsistencyOracle:
        kind = getattr(self.args, "oracle", None)
        if kind is None:
            if self.preset is not None and not (self.system.is_finite and self.universe() is not None):
                return self.preset.oracle
            kind = OracleKind.ENUMERATIVE.value if self.system.is_finite or self.universe() else OracleKind.BOUNDED.value
        if kind == OracleKind.ENUMERATIVE.value:
            return EnumerativeOracle(self.deductions, self.universe())
        if kind == OracleKind.SEMANTIC.value:
            return SemanticOracle(self.valuation_structure())
        return BoundedSyntacticOracle(DeductionService(self.system), default_probes(self.signature), self.budget())

    @cached_property
    def consistency(self) -> ConsistencyService:
        return ConsistencyService(self._oracle())

    @cached_property
    def paradeductions(self) -> ParadeductionService:
        return ParadeductionService(
            self.deductions,
            self.consistency,
            workers=getattr(self.args, "workers", config.WORKERS),
            strategy=Strategy(getattr(self.args, "strategy", Strategy.MAXIMAL.value)),
            subset_cap=self.subset_cap(),
        )

    def entailment(self, kind: Optional[str]) -> Entailment:
        if kind is None:
            kind = "semantic" if self._structure is not None else "syntactic"
        if kind == "semantic":
            return SemanticEntailment(self.valuation_structure())
        return SyntacticEntailment(self.deductions, self.budget())

    def oracle_description(self) -> str:
        return self.consistency.oracle.describe()
