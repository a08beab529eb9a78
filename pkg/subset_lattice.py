"""
Canonical walks over the subset lattice of a finite formula set.

Canonical order: ascending cardinality, then lexicographic on universe positions.
"""

import itertools
import logging
from typing import Callable, Iterable, Iterator, List, Optional, Sequence, Tuple

import config
from errors import SubsetCapError
from formula_service import Formula, FormulaSet, sort_formulas

# Configure logging
logger = logging.getLogger(__name__)


def check_cap(items: Sequence[Formula], cap: Optional[int] = None) -> int:
    cap = config.SUBSET_CAP if cap is None else cap
    if len(items) > cap:
        raise SubsetCapError(
            f"premise set has {len(items)} formulas; subset scans are capped at {cap}",
            size=len(items),
            cap=cap,
        )
    return cap


def canonical_key(subset: FormulaSet, ordered: Sequence[Formula]) -> Tuple[int, Tuple[int, ...]]:
    position = {formula: index for index, formula in enumerate(ordered)}
    return len(subset), tuple(sorted(position[f] for f in subset))


def canonical_sort(subsets: Iterable[FormulaSet], items: Iterable[Formula]) -> List[FormulaSet]:
    ordered = sort_formulas(items)
    return sorted(subsets, key=lambda s: canonical_key(s, ordered))


def ascending_subsets(items: Iterable[Formula], max_size: Optional[int] = None) -> Iterator[FormulaSet]:
    """Every subset of items in canonical order, optionally bounded in size"""
    ordered = sort_formulas(items)
    top = len(ordered) if max_size is None else min(max_size, len(ordered))
    for size in range(top + 1):
        for combo in itertools.combinations(ordered, size):
            yield frozenset(combo)


def maximal_subsets(items: Iterable[Formula], predicate: Callable[[FormulaSet], bool]) -> List[FormulaSet]:
    """
    Maximal subsets of items satisfying a downward-closed predicate.

    The walk is top-down: a subset contained in an already found maximal
    subset is skipped without calling the predicate.

    Args:
        items: Finite formula set
        predicate: Downward-closed test (consistency, satisfiability)

    Returns:
        The maximal subsets in canonical order
    """
    ordered = sort_formulas(items)
    found: List[FormulaSet] = []
    calls = 0
    for size in range(len(ordered), -1, -1):
        for combo in itertools.combinations(ordered, size):
            subset = frozenset(combo)
            if any(subset <= known for known in found):
                continue
            calls += 1
            if predicate(subset):
                found.append(subset)
    logger.debug(f"Top-down walk over {len(ordered)} formulas: {calls} predicate call(s), {len(found)} maximal")
    return canonical_sort(found, ordered)
