import itertools

import pytest

from formula_service import Signature, match_pattern, parse_formula, parse_formula_list
from preset_service import load_preset


@pytest.fixture(scope="session")
def toy():
    return load_preset("toy")


@pytest.fixture(scope="session")
def classical():
    return load_preset("classical-pl")


@pytest.fixture(scope="session")
def full_signature():
    return Signature.build(
        ["p", "q", "r"],
        [("~", 1), ("&", 2), ("|", 2), ("->", 2), ("<->", 2), ("top", 0), ("bot", 0)],
    )


@pytest.fixture
def f(toy):
    """Parse one formula of the toy language"""
    return lambda text: parse_formula(text, toy.system.signature)


@pytest.fixture
def fs(toy):
    """Parse a comma-separated set of toy formulas"""
    return lambda text: frozenset(parse_formula_list(text, toy.system.signature))


@pytest.fixture
def cf(classical):
    return lambda text: parse_formula(text, classical.system.signature)


@pytest.fixture
def cfs(classical):
    return lambda text: frozenset(parse_formula_list(text, classical.system.signature))


@pytest.fixture
def worked_example(cfs):
    return cfs("a & b, a -> c, b -> ~c")


def _brute_consequences(system, available, universe):
    """Every rule instance checked by a plain loop over rules, premise tuples and conclusions"""
    found = set()
    for rule in system.rules:
        for premises in itertools.product(sorted(available, key=str), repeat=len(rule.premises)):
            binding = {}
            for pattern, formula in zip(rule.premises, premises):
                binding = match_pattern(pattern, formula, binding)
                if binding is None:
                    break
            if binding is None:
                continue
            found.update(c for c in universe if match_pattern(rule.conclusion, c, binding) is not None)
    return frozenset(found)


def _brute_derivable(system, premises, universe):
    """Breadth-first search over the sets reachable by deductions of length at most |U| + |A|"""
    premises = frozenset(premises)
    axioms = frozenset(c for c in universe for spec in system.axioms if match_pattern(spec.pattern, c) is not None)
    start = frozenset()
    seen, frontier = {start}, [start]
    for _ in range(len(universe) + len(premises)):
        following = []
        for state in frontier:
            for formula in (premises | axioms | _brute_consequences(system, state, universe)) - state:
                grown = state | {formula}
                if grown not in seen:
                    seen.add(grown)
                    following.append(grown)
        frontier = following
    return frozenset().union(*seen)


@pytest.fixture
def brute_consequences():
    return _brute_consequences


@pytest.fixture
def brute_derivable():
    return _brute_derivable
