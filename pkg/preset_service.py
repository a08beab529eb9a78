"""
Shipped formal systems, stored as system-definition text and loaded with
their consistency oracle and valuation structure attached.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from consistency_service import ConsistencyOracle, ConsistencyService, EnumerativeOracle, SemanticOracle
from deduction_service import DeductionService
from errors import PresetNotFoundError
from system_service import FormalSystem, parse_system_definition
from valuation_service import ClassicalStructure, ValuationStructure, build_adequate_structure

# Configure logging
logger = logging.getLogger(__name__)

TOY_SOURCE = """\
# Finite negation-only system: double negation, ~~q as the only axiom
# and explosion rules for each atom.
[system]    name = toy
[signature] atoms = p, q ; connectives = ~:1
[universe]  mode = finite ; depth = 2
[axioms]
            concrete: ~~q
[rules]
            dn_intro: V1 / ~~V1
            dn_elim: ~~V1 / V1
            ex_p: p, ~p / q
            ex_p_neg: p, ~p / ~q
            ex_q: q, ~q / p
            ex_q_neg: q, ~q / ~p
"""

CLASSICAL_SOURCE = """\
# Classical propositional logic: Lukasiewicz axioms over {~, ->} with modus
# ponens. The conjunction rules are derived rules of these axioms.
[system]    name = classical-pl
[signature] atoms = a, b, c, d, p, q, r, s ; connectives = ~:1, ->:2
            defined = &:2 := ~(V1 -> ~V2)
            defined = |:2 := ~V1 -> V2
            defined = <->:2 := ~((V1 -> V2) -> ~(V2 -> V1))
[universe]  mode = schematic ; depth = 3
[axioms]
            schema: V1 -> (V2 -> V1)
            schema: (V1 -> (V2 -> V3)) -> ((V1 -> V2) -> (V1 -> V3))
            schema: (~V1 -> ~V2) -> (V2 -> V1)
[rules]
            mp: V1, V1 -> V2 / V2
            and_elim_l: V1 & V2 / V1
            and_elim_r: V1 & V2 / V2
            and_intro: V1, V2 / V1 & V2
"""

PRESET_SOURCES: Dict[str, Tuple[str, str]] = {
    "toy": (
        TOY_SOURCE,
        "Finite negation-only system over p, q (depth 2) with the structure of its consistent theories attached",
    ),
    "classical-pl": (
        CLASSICAL_SOURCE,
        "Hilbert-style classical logic with truth-table semantics declared adequate",
    ),
}


@dataclass
class Preset:
    """A formal system bundled with its oracle and semantics"""
    name: str
    system: FormalSystem
    deductions: DeductionService
    oracle: ConsistencyOracle
    structure: Optional[ValuationStructure]
    documentation: str


def preset_names() -> Tuple[str, ...]:
    return tuple(PRESET_SOURCES)


def preset_source(name: str) -> str:
    """System-definition text of a preset"""
    try:
        return PRESET_SOURCES[name][0]
    except KeyError:
        raise PresetNotFoundError(
            f"unknown preset '{name}'; available: {', '.join(preset_names())}", preset=name
        ) from None


def load_preset(name: str) -> Preset:
    """
    Load a shipped preset.

    Args:
        name: 'toy' or 'classical-pl'

    Returns:
        Preset whose empty premise set has been checked consistent

    Raises:
        PresetNotFoundError: for unknown names
    """
    source = preset_source(name)
    documentation = PRESET_SOURCES[name][1]
    system = parse_system_definition(source)

    if system.is_finite:
        deductions = DeductionService(system)
        structure: ValuationStructure = build_adequate_structure(deductions)
        oracle: ConsistencyOracle = EnumerativeOracle(deductions)
    else:
        structure = ClassicalStructure(system.signature, adequate_for=system.name)
        deductions = DeductionService(system, delegate=structure.entails, delegate_label="classical truth-table")
        oracle = SemanticOracle(structure)

    # raises DegenerateSystemError when the empty set is inconsistent
    ConsistencyService(oracle)
    logger.info(f"Loaded preset '{name}'")
    return Preset(name, system, deductions, oracle, structure, documentation)
