"""
Formal systems: universe definition, axiom specs and schematic
inference rules, with axiom-instance and immediate-consequence generation over
finite universes and the system-definition file format.
"""

import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from errors import FormulaSyntaxError, ParadeductionError, SystemDefinitionError
from formula_service import (
    Atom,
    Binding,
    Compound,
    Definition,
    Formula,
    FormulaSet,
    Pattern,
    SchemaVar,
    Signature,
    apply_binding,
    enumerate_universe,
    is_ground,
    match_pattern,
    parse_formula,
    parse_formula_list,
    parse_pattern,
    pattern_size,
    render_formula,
    schema_variables,
    sort_formulas,
)

# Configure logging
logger = logging.getLogger(__name__)


class AxiomKind(Enum):
    CONCRETE = "concrete"
    SCHEMA = "schema"


class UniverseMode(Enum):
    FINITE = "finite"
    SCHEMATIC = "schematic"


@dataclass(frozen=True)
class AxiomSpec:
    """A concrete axiom formula or an axiom schema"""
    kind: AxiomKind
    pattern: Pattern

    def __post_init__(self):
        if self.kind is AxiomKind.CONCRETE and not is_ground(self.pattern):
            raise SystemDefinitionError(f"concrete axiom '{self.pattern}' contains schema variables")

    @classmethod
    def concrete(cls, formula: Formula) -> "AxiomSpec":
        return cls(AxiomKind.CONCRETE, formula)

    @classmethod
    def schema(cls, pattern: Pattern) -> "AxiomSpec":
        return cls(AxiomKind.SCHEMA, pattern)

    def match(self, formula: Formula) -> Optional[Binding]:
        if self.kind is AxiomKind.CONCRETE:
            return {} if self.pattern == formula else None
        return match_pattern(self.pattern, formula)


@dataclass(frozen=True)
class InferenceRule:
    """
    Schematic inference rule of degree n: n premise patterns and a conclusion.
    Its ground instances realize the relation R of the formal system.
    """
    name: str
    premises: Tuple[Pattern, ...]
    conclusion: Pattern

    def __post_init__(self):
        if not self.premises:
            raise SystemDefinitionError(f"rule '{self.name}' must have degree >= 1")
        free = schema_variables(self.conclusion) - self.premise_variables
        if free:
            raise SystemDefinitionError(
                f"rule '{self.name}' generates unbound variables {sorted(free)} in its conclusion"
            )

    @property
    def degree(self) -> int:
        return len(self.premises)

    @cached_property
    def premise_variables(self) -> frozenset:
        result = frozenset()
        for premise in self.premises:
            result |= schema_variables(premise)
        return result

    @cached_property
    def matching_order(self) -> Tuple[int, ...]:
        # most specific premise first, so later premises are usually ground lookups
        return tuple(sorted(range(self.degree), key=lambda i: -pattern_size(self.premises[i])))

    def instance(self, binding: Binding) -> Tuple[Tuple[Formula, ...], Formula]:
        return (
            tuple(apply_binding(p, binding) for p in self.premises),
            apply_binding(self.conclusion, binding),
        )

    def match_instance(self, premises: Sequence[Formula], conclusion: Formula) -> Optional[Binding]:
        """Binding under which the positional premises and conclusion instantiate this rule, if any"""
        if len(premises) != self.degree:
            return None
        binding: Optional[Binding] = {}
        for pattern, formula in zip(self.premises, premises):
            binding = match_pattern(pattern, formula, binding)
            if binding is None:
                return None
        return match_pattern(self.conclusion, conclusion, binding)


@dataclass(frozen=True)
class UniverseSpec:
    mode: UniverseMode
    formulas: Tuple[Formula, ...] = ()
    max_depth: int = 0
    cap: Optional[int] = None

    @classmethod
    def finite(cls, formulas: Iterable[Formula], max_depth: int = 0) -> "UniverseSpec":
        return cls(UniverseMode.FINITE, sort_formulas(formulas), max_depth)

    @classmethod
    def schematic(cls, max_depth: int, cap: Optional[int] = None) -> "UniverseSpec":
        return cls(UniverseMode.SCHEMATIC, (), max_depth, cap)


@dataclass(frozen=True)
class FormalSystem:
    """Universe, axioms and rules plus the signature formulas are drawn from"""
    name: str
    signature: Signature
    universe: UniverseSpec
    axioms: Tuple[AxiomSpec, ...]
    rules: Tuple[InferenceRule, ...]

    @property
    def is_finite(self) -> bool:
        return self.universe.mode is UniverseMode.FINITE

    @cached_property
    def universe_set(self) -> FormulaSet:
        return frozenset(self.finite_universe())

    def finite_universe(self) -> Tuple[Formula, ...]:
        if not self.is_finite:
            raise ParadeductionError(
                f"system '{self.name}' has a schematic universe; pass an explicit finite universe",
                code="SCHEMATIC_UNIVERSE",
            )
        return self.universe.formulas

    def rule(self, name: str) -> Optional[InferenceRule]:
        for rule in self.rules:
            if rule.name == name:
                return rule
        return None


@dataclass(frozen=True)
class RuleApplication:
    """Witness for an immediate consequence: rule, binding and ground instance"""
    rule: InferenceRule
    premises: Tuple[Formula, ...]
    conclusion: Formula
    binding: Binding = field(compare=False)


def validate_system(system: FormalSystem) -> FormalSystem:
    """
    Check the structural invariants of a formal system.

    Returns:
        The same system, for chaining

    Raises:
        SystemDefinitionError: when a rule name repeats or a concrete axiom lies outside a finite universe
    """
    names = [rule.name for rule in system.rules]
    if len(set(names)) != len(names):
        raise SystemDefinitionError(f"rule names must be unique in '{system.name}': {names}")
    if system.is_finite:
        if not system.universe.formulas:
            raise SystemDefinitionError(f"finite universe of '{system.name}' is empty")
        for number, axiom in enumerate(system.axioms, 1):
            if axiom.kind is AxiomKind.CONCRETE and axiom.pattern not in system.universe_set:
                raise SystemDefinitionError(
                    f"concrete axiom {number} '{axiom.pattern}' is not in the universe of '{system.name}'"
                )
    return system


# ---------------------------------------------------------------------------
# Axiom instances and immediate consequences
# ---------------------------------------------------------------------------

def axiom_witnesses(system: FormalSystem, universe: Iterable[Formula]) -> Dict[Formula, Tuple[int, Binding]]:
    """
    Map each axiom instance in the universe to the first axiom spec it instantiates.

    Returns:
        Ordered mapping formula -> (1-based axiom number, binding), in universe order
    """
    witnesses: Dict[Formula, Tuple[int, Binding]] = {}
    for formula in sort_formulas(universe):
        for number, axiom in enumerate(system.axioms, 1):
            binding = axiom.match(formula)
            if binding is not None:
                witnesses[formula] = (number, binding)
                break
    return witnesses


def axiom_instances(system: FormalSystem, universe: Iterable[Formula]) -> Tuple[Formula, ...]:
    """All concrete axioms and schema instances lying in the universe, in universe order"""
    return tuple(axiom_witnesses(system, universe))


def _index_by_head(formulas: Iterable[Formula]) -> Dict[str, List[Formula]]:
    index: Dict[str, List[Formula]] = {}
    for formula in formulas:
        head = formula.connective if isinstance(formula, Compound) else ""
        index.setdefault(head, []).append(formula)
    return index


def _candidates(pattern: Pattern, available: Tuple[Formula, ...], index: Dict[str, List[Formula]]):
    if isinstance(pattern, SchemaVar):
        return available
    if isinstance(pattern, Atom):
        return [f for f in index.get("", []) if f == pattern]
    return index.get(pattern.connective, [])


def _premise_bindings(
    rule: InferenceRule,
    available: Tuple[Formula, ...],
    available_set: FormulaSet,
    index: Dict[str, List[Formula]],
) -> Iterator[Binding]:
    order = rule.matching_order

    def extend(position: int, binding: Binding) -> Iterator[Binding]:
        if position == len(order):
            yield binding
            return
        pattern = rule.premises[order[position]]
        if schema_variables(pattern) <= binding.keys():
            if apply_binding(pattern, binding) in available_set:
                yield from extend(position + 1, binding)
            return
        for candidate in _candidates(pattern, available, index):
            extended = match_pattern(pattern, candidate, binding)
            if extended is not None:
                yield from extend(position + 1, extended)

    yield from extend(0, {})


def rule_applications(
    system: FormalSystem, available: Iterable[Formula], universe: Iterable[Formula]
) -> List[RuleApplication]:
    """
    Enumerate every ground rule instance whose premises lie in `available`
    and whose conclusion lies in the universe.

    Distinct premise patterns may match the same formula (premise collapse);
    the matched premise set is never empty because every rule has degree >= 1.

    Args:
        system: Formal system supplying the rules
        available: Formulas that may serve as premises
        universe: Finite universe bounding conclusions

    Returns:
        Applications in deterministic order (rule order, then premise universe order)
    """
    ordered = sort_formulas(available)
    available_set = frozenset(ordered)
    universe_set = universe if isinstance(universe, frozenset) else frozenset(universe)
    index = _index_by_head(ordered)
    applications: List[RuleApplication] = []
    for rule in system.rules:
        for binding in _premise_bindings(rule, ordered, available_set, index):
            premises, conclusion = rule.instance(binding)
            if conclusion in universe_set:
                applications.append(RuleApplication(rule, premises, conclusion, binding))
    return applications


def immediate_consequences(
    system: FormalSystem, available: Iterable[Formula], universe: Iterable[Formula]
) -> Tuple[Formula, ...]:
    """Conclusions of all rule instances over `available`, in universe order"""
    return sort_formulas(app.conclusion for app in rule_applications(system, available, universe))


# ---------------------------------------------------------------------------
# System-definition files
# ---------------------------------------------------------------------------

SECTION_RE = re.compile(r"^\[(\w+)\]\s*(.*)$")
KNOWN_SECTIONS = ("system", "signature", "universe", "axioms", "rules")
RULE_RE = re.compile(r"^([A-Za-z_][\w-]*)\s*:\s*(.+?)\s*/\s*(.+)$")
DEFINED_RE = re.compile(r"^(\S+)\s*:\s*(\d+)\s*:=\s*(.+)$")


def _split_sections(text: str) -> Dict[str, List[Tuple[int, str]]]:
    sections: Dict[str, List[Tuple[int, str]]] = {}
    current: Optional[str] = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        match = SECTION_RE.match(line)
        if match:
            current = match.group(1).lower()
            if current not in KNOWN_SECTIONS:
                raise SystemDefinitionError(f"unknown section [{current}]", lineno)
            if current in sections:
                raise SystemDefinitionError(f"section [{current}] appears twice", lineno)
            sections[current] = []
            line = match.group(2).strip()
            if not line:
                continue
        elif current is None:
            raise SystemDefinitionError("content outside of a section", lineno)
        for entry in line.split(";"):
            entry = entry.strip()
            if entry:
                sections[current].append((lineno, entry))
    return sections


def _key_value(entry: str, lineno: int) -> Tuple[str, str]:
    if "=" not in entry:
        raise SystemDefinitionError(f"expected 'key = value', got '{entry}'", lineno)
    key, value = entry.split("=", 1)
    return key.strip().lower(), value.strip()


def _parse_signature(entries: List[Tuple[int, str]]) -> Signature:
    atoms: Optional[List[str]] = None
    connectives: Optional[List[Tuple[str, int]]] = None
    definitions: List[Tuple[int, str]] = []
    for lineno, entry in entries:
        key, value = _key_value(entry, lineno)
        if key == "atoms":
            atoms = [name.strip() for name in value.split(",") if name.strip()]
        elif key == "connectives":
            connectives = []
            for item in value.split(","):
                name, _, arity = item.strip().rpartition(":")
                if not name or not arity.isdigit():
                    raise SystemDefinitionError(f"connective must be written name:arity, got '{item.strip()}'", lineno)
                connectives.append((name, int(arity)))
        elif key == "defined":
            definitions.append((lineno, value))
        else:
            raise SystemDefinitionError(f"unknown [signature] field '{key}'", lineno)
    if atoms is None or connectives is None:
        raise SystemDefinitionError("[signature] requires 'atoms' and 'connectives'")

    try:
        signature = Signature.build(atoms, connectives)
    except ParadeductionError as exc:
        raise SystemDefinitionError(str(exc), entries[0][0]) from None
    for lineno, value in definitions:
        match = DEFINED_RE.match(value)
        if not match:
            raise SystemDefinitionError(f"defined connective must be written 'sym:arity := pattern', got '{value}'", lineno)
        symbol, arity, body = match.group(1), int(match.group(2)), match.group(3)
        try:
            expansion = parse_pattern(body, signature)
            signature = signature.with_definition(Definition(symbol, arity, expansion))
        except ParadeductionError as exc:
            raise SystemDefinitionError(str(exc), lineno) from None
    return signature


def _parse_universe(entries: List[Tuple[int, str]], signature: Signature) -> UniverseSpec:
    fields: Dict[str, Tuple[int, str]] = {}
    for lineno, entry in entries:
        key, value = _key_value(entry, lineno)
        if key not in ("mode", "depth", "cap", "formulas"):
            raise SystemDefinitionError(f"unknown [universe] field '{key}'", lineno)
        fields[key] = (lineno, value)

    mode_line, mode_text = fields.get("mode", (entries[0][0] if entries else None, "finite"))
    try:
        mode = UniverseMode(mode_text.lower())
    except ValueError:
        raise SystemDefinitionError(f"universe mode must be 'finite' or 'schematic', got '{mode_text}'", mode_line) from None

    def integer(key: str) -> Optional[int]:
        if key not in fields:
            return None
        lineno, value = fields[key]
        if not value.isdigit():
            raise SystemDefinitionError(f"[universe] {key} must be a non-negative integer", lineno)
        return int(value)

    depth, cap = integer("depth"), integer("cap")
    try:
        if mode is UniverseMode.SCHEMATIC:
            return UniverseSpec.schematic(depth or 0, cap)
        if "formulas" in fields:
            lineno, value = fields["formulas"]
            return UniverseSpec.finite(parse_formula_list(value, signature), depth or 0)
        if depth is None:
            raise SystemDefinitionError("finite universe needs 'depth' or 'formulas'", mode_line)
        return UniverseSpec(UniverseMode.FINITE, enumerate_universe(signature, depth, cap), depth, cap)
    except FormulaSyntaxError as exc:
        raise SystemDefinitionError(str(exc), fields["formulas"][0]) from None
    except SystemDefinitionError:
        raise
    except ParadeductionError as exc:
        raise SystemDefinitionError(str(exc), mode_line) from None


def _parse_axioms(entries: List[Tuple[int, str]], signature: Signature) -> Tuple[AxiomSpec, ...]:
    axioms: List[AxiomSpec] = []
    for lineno, entry in entries:
        kind, _, body = entry.partition(":")
        kind = kind.strip().lower()
        try:
            if kind == "schema":
                axioms.append(AxiomSpec.schema(parse_pattern(body.strip(), signature)))
            elif kind == "concrete":
                axioms.append(AxiomSpec.concrete(parse_formula(body.strip(), signature)))
            else:
                raise SystemDefinitionError(f"axiom entries start with 'schema:' or 'concrete:', got '{entry}'", lineno)
        except SystemDefinitionError as exc:
            if exc.line is None:
                raise SystemDefinitionError(exc.message, lineno) from None
            raise
        except ParadeductionError as exc:
            raise SystemDefinitionError(str(exc), lineno) from None
    return tuple(axioms)


def _parse_rules(entries: List[Tuple[int, str]], signature: Signature) -> Tuple[InferenceRule, ...]:
    rules: List[InferenceRule] = []
    for lineno, entry in entries:
        match = RULE_RE.match(entry)
        if not match:
            raise SystemDefinitionError(f"rule must be written 'name: p1, ..., pn / conclusion', got '{entry}'", lineno)
        name, premises_text, conclusion_text = match.groups()
        try:
            premises = tuple(parse_pattern(p.strip(), signature) for p in premises_text.split(","))
            rules.append(InferenceRule(name, premises, parse_pattern(conclusion_text, signature)))
        except SystemDefinitionError as exc:
            if exc.line is None:
                raise SystemDefinitionError(exc.message, lineno) from None
            raise
        except ParadeductionError as exc:
            raise SystemDefinitionError(str(exc), lineno) from None
    return tuple(rules)


def parse_system_definition(text: str, name: Optional[str] = None) -> FormalSystem:
    """
    Parse a system-definition file.

    Args:
        text: File contents ([system], [signature], [universe], [axioms], [rules])
        name: Fallback system name when the file has no [system] section

    Returns:
        A validated FormalSystem

    Raises:
        SystemDefinitionError: with the offending line number
    """
    sections = _split_sections(text)
    if "signature" not in sections:
        raise SystemDefinitionError("missing [signature] section")
    system_name = name or "system"
    for lineno, entry in sections.get("system", []):
        key, value = _key_value(entry, lineno)
        if key != "name":
            raise SystemDefinitionError(f"unknown [system] field '{key}'", lineno)
        system_name = value

    signature = _parse_signature(sections["signature"])
    universe = _parse_universe(sections.get("universe", []), signature)
    axioms = _parse_axioms(sections.get("axioms", []), signature)
    rules = _parse_rules(sections.get("rules", []), signature)

    system = validate_system(FormalSystem(system_name, signature, universe, axioms, rules))
    logger.info(
        f"Loaded system '{system.name}': {len(axioms)} axiom spec(s), {len(rules)} rule(s), "
        f"{universe.mode.value} universe"
    )
    return system


def render_system_definition(system: FormalSystem) -> str:
    """Emit a system-definition file that parses back to an equal system"""
    sig = system.signature
    lines = [f"[system]    name = {system.name}"]
    connectives = ", ".join(f"{c.name}:{c.arity}" for c in sig.connectives)
    lines.append(f"[signature] atoms = {', '.join(sig.atoms)} ; connectives = {connectives}")
    base = Signature(sig.connectives, sig.atoms)
    for definition in sig.definitions:
        lines.append(f"            defined = {definition.symbol}:{definition.arity} := "
                     f"{render_formula(definition.expansion, base)}")

    universe = system.universe
    if universe.mode is UniverseMode.SCHEMATIC:
        cap = f" ; cap = {universe.cap}" if universe.cap is not None else ""
        lines.append(f"[universe]  mode = schematic ; depth = {universe.max_depth}{cap}")
    else:
        formulas = ", ".join(render_formula(f, sig) for f in universe.formulas)
        lines.append(f"[universe]  mode = finite ; formulas = {formulas}")

    lines.append("[axioms]")
    for axiom in system.axioms:
        lines.append(f"            {axiom.kind.value}: {render_formula(axiom.pattern, sig)}")
    lines.append("[rules]")
    for rule in system.rules:
        premises = ", ".join(render_formula(p, sig) for p in rule.premises)
        lines.append(f"            {rule.name}: {premises} / {render_formula(rule.conclusion, sig)}")
    return "\n".join(lines) + "\n"
