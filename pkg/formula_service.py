"""
Formula language: signatures, immutable formula trees, the concrete grammar,
minimal-parenthesis printing, one-sided pattern matching for schemas and
finite universe enumeration.
"""

import functools
import itertools
import logging
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple, Union

import pyparsing as pp

import config
from errors import (
    FormulaSyntaxError,
    PreconditionError,
    SignatureError,
    UnboundVariableError,
    UniverseTooLargeError,
)

# Configure logging
logger = logging.getLogger(__name__)

pp.ParserElement.enable_packrat()

# symbol -> (grammatical arity, precedence, associativity)
OPERATORS: Dict[str, Tuple[int, int, str]] = {
    "~": (1, 5, "right"),
    "&": (2, 4, "left"),
    "|": (2, 3, "left"),
    "->": (2, 2, "right"),
    "<->": (2, 1, "right"),
}
ATOMIC_PRECEDENCE = 6

ATOM_NAME = r"[a-z][a-z0-9_]*"
SCHEMA_NAME = r"[A-Z][a-z0-9_]*"


@dataclass(frozen=True)
class Atom:
    """Propositional atom"""
    name: str

    @cached_property
    def depth(self) -> int:
        return 0

    @cached_property
    def text(self) -> str:
        return self.name

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class SchemaVar:
    """Schema variable; only legal inside patterns"""
    name: str

    @cached_property
    def depth(self) -> int:
        return 0

    @cached_property
    def text(self) -> str:
        return self.name

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Compound:
    """Connective applied to an ordered tuple of children (empty for constants)"""
    connective: str
    children: Tuple["Pattern", ...] = ()

    def __hash__(self) -> int:
        return self._structural_hash

    @cached_property
    def _structural_hash(self) -> int:
        return hash((self.connective, self.children))

    @cached_property
    def depth(self) -> int:
        if not self.children:
            return 0
        return 1 + max(child.depth for child in self.children)

    @cached_property
    def text(self) -> str:
        return render_formula(self)

    def __str__(self) -> str:
        return self.text


Formula = Union[Atom, Compound]
Pattern = Union[Atom, Compound, SchemaVar]
Binding = Dict[str, Formula]
FormulaSet = FrozenSet[Formula]


@dataclass(frozen=True)
class Connective:
    name: str
    arity: int


@dataclass(frozen=True)
class Definition:
    """Defined connective expanded at parse time; expansion uses V1..Vn"""
    symbol: str
    arity: int
    expansion: Pattern


@dataclass(frozen=True)
class Signature:
    """
    Connectives, atoms and defined connectives of a formula language.

    Connective names are the grammar operators (~ & | -> <->) or lowercase
    names for constants (arity 0).
    """
    connectives: Tuple[Connective, ...]
    atoms: Tuple[str, ...]
    definitions: Tuple[Definition, ...] = ()

    def __post_init__(self):
        names = [c.name for c in self.connectives] + [d.symbol for d in self.definitions]
        if len(set(names)) != len(names):
            raise SignatureError(f"connective names must be unique: {names}")
        if len(set(self.atoms)) != len(self.atoms):
            raise SignatureError(f"atom names must be unique: {list(self.atoms)}")
        clash = set(self.atoms) & set(names)
        if clash:
            raise SignatureError(f"atom names clash with connectives: {sorted(clash)}")
        for atom in self.atoms:
            if not re.fullmatch(ATOM_NAME, atom):
                raise SignatureError(f"invalid atom name '{atom}'")
        for connective in self.connectives:
            if connective.arity < 0:
                raise SignatureError(f"connective '{connective.name}' has negative arity")
            if connective.name not in OPERATORS and not re.fullmatch(ATOM_NAME, connective.name):
                raise SignatureError(f"invalid connective name '{connective.name}'")
            if connective.name not in OPERATORS and connective.arity != 0:
                raise SignatureError(
                    f"connective '{connective.name}' is not a grammar operator, so it must be a constant (arity 0)"
                )
        for definition in self.definitions:
            self._check_definition(definition)

    def _check_definition(self, definition: Definition) -> None:
        if definition.symbol not in OPERATORS:
            raise SignatureError(f"defined connective '{definition.symbol}' is not a grammar operator")
        if not isinstance(definition.expansion, Compound):
            raise SignatureError(f"expansion of '{definition.symbol}' must be a compound pattern")
        expected = {f"V{i}" for i in range(1, definition.arity + 1)}
        if schema_variables(definition.expansion) != expected:
            raise SignatureError(
                f"expansion of '{definition.symbol}' must use exactly {sorted(expected)}"
            )
        primitive = {c.name for c in self.connectives}
        if not connectives_of(definition.expansion) <= primitive:
            raise SignatureError(f"expansion of '{definition.symbol}' uses non-primitive connectives")

    @cached_property
    def _arities(self) -> Dict[str, int]:
        return {c.name: c.arity for c in self.connectives}

    @cached_property
    def _definitions(self) -> Dict[str, Definition]:
        return {d.symbol: d for d in self.definitions}

    @cached_property
    def atom_set(self) -> FrozenSet[str]:
        return frozenset(self.atoms)

    @cached_property
    def resugaring_order(self) -> Tuple[Definition, ...]:
        # larger expansions first so the most specific definition wins
        return tuple(sorted(self.definitions, key=lambda d: -pattern_size(d.expansion)))

    def arity(self, name: str) -> Optional[int]:
        return self._arities.get(name)

    def definition(self, symbol: str) -> Optional[Definition]:
        return self._definitions.get(symbol)

    def constants(self) -> Tuple[str, ...]:
        return tuple(c.name for c in self.connectives if c.arity == 0)

    def with_definition(self, definition: Definition) -> "Signature":
        return Signature(self.connectives, self.atoms, self.definitions + (definition,))

    @classmethod
    def build(cls, atoms: Iterable[str], connectives: Iterable[Tuple[str, int]]) -> "Signature":
        return cls(tuple(Connective(name, arity) for name, arity in connectives), tuple(atoms))


# ---------------------------------------------------------------------------
# Structural helpers
# ---------------------------------------------------------------------------

def schema_variables(pattern: Pattern) -> FrozenSet[str]:
    if isinstance(pattern, SchemaVar):
        return frozenset([pattern.name])
    if isinstance(pattern, Atom):
        return frozenset()
    result: Set[str] = set()
    for child in pattern.children:
        result |= schema_variables(child)
    return frozenset(result)


def connectives_of(pattern: Pattern) -> FrozenSet[str]:
    if not isinstance(pattern, Compound):
        return frozenset()
    result = {pattern.connective}
    for child in pattern.children:
        result |= connectives_of(child)
    return frozenset(result)


def atoms_of(pattern: Pattern) -> FrozenSet[str]:
    if isinstance(pattern, Atom):
        return frozenset([pattern.name])
    if isinstance(pattern, SchemaVar):
        return frozenset()
    result: Set[str] = set()
    for child in pattern.children:
        result |= atoms_of(child)
    return frozenset(result)


def pattern_size(pattern: Pattern) -> int:
    if isinstance(pattern, Compound):
        return 1 + sum(pattern_size(child) for child in pattern.children)
    return 1


def subformulas(formula: Pattern) -> FrozenSet[Pattern]:
    result = {formula}
    if isinstance(formula, Compound):
        for child in formula.children:
            result |= subformulas(child)
    return frozenset(result)


def is_ground(pattern: Pattern) -> bool:
    return not schema_variables(pattern)


def as_formula(pattern: Pattern) -> Formula:
    """Convert a variable-free pattern into a formula"""
    if not is_ground(pattern):
        raise UnboundVariableError(f"pattern '{pattern}' still contains schema variables")
    return pattern  # type: ignore[return-value]


def formula_sort_key(formula: Pattern) -> Tuple[int, str]:
    """Universe order: by depth, then lexicographic on the rendered text"""
    return formula.depth, formula.text


def sort_formulas(formulas: Iterable[Formula]) -> Tuple[Formula, ...]:
    return tuple(sorted(set(formulas), key=formula_sort_key))


# ---------------------------------------------------------------------------
# Matching and substitution
# ---------------------------------------------------------------------------

def apply_binding(pattern: Pattern, binding: Binding) -> Formula:
    """Substitute bound formulas for schema variables"""
    if isinstance(pattern, SchemaVar):
        try:
            return binding[pattern.name]
        except KeyError:
            raise UnboundVariableError(f"schema variable '{pattern.name}' is not bound") from None
    if isinstance(pattern, Atom) or not pattern.children:
        return pattern
    return Compound(pattern.connective, tuple(apply_binding(child, binding) for child in pattern.children))


def match_pattern(pattern: Pattern, formula: Formula, binding: Optional[Binding] = None) -> Optional[Binding]:
    """
    One-sided first-order matching.

    Args:
        pattern: Pattern possibly containing schema variables
        formula: Ground formula to match against
        binding: Existing binding the match must extend

    Returns:
        The extended binding, or None when no binding makes the pattern equal the formula
    """
    result: Binding = dict(binding) if binding else {}
    return result if _match(pattern, formula, result) else None


def _match(pattern: Pattern, formula: Formula, binding: Binding) -> bool:
    if isinstance(pattern, SchemaVar):
        bound = binding.get(pattern.name)
        if bound is None:
            binding[pattern.name] = formula
            return True
        return bound == formula
    if isinstance(pattern, Atom):
        return pattern == formula
    if (
        not isinstance(formula, Compound)
        or formula.connective != pattern.connective
        or len(formula.children) != len(pattern.children)
    ):
        return False
    return all(_match(p, f, binding) for p, f in zip(pattern.children, formula.children))


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------

def render_formula(formula: Pattern, sig: Optional[Signature] = None) -> str:
    """
    Render a formula or pattern with minimal parentheses.

    With a signature carrying defined connectives, sub-terms that match a
    definition are printed in the defined syntax.
    """
    return _render(formula, sig)[0]


def _render(node: Pattern, sig: Optional[Signature]) -> Tuple[str, int]:
    if not isinstance(node, Compound) or not node.children:
        name = node.connective if isinstance(node, Compound) else node.name
        return name, ATOMIC_PRECEDENCE

    symbol, children = node.connective, node.children
    if sig is not None and sig.definitions:
        symbol, children = _resugar(node, sig)

    _, precedence, assoc = OPERATORS[symbol]
    if len(children) == 1:
        text, child_precedence = _render(children[0], sig)
        if child_precedence < precedence:
            text = f"({text})"
        return f"{symbol}{text}", precedence

    left, left_precedence = _render(children[0], sig)
    right, right_precedence = _render(children[1], sig)
    if left_precedence < precedence or (left_precedence == precedence and assoc == "right"):
        left = f"({left})"
    if right_precedence < precedence or (right_precedence == precedence and assoc == "left"):
        right = f"({right})"
    return f"{left} {symbol} {right}", precedence


def _resugar(node: Compound, sig: Signature) -> Tuple[str, Tuple[Pattern, ...]]:
    for definition in sig.resugaring_order:
        binding = match_pattern(definition.expansion, node)
        if binding is None or _steals_child(definition, node, sig):
            continue
        return definition.symbol, tuple(binding[f"V{i}"] for i in range(1, definition.arity + 1))
    return node.connective, node.children


def _steals_child(definition: Definition, node: Compound, sig: Signature) -> bool:
    """True when the expansion consumes a child that a larger definition would print"""
    size = pattern_size(definition.expansion)
    for pattern, child in zip(definition.expansion.children, node.children):
        if not isinstance(pattern, Compound) or not isinstance(child, Compound):
            continue
        for other in sig.resugaring_order:
            if pattern_size(other.expansion) > size and match_pattern(other.expansion, child) is not None:
                return True
    return False


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

class _GrammarViolation(pp.ParseFatalException):
    code = "FORMULA_SYNTAX"


class _UnknownAtom(_GrammarViolation):
    code = "UNKNOWN_ATOM"


class _UnknownConnective(_GrammarViolation):
    code = "UNKNOWN_CONNECTIVE"


class _ArityMismatch(_GrammarViolation):
    code = "ARITY_MISMATCH"


class _SchemaNotAllowed(_GrammarViolation):
    code = "SCHEMA_VARIABLE_IN_FORMULA"


@functools.lru_cache(maxsize=64)
def _grammar(sig: Signature, allow_schema: bool) -> pp.ParserElement:
    """Build the infix grammar bound to one signature"""

    def on_name(s, loc, toks):
        name = toks[0]
        if name in sig.atom_set:
            return Atom(name)
        if sig.arity(name) == 0:
            return Compound(name)
        if sig.arity(name) is not None:
            raise _ArityMismatch(s, loc, f"connective '{name}' takes arguments and cannot stand alone")
        raise _UnknownAtom(s, loc, f"unknown atom '{name}'")

    def on_schema(s, loc, toks):
        if not allow_schema:
            raise _SchemaNotAllowed(s, loc, f"schema variable '{toks[0]}' is not allowed in a formula")
        return SchemaVar(toks[0])

    def build(s, loc, symbol, children):
        definition = sig.definition(symbol)
        arity = sig.arity(symbol) if definition is None else definition.arity
        if arity is None:
            raise _UnknownConnective(s, loc, f"connective '{symbol}' is not in the signature")
        if arity != len(children):
            raise _ArityMismatch(
                s, loc, f"connective '{symbol}' has arity {arity} but is used with {len(children)} operand(s)"
            )
        if definition is not None:
            return apply_binding(definition.expansion, {f"V{i + 1}": c for i, c in enumerate(children)})
        return Compound(symbol, tuple(children))

    def fold_unary(s, loc, toks):
        items = list(toks[0])
        node = items.pop()
        while items:
            node = build(s, loc, items.pop(), [node])
        return node

    def fold_left(s, loc, toks):
        items = list(toks[0])
        node = items[0]
        for i in range(1, len(items), 2):
            node = build(s, loc, items[i], [node, items[i + 1]])
        return node

    def fold_right(s, loc, toks):
        items = list(toks[0])
        node = items[-1]
        for i in range(len(items) - 2, 0, -2):
            node = build(s, loc, items[i], [items[i - 1], node])
        return node

    operand = pp.Regex(SCHEMA_NAME).set_parse_action(on_schema) | pp.Regex(ATOM_NAME).set_parse_action(on_name)
    return pp.infix_notation(
        operand,
        [
            (pp.Literal("~"), 1, pp.OpAssoc.RIGHT, fold_unary),
            (pp.Literal("&"), 2, pp.OpAssoc.LEFT, fold_left),
            (pp.Literal("|"), 2, pp.OpAssoc.LEFT, fold_left),
            (pp.Literal("->"), 2, pp.OpAssoc.RIGHT, fold_right),
            (pp.Literal("<->"), 2, pp.OpAssoc.RIGHT, fold_right),
        ],
    )


def _parse(text: str, sig: Signature, allow_schema: bool) -> Pattern:
    grammar = _grammar(sig, allow_schema)
    try:
        result = grammar.parse_string(text, parse_all=True)
    except _GrammarViolation as exc:
        raise FormulaSyntaxError(exc.msg, exc.loc, code=exc.code) from None
    except pp.ParseBaseException as exc:
        raise FormulaSyntaxError(f"syntax error in '{text}': {exc.msg}", exc.loc) from None
    return result[0]


def parse_formula(text: str, sig: Signature) -> Formula:
    """
    Parse formula text against a signature.

    Args:
        text: Formula in the concrete grammar
        sig: Signature fixing atoms, connectives and defined connectives

    Returns:
        The formula tree (defined connectives expanded)
    """
    return _parse(text, sig, allow_schema=False)  # type: ignore[return-value]


def parse_pattern(text: str, sig: Signature) -> Pattern:
    return _parse(text, sig, allow_schema=True)


def parse_formula_list(text: str, sig: Signature) -> Tuple[Formula, ...]:
    """Parse a comma-separated list of formulas; blank text is the empty list"""
    parts = [part.strip() for part in text.split(",")]
    return tuple(parse_formula(part, sig) for part in parts if part)


# ---------------------------------------------------------------------------
# Universe enumeration
# ---------------------------------------------------------------------------

def count_universe(sig: Signature, max_depth: int) -> int:
    """Number of formulas with depth <= max_depth"""
    base = len(sig.atoms) + len(sig.constants())
    arities = [c.arity for c in sig.connectives if c.arity > 0]
    total = base
    for _ in range(max_depth):
        total = base + sum(total ** arity for arity in arities)
    return total


def enumerate_universe(sig: Signature, max_depth: int, cap: Optional[int] = None) -> Tuple[Formula, ...]:
    """
    Enumerate every formula over sig with depth <= max_depth.

    Args:
        sig: Signature to enumerate (defined connectives are not primitive)
        max_depth: Depth bound; atoms have depth 0
        cap: Size guard, defaults to config.UNIVERSE_CAP

    Returns:
        Formulas in universe order (depth, then rendered text)
    """
    if max_depth < 0:
        raise PreconditionError(f"max_depth must be non-negative, got {max_depth}")
    cap = config.UNIVERSE_CAP if cap is None else cap
    projected = count_universe(sig, max_depth)
    if projected > cap:
        raise UniverseTooLargeError(
            f"universe of depth {max_depth} would hold {projected} formulas (cap {cap})",
            projected=projected,
            cap=cap,
        )

    formulas: List[Formula] = [Atom(name) for name in sig.atoms]
    formulas += [Compound(name) for name in sig.constants()]
    for depth in range(1, max_depth + 1):
        layer: List[Formula] = []
        for connective in sig.connectives:
            if connective.arity == 0:
                continue
            for children in itertools.product(formulas, repeat=connective.arity):
                if max(child.depth for child in children) == depth - 1:
                    layer.append(Compound(connective.name, children))
        formulas.extend(layer)

    logger.debug(f"Enumerated {len(formulas)} formulas up to depth {max_depth}")
    return tuple(sorted(formulas, key=formula_sort_key))
