from hypothesis import given, settings, strategies as st
from pytest import raises

from errors import FormulaSyntaxError, SignatureError, UnboundVariableError, UniverseTooLargeError
from formula_service import (
    Atom,
    Compound,
    Connective,
    SchemaVar,
    Signature,
    apply_binding,
    count_universe,
    enumerate_universe,
    match_pattern,
    parse_formula,
    parse_formula_list,
    parse_pattern,
    render_formula,
    schema_variables,
    sort_formulas,
    subformulas,
)

p, q, r = Atom("p"), Atom("q"), Atom("r")

FULL = Signature.build(
    ["p", "q", "r"],
    [("~", 1), ("&", 2), ("|", 2), ("->", 2), ("<->", 2), ("top", 0), ("bot", 0)],
)


def neg(x):
    return Compound("~", (x,))


def imp(x, y):
    return Compound("->", (x, y))


def test_precedence_and_associativity():
    assert parse_formula("p -> q -> r", FULL) == imp(p, imp(q, r))
    assert parse_formula("~p & q", FULL) == Compound("&", (neg(p), q))
    assert parse_formula("p | q & r", FULL) == Compound("|", (p, Compound("&", (q, r))))
    assert parse_formula("p & q & r", FULL) == Compound("&", (Compound("&", (p, q)), r))
    assert parse_formula("p <-> q -> r", FULL) == Compound("<->", (p, imp(q, r)))
    assert parse_formula("~~p", FULL) == neg(neg(p))


def test_constants_parse_as_nullary_compounds():
    assert parse_formula("top -> bot", FULL) == imp(Compound("top"), Compound("bot"))


def test_render_uses_minimal_parentheses():
    assert render_formula(imp(p, imp(q, r))) == "p -> q -> r"
    assert render_formula(imp(imp(p, q), r)) == "(p -> q) -> r"
    assert render_formula(neg(Compound("&", (p, q)))) == "~(p & q)"
    assert render_formula(Compound("&", (p, Compound("&", (q, r))))) == "p & (q & r)"
    assert render_formula(Compound("|", (p, Compound("&", (q, r))))) == "p | q & r"


def test_defined_connectives_expand_and_resugar(classical):
    sig = classical.system.signature
    conjunction = parse_formula("a & b", sig)
    assert render_formula(conjunction) == "~(a -> ~b)"
    assert render_formula(conjunction, sig) == "a & b"
    assert parse_formula("~(a -> ~b)", sig) == conjunction
    assert render_formula(parse_formula("~a -> b", sig), sig) == "a | b"
    assert render_formula(parse_formula("(a & b) -> c", sig), sig) == "a & b -> c"
    assert render_formula(parse_formula("a <-> b", sig), sig) == "a <-> b"


def test_syntax_errors_carry_codes():
    with raises(FormulaSyntaxError) as error:
        parse_formula("p &", FULL)
    assert error.value.code == "FORMULA_SYNTAX"

    with raises(FormulaSyntaxError) as error:
        parse_formula("p & zz", FULL)
    assert error.value.code == "UNKNOWN_ATOM"
    assert error.value.position == 4

    with raises(FormulaSyntaxError) as error:
        parse_formula("A -> p", FULL)
    assert error.value.code == "SCHEMA_VARIABLE_IN_FORMULA"


def test_connective_outside_signature_is_rejected(toy):
    with raises(FormulaSyntaxError) as error:
        parse_formula("p -> q", toy.system.signature)
    assert error.value.code == "UNKNOWN_CONNECTIVE"


def test_patterns_allow_schema_variables():
    pattern = parse_pattern("A -> (B -> A)", FULL)
    assert schema_variables(pattern) == {"A", "B"}
    assert match_pattern(pattern, parse_formula("p -> q -> p", FULL)) == {"A": p, "B": q}
    assert match_pattern(pattern, parse_formula("p -> q -> q", FULL)) is None


def test_match_extends_an_existing_binding():
    pattern = imp(SchemaVar("A"), SchemaVar("B"))
    assert match_pattern(pattern, imp(p, q), {"A": p}) == {"A": p, "B": q}
    assert match_pattern(pattern, imp(p, q), {"A": q}) is None


def test_apply_binding():
    pattern = imp(SchemaVar("A"), neg(SchemaVar("A")))
    assert apply_binding(pattern, {"A": q}) == imp(q, neg(q))
    with raises(UnboundVariableError):
        apply_binding(pattern, {})


def test_subformulas_and_sorting():
    formula = parse_formula("~p -> q", FULL)
    assert subformulas(formula) == {formula, neg(p), p, q}
    assert sort_formulas([formula, q, neg(p), p, q]) == (p, q, neg(p), formula)


def test_parse_formula_list_skips_blanks():
    assert parse_formula_list("", FULL) == ()
    assert parse_formula_list("p, ~q ,", FULL) == (p, neg(q))


def test_signature_validation():
    with raises(SignatureError):
        Signature.build(["p", "p"], [("~", 1)])
    with raises(SignatureError):
        Signature.build(["P"], [("~", 1)])
    with raises(SignatureError):
        Signature((Connective("box", 1),), ("p",))


def test_enumerate_universe_in_universe_order(toy):
    sig = toy.system.signature
    universe = enumerate_universe(sig, 2)
    assert [str(x) for x in universe] == ["p", "q", "~p", "~q", "~~p", "~~q"]
    assert count_universe(sig, 2) == 6
    assert count_universe(Signature.build(["p"], [("~", 1), ("->", 2)]), 1) == 3


def test_universe_cap(toy):
    with raises(UniverseTooLargeError) as error:
        enumerate_universe(toy.system.signature, 2, cap=5)
    assert error.value.projected == 6
    assert error.value.code == "UNIVERSE_TOO_LARGE"


leaves = st.sampled_from([p, q, r, Compound("top"), Compound("bot")])


def _extend(children):
    unary = children.map(neg)
    binary = st.tuples(st.sampled_from(["&", "|", "->", "<->"]), children, children).map(
        lambda t: Compound(t[0], (t[1], t[2]))
    )
    return unary | binary


formulas = st.recursive(leaves, _extend, max_leaves=12)


@settings(max_examples=1000, deadline=None)
@given(formulas)
def test_render_parse_round_trip(formula):
    assert parse_formula(render_formula(formula), FULL) == formula
