from pytest import raises

from errors import SystemDefinitionError
from formula_service import Atom, SchemaVar, parse_formula, parse_pattern
from preset_service import CLASSICAL_SOURCE, TOY_SOURCE
from subset_lattice import ascending_subsets
from system_service import (
    AxiomKind,
    AxiomSpec,
    FormalSystem,
    InferenceRule,
    UniverseMode,
    UniverseSpec,
    axiom_instances,
    immediate_consequences,
    parse_system_definition,
    render_system_definition,
    rule_applications,
    validate_system,
)

MINI = """\
[system]
name = mini

[signature]
atoms = p, q
connectives = ~:1

[universe]
mode = finite
depth = 1

[axioms]
concrete: q   # the only axiom

[rules]
twice: V1, V2 / ~V1
"""


def test_parse_toy_source():
    system = parse_system_definition(TOY_SOURCE)
    assert system.name == "toy"
    assert system.is_finite
    assert [str(x) for x in system.finite_universe()] == ["p", "q", "~p", "~q", "~~p", "~~q"]
    assert [rule.name for rule in system.rules] == ["dn_intro", "dn_elim", "ex_p", "ex_p_neg", "ex_q", "ex_q_neg"]
    assert system.axioms[0].kind is AxiomKind.CONCRETE


def test_parse_classical_source():
    system = parse_system_definition(CLASSICAL_SOURCE)
    assert system.universe.mode is UniverseMode.SCHEMATIC
    assert system.universe.max_depth == 3
    assert [d.symbol for d in system.signature.definitions] == ["&", "|", "<->"]
    and_intro = system.rule("and_intro")
    assert and_intro.conclusion == parse_pattern("~(V1 -> ~V2)", system.signature)
    assert system.rule("nope") is None


def test_render_round_trip():
    for source in (TOY_SOURCE, CLASSICAL_SOURCE, MINI):
        system = parse_system_definition(source)
        again = parse_system_definition(render_system_definition(system))
        assert again.name == system.name
        assert again.signature == system.signature
        assert again.axioms == system.axioms
        assert again.rules == system.rules
        assert again.universe.mode is system.universe.mode
        assert again.universe.formulas == system.universe.formulas


def test_axiom_instances(toy):
    assert [str(x) for x in axiom_instances(toy.system, toy.system.universe_set)] == ["~~q"]


def test_immediate_consequences(toy, fs):
    result = immediate_consequences(toy.system, fs("p, ~p"), toy.system.universe_set)
    assert [str(x) for x in result] == ["q", "~q", "~~p"]


def test_rule_premises_may_collapse():
    system = parse_system_definition(MINI)
    applications = rule_applications(system, [Atom("p")], system.universe_set)
    assert len(applications) == 1
    assert applications[0].premises == (Atom("p"), Atom("p"))
    assert str(applications[0].conclusion) == "~p"


def test_rule_validation():
    with raises(SystemDefinitionError):
        InferenceRule("empty", (), Atom("p"))
    with raises(SystemDefinitionError):
        InferenceRule("free", (SchemaVar("A"),), SchemaVar("B"))
    with raises(SystemDefinitionError):
        AxiomSpec.concrete(SchemaVar("A"))


def test_rule_match_instance(classical, cf):
    mp = classical.system.rule("mp")
    assert mp.degree == 2
    assert mp.match_instance([cf("a"), cf("a -> c")], cf("c")) == {"V1": cf("a"), "V2": cf("c")}
    assert mp.match_instance([cf("a -> c"), cf("a")], cf("c")) is None
    assert mp.match_instance([cf("a")], cf("c")) is None


def test_validate_system_rejects_duplicates_and_stray_axioms(toy):
    system = toy.system
    duplicated = FormalSystem("dup", system.signature, system.universe, system.axioms, system.rules + system.rules[:1])
    with raises(SystemDefinitionError):
        validate_system(duplicated)

    stray = AxiomSpec.concrete(parse_formula("~~~q", system.signature))
    with raises(SystemDefinitionError):
        validate_system(FormalSystem("stray", system.signature, system.universe, (stray,), system.rules))

    with raises(SystemDefinitionError):
        validate_system(FormalSystem("empty", system.signature, UniverseSpec.finite([]), (), system.rules))


def test_definition_errors_report_line_numbers():
    with raises(SystemDefinitionError) as error:
        parse_system_definition("[signature]\natoms = p\nconnectives = ~:1\n[bogus]\n")
    assert error.value.line == 4

    with raises(SystemDefinitionError) as error:
        parse_system_definition(MINI.replace("twice: V1, V2 / ~V1", "bad: A / B"))
    assert error.value.line == 16
    assert "unbound" in str(error.value)

    with raises(SystemDefinitionError) as error:
        parse_system_definition(MINI.replace("concrete: q", "concrete: ~zz"))
    assert error.value.line == 13

    with raises(SystemDefinitionError):
        parse_system_definition("[universe]\nmode = finite\n")


def test_immediate_consequences_match_a_plain_loop(toy, classical, cfs, brute_consequences):
    universe = toy.system.universe_set
    for available in ascending_subsets(universe):
        assert frozenset(immediate_consequences(toy.system, available, universe)) == brute_consequences(toy.system, available, universe)

    small = cfs("a, b, c, a -> c, a & b, b -> ~c, ~c, ~(a -> c)")
    for available in ascending_subsets(small, max_size=3):
        expected = brute_consequences(classical.system, available, small)
        assert frozenset(immediate_consequences(classical.system, available, small)) == expected


def test_immediate_consequences_are_monotone(toy):
    universe = toy.system.universe_set
    subsets = list(ascending_subsets(universe))
    results = {s: frozenset(immediate_consequences(toy.system, s, universe)) for s in subsets}
    for smaller in subsets:
        for larger in subsets:
            if smaller <= larger:
                assert results[smaller] <= results[larger]
