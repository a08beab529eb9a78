from pytest import raises

import config

from deduction_service import (
    AxiomUse,
    Deduction,
    DeductionService,
    DeductionStep,
    Premise,
    RuleUse,
    SearchBudget,
    Verdict,
    ViolationKind,
    parse_deduction,
    render_deduction,
)
from errors import BudgetError, PreconditionError, UniverseTooLargeError, WitnessFormatError
from subset_lattice import ascending_subsets
from system_service import parse_system_definition


def test_closure_of_empty_set(toy, fs):
    assert toy.deductions.closure([]) == fs("q, ~~q")


def test_closure_explodes_on_contradiction(toy, fs):
    assert toy.deductions.closure(fs("p, ~p")) == toy.system.universe_set
    assert not toy.deductions.is_consistent(fs("~q"))
    assert toy.deductions.is_consistent(fs("~p"))


def test_closure_rejects_premises_outside_universe(toy, f):
    with raises(PreconditionError) as error:
        toy.deductions.closure([f("~~~p")])
    assert error.value.code == "NOT_IN_UNIVERSE"


def test_deducible_returns_verified_witness(toy, f):
    result = toy.deductions.deducible([], f("q"))
    assert result.verdict is Verdict.YES
    assert render_deduction(result.witness) == "1. ~~q [axiom 1]\n2. q [rule dn_elim 1]\n"
    assert toy.deductions.verify_deduction([], result.witness).is_valid


def test_premise_is_its_own_deduction(toy, f):
    result = toy.deductions.deducible([f("~p")], f("~p"))
    assert result.verdict is Verdict.YES
    assert result.witness.steps == (DeductionStep(f("~p"), Premise()),)
    assert result.witness.used_premises == {f("~p")}


def test_not_deducible(toy, f):
    assert toy.deductions.deducible([f("p")], f("~q")).verdict is Verdict.NO


def test_witness_uses_only_needed_premises(toy, fs, f):
    result = toy.deductions.deducible(fs("p, ~p, ~~q"), f("~~p"))
    assert result.witness.used_premises == fs("p")
    assert result.witness.conclusion == f("~~p")


def test_verify_reports_each_violation_kind(toy, f):
    steps = (
        DeductionStep(f("p"), Premise()),
        DeductionStep(f("~q"), AxiomUse(1)),
        DeductionStep(f("~~p"), RuleUse("dn_intro", (4,))),
        DeductionStep(f("q"), RuleUse("dn_elim", (1,))),
    )
    result = toy.deductions.verify_deduction([f("~p")], Deduction(frozenset([f("~p")]), steps))
    assert not result.is_valid
    assert result.kinds() == [
        ViolationKind.NOT_A_PREMISE,
        ViolationKind.AXIOM_MISMATCH,
        ViolationKind.FORWARD_REFERENCE,
        ViolationKind.BAD_RULE_INSTANCE,
    ]
    assert [v.step for v in result.violations] == [1, 2, 3, 4]


def test_verify_flags_formulas_outside_universe(toy, f):
    deduction = Deduction(frozenset([f("~~~p")]), (DeductionStep(f("~~~p"), Premise()),))
    result = toy.deductions.verify_deduction([f("~~~p")], deduction)
    assert result.kinds() == [ViolationKind.NOT_IN_UNIVERSE]


def test_deduction_needs_a_step():
    with raises(WitnessFormatError):
        Deduction(frozenset(), ())


def test_parse_deduction_round_trip(toy, fs, f):
    premises = fs("p, ~p")
    witness = toy.deductions.deducible(premises, f("~q")).witness
    parsed = parse_deduction(render_deduction(witness), toy.system, premises)
    assert parsed == witness
    assert toy.deductions.verify_deduction(premises, parsed).is_valid


def test_parse_deduction_rebinds_rules(toy, f):
    parsed = parse_deduction("1. p [premise]\n\n# comment\n2. ~~p [rule dn_intro 1]\n", toy.system)
    assert parsed.premises == {f("p")}
    assert parsed.steps[1].justification.binding == {"V1": f("p")}


def test_parse_deduction_errors(toy):
    with raises(WitnessFormatError) as error:
        parse_deduction("1. p [premise]\n3. q [premise]\n", toy.system)
    assert error.value.line == 2
    with raises(WitnessFormatError):
        parse_deduction("1. p premise\n", toy.system)
    with raises(WitnessFormatError):
        parse_deduction("1. p [lemma 2]\n", toy.system)
    with raises(WitnessFormatError):
        parse_deduction("", toy.system)


def test_theories_of_toy(toy, fs):
    report = toy.deductions.theories()
    assert report.consistent_theories == (fs("q, ~~q"), fs("~p, q, ~~q"), fs("p, q, ~~p, ~~q"))
    assert report.theories == report.consistent_theories + (toy.system.universe_set,)


def test_theory_guard(toy, monkeypatch):
    import config

    monkeypatch.setattr(config, "THEORY_GUARD", 4)
    with raises(UniverseTooLargeError):
        toy.deductions.theories()


def test_search_budget_validation():
    with raises(BudgetError):
        SearchBudget(max_nodes=0)
    with raises(BudgetError):
        SearchBudget(max_depth=-1)


def test_schematic_search_without_delegate(classical, cf):
    deductions = DeductionService(classical.system)
    found = deductions.deducible([cf("a"), cf("a -> b")], cf("b"))
    assert found.verdict is Verdict.YES
    assert not found.delegated
    assert deductions.verify_deduction([cf("a"), cf("a -> b")], found.witness).is_valid

    unknown = deductions.deducible([cf("a")], cf("b"))
    assert unknown.verdict is Verdict.UNKNOWN
    assert unknown.message == "depth budget exhausted"

    starved = deductions.deducible([cf("a")], cf("b"), SearchBudget(max_nodes=1))
    assert starved.verdict is Verdict.UNKNOWN
    assert starved.message == "node budget exhausted"


def test_schematic_closure_needs_a_universe(classical):
    with raises(PreconditionError):
        DeductionService(classical.system).closure([])


def test_delegated_verdicts(classical, cf, worked_example):
    deductions = classical.deductions
    yes = deductions.deducible(worked_example, cf("c & ~c"))
    assert yes.verdict is Verdict.YES
    assert yes.delegated

    no = deductions.deducible([cf("a")], cf("b"))
    assert no.verdict is Verdict.NO
    assert no.delegated


def test_delegated_yes_carries_witness_when_found(classical, cfs, cf):
    premises = cfs("a -> c, a & b")
    result = classical.deductions.deducible(premises, cf("c"))
    assert result.delegated
    assert render_deduction(result.witness, classical.system.signature) == (
        "1. a -> c [premise]\n"
        "2. a & b [premise]\n"
        "3. a [rule and_elim_l 2]\n"
        "4. c [rule mp 3,1]\n"
    )
    assert classical.deductions.verify_deduction(premises, result.witness).is_valid


def test_axiom_schema_instances_are_found(classical, cf):
    deductions = DeductionService(classical.system)
    result = deductions.deducible([], cf("a -> (b -> a)"))
    assert result.verdict is Verdict.YES
    assert result.witness.steps[-1].justification == AxiomUse(1)


def test_finite_system_from_file():
    system = parse_system_definition(
        "[signature] atoms = p, q ; connectives = ~:1\n"
        "[universe] formulas = p, q, ~p\n"
        "[rules] flip: p / ~p\n"
    )
    deductions = DeductionService(system)
    p, q, not_p = system.finite_universe()
    assert deductions.closure([p]) == {p, not_p}
    assert deductions.closure([q]) == {q}
    assert deductions.deducible(frozenset(), p).verdict is Verdict.NO


def test_closure_and_deducibility_match_breadth_first_search(toy, brute_derivable):
    universe = toy.system.universe_set
    for premises in ascending_subsets(universe, max_size=3):
        reachable = brute_derivable(toy.system, premises, universe)
        assert toy.deductions.closure(premises) == reachable
        for goal in universe:
            result = toy.deductions.deducible(premises, goal)
            assert (result.verdict is Verdict.YES) == (goal in reachable)
            if result.witness is not None:
                assert toy.deductions.verify_deduction(premises, result.witness).is_valid


def test_closure_cache_is_bounded(toy, fs, monkeypatch):
    monkeypatch.setattr(config, "CACHE_SIZE", 2)
    deductions = DeductionService(toy.system)
    for text in ("p", "q", "~p"):
        deductions.closure(fs(text))
    assert len(deductions._closure_cache) == 2
    assert deductions.closure(fs("p")) == fs("p, q, ~~p, ~~q")
