from pytest import raises

from consistency_service import OracleKind
from errors import PresetNotFoundError
from formula_service import schema_variables
from preset_service import TOY_SOURCE, load_preset, preset_names, preset_source
from system_service import parse_system_definition
from valuation_service import check_adequacy


def test_preset_names():
    assert preset_names() == ("toy", "classical-pl")


def test_unknown_preset():
    with raises(PresetNotFoundError) as error:
        load_preset("intuitionistic")
    assert error.value.code == "UNKNOWN_PRESET"
    assert "toy" in str(error.value)


def test_loading_twice_gives_equal_systems():
    assert load_preset("toy").system == load_preset("toy").system


def test_toy_preset(toy):
    assert toy.system.is_finite
    assert toy.oracle.kind is OracleKind.ENUMERATIVE
    assert check_adequacy(toy.deductions, toy.structure).adequate
    assert preset_source("toy") == TOY_SOURCE


def test_classical_preset(classical):
    assert not classical.system.is_finite
    assert classical.oracle.kind is OracleKind.SEMANTIC
    assert classical.system.name == "classical-pl"


def test_preset_sources_parse():
    for name in preset_names():
        assert parse_system_definition(preset_source(name)).name == name


def test_classical_schemas_use_numbered_variables(classical):
    patterns = [axiom.pattern for axiom in classical.system.axioms]
    for rule in classical.system.rules:
        patterns += [*rule.premises, rule.conclusion]
    used = set().union(*(schema_variables(p) for p in patterns))
    assert used == {"V1", "V2", "V3"}
