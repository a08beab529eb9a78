import pytest

from app import build_parser, run
from system_service import parse_system_definition

WORKED = ["--preset", "classical-pl", "--premises", "a & b, a -> c, b -> ~c"]

SCHEMATIC = """\
[system]    name = implication
[signature] atoms = a, b ; connectives = ~:1, ->:2
[universe]  mode = schematic ; depth = 2
[axioms]
            schema: V1 -> (V2 -> V1)
[rules]
            mp: V1, V1 -> V2 / V2
"""


def test_paradeduce_worked_example(capsys):
    assert run(["paradeduce", *WORKED, "--goal", "c"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("verdict: Yes\n")
    assert "4. [a -> c, a & b] c [rule mp 3,1]" in out

    assert run(["paradeduce", *WORKED, "--goal", "~c"]) == 0
    assert run(["paradeduce", *WORKED, "--goal", "c & ~c"]) == 1
    assert run(["entails", *WORKED, "--goal", "c & ~c"]) == 0


def test_weak_and_strong(capsys):
    assert run(["weak", *WORKED, "--goal", "c"]) == 0
    assert run(["strong", *WORKED, "--goal", "c", "--entailment", "semantic"]) == 1


def test_records_format(capsys):
    assert run(["consistent", "--preset", "toy", "--premises", "p", "--format", "records"]) == 0
    out = capsys.readouterr().out
    assert "command=consistent" in out
    assert "exit_code=0" in out


def test_inconsistent_premises(capsys):
    assert run(["consistent", "--preset", "toy", "--premises", "p, ~p"]) == 1


def test_paraconsistent_closure(capsys):
    assert run(["cn-para", "--preset", "toy", "--premises", "p, ~p"]) == 0
    assert "p, q, ~p, ~~p, ~~q" in capsys.readouterr().out.splitlines()


def test_usage_errors_exit_with_error_code(capsys):
    with pytest.raises(SystemExit) as exit_info:
        run(["deduce", "--preset", "intuitionistic", "--goal", "p"])
    assert exit_info.value.code == 3
    assert "code=USAGE" in capsys.readouterr().err


def test_formula_errors_are_reported(capsys):
    assert run(["deduce", "--preset", "toy", "--goal", "r"]) == 3
    assert "code=UNKNOWN_ATOM" in capsys.readouterr().err


def test_verify_deduction_from_file(tmp_path, capsys):
    witness = tmp_path / "q.proof"
    witness.write_text("1. ~~q [axiom 1]\n2. q [rule dn_elim 1]\n")
    assert run(["verify-deduction", "--preset", "toy", "--witness", str(witness)]) == 0
    assert capsys.readouterr().out.startswith("verdict: valid")

    witness.write_text("1. ~~q [axiom 1]\n2. ~q [rule dn_elim 1]\n")
    assert run(["verify-deduction", "--preset", "toy", "--witness", str(witness)]) == 1


def test_missing_witness_file(tmp_path, capsys):
    assert run(["verify-deduction", "--preset", "toy", "--witness", str(tmp_path / "absent")]) == 3


def test_export_preset_renders_the_loaded_system(tmp_path, capsys, toy, classical):
    target = tmp_path / "toy.system"
    assert run(["export-preset", "toy", "--output", str(target)]) == 0
    text = target.read_text()
    assert text.startswith(f"# {toy.documentation}\n[system]    name = toy\n")
    exported = parse_system_definition(text)
    assert exported.rules == toy.system.rules
    assert exported.axioms == toy.system.axioms
    assert exported.universe_set == toy.system.universe_set

    schematic = tmp_path / "classical.system"
    assert run(["export-preset", "classical-pl", "--output", str(schematic)]) == 0
    assert parse_system_definition(schematic.read_text()).rules == classical.system.rules
    capsys.readouterr()
    assert run(["deduce", "--system", str(schematic), "--premises", "a, a -> b", "--goal", "b"]) == 0
    assert "2. a -> b [premise]" in capsys.readouterr().out


def test_metatheory_command(capsys):
    assert run(["metatheory", "--preset", "toy", "--max-premises", "2", "--samples", "20", "--claims", "lemma2,theorem"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "verdict: pass"
    assert any(line.startswith("pass lemma2 (checked 20,") for line in lines)


def test_schematic_system_file_gives_unknown(tmp_path, capsys):
    system = tmp_path / "implication.system"
    system.write_text(SCHEMATIC)
    code = run(["deduce", "--system", str(system), "--premises", "a", "--goal", "b", "--budget", "500", "--depth", "1"])
    assert code == 2
    assert "verdict: Unknown" in capsys.readouterr().out


def test_parser_lists_every_command():
    parser = build_parser()
    subparsers = next(action for action in parser._actions if action.dest == "command")
    assert {"deduce", "cn", "theories", "consistent", "mcs", "entails", "paradeduce", "cn-para",
            "weak", "strong", "metatheory", "export-preset"} <= set(subparsers.choices)


def witness_of(out):
    lines = out.splitlines()
    start = lines.index("witness:") + 1
    return "\n".join(line for line in lines[start:] if not line.startswith("time: ")) + "\n"


def test_deduction_witness_round_trip(tmp_path, capsys):
    assert run(["deduce", "--preset", "toy", "--premises", "p, ~p", "--goal", "~q"]) == 0
    witness = tmp_path / "not_q.proof"
    witness.write_text(witness_of(capsys.readouterr().out))
    assert run(["verify-deduction", "--preset", "toy", "--premises", "p, ~p", "--witness", str(witness)]) == 0
    assert capsys.readouterr().out.startswith("verdict: valid")


def test_paradeduction_witness_round_trip(tmp_path, capsys):
    assert run(["paradeduce", *WORKED, "--goal", "~c"]) == 0
    witness = tmp_path / "not_c.paraproof"
    witness.write_text(witness_of(capsys.readouterr().out))
    assert witness.read_text().splitlines()[-1] == "4. [b -> ~c, a & b] ~c [rule mp 3,1]"
    assert run(["verify-paradeduction", *WORKED, "--witness", str(witness)]) == 0
    assert capsys.readouterr().out.startswith("verdict: valid")


def test_consistent_subsets_command(capsys):
    assert run(["subsets", "--preset", "toy", "--premises", "p, ~p, q"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert "count: 6" in lines
    assert lines[-3:-1] == ["2: p, q", "2: q, ~p"]


def test_para_entails_command(capsys):
    assert run(["para-entails", "--preset", "toy", "--premises", "p, ~p", "--goal", "~~p"]) == 0
    assert run(["para-entails", "--preset", "toy", "--premises", "p, ~p", "--goal", "~q"]) == 1


def test_build_and_check_adequate_structure(tmp_path, capsys):
    structure = tmp_path / "toy.valuations"
    assert run(["build-adequate", "--preset", "toy", "--output", str(structure)]) == 0
    assert structure.read_text().splitlines()[0] == "valuations 3 over 6"
    capsys.readouterr()

    assert run(["check-adequacy", "--preset", "toy", "--structure", str(structure)]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "verdict: true"
    assert "checked_sets: 64" in out
