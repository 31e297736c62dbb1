import json

import pytest

from vpk.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_ope_table(capsys):
    code, out, _ = run(capsys, "ope", "sl2.json", "--left", "e", "--right", "f", "--modes", "0..2")
    assert code == 0
    assert out.splitlines()[:3] == ["0: h", "1: c", "2: 0"]


def test_vacuum_action(capsys):
    code, out, _ = run(capsys, "vacuum", "heisenberg.json", "--lambda", "c=2", "--state", "a(-1)|0>",
                       "--act", "a(1)")
    assert code == 0
    assert out.splitlines()[0] == "2 |0>"


def test_check_passes_and_mutant_fails(capsys):
    assert run(capsys, "check", "heisenberg.json")[0] == 0
    code, out, _ = run(capsys, "check", "sl2-noninvariant.json", "--format", "json")
    assert code == 1
    doc = json.loads(out)
    rec = next(r for r in doc["records"] if r["check"] == "vl.C3.half_commutator")
    assert rec["status"] == "fail"
    assert ["e", "e", "h"] in [w["triple"] for w in rec["witnesses"]]


def test_invalid_structure_rejected_by_downstream_commands(capsys):
    code, out, _ = run(capsys, "deform", "sl2-noninvariant.json")
    assert code == 1
    assert "vl.input_structure" in out


def test_usage_errors(capsys):
    assert run(capsys, "check", "no-such-file.json")[0] == 2
    assert run(capsys, "vacuum", "heisenberg.json", "--state", "q(-1)|0>")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["not-a-command", "heisenberg.json"])
    assert exc.value.code == 2


def test_json_is_deterministic(capsys):
    argv = ["va-check", "heisenberg.json", "--seed", "7", "--format", "json", "--samples", "10"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    assert "time" not in json.loads(first)


def test_prestructure_mutant(capsys):
    assert run(capsys, "poisson-check", "sl2-prestructure.json", "--samples", "5")[0] == 0
    assert run(capsys, "poisson-check", "sl2-mutant-prestructure.json", "--samples", "5")[0] == 1


def test_c1_json(capsys):
    code, out, _ = run(capsys, "c1", "heisenberg.json", "--lambda", "c=1", "--max-weight", "2", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert "a(-1)|0>" in json.dumps(doc)
