import json

import pytest

from vpk import io
from vpk.vertex_lie import VLStructure, check_axioms, heisenberg

GEN = '{"name":"x","generators":[{"name":"a","weight":1}],"centrals":[{"name":"c"}],"products":[%s]}'
PROD = '{"left":"a","right":"a","n":1,"value":[{"coeff":"%s","dpower":0,"target":"%s"}]}'


def errors(text):
    with pytest.raises(io.AlgebraFileError) as exc:
        io.parse(text)
    return exc.value.errors


@pytest.mark.parametrize("name", sorted(io.BUILTIN))
def test_shipped_files_round_trip(name):
    path = io.builtin_path(name)
    raw = open(path, encoding="utf-8").read()
    af = io.parse(raw)
    assert io.serialize(io.parse(io.serialize(af))) == io.serialize(af)
    assert af.structure() is not None


def test_load_by_name_and_path():
    assert io.load("heisenberg").name == "heisenberg"
    assert io.load(io.builtin_path("heisenberg")).name == "heisenberg"


def test_sl2_parameters_registered():
    af = io.load("sl2")
    assert af.parameters == ["ell"]
    assert str(af.lam["c"]) == "ell"


def test_heisenberg_structure_matches_builder():
    R = io.load("heisenberg").structure()
    assert isinstance(R, VLStructure)
    assert io.to_dict(io.from_structure(R)) == io.to_dict(io.from_structure(heisenberg()))
    assert check_axioms(R, max_dpow=1).ok


def test_dangling_target_path():
    assert errors(GEN % (PROD % ("1", "z"))) == ["products[0].value[0].target: unknown element 'z'"]


def test_all_errors_collected():
    bad = GEN % ('{"left":"a","right":"a","n":-1,"value":[{"coeff":"1","dpower":0,"target":"z"}]}')
    errs = errors(bad)
    assert len(errs) == 2
    assert errs[0].startswith("products[0].n")


def test_syntax_error():
    assert errors("{")[0].startswith("$: JSON syntax error at line 1")


def test_weight_zero():
    errs = errors('{"name":"x","generators":[{"name":"a","weight":0}],"products":[]}')
    assert errs == ["generators[0].weight: must be an integer >= 1"]


def test_duplicate_product_key():
    dup = GEN % (PROD % ("1", "c") + "," + PROD % ("1", "c"))
    assert errors(dup) == ["products[1]: duplicate product key ('a', 'a', 1)"]


def test_duplicate_name():
    errs = errors('{"name":"x","generators":[{"name":"a","weight":1},{"name":"a","weight":1}],"products":[]}')
    assert "duplicate name 'a'" in errs[0]


def test_coefficient_errors():
    assert "unknown parameter 'k'" in errors(GEN % (PROD % ("k", "c")))[0]
    assert "division" in errors(GEN % (PROD % ("1/0", "c")))[0]


def test_parameter_coefficients_accepted():
    doc = json.loads(GEN % (PROD % ("2*k^2 - 1/3", "c")))
    doc["parameters"] = ["k"]
    af = io.parse(json.dumps(doc))
    out = json.loads(io.serialize(af))
    assert out["products"][0]["value"][0]["coeff"] in ("2*k^2 - 1/3", "-1/3 + 2*k^2")


def test_canonical_serialization_is_key_order_independent():
    doc = json.loads(io.serialize(io.load("virasoro")))
    shuffled = json.dumps(dict(reversed(list(doc.items()))))
    assert io.serialize(io.parse(shuffled)) == io.serialize(io.parse(json.dumps(doc)))
