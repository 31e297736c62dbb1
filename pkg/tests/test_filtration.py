import pytest

from vpk.enveloping import VacuumModule
from vpk.filtration import (build_filtration, c1_space, check_filtration, check_gr_poisson, gr_nth, gr_partial,
                            gr_product, pbw_spanning_check, psi_iso_check)
from vpk.vertex_lie import StructureError, heisenberg, sl2


@pytest.fixture(scope="module")
def V_sl2():
    return VacuumModule(sl2(), {"c": 1})


def test_gr_operations(V_sl2):
    s = build_filtration(V_sl2)
    e, f = s.cls(V_sl2.state("e")), s.cls(V_sl2.state("f"))
    assert V_sl2.fmt(gr_product(s, e, f)) == "e(-1)f(-1)|0>"
    assert V_sl2.fmt(gr_nth(s, e, 0, f)) == "h(-1)|0>"
    # e_1 f is a scalar, which sits in E_0 and vanishes in the degree-1 quotient
    assert not gr_nth(s, e, 1, f)
    assert V_sl2.fmt(gr_partial(s, e)) == "e(-2)|0>"


def test_filtration_and_gr_suites(V_sl2):
    s = build_filtration(V_sl2)
    assert check_filtration(s, samples=10).ok
    assert check_gr_poisson(s, samples=10).ok


def test_rejects_non_filtering_weights(V_sl2):
    with pytest.raises(StructureError) as exc:
        build_filtration(V_sl2, {"h": 3})
    assert exc.value.witness == {"u": "e", "v": "f", "i": 0, "monomial": "h(-1)|0>"}


def test_rejects_bad_weights(V_sl2):
    with pytest.raises(StructureError):
        build_filtration(V_sl2, {"e": 0})
    with pytest.raises(StructureError):
        build_filtration(V_sl2, {"zz": 1})


@pytest.mark.parametrize("R,dims", [
    (heisenberg(), {"0": 1, "1": 1, "2": 2, "3": 3, "4": 5}),
    (sl2(), {"0": 1, "1": 3, "2": 9, "3": 22, "4": 51}),
], ids=["heisenberg", "sl2"])
def test_psi_isomorphism(R, dims):
    rep = psi_iso_check(R, 4, 4, 10)
    assert rep.ok, rep.to_text()
    assert rep.get("psi.bijective").info["central_free_dims"] == dims


def test_c1_heisenberg():
    V = VacuumModule(heisenberg(), {"c": 1})
    c = c1_space(V, 3)
    assert [V.fmt(x) for x in c[1]["complement"]] == ["a(-1)|0>"]
    assert c[2]["complement"] == [] and c[2]["dim_c1"] == 2
    assert c[3]["complement"] == []


def test_c1_sl2(V_sl2):
    c = c1_space(V_sl2, 2)
    assert len(c[1]["complement"]) == 3 and c[1]["dim_c1"] == 0
    assert c[2]["dim_c1"] == 9


def test_c1_needs_specialized_centrals():
    with pytest.raises(StructureError):
        c1_space(VacuumModule(heisenberg()), 2)


def test_pbw_spanning_and_independence():
    V = VacuumModule(heisenberg(), {"c": 1})
    assert pbw_spanning_check(V, ["a"], 6, compare_with=None).ok
    assert pbw_spanning_check(V, ["a"], 4).ok


def test_pbw_order_irrelevant(V_sl2):
    assert pbw_spanning_check(V_sl2, ["e", "h", "f"], 3, order=["f", "h", "e"]).ok


def test_pbw_too_small_generating_set(V_sl2):
    rep = pbw_spanning_check(V_sl2, ["e"], 3, compare_with=None)
    rec = rep.get("pbw.spanning")
    assert rec.status == "fail"
    assert rec.witnesses[0]["missing"] == ["h(-1)|0>", "f(-1)|0>"]
