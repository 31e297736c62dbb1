import pytest

from vpk.laurent import LaurentTable, skew_transform
from vpk.loop import bracket, canonical_reduce, check_lie, check_zero_mode, mode, zero_mode_bracket
from vpk.rng import Lcg64
from vpk.scalars import Q
from vpk.vertex_lie import (SL2_BRACKETS, StructureError, VLStructure, _compose, affine_builder,
                            check_axioms, first_difference, half_commutator_sides, heisenberg, sl2,
                            sl2_noninvariant, virasoro)


@pytest.fixture(scope="module")
def H():
    return heisenberg()


@pytest.fixture(scope="module")
def S():
    return sl2()


def test_heisenberg_products(H):
    a, c = H.el("a"), H.el("c")
    assert H.nth_product(a, 1, a) == c
    assert not H.nth_product(H.partial(a), 1, a)
    assert H.y_minus(a, a) == LaurentTable(("x",), {(-2,): c})
    assert not H.y_minus(c, a) and not H.y_minus(a, c)


def test_sl2_products(S):
    e, h, f, c = (S.el(n) for n in "ehfc")
    assert S.nth_product(f, 0, e) == -h
    assert S.y_minus(e, f) == LaurentTable(("x",), {(-1,): h, (-2,): c})
    assert S.nth_product(e, 1, f) == c
    assert S.nth_product(h, 1, h) == c.scale(2)
    assert S.nth_product(h, 0, e) == e.scale(2)
    assert S.nth_product(h, 0, f) == f.scale(-2)


def test_both_extension_paths_agree(S):
    basis = S.basis(2)
    for a in basis:
        for b in basis:
            for n in range(S.product_bound(a, b) + 2):
                assert S.nth_product(a, n, b) == S.nth_product_via_skew(a, n, b)


def test_zero_form_gives_only_zeroth_products():
    R = affine_builder(["e", "h", "f"], SL2_BRACKETS, {})
    assert all(set(t) == {0} for t in R.products.values())


def test_builder_rejects_bad_input():
    with pytest.raises(StructureError):
        affine_builder(["x", "y"], {("x", "y"): {"x": 1}, ("y", "x"): {"x": 1}}, {})
    with pytest.raises(StructureError):
        affine_builder(["x", "y"], {}, {("x", "y"): 1, ("y", "x"): 2})
    with pytest.raises(StructureError):
        VLStructure(name="bad", generators=[("a", 0)], centrals=[], products={})


@pytest.mark.parametrize("R", [heisenberg(), sl2(), sl2("ell"), virasoro()], ids=lambda R: R.name)
def test_axioms_pass(R):
    rep = check_axioms(R, max_dpow=2)
    assert rep.ok, rep.to_text()


def test_skew_involution_on_structure(S):
    basis = S.basis(1)
    for a in basis:
        for b in basis:
            t = S.y_minus(a, b)
            assert skew_transform(skew_transform(t, "x", S.partial), "x", S.partial) == t


def test_mutant_witness():
    R = sl2_noninvariant()
    rep = check_axioms(R, max_dpow=0)
    rec = rep.get("vl.C3.half_commutator")
    assert rec.status == "fail"
    assert ["e", "e", "h"] in [w["triple"] for w in rec.witnesses]
    sides = lambda *names: half_commutator_sides(R.y_minus, lambda p, q, r: _compose(R, p, q, r), R.nth_product,
                                                 R.product_bound, *(R.el(n) for n in names))
    assert first_difference(*sides("e", "e", "h")) is not None
    # (e,e,f) is not a witness: both sides vanish there
    assert first_difference(*sides("e", "e", "f")) is None


def test_ordered_triples_suffice():
    for R in (heisenberg(), sl2()):
        assert check_axioms(R, max_dpow=1, mode="half_commutator", full_sweep=True).ok


# -- loop algebra -------------------------------------------------------------


def test_canonical_reduce_examples(H):
    a = H.el("a")
    assert canonical_reduce(H, H.partial(a), 5) == mode(H, "a", 4, -5)
    assert not canonical_reduce(H, H.el("c"), 3)
    assert canonical_reduce(H, H.partial(a, 2), 2) == mode(H, "a", 0, 2)


def test_loop_brackets(H, S):
    assert bracket(H, mode(H, "a", 2), mode(H, "a", -2)) == mode(H, "c", -1, 2)
    assert not bracket(H, mode(H, "a", 1), mode(H, "a", 2))
    assert bracket(S, mode(S, "e", 1), mode(S, "f", -1)) == mode(S, "h", 0) + mode(S, "c", -1)


def test_heisenberg_relations(H):
    for m in range(-4, 5):
        for n in range(-4, 5):
            want = mode(H, "c", -1, m) if m + n == 0 else mode(H, "c", -1, 0)
            assert bracket(H, mode(H, "a", m), mode(H, "a", n)) == want


def test_canonical_reduce_linear(S):
    rng = Lcg64(3)
    basis = S.basis(3)
    for _ in range(50):
        x, y = rng.choice(basis), rng.choice(basis)
        s, t = Q(rng.randint(-3, 3)), Q(rng.randint(-3, 3))
        n = rng.randint(-5, 5)
        assert canonical_reduce(S, x.scale(s) + y.scale(t), n) == \
            canonical_reduce(S, x, n).scale(s) + canonical_reduce(S, y, n).scale(t)


def test_polar_subalgebra(S):
    for u in "ehf":
        for v in "ehf":
            for m in range(-4, 0):
                for n in range(-4, 0):
                    X = bracket(S, mode(S, u, m), mode(S, v, n))
                    assert all(k <= -1 for (_, k) in X.terms)


def test_zero_mode_bracket(H, S):
    assert zero_mode_bracket(S, S.el("e"), S.el("f")) == S.el("h")
    assert not zero_mode_bracket(H, H.el("a"), H.el("a"))
    assert not zero_mode_bracket(S, S.partial(S.el("e")), S.el("f"))


@pytest.mark.parametrize("R", [heisenberg(), sl2("ell")], ids=lambda R: R.name)
def test_check_lie_passes(R):
    rep = check_lie(R, samples=200, window=4)
    assert rep.ok, rep.to_text()


def test_check_lie_mutant_fails_jacobi():
    rep = check_lie(sl2_noninvariant(), samples=500, window=4)
    assert rep.get("loop.jacobi").status == "fail"
    assert rep.get("loop.antisymmetry").status == "pass"
    assert check_zero_mode(sl2()).ok
