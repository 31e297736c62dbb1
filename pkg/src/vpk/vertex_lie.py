"""Vertex Lie algebras given by finite generator tables.

R is the free C[∂]-module on weighted generators plus a space of central
elements killed by ∂.  An element is a ``RElement`` keyed by (atom, k): atom
indexes the generators first, then the centrals; k is the ∂-power (always 0
on a central).  Products u_n v on generator pairs come from a table; the rest
of R follows from the ∂-rules.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement

from .laurent import LaurentTable, expand_neg_binomial, sing, skew_transform
from .report import Record, Report
from .scalars import Q, as_scalar, params_of, falling, fmt, gbinom, inv_factorial
from .vectors import Vec, add_into


class StructureError(ValueError):
    pass


class RElement(Vec):
    __slots__ = ()


@dataclass
class VLStructure:
    """Finite presentation of a vertex Lie algebra.

    ``products`` maps (left atom, right atom) to {n: RElement}.  A pair that
    is listed only in one orientation gets the other from skew symmetry.
    """

    name: str
    generators: list  # [(name, weight)]
    centrals: list  # [name]
    products: dict
    parameters: list = field(default_factory=list)
    default_lambda: dict = field(default_factory=dict)
    note: str = ""

    def __post_init__(self):
        names = [g for g, _ in self.generators] + list(self.centrals)
        if len(set(names)) != len(names):
            raise StructureError("generator and central names must be unique")
        for g, w in self.generators:
            if not isinstance(w, int) or w < 1:
                raise StructureError(f"generator {g!r} needs a positive integer weight")
        self.atoms = names
        self.G = len(self.generators)
        self._index = {n: i for i, n in enumerate(names)}
        self._gen_cache: dict = {}
        self._right_cache: dict = {}
        self.validate_weights()

    # -- naming ---------------------------------------------------------

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise StructureError(f"unknown generator or central {name!r}") from None

    def is_central(self, atom: int) -> bool:
        return atom >= self.G

    def weight(self, atom: int) -> int:
        return self.generators[atom][1] if atom < self.G else 0

    def el(self, name: str, k: int = 0, coeff=1) -> RElement:
        a = self.index(name)
        if self.is_central(a):
            return RElement.raw({} if k else {(a, 0): Q(coeff)})
        return RElement.raw({(a, k): Q(coeff)} if coeff else {})

    def atom_el(self, atom: int, k: int = 0) -> RElement:
        if self.is_central(atom) and k:
            return RElement.raw({})
        return RElement.raw({(atom, k): Q(1)})

    def fmt(self, x: RElement) -> str:
        if not x.terms:
            return "0"
        parts = []
        for (a, k), c in sorted(x.terms.items()):
            atom = self.atoms[a]
            body = atom if k == 0 else (f"∂{atom}" if k == 1 else f"∂^{k}{atom}")
            parts.append(body if c == 1 else f"({fmt(c)})*{body}")
        return " + ".join(parts)

    # -- structure ------------------------------------------------------

    def partial(self, x: RElement, times: int = 1) -> RElement:
        if times == 0:
            return x
        return RElement.raw({(a, k + times): c for (a, k), c in x.terms.items() if a < self.G})

    def declared(self, u: int, v: int) -> bool:
        return (u, v) in self.products

    def table_bound(self, u: int, v: int) -> int:
        """Smallest N with u_n v = 0 for all n >= N, on generators."""
        if self.is_central(u) or self.is_central(v):
            return 0
        if (u, v) in self.products:
            ns = [n for n, x in self.products[(u, v)].items() if x]
            return max(ns) + 1 if ns else 0
        if (v, u) in self.products:
            ns = [n for n, x in self.products[(v, u)].items() if x]
            return max(ns) + 1 if ns else 0
        return 0

    def gen_product(self, u: int, n: int, v: int) -> RElement:
        """u_n v for generator atoms; skew symmetry supplies undeclared orientations."""
        key = (u, n, v)
        hit = self._gen_cache.get(key)
        if hit is not None:
            return hit
        if self.is_central(u) or self.is_central(v) or n < 0:
            out = RElement.raw({})
        elif (u, v) in self.products:
            out = self.products[(u, v)].get(n) or RElement.raw({})
        elif (v, u) in self.products:
            table = self.products[(v, u)]
            d: dict = {}
            for m, x in table.items():
                i = m - n
                if i < 0 or not x:
                    continue
                c = (-1) ** (n + i + 1) * inv_factorial(i)
                for (a, k), cc in x.terms.items():
                    if a < self.G:
                        add_into(d, (a, k + i), cc * c)
                    elif i == 0:
                        add_into(d, (a, 0), cc * c)
            out = RElement.raw(d)
        else:
            out = RElement.raw({})
        self._gen_cache[key] = out
        return out

    def _right(self, u: int, m: int, v: int, l: int) -> RElement:
        # u_m ∂^l v = sum_j C(l,j) m(m-1)..(m-j+1) ∂^{l-j}(u_{m-j} v)
        key = (u, m, v, l)
        hit = self._right_cache.get(key)
        if hit is not None:
            return hit
        d: dict = {}
        for j in range(min(l, m) + 1):
            c = gbinom(l, j) * falling(m, j)
            if not c:
                continue
            for (a, k), cc in self.gen_product(u, m - j, v).terms.items():
                if a < self.G:
                    add_into(d, (a, k + l - j), cc * c)
                elif l == j:
                    add_into(d, (a, 0), cc * c)
        out = RElement.raw(d)
        self._right_cache[key] = out
        return out

    def nth_product(self, a: RElement, n: int, b: RElement) -> RElement:
        """a_n b, with (∂^k u)_n = (-1)^k n..(n-k+1) u_{n-k} on the left."""
        if n < 0:
            raise StructureError("n-th products are defined for n >= 0 only")
        d: dict = {}
        for (u, k), cu in a.terms.items():
            if u >= self.G:
                continue
            lc = (-1) ** k * falling(n, k)
            if not lc:
                continue
            for (v, l), cv in b.terms.items():
                if v >= self.G:
                    continue
                for key, c in self._right(u, n - k, v, l).terms.items():
                    add_into(d, key, c * cu * cv * lc)
        return RElement.raw(d)

    def product_bound(self, a: RElement, b: RElement) -> int:
        """N with a_n b = 0 for n >= N."""
        best = 0
        for (u, k) in a.terms:
            for (v, l) in b.terms:
                if u < self.G and v < self.G:
                    t = self.table_bound(u, v)
                    if t:
                        best = max(best, t + k + l)
        return best

    def nth_product_via_skew(self, a: RElement, n: int, b: RElement) -> RElement:
        """a_n b evaluated as sum_i (-1)^{n+i+1}/i! ∂^i (b_{n+i} a)."""
        out = RElement.raw({})
        for i in range(max(self.product_bound(b, a) - n, 0) + 1):
            t = self.nth_product(b, n + i, a)
            if t:
                out = out + self.partial(t, i).scale((-1) ** (n + i + 1) * inv_factorial(i))
        return out

    def y_minus(self, a: RElement, b: RElement, var: str = "x") -> LaurentTable:
        return LaurentTable.from_modes(var, {n: self.nth_product(a, n, b) for n in range(self.product_bound(a, b))})

    def element_weight(self, x: RElement):
        ws = {self.weight(a) + k for (a, k) in x.terms}
        if len(ws) > 1:
            raise StructureError(f"{self.fmt(x)} is not homogeneous")
        return ws.pop() if ws else None

    def validate_weights(self):
        for (u, v), table in self.products.items():
            for n, x in table.items():
                if n < 0:
                    raise StructureError(f"negative product index for {self.atoms[u]}, {self.atoms[v]}")
                want = self.weight(u) + self.weight(v) - n - 1
                for (a, k) in x.terms:
                    if a >= len(self.atoms):
                        raise StructureError("product value refers to an unknown atom")
                    if self.weight(a) + k != want:
                        raise StructureError(
                            f"weight mismatch in {self.atoms[u]}_{n} {self.atoms[v]}: "
                            f"term {self.fmt(self.atom_el(a, k))} has weight {self.weight(a) + k}, expected {want}")

    def basis(self, max_dpow: int) -> list[RElement]:
        out = []
        for a in range(self.G):
            out.extend(self.atom_el(a, k) for k in range(max_dpow + 1))
        out.extend(self.atom_el(a) for a in range(self.G, len(self.atoms)))
        return out


# ----------------------------------------------------------------------
# axiom checks


def _compose(R: VLStructure, a, b, c) -> LaurentTable:
    """Y₋(a,x1) Y₋(b,x2) c as a two-variable table."""
    d: dict = {}
    for n, bc in R.y_minus(b, c).modes().items():
        for m, abc in R.y_minus(a, bc).modes().items():
            add_into(d, (-m - 1, -n - 1), abc)
    return LaurentTable(("x1", "x2"), d)


def half_commutator_sides(y_minus, compose, prod, bound, a, b, c):
    """Both sides of [Y₋(a,x1),Y₋(b,x2)]c = Sing(Y₋(Y₋(a,x1-x2)b,x2)c).

    Generic in the algebra: y_minus(a,b) gives a one-variable table,
    compose(a,b,c) the two-variable product, prod(a,i,b) the i-th product.
    """
    ba = compose(b, a, c)
    lhs = compose(a, b, c) - LaurentTable(("x1", "x2"), {(e[1], e[0]): z for e, z in ba.terms.items()})
    rhs = LaurentTable(("x1", "x2"))
    for i in range(bound(a, b)):
        ab = prod(a, i, b)
        if not ab:
            continue
        inner = y_minus(ab, c).modes()
        if not inner:
            continue
        imax = max(inner)
        t = LaurentTable.from_modes("x2", inner).embed(("x1", "x2"))
        rhs = rhs + sing(expand_neg_binomial(-i - 1, imax).mul(t, lambda s, v: v.scale(s)), ("x1", "x2"))
    return lhs, rhs


def first_difference(lhs: LaurentTable, rhs: LaurentTable):
    keys = sorted(set(lhs.terms) | set(rhs.terms))
    for k in keys:
        if lhs.terms.get(k) != rhs.terms.get(k):
            return k, lhs.terms.get(k, 0), rhs.terms.get(k, 0)
    return None


def check_axioms(R: VLStructure, mode: str = "all", max_dpow: int = 2,
                 sample: int | None = None, seed: int = 0, full_sweep: bool = False) -> Report:
    """Verify (C0)-(C3) on basis elements ∂^k u with k <= max_dpow.

    Triples are taken u <= v <= w in basis order unless full_sweep is set.
    With ``sample`` set, that many triples are drawn with the seeded LCG
    instead of sweeping.
    """
    from .rng import Lcg64

    basis = R.basis(max_dpow)
    fm = R.fmt
    rep = Report(command=f"check {R.name}", seed=seed,
                 caps={"max_dpow": max_dpow, "mode": mode, "sample": sample, "full_sweep": full_sweep})
    zero = RElement.raw({})
    want = {"skew", "half_commutator", "half_jacobi"} if mode == "all" else {mode}

    pairs = [(a, b) for i, a in enumerate(basis) for b in basis[i:]]
    if mode == "all":
        rec = Record("vl.C0.finite")
        for a in basis:
            for b in basis:
                N = R.product_bound(a, b)
                rec.tick()
                for n in (N, N + 1):
                    got = R.nth_product(a, n, b)
                    if got:
                        rec.fail({"pair": [fm(a), fm(b)], "n": n, "value": fm(got)})
        rep.add(rec)

        rec = Record("vl.C1.left_derivative")
        for a in basis:
            for b in basis:
                da = R.partial(a)
                for n in range(R.product_bound(da, b) + 1):
                    rec.tick()
                    lhs = R.nth_product_via_skew(da, n, b)
                    rhs = R.nth_product_via_skew(a, n - 1, b).scale(-n) if n else zero
                    if lhs != rhs:
                        rec.fail({"pair": [fm(a), fm(b)], "n": n, "lhs": fm(lhs), "rhs": fm(rhs)})
        rep.add(rec)

        rec = Record("vl.derivative_law")
        for a in basis:
            for b in basis:
                for n in range(R.product_bound(a, R.partial(b)) + 1):
                    rec.tick()
                    lhs = R.partial(R.nth_product_via_skew(a, n, b))
                    rhs = (R.nth_product_via_skew(R.partial(a), n, b)
                           + R.nth_product_via_skew(a, n, R.partial(b)))
                    if lhs != rhs:
                        rec.fail({"pair": [fm(a), fm(b)], "n": n, "lhs": fm(lhs), "rhs": fm(rhs)})
        rep.add(rec)

    if "skew" in want:
        rec = Record("vl.C2.skew")
        for a, b in pairs:
            rec.tick()
            lhs = R.y_minus(a, b)
            rhs = skew_transform(R.y_minus(b, a), "x", R.partial)
            diff = first_difference(lhs, rhs)
            if diff:
                e, l, r = diff
                rec.fail({"pair": [fm(a), fm(b)], "monomial": f"x^{{{e[0]}}}",
                          "lhs": fm(l) if l else "0", "rhs": fm(r) if r else "0"})
        rep.add(rec)

    hc = {"half_commutator", "half_jacobi"} & want
    if hc:
        if full_sweep:
            triples = [(a, b, c) for a in basis for b in basis for c in basis]
        elif sample:
            rng = Lcg64(seed)
            triples = [tuple(rng.choice(basis) for _ in range(3)) for _ in range(sample)]
        else:
            triples = list(combinations_with_replacement(basis, 3))
        ids = ["vl.C3.half_commutator"] + (["vl.half_jacobi"] if "half_jacobi" in hc else [])
        rec = Record(ids[0])
        for a, b, c in triples:
            rec.tick()
            lhs, rhs = half_commutator_sides(
                R.y_minus, lambda p, q, r: _compose(R, p, q, r), R.nth_product, R.product_bound, a, b, c)
            diff = first_difference(lhs, rhs)
            if diff:
                e, l, r = diff
                rec.fail({"triple": [fm(a), fm(b), fm(c)],
                          "monomial": f"x1^{{{e[0]}}}*x2^{{{e[1]}}}",
                          "lhs": fm(l) if l else "0", "rhs": fm(r) if r else "0"})
        rep.add(rec)
        if len(ids) > 1:
            # the half Jacobi identity is decided through its equivalent half commutator form
            rep.add(rec.renamed(ids[1], note="evaluated via the equivalent half commutator formula"))
    return rep


# ----------------------------------------------------------------------
# builders


def affine_builder(basis: list[str], brackets: dict, form: dict, name: str = "affine",
                   central: str = "c") -> VLStructure:
    """u_0 v = [u,v], u_1 v = <u,v> c, all weights 1.

    brackets: {(u, v): {w: coeff}}; form: {(u, v): coeff}.  Entries given in
    one orientation are completed by antisymmetry / symmetry; an entry given
    in both orientations must agree.
    """
    idx = {b: i for i, b in enumerate(basis)}
    br: dict = {}
    for (u, v), val in brackets.items():
        val = {w: Q(c) for w, c in val.items() if c}
        for w in val:
            if w not in idx:
                raise StructureError(f"bracket target {w!r} not in basis")
        if u == v and val:
            raise StructureError(f"bracket [{u},{u}] must vanish")
        if (v, u) in brackets:
            other = {w: Q(c) for w, c in brackets[(v, u)].items() if c}
            if other != {w: -c for w, c in val.items()}:
                raise StructureError(f"bracket table is not antisymmetric at ({u},{v})")
        br[(u, v)] = val
        br[(v, u)] = {w: -c for w, c in val.items()}
    fo: dict = {}
    for (u, v), c in form.items():
        c = as_scalar(c)
        if (v, u) in form and as_scalar(form[(v, u)]) != c:
            raise StructureError(f"form is not symmetric at ({u},{v})")
        fo[(u, v)] = fo[(v, u)] = c
    G = len(basis)
    products = {}
    for u in basis:
        for v in basis:
            table = {}
            val = br.get((u, v), {})
            if val:
                table[0] = RElement({(idx[w], 0): c for w, c in val.items()})
            c = fo.get((u, v), 0)
            if c:
                table[1] = RElement({(G, 0): c})
            if table:
                products[(idx[u], idx[v])] = table
    return VLStructure(name=name, generators=[(b, 1) for b in basis], centrals=[central], products=products)


def heisenberg() -> VLStructure:
    return affine_builder(["a"], {}, {("a", "a"): 1}, name="heisenberg")


SL2_BRACKETS = {("e", "f"): {"h": 1}, ("h", "e"): {"e": 2}, ("h", "f"): {"f": -2}}


def sl2(level=1) -> VLStructure:
    """Affine sl2 with u_1 v = level * tr(uv) c; level may be a parameter string."""
    k = as_scalar(level)
    st = affine_builder(["e", "h", "f"], SL2_BRACKETS, {("e", "f"): k, ("h", "h"): 2 * k}, name="sl2")
    st.parameters = sorted(params_of(k))
    return st


def sl2_noninvariant() -> VLStructure:
    """sl2 brackets with the form <e,e> = 1 only; fails (C3)."""
    return affine_builder(["e", "h", "f"], SL2_BRACKETS, {("e", "e"): 1}, name="sl2-noninvariant")


def virasoro() -> VLStructure:
    """L_0 L = ∂L, L_1 L = 2L, L_3 L = c/2.  Convenience structure, weight 2."""
    products = {(0, 0): {0: RElement({(0, 1): 1}), 1: RElement({(0, 0): 2}), 3: RElement({(1, 0): Q(1, 2)})}}
    return VLStructure(name="virasoro", generators=[("L", 2)], centrals=["c"], products=products,
                       note="not derived from the reference construction")
