"""Good filtrations of vacuum vertex algebras and their associated graded.

Two kinds of filtration are handled:

* ``FiltrationSpec``: U is spanned by generator states u(-1)|0> with positive
  filtration weights.  E_n is spanned by PBW monomials whose factor weights
  sum to at most n, so every monomial has a definite degree ``d`` and cosets
  are represented by their pure top-degree part.
* ``span_filtration``: U is any list of homogeneous states with filtration
  degrees.  E_n is computed weight by weight from the spanning recursion
  E_n = E_{n-1} + sum_u u_{-j} E_{n - deg u}.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial

from . import linalg
from .enveloping import PBWVector, VACUUM, VacuumModule, sample_states
from .laurent import LaurentTable
from .poisson import PoissonContext, PoissonPoly, poisson_from_vertex_lie
from .report import Record, Report
from .rng import Lcg64
from .scalars import Q
from .vectors import add_into
from .vertex_lie import StructureError, VLStructure, first_difference, half_commutator_sides


class GrElement(PBWVector):
    """A class in E_n / E_{n-1}, stored as its pure degree-n representative."""

    __slots__ = ()


@dataclass
class FiltrationSpec:
    ctx: VacuumModule
    fw: dict  # atom -> filtration weight (>= 1)
    name: str = ""
    _d: dict = field(default_factory=dict, repr=False)

    def degree(self, mono: tuple) -> int:
        d = self._d.get(mono)
        if d is None:
            d = self._d[mono] = sum(self.fw[a] for _, a in mono)
        return d

    def vec_degree(self, v: PBWVector) -> int:
        return max((self.degree(m) for m in v.terms), default=-1)

    def project(self, v: PBWVector, level: int) -> GrElement:
        """Adapted projection: the degree-``level`` part of v (which must lie in E_level)."""
        out = {}
        for m, c in v.terms.items():
            d = self.degree(m)
            if d > level:
                raise StructureError(f"state leaves E_{level}: term of degree {d}")
            if d == level:
                out[m] = c
        return GrElement.raw(out)

    def cls(self, v: PBWVector, level: int | None = None) -> GrElement:
        return self.project(v, self.vec_degree(v) if level is None else level)

    def level(self, A: GrElement) -> int:
        return self.vec_degree(A) if A.terms else 0

    def basis(self, weight: int, level: int, max_len: int | None = None) -> list[tuple]:
        """PBW monomials of the given weight with d <= level."""
        return [m for m in self.ctx.basis(weight, max_len) if self.degree(m) <= level]


def build_filtration(ctx: VacuumModule, fw: dict | None = None, name: str = "") -> FiltrationSpec:
    """Filtration generated by generator states with filtration weights ``fw``.

    ``fw`` maps atom names to weights; missing generators default to 1 and
    unspecialized centrals to 1.  The inductive hypothesis u_i v in
    E_{m+n-1} (i >= 0) is verified for all generator pairs; a violation is
    rejected with the offending data.
    """
    R = ctx.R
    fw = dict(fw or {})
    weights = {}
    for a in range(len(R.atoms)):
        if a >= R.G and a in ctx.lam:
            continue
        w = fw.pop(R.atoms[a], 1)
        if not isinstance(w, int) or w < 1:
            raise StructureError(f"filtration weight of {R.atoms[a]!r} must be a positive integer")
        weights[a] = w
    if fw:
        raise StructureError(f"filtration weights for unknown or specialized atoms: {sorted(fw)}")
    spec = FiltrationSpec(ctx, weights, name or f"{R.name}:U")
    for u in range(R.G):
        su = PBWVector.raw({((-1, u),): Q(1)})
        for v in list(weights):
            sv = PBWVector.raw({((-1, v),): Q(1)})
            bound = weights[u] + weights[v] - 1
            for i in range(R.table_bound(u, v) if v < R.G else 0):
                for m in ctx.vertex_coeff(su, i, sv).terms:
                    if spec.degree(m) > bound:
                        err = StructureError(
                            f"u_i v leaves E_{bound} for u={R.atoms[u]}, v={R.atoms[v]}, i={i}: "
                            f"monomial {ctx.fmt(PBWVector.raw({m: Q(1)}))} has degree {spec.degree(m)}")
                        err.witness = {"u": R.atoms[u], "v": R.atoms[v], "i": i,
                                       "monomial": ctx.fmt(PBWVector.raw({m: Q(1)}))}
                        raise err
    return spec


def standard_weights(ctx: VacuumModule) -> dict:
    """Filtration weights equal to conformal weights (the standard filtration)."""
    return {ctx.R.atoms[a]: ctx.R.weight(a) for a in range(ctx.G)}


# ----------------------------------------------------------------------
# associated graded


def gr_product(spec: FiltrationSpec, A: GrElement, B: GrElement) -> GrElement:
    """(u + E_{m-1})(v + E_{n-1}) = u_{-1} v + E_{m+n-1}."""
    return spec.project(spec.ctx.vertex_coeff(A, -1, B), spec.level(A) + spec.level(B))


def gr_nth(spec: FiltrationSpec, A: GrElement, i: int, B: GrElement) -> GrElement:
    if not A.terms or not B.terms:
        return GrElement.raw({})
    return spec.project(spec.ctx.vertex_coeff(A, i, B), spec.level(A) + spec.level(B) - 1)


def gr_bound(spec: FiltrationSpec, A: GrElement, B: GrElement) -> int:
    wa = {spec.ctx.weight(m) for m in A.terms}
    wb = {spec.ctx.weight(m) for m in B.terms}
    if not wa or not wb:
        return 0
    return max(wa) + max(wb)


def gr_y_minus(spec: FiltrationSpec, A: GrElement, B: GrElement) -> LaurentTable:
    """sum_{i>=0} (u_i v + E_{m+n-2}) x^{-i-1}; coefficients live at level m+n-1."""
    d = {}
    for i in range(gr_bound(spec, A, B)):
        c = gr_nth(spec, A, i, B)
        if c:
            d[(-i - 1,)] = c
    return LaurentTable(("x",), d)


def gr_partial(spec: FiltrationSpec, A: GrElement) -> GrElement:
    """The derivation u + E_{m-1} -> Du + E_{m-1}."""
    if not A.terms:
        return A
    # D reorders factors, so shorter normal-ordering terms must be dropped
    return spec.project(spec.ctx.d_operator(A), spec.level(A))


def gr_compose(spec: FiltrationSpec, A, B, C) -> LaurentTable:
    d: dict = {}
    for n, bc in gr_y_minus(spec, B, C).modes().items():
        for m, abc in gr_y_minus(spec, A, bc).modes().items():
            add_into(d, (-m - 1, -n - 1), abc)
    return LaurentTable(("x1", "x2"), d)


def _sample_classes(spec: FiltrationSpec, rng: Lcg64, count: int, weight_cap: int, max_len) -> list[GrElement]:
    return [spec.cls(v) for v in sample_states(spec.ctx, rng, weight_cap, max_len, count, wmin=1)]


def check_filtration(spec: FiltrationSpec, samples: int = 30, weight_cap: int = 3, window: int = 3,
                     seed: int = 0, max_len: int | None = None) -> Report:
    """Good-filtration containments, D-stability and the E_0 subalgebra on samples."""
    ctx = spec.ctx
    if ctx.free_centrals() and max_len is None:
        max_len = 3
    rng = Lcg64(seed)
    rep = Report(command=f"filtration {spec.name}", seed=seed,
                 caps={"samples": samples, "weight_cap": weight_cap, "window": window, "max_len": max_len})
    cont = rep.add(Record("filt.containment"))
    dst = rep.add(Record("filt.D_stable"))
    for _ in range(samples):
        u, v = sample_states(ctx, rng, weight_cap, max_len, 2)
        m, n = spec.vec_degree(u), spec.vec_degree(v)
        j = rng.randint(-window, window)
        got = spec.vec_degree(ctx.vertex_coeff(u, j, v))
        bound = m + n if j < 0 else m + n - 1
        cont.expect(got <= bound, {"u": ctx.fmt(u), "v": ctx.fmt(v), "j": j, "degree": got, "bound": bound})
        dv = ctx.d_operator(v)
        dst.expect(not dv or spec.vec_degree(dv) == n, {"v": ctx.fmt(v)})
    e0 = rep.add(Record("filt.E0_commutative"))
    zero = [m for w in range(weight_cap + 1) for m in spec.basis(w, 0, max_len)]
    for a in zero:
        for b in zero:
            for i in range(window + 1):
                val = ctx.vertex_coeff(PBWVector.raw({a: Q(1)}), i, PBWVector.raw({b: Q(1)}))
                e0.expect(not val, {"u": ctx.fmt(PBWVector.raw({a: Q(1)})), "i": i})
    return rep


def check_gr_poisson(spec: FiltrationSpec, samples: int = 20, weight_cap: int = 3, seed: int = 0,
                     max_len: int | None = None) -> Report:
    """The vertex Poisson axioms for gr_E V on sampled classes."""
    ctx = spec.ctx
    if ctx.free_centrals() and max_len is None:
        max_len = 3
    rng = Lcg64(seed)
    rep = Report(command=f"gr {spec.name}", seed=seed,
                 caps={"samples": samples, "weight_cap": weight_cap, "max_len": max_len})
    fm = ctx.fmt
    Y = lambda a, b: gr_y_minus(spec, a, b)
    P = lambda a: gr_partial(spec, a)
    mul = lambda a, b: gr_product(spec, a, b)
    comm = rep.add(Record("gr.commutative"))
    assoc = rep.add(Record("gr.associative"))
    unit = rep.add(Record("gr.unit"))
    deriv = rep.add(Record("gr.derivation"))
    dder = rep.add(Record("gr.partial_derivation"))
    skew = rep.add(Record("gr.half_skew"))
    dlaw = rep.add(Record("gr.partial_laws"))
    hc = rep.add(Record("gr.half_commutator"))
    from .laurent import skew_transform

    vac = GrElement.raw({VACUUM: Q(1)})
    for _ in range(samples):
        a, b, c = _sample_classes(spec, rng, 3, weight_cap, max_len)
        ab = mul(a, b)
        comm.expect(ab == mul(b, a), {"a": fm(a), "b": fm(b)})
        assoc.expect(mul(ab, c) == mul(a, mul(b, c)), {"a": fm(a), "b": fm(b), "c": fm(c)})
        unit.expect(mul(a, vac) == a and not Y(vac, b), {"a": fm(a), "b": fm(b)})
        lhs = Y(a, mul(b, c))
        rhs = LaurentTable(("x",), {})
        for e, t in Y(a, b).terms.items():
            rhs = rhs + LaurentTable(("x",), {e: mul(t, c)})
        for e, t in Y(a, c).terms.items():
            rhs = rhs + LaurentTable(("x",), {e: mul(b, t)})
        deriv.expect(lhs == rhs, {"a": fm(a), "b": fm(b), "c": fm(c)})
        dder.expect(P(ab) == mul(P(a), b) + mul(a, P(b)), {"a": fm(a), "b": fm(b)})
        yab = Y(a, b)
        sk = skew_transform(Y(b, a), "x", P)
        skew.expect(yab == sk, {"a": fm(a), "b": fm(b)})
        dlaw.expect(Y(P(a), b) == yab.derivative("x"), {"a": fm(a), "b": fm(b), "law": "Y(∂a,x) = d/dx Y(a,x)"})
        left = yab.map_coeffs(P) - Y(a, P(b))
        dlaw.expect(left == yab.derivative("x"), {"a": fm(a), "b": fm(b), "law": "[∂,Y(a,x)] = d/dx Y(a,x)"})
        l, r = half_commutator_sides(Y, lambda x, y, z: gr_compose(spec, x, y, z),
                                     lambda x, i, y: gr_nth(spec, x, i, y),
                                     lambda x, y: gr_bound(spec, x, y), a, b, c)
        diff = first_difference(l, r)
        hc.expect(diff is None, {"triple": [fm(a), fm(b), fm(c)], "monomial": diff and str(diff[0])})
    return rep


# ----------------------------------------------------------------------
# S(R) -> gr V(R)


def psi_generator(spec: FiltrationSpec, y) -> GrElement:
    """psi(∂^k u) = k! u(-k-1)|0> + E_0 (centrals: c(-1)|0>)."""
    a, k = y
    return spec.project(PBWVector.raw({((-1 - k, a),): Q(factorial(k))}), spec.fw[a])


def psi_product(spec: FiltrationSpec, S: PoissonContext, p: PoissonPoly) -> GrElement:
    """psi as an algebra map: product of generator classes in gr."""
    out: dict = {}
    for mono, c in S.unflatten(p).terms.items():
        cur = GrElement.raw({VACUUM: Q(1)})
        for y, e in mono:
            g = psi_generator(spec, y)
            for _ in range(e):
                cur = gr_product(spec, cur, g)
        for m, v in cur.terms.items():
            add_into(out, m, v * c)
    return GrElement.raw(out)


def psi_symmetric(spec: FiltrationSpec, S: PoissonContext, p: PoissonPoly, degree: int) -> GrElement:
    """psi through the symmetrization map: top-degree part of omega(p)."""
    return spec.project(spec.ctx.symmetrize(S.unflatten(p)), degree)


def psi_iso_check(R: VLStructure, degree_cap: int = 4, weight_cap: int = 4, samples: int = 30,
                  seed: int = 0) -> Report:
    """psi: S(R) -> gr V(R) for the filtration with U = R, all weights 1."""
    ctx = VacuumModule(R)
    spec = build_filtration(ctx, name=f"{R.name}:R")
    S = poisson_from_vertex_lie(R, strict=False)
    rng = Lcg64(seed)
    rep = Report(command=f"psi-check {R.name}", seed=seed,
                 caps={"degree_cap": degree_cap, "weight_cap": weight_cap, "samples": samples})
    unit = rep.add(Record("psi.unit"))
    one = psi_product(spec, S, S.one())
    unit.expect(one == GrElement.raw({VACUUM: Q(1)}), {"value": ctx.fmt(one)})

    mono_pool = [m for w in range(weight_cap + 1) for m in S.monomials(w, degree_cap) if m]
    alg = rep.add(Record("psi.algebra_map"))
    der = rep.add(Record("psi.partial"))
    for _ in range(samples):
        p = PoissonPoly.raw({rng.choice(mono_pool): Q(1)})
        q = PoissonPoly.raw({rng.choice(mono_pool): Q(1)})
        deg = p.degree() + q.degree()
        if deg <= degree_cap + 1:
            lhs = psi_symmetric(spec, S, p * q, deg)
            rhs = gr_product(spec, psi_symmetric(spec, S, p, p.degree()), psi_symmetric(spec, S, q, q.degree()))
            alg.expect(lhs == rhs, {"p": S.fmt(p), "q": S.fmt(q), "lhs": ctx.fmt(lhs), "rhs": ctx.fmt(rhs)})
        dp = S.partial(p)
        lhs = psi_symmetric(spec, S, dp, p.degree()) if dp else GrElement.raw({})
        rhs = gr_partial(spec, psi_product(spec, S, p))
        der.expect(lhs == rhs, {"p": S.fmt(p), "lhs": ctx.fmt(lhs), "rhs": ctx.fmt(rhs)})

    br = rep.add(Record("psi.bracket_generators"))
    ys = S.indeterminates(1)
    for y1 in ys:
        for y2 in ys:
            p1, p2 = PoissonPoly.raw({((y1, 1),): Q(1)}), PoissonPoly.raw({((y2, 1),): Q(1)})
            left = S.y_minus_poly(p1, p2).map_coeffs(lambda c: psi_symmetric(spec, S, c, 1))
            right = gr_y_minus(spec, psi_generator(spec, y1), psi_generator(spec, y2))
            br.expect(left == right, {"pair": [S.fmt(p1), S.fmt(p2)]})

    bij = rep.add(Record("psi.bijective"))
    central_free = {}
    centrals = set(range(R.G, len(R.atoms)))
    for w in range(weight_cap + 1):
        monos = S.monomials(w, degree_cap)
        for r in range(degree_cap + 1):
            src = [m for m in monos if sum(e for _, e in m) == r]
            tgt = [m for m in ctx.basis(w, degree_cap) if spec.degree(m) == r]
            images = [psi_product(spec, S, PoissonPoly.raw({m: Q(1)})).terms for m in src]
            rk = linalg.rank(images)
            bij.expect(len(src) == len(tgt) == rk, {"weight": w, "degree": r, "dim_S": len(src),
                                                     "dim_gr": len(tgt), "rank": rk})
        central_free[str(w)] = len([m for m in monos if not any(a in centrals for (a, _), _ in m)])
    bij.info["central_free_dims"] = central_free
    return rep


# ----------------------------------------------------------------------
# C_1 and generating subspaces


def c1_space(ctx: VacuumModule, weight_cap: int) -> dict:
    """Per weight w >= 1: a basis of C_1(V)_w and a PBW complement (minimal generators)."""
    if ctx.free_centrals():
        raise StructureError("C_1 needs an N-graded algebra with V_(0) = C|0>; specialize the centrals (--lambda)")
    bases = {w: [PBWVector.raw({m: Q(1)}) for m in ctx.basis(w)] for w in range(weight_cap + 1)}
    out = {}
    for w in range(1, weight_cap + 1):
        span = []
        for w1 in range(1, w):
            for u in bases[w1]:
                for v in bases[w - w1]:
                    x = ctx.vertex_coeff(u, -1, v)
                    if x:
                        span.append(x)
        if w >= 2:
            span.extend(ctx.d_operator(v) for v in bases[w - 1])
        keep = linalg.pivot_subset([x.terms for x in span])
        c1 = [span[i] for i in keep]
        comp = []
        cur = [x.terms for x in c1]
        r = len(cur)
        for b in bases[w]:
            r2 = linalg.rank(cur + [b.terms])
            if r2 > r:
                comp.append(b)
                cur.append(b.terms)
                r = r2
        out[w] = {"c1": c1, "complement": comp, "dim": len(bases[w]), "dim_c1": len(c1)}
    return out


def span_filtration(ctx: VacuumModule, elements: list, weight_cap: int, level_cap: int) -> dict:
    """E^U_n ∩ V_k for n <= level_cap, k <= weight_cap, as lists of independent states.

    ``elements`` is a list of (state, filtration degree) with homogeneous
    states of positive weight.
    """
    vac = ctx.vacuum()
    E = {(0, k): ([vac] if k == 0 else []) for k in range(weight_cap + 1)}
    for n in range(1, level_cap + 1):
        for k in range(weight_cap + 1):
            vecs = list(E[(n - 1, k)])
            for u, m in elements:
                if m > n:
                    continue
                wu = ctx.vec_weight(u)
                for j in range(1, k - wu + 2):
                    for v in E[(n - m, k - wu - j + 1)]:
                        x = ctx.vertex_coeff(u, -j, v)
                        if x:
                            vecs.append(x)
            keep = linalg.pivot_subset([x.terms for x in vecs])
            E[(n, k)] = [vecs[i] for i in keep]
    return E


def generating_elements(ctx: VacuumModule, u_spec, weight_cap: int) -> list:
    """U as (state, filtration degree) pairs.

    u_spec: "standard" (every PBW basis state of positive weight, degree =
    weight), or a list of generator names (degree = conformal weight).
    """
    if u_spec == "standard":
        return [(PBWVector.raw({m: Q(1)}), w) for w in range(1, weight_cap + 1) for m in ctx.basis(w)]
    out = []
    for name in u_spec:
        a = ctx.R.index(name)
        out.append((ctx.state(name), ctx.R.weight(a)))
    return out


def pbw_spanning_check(ctx: VacuumModule, u_spec, weight_cap: int = 4, order: list[str] | None = None,
                       compare_with="standard", level_cap: int | None = None) -> Report:
    """Ordered monomials in U span each weight space; E^U agrees with E^{U'}."""
    R = ctx.R
    names = list(u_spec) if u_spec != "standard" else [R.atoms[a] for a in range(R.G)]
    order = list(order or names)
    rep = Report(command=f"pbw-check {R.name}",
                 caps={"weight_cap": weight_cap, "u_spec": u_spec if u_spec == "standard" else list(u_spec),
                       "order": order, "compare_with": compare_with if compare_with is None or isinstance(compare_with, str)
                       else list(compare_with)})
    span = rep.add(Record("pbw.spanning"))
    atoms = [R.index(n) for n in names]
    rank_of = {R.index(n): i for i, n in enumerate(order)}
    for w in range(weight_cap + 1):
        full = ctx.basis(w)
        words = []
        for mono in full:
            if all(a in atoms for _, a in mono):
                # the same factors, arranged by the requested order
                factors = sorted(mono, key=lambda f: (f[0], rank_of.get(f[1], 0)))
                words.append(ctx.create_word(factors).terms)
        r = linalg.rank(words)
        missing = []
        if r < len(full):
            for mono in full:
                if not linalg.in_span(words, {mono: Q(1)}):
                    missing.append(ctx.fmt(PBWVector.raw({mono: Q(1)})))
        span.expect(r == len(full), {"weight": w, "rank": r, "dim": len(full), "missing": missing})

    if compare_with is not None:
        level_cap = weight_cap if level_cap is None else level_cap
        same = rep.add(Record("pbw.filtration_independent"))
        E1 = span_filtration(ctx, generating_elements(ctx, u_spec, weight_cap), weight_cap, level_cap)
        E2 = span_filtration(ctx, generating_elements(ctx, compare_with, weight_cap), weight_cap, level_cap)
        fw = {R.atoms[a]: R.weight(a) for a in atoms}
        for key in sorted(E1):
            a = [x.terms for x in E1[key]]
            b = [x.terms for x in E2[key]]
            ok = linalg.same_span(a, b)
            # and against the adapted PBW description when U is made of generators
            pbw = None
            if u_spec != "standard" and set(atoms) == set(range(R.G)):
                spec = FiltrationSpec(ctx, {R.index(k): v for k, v in fw.items()})
                pbw = [{m: Q(1)} for m in spec.basis(key[1], key[0])]
                ok = ok and linalg.same_span(a, pbw)
            same.expect(ok, {"level": key[0], "weight": key[1], "dim_U": len(a), "dim_U'": len(b),
                             "dim_pbw": None if pbw is None else len(pbw)})
    return rep
