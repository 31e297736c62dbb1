"""One-parameter deformations over C[h].

* ``build_vh``: the vacuum algebra of (R[h], hY₋, ∂), i.e. every structure
  constant scaled by h.  h = 1 gives V(R); h = 0 gives a commutative algebra
  whose h-linear part is the vertex Poisson algebra S(R).
* ``ReesContext``: for a filtered V with a splitting E_n = U_n ⊕ E_{n-1},
  Y_h(u,x)v = sum_j h^{m+n-j} p_j(Y(u,x)v) for u in U_m, v in U_n.

All h-adic statements are checked on polynomials truncated mod h^N.
"""
from __future__ import annotations

from dataclasses import dataclass

from .enveloping import PBWVector, VacuumModule, sample_states, weak_comm_coeff
from .filtration import FiltrationSpec, GrElement, build_filtration, gr_nth, gr_partial, gr_product
from .poisson import PoissonContext, PoissonPoly, poisson_from_vertex_lie
from .report import Record, Report
from .rng import Lcg64
from .scalars import Q, Scalar, coeff_in, degree_in, inv_factorial, subs, truncate
from .vectors import add_into, add_scaled
from .vertex_lie import StructureError, VLStructure

H = "h"


def _h():
    return Scalar.param(H)


def vec_coeff_h(v: PBWVector, k: int) -> PBWVector:
    """Coefficient of h^k, coefficientwise."""
    return PBWVector({m: coeff_in(c, H, k) for m, c in v.terms.items()})


def vec_subs_h(v: PBWVector, r) -> PBWVector:
    return PBWVector({m: subs(c, {H: r}) for m, c in v.terms.items()})


def vec_truncate(v: PBWVector, n: int) -> PBWVector:
    """v mod h^n."""
    return PBWVector({m: truncate(c, H, n) for m, c in v.terms.items()})


def vec_h_degree(v: PBWVector) -> int:
    return max((degree_in(c, H) for c in v.terms.values()), default=-1)


@dataclass
class HContext:
    kind: str  # "vh" or "rees"
    ctx: VacuumModule  # for "vh" the h-scaled algebra, for "rees" the undeformed V
    R: VLStructure
    lam: dict
    rees: "ReesContext | None" = None

    def nth(self, u: PBWVector, k: int, v: PBWVector) -> PBWVector:
        if self.kind == "vh":
            return self.ctx.vertex_coeff(u, k, v)
        return self.rees.nth(u, k, v)

    def translation(self, v: PBWVector) -> PBWVector:
        """D of the deformed algebra, by the mode-wise derivation rule."""
        return self.ctx.d_operator(v)


def build_vh(R: VLStructure, lam: dict | None = None, shift=None) -> HContext:
    """V_h(R) (or V_h^lambda(R)); ``shift`` adds extra higher-order h terms to the scale."""
    scale = _h() if shift is None else _h() + shift
    return HContext("vh", VacuumModule(R, lam, scale=scale), R, dict(lam or {}))


# ----------------------------------------------------------------------
# PBW monomials versus S(R)


def lead_poly(mono: tuple) -> PoissonPoly:
    """u1(-n1)...ur(-nr)|0> -> prod ∂^{n_i-1}u_i / (n_i-1)!  (inverse of psi on monomials)."""
    d: dict = {}
    coeff = Q(1)
    for q, a in mono:
        k = -q - 1
        d[(a, k)] = d.get((a, k), 0) + 1
        coeff *= inv_factorial(k)
    return PoissonPoly.raw({tuple(sorted(d.items())): coeff})


def to_poly(v: PBWVector) -> PoissonPoly:
    out: dict = {}
    for mono, c in v.terms.items():
        for m, c2 in lead_poly(mono).terms.items():
            add_into(out, m, c * c2)
    return PoissonPoly.raw(out)


# ----------------------------------------------------------------------
# Rees deformation


class ReesContext:
    """Y_h on V[h] from a filtration and a splitting (symmetric or pbw)."""

    def __init__(self, spec: FiltrationSpec, splitting: str = "symmetric"):
        if splitting not in ("symmetric", "pbw"):
            raise ValueError("splitting must be 'symmetric' or 'pbw'")
        self.spec = spec
        self.V = spec.ctx
        self.splitting = splitting
        self._inv: dict = {}
        self._comp: dict = {}

    def poly_degree(self, mono: tuple) -> int:
        return sum(self.spec.fw[a] * e for (a, _), e in mono)

    def omega_inv_mono(self, mono: tuple) -> dict:
        """omega^{-1} of a PBW monomial, as a dict of S(R) monomials."""
        hit = self._inv.get(mono)
        if hit is not None:
            return hit
        lead = lead_poly(mono)
        out = dict(lead.terms)
        rest = dict(self.V.symmetrize(lead).terms)
        add_into(rest, mono, Q(-1))
        for m2, c in rest.items():
            if self.spec.degree(m2) >= self.spec.degree(mono):
                raise StructureError("symmetrization does not lower the filtration degree")
            add_scaled(out, self.omega_inv_mono(m2), -c)
        self._inv[mono] = out
        return out

    def components_mono(self, mono: tuple) -> dict:
        """j -> p_j(mono)."""
        hit = self._comp.get(mono)
        if hit is not None:
            return hit
        if self.splitting == "pbw":
            out = {self.spec.degree(mono): {mono: Q(1)}}
        else:
            by_deg: dict = {}
            for m, c in self.omega_inv_mono(mono).items():
                by_deg.setdefault(self.poly_degree(m), {})[m] = c
            out = {j: self.V.symmetrize(PoissonPoly.raw(q)).terms for j, q in by_deg.items()}
            out = {j: t for j, t in out.items() if t}
        self._comp[mono] = out
        return out

    def components(self, v: PBWVector) -> dict:
        acc: dict = {}
        for mono, c in v.terms.items():
            for j, t in self.components_mono(mono).items():
                add_scaled(acc.setdefault(j, {}), t, c)
        return {j: PBWVector.raw(t) for j, t in acc.items() if t}

    def nth(self, u: PBWVector, k: int, v: PBWVector) -> PBWVector:
        """Y_h coefficient u_k v on V[h] (inputs with h-free or h-polynomial coefficients)."""
        out: dict = {}
        h = _h()
        for m, um in self.components(u).items():
            for n, vn in self.components(v).items():
                x = self.V.vertex_coeff(um, k, vn)
                for j, xj in self.components(x).items():
                    e = m + n - j
                    if e < 0:
                        raise StructureError(
                            f"splitting is not adapted: p_{j}(u_{k} v) with u in U_{m}, v in U_{n}")
                    add_scaled(out, xj.terms, h ** e if e else 1)
        return PBWVector.raw(out)

    def phi(self, v: PBWVector) -> GrElement:
        """V_E[h]/h -> gr_E V: the U_n part goes to its class in E_n/E_{n-1}."""
        out: dict = {}
        for j, vj in self.components(v).items():
            add_scaled(out, self.spec.project(vj, j).terms)
        return GrElement.raw(out)


def rees_deformation(V: VacuumModule, spec: FiltrationSpec | None = None, splitting: str = "symmetric") -> HContext:
    spec = spec or build_filtration(V)
    if spec.ctx is not V:
        raise ValueError("filtration belongs to a different algebra")
    lam = {V.R.atoms[a]: v for a, v in V.lam.items()}
    return HContext("rees", V, V.R, lam, ReesContext(spec, splitting))


# ----------------------------------------------------------------------
# checks


def _basis_samples(hc: HContext, rng: Lcg64, count: int, weight_cap: int, max_len) -> list[PBWVector]:
    """Sample states; for rees contexts, elements of the splitting spaces U_n."""
    vs = sample_states(hc.ctx, rng, weight_cap, max_len, count, wmin=1)
    if hc.kind == "rees":
        out = []
        for v in vs:
            comps = hc.rees.components(v)
            out.append(comps[max(comps)])
        return out
    return vs


def _limit_poisson(hc: HContext) -> PoissonContext:
    return poisson_from_vertex_lie(hc.R, hc.lam, strict=False)


def classical_limit(hc: HContext, samples: int = 100, weight_cap: int = 3, seed: int = 0,
                    max_len: int | None = None, window: int = 3) -> tuple[PoissonContext, Report]:
    """Mod-h commutativity, then (1/h) Sing Y_h and u_{-1}v mod h against S(R)."""
    if hc.kind != "vh":
        raise ValueError("classical_limit compares V_h(R) with S(R); use star checks for rees contexts")
    ctx = hc.ctx
    if ctx.free_centrals() and max_len is None:
        max_len = 3
    S = _limit_poisson(hc)
    rng = Lcg64(seed)
    rep = Report(command=f"deform {hc.R.name} --kind vh --check limits", seed=seed,
                 caps={"samples": samples, "weight_cap": weight_cap, "max_len": max_len, "window": window})
    comm = rep.add(Record("def.mod_h_commutative"))
    div = rep.add(Record("def.commutator_divisible"))
    prod = rep.add(Record("def.limit_product"))
    br = rep.add(Record("def.limit_bracket"))
    names = [hc.R.atoms[a] for a in range(ctx.G)]
    sv = lambda p: S.specialize(p)

    def bracket_case(u, v, rec):
        for i in range(ctx.vec_weight(u) + ctx.vec_weight(v) + 1):
            x = ctx.vertex_coeff(u, i, v)
            low = vec_coeff_h(x, 0)
            comm.expect(not low, {"u": ctx.fmt(u), "v": ctx.fmt(v), "i": i, "value": ctx.fmt(low)})
            got = sv(to_poly(vec_coeff_h(x, 1)))
            want = S.nth(sv(to_poly(u)), i, sv(to_poly(v)))
            rec.expect(got == want, {"u": ctx.fmt(u), "v": ctx.fmt(v), "i": i,
                                     "lhs": S.fmt(got), "rhs": S.fmt(want)})

    for x in names:
        for y in names:
            u, v = ctx.state(x), ctx.state(y)
            bracket_case(u, v, br)
            for m in range(-window, window + 1):
                for n in range(-window, window + 1):
                    for w in (ctx.vacuum(), v):
                        a = ctx.apply_mode(ctx.apply_mode(w, y, n), x, m)
                        b = ctx.apply_mode(ctx.apply_mode(w, x, m), y, n)
                        d = vec_coeff_h(a - b, 0)
                        div.expect(not d, {"u": x, "v": y, "m": m, "n": n, "w": ctx.fmt(w)})
    for _ in range(samples):
        u, v = sample_states(ctx, rng, weight_cap, max_len, 2, wmin=1)
        bracket_case(u, v, br)
        x = vec_subs_h(ctx.vertex_coeff(u, -1, v), 0)
        got, want = sv(to_poly(x)), sv(to_poly(u)) * sv(to_poly(v))
        prod.expect(got == want, {"u": ctx.fmt(u), "v": ctx.fmt(v), "lhs": S.fmt(got), "rhs": S.fmt(want)})
    return S, rep


def specialization_check(hc: HContext, values=(0, 1, 2), samples: int = 100, weight_cap: int = 3,
                         window: int = 3, seed: int = 0, max_len: int | None = None) -> Report:
    """(compute with h then set h = r) == (compute with structure scaled by r)."""
    ctx = hc.ctx
    if ctx.free_centrals() and max_len is None:
        max_len = 3
    rng = Lcg64(seed)
    rep = Report(command=f"deform {hc.R.name} --kind {hc.kind} --check specialize", seed=seed,
                 caps={"values": list(values), "samples": samples, "weight_cap": weight_cap, "window": window})
    rec = rep.add(Record("def.specialize"))
    if hc.kind == "vh":
        targets = {r: VacuumModule(hc.R, hc.lam, scale=subs(ctx.scale, {H: r})) for r in values}
    else:
        targets = {1: ctx}
    for _ in range(samples):
        u, v = sample_states(ctx, rng, weight_cap, max_len, 2, wmin=1)
        k = rng.randint(-window, window)
        x = hc.nth(u, k, v)
        for r, T in targets.items():
            got = vec_subs_h(x, r)
            want = T.vertex_coeff(u, k, v)
            rec.expect(got == want, {"u": ctx.fmt(u), "v": ctx.fmt(v), "k": k, "h": r,
                                     "lhs": ctx.fmt(got), "rhs": T.fmt(want)})
    return rep


def rees_checks(hc: HContext, samples: int = 20, weight_cap: int = 3, window: int = 3, seed: int = 0,
                max_len: int | None = None) -> Report:
    """Polynomiality in h, h = 1 recovery, mod-h commutativity and the comparison with gr."""
    rc = hc.rees
    ctx = hc.ctx
    if ctx.free_centrals() and max_len is None:
        max_len = 3
    rng = Lcg64(seed)
    rep = Report(command=f"deform {hc.R.name} --kind rees", seed=seed,
                 caps={"samples": samples, "weight_cap": weight_cap, "window": window, "max_len": max_len,
                       "splitting": rc.splitting})
    poly = rep.add(Record("rees.polynomial"))
    one = rep.add(Record("rees.h1"))
    comm = rep.add(Record("rees.mod_h_commutative"))
    gp = rep.add(Record("rees.phi_product"))
    gb = rep.add(Record("rees.phi_bracket"))
    spec = rc.spec
    for _ in range(samples):
        u, v = _basis_samples(hc, rng, 2, weight_cap, max_len)
        m, n = max(rc.components(u)), max(rc.components(v))
        k = rng.randint(-window, window)
        x = rc.nth(u, k, v)
        poly.expect(vec_h_degree(x) <= m + n, {"u": ctx.fmt(u), "v": ctx.fmt(v), "k": k,
                                               "h_degree": vec_h_degree(x), "bound": m + n})
        one.expect(vec_subs_h(x, 1) == ctx.vertex_coeff(u, k, v), {"u": ctx.fmt(u), "v": ctx.fmt(v), "k": k})
        pu, pv = rc.phi(u), rc.phi(v)
        x1 = rc.nth(u, -1, v)
        gp.expect(rc.phi(vec_subs_h(x1, 0)) == gr_product(spec, pu, pv), {"u": ctx.fmt(u), "v": ctx.fmt(v)})
        for i in range(ctx.vec_weight(u) + ctx.vec_weight(v) + 1):
            xi = rc.nth(u, i, v)
            low = vec_coeff_h(xi, 0)
            comm.expect(not low, {"u": ctx.fmt(u), "v": ctx.fmt(v), "i": i, "value": ctx.fmt(low)})
            gb.expect(rc.phi(vec_coeff_h(xi, 1)) == gr_nth(spec, pu, i, pv),
                      {"u": ctx.fmt(u), "v": ctx.fmt(v), "i": i})
    return rep


def star_deformation_check(hc: HContext, samples: int = 30, weight_cap: int = 3, window: int = 3,
                           seed: int = 0, max_len: int | None = None) -> Report:
    """(i) Y_h(v,x)1 = e^{xD}v; (ii) h^0 part of Y_h(a,x)b = (e^{x∂}a)b; (iii) Sing h^1 part = bracket."""
    ctx = hc.ctx
    if ctx.free_centrals() and max_len is None:
        max_len = 3
    rng = Lcg64(seed)
    rep = Report(command=f"deform {hc.R.name} --kind {hc.kind} --check star", seed=seed,
                 caps={"samples": samples, "weight_cap": weight_cap, "window": window, "max_len": max_len})
    r1 = rep.add(Record("star.i_vacuum"))
    r2 = rep.add(Record("star.ii_product"))
    r3 = rep.add(Record("star.iii_bracket"))
    vac = ctx.vacuum()
    if hc.kind == "vh":
        S = _limit_poisson(hc)
        lim = lambda x: S.specialize(to_poly(x))
        lmul = lambda a, b: a * b
        lpart = S.partial
        lnth = lambda a, i, b: S.nth(a, i, b)
        lfmt = S.fmt
    else:
        spec = hc.rees.spec
        lim = hc.rees.phi
        lmul = lambda a, b: gr_product(spec, a, b)
        lpart = lambda a: gr_partial(spec, a)
        lnth = lambda a, i, b: gr_nth(spec, a, i, b)
        lfmt = ctx.fmt
    for _ in range(samples):
        a, b = _basis_samples(hc, rng, 2, weight_cap, max_len)
        dv = a
        for j in range(window + 1):
            got = hc.nth(a, -1 - j, vac)
            r1.expect(got == dv.scale(inv_factorial(j)), {"v": ctx.fmt(a), "j": j, "lhs": ctx.fmt(got)})
            r1.expect(not hc.nth(a, j, vac), {"v": ctx.fmt(a), "mode": j})
            dv = hc.translation(dv)
        la, lb = lim(a), lim(b)
        da = la
        for j in range(window + 1):
            got = lim(vec_coeff_h(hc.nth(a, -1 - j, b), 0))
            want = lmul(da, lb)
            if j:
                want = want.scale(inv_factorial(j))
            r2.expect(got == want, {"a": ctx.fmt(a), "b": ctx.fmt(b), "j": j, "lhs": lfmt(got), "rhs": lfmt(want)})
            da = lpart(da)
        for i in range(ctx.vec_weight(a) + ctx.vec_weight(b) + 1):
            x = hc.nth(a, i, b)
            got = lim(vec_coeff_h(x, 1))
            want = lnth(la, i, lb)
            r3.expect(got == want, {"a": ctx.fmt(a), "b": ctx.fmt(b), "i": i, "lhs": lfmt(got), "rhs": lfmt(want)})
    return rep


def h_adic_weak_commutativity(hc: HContext, orders=(1, 2, 3), k_max: int = 4, window: int = 2,
                              weight_cap: int = 2, seed: int = 0, max_len: int | None = None) -> Report:
    """Smallest k with (x1-x2)^k [Y_h(u,x1), Y_h(v,x2)] w = 0 mod h^N, per generator pair and N."""
    if hc.kind != "vh":
        raise ValueError("weak commutativity mod h^N is checked on V_h(R)")
    ctx = hc.ctx
    if ctx.free_centrals() and max_len is None:
        max_len = 2
    rng = Lcg64(seed)
    rep = Report(command=f"deform {hc.R.name} --kind vh --check hadic", seed=seed,
                 caps={"orders": list(orders), "k_max": k_max, "window": window, "weight_cap": weight_cap})
    rec = rep.add(Record("def.h_adic_weak_commutativity"))
    targets = sample_states(ctx, rng, weight_cap, max_len, 3)
    gens = [ctx.state(hc.R.atoms[a]) for a in range(ctx.G)]
    found = {}
    for N in orders:
        for i, u in enumerate(gens):
            for j, v in enumerate(gens):
                best = None
                for k in range(k_max + 1):
                    if all(not vec_truncate(weak_comm_coeff(ctx, u, v, w, k, p, q), N)
                           for w in targets for p in range(-window, window + 1) for q in range(-window, window + 1)):
                        best = k
                        break
                rec.tick()
                key = f"N={N}:{hc.R.atoms[i]},{hc.R.atoms[j]}"
                if best is None:
                    rec.inconclusive({"pair": key, "k_max": k_max})
                found[key] = best
    rec.info["order"] = found
    return rep
