"""Vertex Poisson structures on polynomial algebras S(C[∂]U).

A ``PoissonPoly`` is keyed by monomials: sorted tuples of ((atom, k), exp),
where (atom, k) is the indeterminate ∂^k u.  Central atoms only occur with
k = 0.  The singular part Y₋(a,x)b is computed from a table on generator
pairs, extended by the ∂-laws to indeterminates, by the derivation rule to
composite right arguments and by half skew symmetry to composite left ones.
"""
from __future__ import annotations


from .laurent import LaurentTable, skew_transform
from .report import Record, Report
from .rng import Lcg64
from .scalars import Q, Scalar, as_scalar, fmt, gbinom
from .vectors import Vec, add_into, add_scaled
from .vertex_lie import RElement, StructureError, VLStructure, first_difference, half_commutator_sides


class PoissonPoly(Vec):
    __slots__ = ()

    def __mul__(self, other):
        if isinstance(other, PoissonPoly):
            d: dict = {}
            for m1, c1 in self.terms.items():
                for m2, c2 in other.terms.items():
                    add_into(d, mono_mul(m1, m2), c1 * c2)
            return PoissonPoly.raw(d)
        return super().__mul__(other)

    def degree(self) -> int:
        return max((mono_degree(m) for m in self.terms), default=-1)


def mono_mul(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for y, e in b:
        d[y] = d.get(y, 0) + e
    return tuple(sorted(d.items()))


def mono_degree(m: tuple) -> int:
    return sum(e for _, e in m)


def mono_div(m: tuple, y) -> tuple:
    """m / y for an indeterminate y dividing m."""
    out = []
    for z, e in m:
        if z == y:
            if e > 1:
                out.append((z, e - 1))
        else:
            out.append((z, e))
    return tuple(out)


ONE = ()


class PoissonContext:
    """Evaluation engine for Y₋ on S(C[∂]U) from a generator-pair table.

    ``table(u, v)`` must return Y⁰₋(u,x)v as a one-variable LaurentTable of
    PoissonPoly for generator atoms u, v.
    """

    def __init__(self, names: list[str], weights: list[int], n_gen: int, table, lam: dict | None = None,
                 name: str = "", source=None):
        self.atoms = list(names)
        self.weights = list(weights)
        self.G = n_gen
        self.name = name
        self.source = source
        self._base_table = table
        self.lam = {}
        for key, val in (lam or {}).items():
            a = self.atoms.index(key) if key in self.atoms else None
            if a is None or a < self.G:
                raise StructureError(f"lambda is only defined on central elements, not {key!r}")
            self.lam[a] = as_scalar(val)
        self._gen: dict = {}
        self._ind: dict = {}
        self._memo = {"A": {}, "B": {}}
        self._dmemo: dict = {}
        self._pidx: dict = {}
        self._pname: dict = {}

    # -- polynomials ------------------------------------------------------

    def var(self, name_or_atom, k: int = 0, coeff=1) -> PoissonPoly:
        a = self.atoms.index(name_or_atom) if isinstance(name_or_atom, str) else name_or_atom
        if a >= self.G and k:
            return PoissonPoly.raw({})
        return self.specialize(PoissonPoly({(((a, k), 1),): as_scalar(coeff)}))

    def one(self) -> PoissonPoly:
        return PoissonPoly.raw({ONE: Q(1)})

    # Parameters (such as a symbolic level) are stored as inert indeterminates
    # with negative atom ids, so engine coefficients stay rational.

    def _param_atom(self, name: str) -> int:
        a = self._pidx.get(name)
        if a is None:
            a = self._pidx[name] = -1 - len(self._pidx)
            self._pname[a] = name
        return a

    def _flatten_scalar(self, c) -> dict:
        if not isinstance(c, Scalar):
            return {ONE: c}
        out = {}
        for pm, q in c.terms.items():
            out[tuple(sorted(((self._param_atom(n), 0), e) for n, e in pm))] = q
        return out

    def specialize(self, p: PoissonPoly) -> PoissonPoly:
        """Normal form: lambda applied to centrals, parameters moved into monomials."""
        d: dict = {}
        for m, c in p.terms.items():
            if self.lam and any(a in self.lam for (a, _), _ in m):
                keep = []
                for (a, k), e in m:
                    if a in self.lam:
                        c = c * self.lam[a] ** e
                    else:
                        keep.append(((a, k), e))
                m = tuple(keep)
                if not c:
                    continue
            for pm, q in self._flatten_scalar(c).items():
                add_into(d, mono_mul(m, pm), q)
        return PoissonPoly.raw(d)

    def unflatten(self, p: PoissonPoly) -> PoissonPoly:
        """Move parameter indeterminates back into Scalar coefficients."""
        d: dict = {}
        for m, c in p.terms.items():
            keep, coeff = [], as_scalar(c)
            for (a, k), e in m:
                if a < 0:
                    coeff = coeff * Scalar.param(self._pname[a]) ** e
                else:
                    keep.append(((a, k), e))
            add_into(d, tuple(keep), coeff)
        return PoissonPoly.raw(d)

    def from_relement(self, x: RElement) -> PoissonPoly:
        return self.specialize(PoissonPoly({(((a, k), 1),): c for (a, k), c in x.terms.items()}))

    def _partial_mono(self, m: tuple) -> dict:
        hit = self._dmemo.get(m)
        if hit is None:
            hit = {}
            for (a, k), e in m:
                if 0 <= a < self.G:
                    add_into(hit, mono_mul(mono_div(m, (a, k)), (((a, k + 1), 1),)), e)
            self._dmemo[m] = hit
        return hit

    def partial(self, p: PoissonPoly) -> PoissonPoly:
        d: dict = {}
        for m, c in p.terms.items():
            add_scaled(d, self._partial_mono(m), c)
        return PoissonPoly.raw(d)

    def partial_n(self, p: PoissonPoly, n: int) -> PoissonPoly:
        for _ in range(n):
            p = self.partial(p)
        return p

    def weight_of_mono(self, m: tuple) -> int:
        return sum((self.weights[a] + k) * e for (a, k), e in m if a >= 0)

    def fmt(self, p: PoissonPoly) -> str:
        p = self.unflatten(p)
        if not p.terms:
            return "0"
        parts = []
        for m in sorted(p.terms, key=lambda m: (-mono_degree(m), m)):
            c = p.terms[m]
            body = "*".join(self._fmt_var(a, k) + (f"^{e}" if e > 1 else "") for (a, k), e in m)
            if not body:
                parts.append(f"({fmt(c)})")
            elif c == 1:
                parts.append(body)
            else:
                parts.append(f"({fmt(c)})*{body}")
        return " + ".join(parts)

    def _fmt_var(self, a, k):
        n = self.atoms[a]
        return n if k == 0 else (f"∂{n}" if k == 1 else f"∂^{k}{n}")

    def fmt_table(self, t: LaurentTable) -> str:
        from .laurent import format_table
        return format_table(t, self.fmt)

    # -- the bracket ------------------------------------------------------

    def _zero(self) -> LaurentTable:
        return LaurentTable(("x",))

    def gen_table(self, u: int, v: int) -> LaurentTable:
        key = (u, v)
        hit = self._gen.get(key)
        if hit is None:
            if u >= self.G or v >= self.G:
                hit = self._zero()
            else:
                hit = self._base_table(u, v).map_coeffs(self.specialize)
            self._gen[key] = hit
        return hit

    def ind_table(self, y1, y2) -> LaurentTable:
        """Y₋(∂^k u, x) ∂^l v = (d/dx)^k sum_j C(l,j) ∂^{l-j} (-d/dx)^j Y⁰₋(u,x)v."""
        key = (y1, y2)
        hit = self._ind.get(key)
        if hit is not None:
            return hit
        (u, k), (v, l) = y1, y2
        base = self.gen_table(u, v)
        out = self._zero()
        cur = base
        for j in range(l + 1):
            if j:
                cur = cur.derivative("x").scale(-1)
            if not cur:
                break
            part = cur.map_coeffs(lambda c: self.partial_n(c, l - j))
            out = out + part.scale(gbinom(l, j))
        for _ in range(k):
            out = out.derivative("x")
        self._ind[key] = out
        return out

    def _mono_y(self, ma: tuple, mb: tuple, strategy: str) -> LaurentTable:
        memo = self._memo[strategy]
        key = (ma, mb)
        hit = memo.get(key)
        if hit is not None:
            return hit
        da, db = mono_degree(ma), mono_degree(mb)
        if da == 0 or db == 0:
            out = self._zero()
        elif da == 1 and db == 1:
            out = self.ind_table(ma[0][0], mb[0][0])
        elif strategy == "A":
            # derivation first on a composite right argument, then skew
            if db >= 2:
                out = self._derive_right(ma, mb, strategy)
            else:
                out = skew_transform(self._mono_y(mb, ma, strategy), "x", self.partial)
        else:
            # skew first on a composite left argument, derivation inside
            if da >= 2:
                out = skew_transform(self._derive_right(mb, ma, strategy), "x", self.partial)
            else:
                out = self._derive_right(ma, mb, strategy)
        memo[key] = out
        return out

    def _derive_right(self, ma: tuple, mb: tuple, strategy: str) -> LaurentTable:
        out = self._zero()
        for y, e in mb:
            rest = PoissonPoly.raw({mono_div(mb, y): Q(e)})
            t = self._mono_y(ma, (((y), 1),), strategy)
            if t:
                out = out + t.map_coeffs(lambda c: c * rest)
        return out

    def y_minus_poly(self, a: PoissonPoly, b: PoissonPoly, strategy: str = "A") -> LaurentTable:
        a, b = self.specialize(a), self.specialize(b)
        out = self._zero()
        for ma, ca in a.terms.items():
            for mb, cb in b.terms.items():
                t = self._mono_y(ma, mb, strategy)
                if t:
                    out = out + t.scale(ca * cb)
        return out

    def nth(self, a: PoissonPoly, n: int, b: PoissonPoly) -> PoissonPoly:
        return self.y_minus_poly(a, b).coeff((-n - 1,), PoissonPoly.raw({}))

    def bound(self, a, b) -> int:
        modes = self.y_minus_poly(a, b).modes()
        return max(modes) + 1 if modes else 0

    def compose(self, a, b, c) -> LaurentTable:
        """Y₋(a,x1) Y₋(b,x2) c."""
        d: dict = {}
        for n, bc in self.y_minus_poly(b, c).modes().items():
            for m, abc in self.y_minus_poly(a, bc).modes().items():
                add_into(d, (-m - 1, -n - 1), abc)
        return LaurentTable(("x1", "x2"), d)

    def quotient(self, lam: dict) -> "PoissonContext":
        """The quotient by the ideal generated by c - lambda(c)."""
        merged = {self.atoms[a]: v for a, v in self.lam.items()}
        merged.update(lam)
        return PoissonContext(self.atoms, self.weights, self.G, self._base_table, merged, self.name, self.source)

    # -- enumeration ------------------------------------------------------

    def indeterminates(self, max_dpow: int) -> list:
        out = [(a, k) for a in range(self.G) for k in range(max_dpow + 1)]
        out += [(a, 0) for a in range(self.G, len(self.atoms)) if a not in self.lam]
        return out

    def monomials(self, weight: int, max_deg: int) -> list[tuple]:
        """All monomials of the given weight and degree <= max_deg."""
        ys = [(a, k) for a in range(self.G) for k in range(weight + 1) if self.weights[a] + k <= weight]
        ys += [(a, 0) for a in range(self.G, len(self.atoms)) if a not in self.lam]
        ys.sort()
        wt = [self.weights[a] + k if a < self.G else 0 for a, k in ys]
        out = []

        def rec(start, left, acc):
            if left == 0:
                out.append(tuple(sorted(_collect(acc).items())))
            if len(acc) >= max_deg:
                return
            for i in range(start, len(ys)):
                if wt[i] <= left:
                    acc.append(ys[i])
                    rec(i, left - wt[i], acc)
                    acc.pop()

        rec(0, weight, [])
        return out


def _collect(ys) -> dict:
    d: dict = {}
    for y in ys:
        d[y] = d.get(y, 0) + 1
    return d


def poisson_from_vertex_lie(R: VLStructure, lam: dict | None = None, strict: bool = True) -> PoissonContext:
    """S(R) (or S_lambda(R)) with the unique vertex Poisson extension of R.

    With ``strict`` the vertex Lie axioms are checked first; a failing R is
    rejected and the axiom report is attached to the error as ``.report``.
    """
    if strict:
        from .vertex_lie import check_axioms
        rep = check_axioms(R, max_dpow=1)
        if not rep.ok:
            err = StructureError(f"{R.name} fails the vertex Lie axioms:\n{rep.to_text()}")
            err.report = rep
            raise err

    def table(u, v):
        d = {}
        for n in range(R.table_bound(u, v)):
            x = R.gen_product(u, n, v)
            if x:
                d[(-n - 1,)] = PoissonPoly({(((a, k), 1),): c for (a, k), c in x.terms.items()})
        return LaurentTable(("x",), d)

    return PoissonContext(R.atoms, [R.weight(a) for a in range(len(R.atoms))], R.G, table, lam, R.name, R)


class WeakPreStructure:
    """Y⁰₋ on generator pairs with polynomial values; checked for half skew symmetry at load."""

    def __init__(self, name: str, generators: list, table: dict, parameters: list | None = None):
        self.name = name
        self.generators = list(generators)  # [(name, weight)]
        self.parameters = list(parameters or [])
        self.table = dict(table)  # (u, v) -> LaurentTable over PoissonPoly, atoms by index
        G = len(self.generators)
        self.ctx = PoissonContext([g for g, _ in self.generators], [w for _, w in self.generators], G,
                                  self._lookup, None, name, self)
        for (u, v), t in self.table.items():
            if (v, u) in self.table:
                other = skew_transform(self.table[(v, u)], "x", self.ctx.partial)
                if other != t:
                    raise StructureError(
                        f"prestructure violates half skew symmetry at ({self.generators[u][0]}, {self.generators[v][0]})")

    def _lookup(self, u, v):
        if (u, v) in self.table:
            return self.table[(u, v)]
        if (v, u) in self.table:
            return skew_transform(self.table[(v, u)], "x", self.ctx.partial)
        return LaurentTable(("x",))


def extend_weak_prestructure(W: WeakPreStructure) -> PoissonContext:
    """The context evaluating the unique extension of W to S(C[∂]U).

    Whether the extension is a vertex Poisson structure is decided by the
    half commutator checks, not here.
    """
    return W.ctx


def quotient_lambda_poisson(ctx: PoissonContext, lam: dict) -> PoissonContext:
    return ctx.quotient(lam)


def affine_prestructure(basis: list[str], brackets: dict, form: dict, level="ell") -> WeakPreStructure:
    """Y⁰₋(u,x)v = [u,v] x^{-1} + level <u,v> x^{-2} on the free differential algebra."""
    from .vertex_lie import affine_builder
    R = affine_builder(basis, brackets, form)
    lev = as_scalar(level)
    G = len(basis)
    table = {}
    for u in range(G):
        for v in range(G):
            d = {}
            x0 = R.gen_product(u, 0, v)
            if x0:
                d[(-1,)] = PoissonPoly({(((a, k), 1),): c for (a, k), c in x0.terms.items()})
            x1 = R.gen_product(u, 1, v)
            if x1:
                c = sum((cc for (_, _), cc in x1.terms.items()), Q(0))
                d[(-2,)] = PoissonPoly({ONE: c * lev})
            if d:
                table[(u, v)] = LaurentTable(("x",), d)
    params = sorted({n for m in [lev] if isinstance(m, Scalar) for mono in m.terms for n, _ in mono})
    return WeakPreStructure("affine-prestructure", [(b, 1) for b in basis], table, params)


# ----------------------------------------------------------------------
# checks


def random_poly(ctx: PoissonContext, rng: Lcg64, deg: int, max_dpow: int, ys: list | None = None) -> PoissonPoly:
    ys = ys or ctx.indeterminates(max_dpow)
    m = tuple(sorted(_collect(rng.choice(ys) for _ in range(deg)).items()))
    return ctx.specialize(PoissonPoly({m: Q(rng.randint(1, 3))}))


def sample_polys(ctx: PoissonContext, rng: Lcg64, count: int, max_deg: int, max_dpow: int) -> list[PoissonPoly]:
    ys = ctx.indeterminates(max_dpow)
    return [random_poly(ctx, rng, rng.randint(1, max_deg), max_dpow, ys) for _ in range(count)]


def sample_triple(ctx: PoissonContext, rng: Lcg64, max_deg: int, max_dpow: int, total_deg: int) -> list[PoissonPoly]:
    """Three monomials, each of degree <= max_deg, degrees summing to <= total_deg."""
    degs = []
    left = total_deg
    for slot in range(3):
        d = rng.randint(1, max(1, min(max_deg, left - (2 - slot))))
        degs.append(d)
        left -= d
    # rotate so the largest degree can land in any slot
    r = rng.below(3)
    degs = degs[r:] + degs[:r]
    ys = ctx.indeterminates(max_dpow)
    return [random_poly(ctx, rng, d, max_dpow, ys) for d in degs]


def check_poisson_axioms(ctx: PoissonContext, samples: int = 30, max_deg: int = 4, max_dpow: int = 3,
                         seed: int = 0, triple_samples: int | None = None, triple_total_deg: int = 6,
                         sweep_dpow: int = 1) -> Report:
    """Derivation, half skew, half commutator, ∂-laws, unit, grading and uniqueness.

    Pair checks use ``samples`` random monomials of degree <= max_deg.  The
    half commutator is costly on large triples, so it is sampled with the
    total degree capped at ``triple_total_deg`` and additionally swept over
    all triples of indeterminates with ∂-power <= ``sweep_dpow``.
    """
    rng = Lcg64(seed)
    fm, ft = ctx.fmt, ctx.fmt_table
    triple_samples = samples if triple_samples is None else triple_samples
    rep = Report(command=f"poisson-check {ctx.name}", seed=seed,
                 caps={"samples": samples, "max_deg": max_deg, "max_dpow": max_dpow,
                       "triple_samples": triple_samples, "triple_total_deg": triple_total_deg,
                       "sweep_dpow": sweep_dpow,
                       "lambda": {ctx.atoms[a]: fmt(v) for a, v in sorted(ctx.lam.items())}})
    Y = ctx.y_minus_poly
    deriv = rep.add(Record("vp.derivation"))
    skew = rep.add(Record("vp.half_skew"))
    dlaw = rep.add(Record("vp.partial_laws"))
    unit = rep.add(Record("vp.unit"))
    uniq = rep.add(Record("vp.uniqueness"))
    grad = rep.add(Record("vp.grading"))
    hc = rep.add(Record("vp.half_commutator"))
    one = ctx.one()
    for _ in range(samples):
        a, b, c = sample_polys(ctx, rng, 3, max_deg, max_dpow)
        lhs = Y(a, b * c, "B")
        rhs = Y(a, b).map_coeffs(lambda z: z * c) + Y(a, c).map_coeffs(lambda z: b * z)
        deriv.expect(lhs == rhs, {"a": fm(a), "b": fm(b), "c": fm(c)})
        yab = Y(a, b)
        sk = skew_transform(Y(b, a), "x", ctx.partial)
        skew.expect(yab == sk, {"a": fm(a), "b": fm(b), "lhs": ft(yab), "rhs": ft(sk)})
        yb = Y(a, b, "B")
        uniq.expect(yab == yb, {"a": fm(a), "b": fm(b), "A": ft(yab), "B": ft(yb)})
        dlaw.expect(Y(ctx.partial(a), b) == yab.derivative("x"), {"a": fm(a), "b": fm(b), "law": "Y(∂a,x) = d/dx Y(a,x)"})
        comm = yab.map_coeffs(ctx.partial) - Y(a, ctx.partial(b))
        dlaw.expect(comm == yab.derivative("x"), {"a": fm(a), "b": fm(b), "law": "[∂,Y(a,x)] = d/dx Y(a,x)"})
        unit.expect(not Y(one, b) and not Y(a, one), {"a": fm(a), "b": fm(b)})
        want = _poly_weight(ctx, a) + _poly_weight(ctx, b)
        ok = all(ctx.weight_of_mono(mv) == want - m - 1 for m, v in yab.modes().items() for mv in v.terms)
        grad.expect(ok, {"a": fm(a), "b": fm(b)})
    for _ in range(triple_samples):
        _half_commutator_case(ctx, hc, *sample_triple(ctx, rng, max_deg, max_dpow, triple_total_deg))
    if sweep_dpow is not None and sweep_dpow >= 0:
        rep.add(check_generator_triples(ctx, sweep_dpow).records[0])
    if isinstance(ctx.source, VLStructure):
        rep.add(check_restriction(ctx, max_dpow=min(max_dpow, 2)))
    return rep


def check_restriction(ctx: PoissonContext, max_dpow: int = 2) -> Record:
    """On indeterminates the bracket must reproduce the n-th products of R."""
    R = ctx.source
    rec = Record("vp.restriction")
    basis = [(a, k) for a in range(R.G) for k in range(max_dpow + 1)]
    for a, k in basis:
        for b, l in basis:
            x, y = R.atom_el(a, k), R.atom_el(b, l)
            got = ctx.y_minus_poly(ctx.from_relement(x), ctx.from_relement(y))
            want = {(-n - 1,): ctx.from_relement(R.nth_product(x, n, y)) for n in range(R.product_bound(x, y))}
            want = LaurentTable(("x",), {e: v for e, v in want.items() if v})
            rec.expect(got == want, {"pair": [R.fmt(x), R.fmt(y)], "lhs": ctx.fmt_table(got),
                                     "rhs": ctx.fmt_table(want)})
    return rec


def _poly_weight(ctx, p: PoissonPoly) -> int:
    # samples are monomials, hence homogeneous
    return ctx.weight_of_mono(next(iter(p.terms)))


def _half_commutator_case(ctx, rec: Record, a, b, c) -> None:
    l, r = half_commutator_sides(ctx.y_minus_poly, ctx.compose, ctx.nth, ctx.bound, a, b, c)
    diff = first_difference(l, r)
    rec.expect(diff is None, {"triple": [ctx.fmt(a), ctx.fmt(b), ctx.fmt(c)],
                              "monomial": diff and f"x1^{{{diff[0][0]}}}*x2^{{{diff[0][1]}}}",
                              "lhs": diff and (ctx.fmt(diff[1]) if diff[1] else "0"),
                              "rhs": diff and (ctx.fmt(diff[2]) if diff[2] else "0")})


def check_generator_triples(ctx: PoissonContext, max_dpow: int = 1) -> Report:
    """Half commutator over all triples of indeterminates; sufficient for generators."""
    rep = Report(command=f"poisson-check {ctx.name} (generator sweep)", caps={"max_dpow": max_dpow})
    ys = [ctx.specialize(PoissonPoly({((y, 1),): Q(1)})) for y in ctx.indeterminates(max_dpow)]
    rec = rep.add(Record("vp.half_commutator.generators"))
    for a in ys:
        for b in ys:
            for c in ys:
                _half_commutator_case(ctx, rec, a, b, c)
    return rep
