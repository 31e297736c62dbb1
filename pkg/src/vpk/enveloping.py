"""The vacuum module of the loop algebra and its vertex algebra structure.

States are ``PBWVector`` objects: combinations of normal-ordered monomials.
A monomial is a tuple of factors (-n, atom) standing for atom(-n), sorted
ascending, so larger |mode| comes first and ties go by atom index.  The
vacuum is the empty tuple.

Central atoms either stay as factors c(-1) (the universal algebra) or are
specialized to scalars by ``lam`` (the quotient by the central character).
``scale`` multiplies every structure constant; with scale = h this is the
deformed algebra over C[h].
"""
from __future__ import annotations

import re
from math import factorial

from . import linalg
from .report import Record, Report
from .rng import Lcg64
from .scalars import Q, Scalar, as_scalar, fmt, gbinom, inv_factorial, sign
from .vectors import Vec, add_into, add_scaled
from .vertex_lie import RElement, StructureError, VLStructure

VACUUM = ()


class PBWVector(Vec):
    __slots__ = ()


class VacuumModule:
    def __init__(self, R: VLStructure, lam: dict | None = None, scale=1):
        self.R = R
        self.G = R.G
        self.lam = {}
        for name, val in (lam or {}).items():
            a = R.index(name)
            if not R.is_central(a):
                raise StructureError(f"lambda is only defined on central elements, not {name!r}")
            self.lam[a] = as_scalar(val)
        self.scale = as_scalar(scale)
        self._act: dict = {}
        self._comm: dict = {}
        self._vc_memo: dict = {}
        self._omega: dict = {}
        self._wt: dict = {}

    # -- bookkeeping ------------------------------------------------------

    def free_centrals(self) -> list[int]:
        return [a for a in range(self.G, len(self.R.atoms)) if a not in self.lam]

    def weight(self, mono: tuple) -> int:
        w = self._wt.get(mono)
        if w is None:
            w = sum(self.R.weight(a) - q - 1 for q, a in mono)
            self._wt[mono] = w
        return w

    def vec_weight(self, v: PBWVector):
        ws = {self.weight(m) for m in v.terms}
        if len(ws) > 1:
            raise ValueError("state is not homogeneous")
        return ws.pop() if ws else None

    def vacuum(self) -> PBWVector:
        return PBWVector.raw({VACUUM: Q(1)})

    def state(self, name: str, n: int = 1) -> PBWVector:
        """u(-n)|0>."""
        return self.apply_mode(self.vacuum(), name, -n)

    def fmt(self, v: PBWVector) -> str:
        if not v.terms:
            return "0"
        parts = []
        for mono in sorted(v.terms, key=lambda m: (-len(m), m)):
            c = v.terms[mono]
            body = "".join(f"{self.R.atoms[a]}({q})" for q, a in mono) + "|0>"
            sign = "+"
            if isinstance(c, Scalar):
                text = f"({fmt(c)}) {body}"
            else:
                if c < 0:
                    sign, c = "-", -c
                text = body if c == 1 else f"{fmt(c)} {body}"
            parts.append((sign, text))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, text in parts[1:]:
            out += f" {sign} {text}"
        return out

    # -- mode action ------------------------------------------------------

    def _commutator(self, u: int, m: int, v: int, p: int) -> list:
        """[u(m), v(p)] as a list of (coeff, atom, mode) operator terms."""
        key = (u, m, v, p)
        hit = self._comm.get(key)
        if hit is not None:
            return hit
        R = self.R
        d: dict = {}
        if u < self.G and v < self.G:
            for i in range(R.table_bound(u, v)):
                b = gbinom(m, i)
                if not b:
                    continue
                q = m + p - i
                for (w, k), c in R.gen_product(u, i, v).terms.items():
                    if w >= self.G:
                        if q == -1:
                            add_into(d, (w, -1), c * b)
                        continue
                    f = (-1) ** k
                    for t in range(k):
                        f *= q - t
                    if f:
                        add_into(d, (w, q - k), c * b * f)
        out = [(c * self.scale, w, q) for (w, q), c in sorted(d.items())]
        out = [t for t in out if t[0]]
        self._comm[key] = out
        return out

    def act(self, a: int, m: int, mono: tuple) -> dict:
        """atom(m) applied to a monomial; returns a term dict (do not mutate)."""
        key = (a, m, mono)
        hit = self._act.get(key)
        if hit is not None:
            return hit
        if a >= self.G:
            if m != -1:
                out = {}
            elif a in self.lam:
                out = {mono: self.lam[a]} if self.lam[a] else {}
            else:
                out = {tuple(sorted(mono + ((-1, a),))): Q(1)}
        elif m >= 0 and (not mono or self.weight(mono) + self.R.weight(a) - m - 1 < 0):
            out = {}
        elif m < 0 and (not mono or (m, a) <= mono[0]):
            out = {((m, a),) + mono: Q(1)}
        else:
            # move a(m) past the first factor: a(m) f rest = f a(m) rest + [a(m), f] rest
            q0, a0 = mono[0]
            rest = mono[1:]
            out = {}
            for mono2, c in self.act(a, m, rest).items():
                add_scaled(out, self.act(a0, q0, mono2), c)
            for c, b, q in self._commutator(a, m, a0, q0):
                add_scaled(out, self.act(b, q, rest), c)
        self._act[key] = out
        return out

    def apply_mode(self, v: PBWVector, name, n: int) -> PBWVector:
        a = self.R.index(name) if isinstance(name, str) else name
        out: dict = {}
        for mono, c in v.terms.items():
            add_scaled(out, self.act(a, n, mono), c)
        return PBWVector.raw(out)

    def apply_relement(self, x: RElement, n: int, v: PBWVector) -> PBWVector:
        """x(n) v for x in R, with (∂^k u)(n) = (-1)^k n..(n-k+1) u(n-k)."""
        out: dict = {}
        for (u, k), c in x.terms.items():
            if u >= self.G:
                if n != -1:
                    continue
                f = 1
            else:
                f = (-1) ** k
                for t in range(k):
                    f *= n - t
            if not f:
                continue
            for mono, cv in v.terms.items():
                add_scaled(out, self.act(u, n - k, mono), c * cv * f)
        return PBWVector.raw(out)

    def relement_state(self, x: RElement) -> PBWVector:
        """The state x(-1)|0>."""
        return self.apply_relement(x, -1, self.vacuum())

    # -- vertex operators -------------------------------------------------

    def _vc(self, vm: tuple, m: int, wm: tuple) -> dict:
        key = (vm, m, wm)
        hit = self._vc_memo.get(key)
        if hit is not None:
            return hit
        if self.weight(vm) + self.weight(wm) - m - 1 < 0:
            out = {}
        elif not vm:
            out = {wm: Q(1)} if m == -1 else {}
        else:
            q, a = vm[0]
            k = -q
            rest = vm[1:]
            out = {}
            if not rest:
                # (u_{-k} 1)_m = (-1)^{k-1} C(m, k-1) u_{m+1-k}
                b = sign(k - 1) * gbinom(m, k - 1)
                if b:
                    add_scaled(out, self.act(a, m + 1 - k, wm), b)
            else:
                # iterate formula for (u_{-k} rest)_m, both sums cut by weight
                top = self.weight(rest) + self.weight(wm) - m - 1
                for i in range(top + 1):
                    c = gbinom(k + i - 1, i)
                    for mono2, c2 in self._vc(rest, m + i, wm).items():
                        add_scaled(out, self.act(a, -k - i, mono2), c * c2)
                top = self.R.weight(a) + self.weight(wm) - 1
                sgn = -sign(k)
                for i in range(top + 1):
                    c = sgn * gbinom(k + i - 1, i)
                    for mono2, c2 in self.act(a, i, wm).items():
                        add_scaled(out, self._vc(rest, -k + m - i, mono2), c * c2)
        self._vc_memo[key] = out
        return out

    def vertex_coeff(self, v: PBWVector, m: int, w: PBWVector) -> PBWVector:
        """v_m w."""
        out: dict = {}
        for vm, cv in v.terms.items():
            for wm, cw in w.terms.items():
                add_scaled(out, self._vc(vm, m, wm), cv * cw)
        return PBWVector.raw(out)

    def create_word(self, factors) -> PBWVector:
        """Product of creation operators f1 f2 ... fr |0>, fi = (mode, atom), any order."""
        cur = {VACUUM: Q(1)}
        for q, a in reversed(list(factors)):
            nxt: dict = {}
            for mono, c in cur.items():
                add_scaled(nxt, self.act(a, q, mono), c)
            cur = nxt
        return PBWVector.raw(cur)

    def d_operator(self, v: PBWVector) -> PBWVector:
        """D(u(-n) v') = n u(-n-1) v' + u(-n) D v'."""
        out: dict = {}
        for mono, c in v.terms.items():
            for j, (q, a) in enumerate(mono):
                if a >= self.G:
                    continue
                word = mono[:j] + ((q - 1, a),) + mono[j + 1:]
                add_scaled(out, self.create_word(word).terms, c * (-q))
        return PBWVector.raw(out)

    # -- symmetrization ---------------------------------------------------

    def _omega_list(self, factors: tuple) -> dict:
        hit = self._omega.get(factors)
        if hit is not None:
            return hit
        if not factors:
            out = {VACUUM: Q(1)}
        else:
            r = len(factors)
            out = {}
            seen = {}
            for y in factors:
                seen[y] = seen.get(y, 0) + 1
            for y, mult in seen.items():
                rest = list(factors)
                rest.remove(y)
                inner = self._omega_list(tuple(rest))
                a, k = y
                # (∂^k u)(-1) = k! u(-1-k)
                c = Q(mult * factorial(k), r)
                for mono, ci in inner.items():
                    add_scaled(out, self.act(a, -1 - k, mono), c * ci)
        self._omega[factors] = out
        return out

    def symmetrize(self, p) -> PBWVector:
        """omega on a polynomial whose keys are sorted ((atom, k), exp) tuples."""
        out: dict = {}
        for mono, c in p.terms.items():
            factors = tuple(y for y, e in mono for _ in range(e))
            add_scaled(out, self._omega_list(factors), c)
        return PBWVector.raw(out)

    # -- bases ------------------------------------------------------------

    def factors_up_to(self, w: int) -> list:
        out = []
        for a in range(self.G):
            wa = self.R.weight(a)
            for n in range(1, w - wa + 2):
                out.append((-n, a))
        out += [(-1, a) for a in self.free_centrals()]
        return sorted(out)

    def basis(self, w: int, max_len: int | None = None) -> list[tuple]:
        """PBW monomials of weight w (and length <= max_len)."""
        if self.free_centrals() and max_len is None:
            raise ValueError("free central factors have weight 0: give max_len")
        factors = self.factors_up_to(w)
        fw = [self.R.weight(a) - q - 1 for q, a in factors]
        out = []

        def rec(start, left, acc):
            if left == 0:
                out.append(tuple(acc))
            if max_len is not None and len(acc) >= max_len:
                return
            for i in range(start, len(factors)):
                if fw[i] <= left:
                    acc.append(factors[i])
                    rec(i, left - fw[i], acc)
                    acc.pop()

        rec(0, w, [])
        return out

    def dims(self, wmax: int, max_len: int | None = None) -> list[int]:
        return [len(self.basis(w, max_len)) for w in range(wmax + 1)]


# ----------------------------------------------------------------------
# states from text


_FACTOR = re.compile(r"([A-Za-z_][A-Za-z_0-9]*)\(\s*(-?\d+)\s*\)")


def parse_state(ctx: VacuumModule, text: str) -> PBWVector:
    """Parse 'a(-1)a(-2)|0>', '2*e(-1)|0> - 1/2 h(-2)|0>', '|0>' (whitespace-insensitive)."""
    s = re.sub(r"\s+", "", text)
    pieces = s.split("|0>")
    if len(pieces) < 2 or pieces[-1]:
        raise ValueError(f"cannot parse state {text!r}: every term must end in |0>")
    total = PBWVector.raw({})
    for i, body in enumerate(pieces[:-1]):
        sign = 1
        if body[:1] in "+-" and body:
            sign = -1 if body[0] == "-" else 1
            body = body[1:]
        elif i > 0:
            raise ValueError(f"cannot parse state {text!r}: missing + or - between terms")
        coeff = Q(1)
        m = re.match(r"^(\([^()]*\)|\d+(?:/\d+)?)\*?", body)
        if m:
            coeff = as_scalar(m.group(1))
            body = body[m.end():]
        factors = []
        pos = 0
        for f in _FACTOR.finditer(body):
            if f.start() != pos:
                break
            factors.append((int(f.group(2)), ctx.R.index(f.group(1))))
            pos = f.end()
        if pos != len(body):
            raise ValueError(f"cannot parse state {text!r} near {body[pos:]!r}")
        if any(n >= 0 for n, _ in factors):
            raise ValueError("state factors must be creation modes (n <= -1)")
        total = total + ctx.create_word(factors).scale(coeff * sign)
    return total


def parse_mode(ctx: VacuumModule, text: str) -> tuple[int, int]:
    m = _FACTOR.fullmatch(text.replace(" ", ""))
    if not m:
        raise ValueError(f"cannot parse operator {text!r}")
    return ctx.R.index(m.group(1)), int(m.group(2))


# ----------------------------------------------------------------------
# checks


def sample_states(ctx: VacuumModule, rng: Lcg64, wmax: int, max_len: int | None, count: int,
                  wmin: int = 0) -> list[PBWVector]:
    pool = [m for w in range(wmin, wmax + 1) for m in ctx.basis(w, max_len)]
    return [PBWVector.raw({rng.choice(pool): Q(1)}) for _ in range(count)]


def _d_power(ctx: VacuumModule, v: PBWVector, i: int) -> PBWVector:
    for _ in range(i):
        v = ctx.d_operator(v)
    return v


def skew_rhs(ctx: VacuumModule, u: PBWVector, m: int, v: PBWVector) -> PBWVector:
    """sum_i (-1)^{m+i+1}/i! D^i (v_{m+i} u)."""
    wu, wv = ctx.vec_weight(u) or 0, ctx.vec_weight(v) or 0
    out = PBWVector.raw({})
    for i in range(max(wu + wv - m, 0) + 1):
        t = ctx.vertex_coeff(v, m + i, u)
        if t:
            out = out + _d_power(ctx, t, i).scale(sign(m + i + 1) * inv_factorial(i))
    return out


def commutator_sides(ctx: VacuumModule, u, v, w, m: int, n: int):
    vc = ctx.vertex_coeff
    lhs = vc(u, m, vc(v, n, w)) - vc(v, n, vc(u, m, w))
    rhs = PBWVector.raw({})
    top = (ctx.vec_weight(u) or 0) + (ctx.vec_weight(v) or 0) - 1
    for i in range(max(top, -1) + 1):
        b = gbinom(m, i)
        if b:
            uv = vc(u, i, v)
            if uv:
                rhs = rhs + vc(uv, m + n - i, w).scale(b)
    return lhs, rhs


def weak_comm_coeff(ctx: VacuumModule, u, v, w, k: int, p: int, q: int) -> PBWVector:
    """Coefficient of x1^{-p-1} x2^{-q-1} in (x1-x2)^k [Y(u,x1), Y(v,x2)] w."""
    vc = ctx.vertex_coeff
    out = PBWVector.raw({})
    for j in range(k + 1):
        m, n = p + k - j, q + j
        t = vc(u, m, vc(v, n, w)) - vc(v, n, vc(u, m, w))
        if t:
            out = out + t.scale(gbinom(k, j) * sign(j))
    return out


def weak_assoc_sides(ctx: VacuumModule, u, v, w, a: int, b: int):
    """Coefficient of x0^{-a-1} x2^{-b-1} in both halves of weak associativity.

    l = wt u + wt w makes x^l Y(u,x) w regular, so
    sum_j C(j-a-1, j) u_{l+a-j} v_{b+j} w = sum_i C(l,i) (u_{a+l-i} v)_{b+i} w.
    """
    vc = ctx.vertex_coeff
    wu, wv, ww = (ctx.vec_weight(x) or 0 for x in (u, v, w))
    l = wu + ww
    lhs = PBWVector.raw({})
    for j in range(max(wv + ww - b, 0) + 1):
        c = gbinom(j - a - 1, j)
        if c:
            t = vc(u, l + a - j, vc(v, b + j, w))
            if t:
                lhs = lhs + t.scale(c)
    rhs = PBWVector.raw({})
    for i in range(l + 1):
        t = vc(vc(u, a + l - i, v), b + i, w)
        if t:
            rhs = rhs + t.scale(gbinom(l, i))
    return lhs, rhs


def check_va_axioms(ctx: VacuumModule, samples: int = 200, window: int = 3, weight_cap: int = 3,
                    seed: int = 0, k_max: int = 4, max_len: int | None = None) -> Report:
    """Commutator formula, skew symmetry, D-laws, weak commutativity/associativity on samples."""
    if ctx.free_centrals() and max_len is None:
        max_len = 3
    rng = Lcg64(seed)
    fm = ctx.fmt
    rep = Report(command=f"va-check {ctx.R.name}", seed=seed,
                 caps={"samples": samples, "window": window, "weight_cap": weight_cap, "k_max": k_max,
                       "max_len": max_len})
    vac = ctx.vacuum()
    gens = [ctx.state(ctx.R.atoms[a]) for a in range(ctx.G)]

    rec = rep.add(Record("va.vacuum"))
    for w in sample_states(ctx, rng, weight_cap, max_len, min(samples, 20)):
        for m in range(-window, window + 1):
            rec.expect(ctx.vertex_coeff(vac, m, w) == (w if m == -1 else PBWVector.raw({})),
                       {"state": fm(w), "mode": m})
        rec.expect(ctx.vertex_coeff(w, -1, vac) == w, {"state": fm(w), "mode": -1})
        for m in range(0, window + 1):
            rec.expect(not ctx.vertex_coeff(w, m, vac), {"state": fm(w), "mode": m})

    comm = rep.add(Record("va.commutator"))
    skew = rep.add(Record("va.skew_symmetry"))
    dlaw = rep.add(Record("va.D_bracket"))
    assoc = rep.add(Record("va.weak_associativity"))
    grading = rep.add(Record("va.grading"))
    for _ in range(samples):
        u, v, w = sample_states(ctx, rng, weight_cap, max_len, 3, wmin=1)
        m = rng.randint(-window, window)
        n = rng.randint(-window, window)
        lhs, rhs = commutator_sides(ctx, u, v, w, m, n)
        comm.expect(lhs == rhs, {"u": fm(u), "v": fm(v), "w": fm(w), "m": m, "n": n,
                                 "lhs": fm(lhs), "rhs": fm(rhs)})
        uv = ctx.vertex_coeff(u, m, v)
        s = skew_rhs(ctx, u, m, v)
        skew.expect(uv == s, {"u": fm(u), "v": fm(v), "m": m, "lhs": fm(uv), "rhs": fm(s)})
        want = ctx.vec_weight(u) + ctx.vec_weight(v) - m - 1
        grading.expect(not uv or ctx.vec_weight(uv) == want, {"u": fm(u), "v": fm(v), "m": m})
        d1 = ctx.d_operator(ctx.vertex_coeff(u, m, w)) - ctx.vertex_coeff(u, m, ctx.d_operator(w))
        d2 = ctx.vertex_coeff(u, m - 1, w).scale(-m)
        dlaw.expect(d1 == d2, {"u": fm(u), "w": fm(w), "m": m, "lhs": fm(d1), "rhs": fm(d2)})
        dlaw.expect(ctx.d_operator(u) == ctx.vertex_coeff(u, -2, vac), {"u": fm(u), "check": "D(u) = u_{-2}|0>"})
        a, b = rng.randint(-window, window), rng.randint(-window, window)
        l1, l2 = weak_assoc_sides(ctx, u, v, w, a, b)
        assoc.expect(l1 == l2, {"u": fm(u), "v": fm(v), "w": fm(w), "a": a, "b": b, "lhs": fm(l1), "rhs": fm(l2)})

    wc = rep.add(Record("va.weak_commutativity"))
    found = {}
    targets = sample_states(ctx, rng, weight_cap, max_len, 3)
    for i, u in enumerate(gens):
        for j, v in enumerate(gens):
            best = None
            for k in range(k_max + 1):
                if all(not weak_comm_coeff(ctx, u, v, w, k, p, q)
                       for w in targets
                       for p in range(-window, window + 1)
                       for q in range(-window, window + 1)):
                    best = k
                    break
            pair = f"{ctx.R.atoms[i]},{ctx.R.atoms[j]}"
            wc.tick()
            if best is None:
                wc.inconclusive({"pair": pair, "k_max": k_max})
            found[pair] = best
    wc.info["order"] = found
    return rep


def invariants_subspace(ctx: VacuumModule, elements: list[RElement], weight_cap: int,
                        max_len: int | None = None) -> dict:
    """Per weight, a basis of the common kernel of the zero modes x(0), x in elements."""
    out = {}
    for w in range(weight_cap + 1):
        basis = ctx.basis(w, max_len)
        cols = []
        for mono in basis:
            v = PBWVector.raw({mono: Q(1)})
            img = {}
            for t, x in enumerate(elements):
                for m2, c in ctx.apply_relement(x, 0, v).terms.items():
                    img[(t, m2)] = c
            cols.append(img)
        ker = linalg.kernel(cols)
        out[w] = [PBWVector({basis[j]: c for j, c in kv.items()}) for kv in ker]
    return out


# ----------------------------------------------------------------------
# the symmetrization map


def project_lambda(src: VacuumModule, dst: VacuumModule, v: PBWVector) -> PBWVector:
    """Image of a state of src in dst, where dst specializes more centrals.

    Central factors c(-1) commute with everything, so the quotient map just
    replaces them by their lambda values.
    """
    out: dict = {}
    for mono, c in v.terms.items():
        keep = []
        for q, a in mono:
            if a in dst.lam and a not in src.lam:
                c = c * dst.lam[a]
            else:
                keep.append((q, a))
        if c:
            add_into(out, tuple(keep), c)
    return PBWVector.raw(out)


def check_omega(ctx: VacuumModule, weight_cap: int = 5, samples: int = 100, seed: int = 0,
                max_len: int | None = None) -> Report:
    """omega: S(R) -> V(R) is bijective weightwise and commutes with zero modes."""
    from .poisson import poisson_from_vertex_lie

    R = ctx.R
    if ctx.free_centrals() and max_len is None:
        max_len = 3
    lam_names = {R.atoms[a]: v for a, v in ctx.lam.items()}
    S = poisson_from_vertex_lie(R, lam_names, strict=False)
    rng = Lcg64(seed)
    rep = Report(command=f"omega-check {R.name}", seed=seed,
                 caps={"weight_cap": weight_cap, "samples": samples, "max_len": max_len})
    full = rep.add(Record("omega.full_rank"))
    dims = {}
    pool = []
    for w in range(weight_cap + 1):
        monos = S.monomials(w, max_len if max_len is not None else w)
        pool.extend(m for m in monos if m)
        images = [ctx.symmetrize(S.unflatten(_poly_of_mono(m))).terms for m in monos]
        pbw = ctx.basis(w, max_len)
        r = linalg.rank(images)
        dims[w] = [len(monos), len(pbw), r]
        full.expect(len(monos) == len(pbw) == r, {"weight": w, "dim_S": len(monos), "dim_V": len(pbw), "rank": r})
    full.info["dims"] = {str(w): d for w, d in dims.items()}

    eq = rep.add(Record("omega.zero_mode_equivariance"))
    gens = [x for x in R.basis(1) if x and not R.is_central(next(iter(x.terms))[0])]
    for _ in range(samples):
        x = rng.choice(gens)
        p = _poly_of_mono(rng.choice(pool))
        lhs = ctx.apply_relement(x, 0, ctx.symmetrize(S.unflatten(p)))
        rhs = ctx.symmetrize(S.unflatten(S.nth(S.from_relement(x), 0, p)))
        eq.expect(lhs == rhs, {"x": R.fmt(x), "p": S.fmt(p), "lhs": ctx.fmt(lhs), "rhs": ctx.fmt(rhs)})

    if ctx.lam:
        comp = rep.add(Record("omega.lambda_compatible"))
        U = VacuumModule(R, scale=ctx.scale)
        SU = poisson_from_vertex_lie(R, strict=False)
        upool = [m for w in range(1, min(weight_cap, 3) + 1) for m in SU.monomials(w, 3) if m]
        for _ in range(min(samples, 30)):
            p = _poly_of_mono(rng.choice(upool))
            lhs = project_lambda(U, ctx, U.symmetrize(SU.unflatten(p)))
            rhs = ctx.symmetrize(S.unflatten(S.specialize(SU.unflatten(p))))
            comp.expect(lhs == rhs, {"p": SU.fmt(p), "lhs": ctx.fmt(lhs), "rhs": ctx.fmt(rhs)})
            # omega of a J_lambda generator lands in I_lambda
            for a, val in ctx.lam.items():
                j = (SU.var(a) - SU.specialize(_poly_const(val))) * p
                img = project_lambda(U, ctx, U.symmetrize(SU.unflatten(j)))
                comp.expect(not img, {"generator": f"({R.atoms[a]} - {fmt(val)})*{SU.fmt(p)}", "image": ctx.fmt(img)})
    return rep


def _poly_of_mono(mono: tuple):
    from .poisson import PoissonPoly
    return PoissonPoly.raw({mono: Q(1)})


def _poly_const(c):
    from .poisson import PoissonPoly
    return PoissonPoly({(): c})
