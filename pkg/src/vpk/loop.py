"""The loop Lie algebra of a vertex Lie algebra, in canonical mode form.

A ``LoopElement`` is keyed by (atom, n) meaning u(n).  ∂-powers never appear:
(∂^k u)(n) = (-1)^k n(n-1)..(n-k+1) u(n-k).  A central atom only survives
in mode -1.
"""
from __future__ import annotations

from .report import Record, Report
from .rng import Lcg64
from .scalars import falling, fmt, gbinom
from .vectors import Vec, add_into
from .vertex_lie import RElement, VLStructure


class LoopElement(Vec):
    __slots__ = ()


def mode(R: VLStructure, name: str, n: int, coeff=1) -> LoopElement:
    return canonical_reduce(R, R.el(name, 0, coeff), n)


def canonical_reduce(R: VLStructure, a: RElement, n: int) -> LoopElement:
    d: dict = {}
    for (u, k), c in a.terms.items():
        if R.is_central(u):
            if n == -1:
                add_into(d, (u, -1), c)
            continue
        f = (-1) ** k * falling(n, k)
        if f:
            add_into(d, (u, n - k), c * f)
    return LoopElement.raw(d)


def bracket(R: VLStructure, X: LoopElement, Y: LoopElement) -> LoopElement:
    """[u(m), v(n)] = sum_i C(m,i) (u_i v)(m+n-i)."""
    d: dict = {}
    for (u, m), cx in X.terms.items():
        if R.is_central(u):
            continue
        for (v, n), cy in Y.terms.items():
            if R.is_central(v):
                continue
            for i in range(R.table_bound(u, v)):
                b = gbinom(m, i)
                if not b:
                    continue
                prod = R.gen_product(u, i, v)
                if not prod:
                    continue
                for key, c in canonical_reduce(R, prod, m + n - i).terms.items():
                    add_into(d, key, c * cx * cy * b)
    return LoopElement.raw(d)


def fmt_loop(R: VLStructure, X: LoopElement) -> str:
    if not X.terms:
        return "0"
    parts = []
    for (u, n), c in sorted(X.terms.items()):
        body = f"{R.atoms[u]}({n})"
        parts.append(body if c == 1 else f"({fmt(c)})*{body}")
    return " + ".join(parts)


def zero_mode_bracket(R: VLStructure, a: RElement, b: RElement) -> RElement:
    """a_0 b modulo ∂R: keep the ∂-power-0 part (centrals included)."""
    p = R.nth_product(a, 0, b)
    return RElement.raw({key: c for key, c in p.terms.items() if key[1] == 0})


def mode_basis(R: VLStructure, window: int) -> list[LoopElement]:
    out = [LoopElement.raw({(u, n): 1}) for u in range(R.G) for n in range(-window, window + 1)]
    out += [LoopElement.raw({(u, -1): 1}) for u in range(R.G, len(R.atoms))]
    return out


def check_lie(R: VLStructure, samples: int = 500, window: int = 4, seed: int = 0) -> Report:
    rep = Report(command=f"loop-check {R.name}", seed=seed, caps={"samples": samples, "window": window})
    basis = mode_basis(R, window)
    rng = Lcg64(seed)
    anti = Record("loop.antisymmetry")
    jac = Record("loop.jacobi")
    polar = Record("loop.polar_minus_closed")
    fl = lambda X: fmt_loop(R, X)
    for _ in range(samples):
        X, Y, Z = (rng.choice(basis) for _ in range(3))
        xy = bracket(R, X, Y)
        anti.expect(xy == -bracket(R, Y, X), {"pair": [fl(X), fl(Y)], "value": fl(xy + bracket(R, Y, X))})
        j = bracket(R, X, bracket(R, Y, Z)) + bracket(R, Y, bracket(R, Z, X)) + bracket(R, Z, bracket(R, X, Y))
        jac.expect(not j, {"triple": [fl(X), fl(Y), fl(Z)], "value": fl(j)})
        if all(n <= -1 for (_, n) in X.terms) and all(n <= -1 for (_, n) in Y.terms):
            polar.expect(all(n <= -1 for (_, n) in xy.terms), {"pair": [fl(X), fl(Y)], "value": fl(xy)})
    for r in (anti, jac, polar):
        rep.add(r)
    rep.extend(check_zero_mode(R))
    return rep


def check_zero_mode(R: VLStructure, max_dpow: int = 1) -> Report:
    """Antisymmetry and Jacobi of a_0 b modulo ∂R over all basis triples."""
    rep = Report(command=f"zero-mode {R.name}", caps={"max_dpow": max_dpow})
    basis = [x for x in R.basis(max_dpow) if x]
    anti = rep.add(Record("loop.zero_mode.antisymmetry"))
    jac = rep.add(Record("loop.zero_mode.jacobi"))
    zb = lambda a, b: zero_mode_bracket(R, a, b)
    for x in basis:
        for y in basis:
            s = zb(x, y) + zb(y, x)
            anti.expect(not s, {"pair": [R.fmt(x), R.fmt(y)], "value": R.fmt(s)})
            for z in basis:
                j = zb(x, zb(y, z)) + zb(y, zb(z, x)) + zb(z, zb(x, y))
                jac.expect(not j, {"triple": [R.fmt(x), R.fmt(y), R.fmt(z)], "value": R.fmt(j)})
    return rep
