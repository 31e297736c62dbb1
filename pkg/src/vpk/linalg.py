"""Exact rank and kernel computations over Q or Q(parameters).

Vectors are dicts key -> scalar.  The heavy lifting is sympy's DomainMatrix;
this module only converts between our scalars and its domain elements.
"""
from __future__ import annotations

from functools import cache

from .scalars import Q, Scalar, _wrap, params_of


@cache
def _sympy():
    # deferred: importing sympy costs ~0.35 s, which dominates short CLI runs
    import sympy
    from sympy import QQ
    from sympy.polys.matrices import DomainMatrix
    return sympy, QQ, DomainMatrix


def _domain(values):
    sympy, QQ, _ = _sympy()
    names = sorted(set().union(*(params_of(v) for v in values)) if values else set())
    if not names:
        return QQ, []
    syms = sympy.symbols(names)
    return QQ.frac_field(*syms), syms


def _convert(K, syms, x):
    QQ = _sympy()[1]
    if not isinstance(x, Scalar):
        q = Q(x)
        return K.convert(QQ(int(q.numerator), int(q.denominator)))
    pos = {s.name: i for i, s in enumerate(syms)}
    out = K.zero
    for mono, c in x.terms.items():
        t = K.convert(QQ(int(c.numerator), int(c.denominator)))
        for name, e in mono:
            t = t * K.convert(syms[pos[name]]) ** e
        out += t
    return out


def _matrix(vectors: list[dict], keys: list | None = None):
    if keys is None:
        keys = sorted({k for v in vectors for k in v})
    col = {k: i for i, k in enumerate(keys)}
    values = [c for v in vectors for c in v.values()]
    K, syms = _domain(values)
    rows = [[K.zero] * len(keys) for _ in vectors]
    for r, v in enumerate(vectors):
        for k, c in v.items():
            rows[r][col[k]] = _convert(K, syms, c)
    return _sympy()[2](rows, (len(vectors), len(keys)), K), K, syms, keys


def rank(vectors: list[dict]) -> int:
    vectors = [v for v in vectors if v]
    if not vectors:
        return 0
    M, *_ = _matrix(vectors)
    return M.rank()


def _to_scalar(K, syms, x):
    if K == _sympy()[1]:
        return Q(int(x.numerator), int(x.denominator))
    num = x.numer if hasattr(x, "numer") else x
    terms = {}
    for monom, c in num.terms():
        key = tuple((syms[i].name, e) for i, e in enumerate(monom) if e)
        terms[key] = Q(int(c.numerator), int(c.denominator))
    return _wrap(terms)


def kernel(vectors: list[dict]) -> list[dict]:
    """Basis of {a : sum_j a_j vectors[j] = 0}, as dicts j -> scalar.

    Over Q(params) each kernel vector is rescaled to have polynomial entries.
    """
    n = len(vectors)
    if n == 0:
        return []
    keys = sorted({k for v in vectors for k in v})
    if not keys:
        return [{j: Q(1)} for j in range(n)]
    M, K, syms, _ = _matrix(vectors, keys)
    ns = M.transpose().nullspace()
    out = []
    for r in range(ns.shape[0]):
        row = [ns[r, j].element for j in range(n)]
        if K != _sympy()[1]:
            den = None
            for x in row:
                if x:
                    den = x.denom if den is None else den.lcm(x.denom)
            row = [x * K(den) if x else x for x in row]
            g = None
            for x in row:
                if x:
                    g = x.numer if g is None else g.gcd(x.numer)
            row = [x / K(g) if x else x for x in row]
        out.append({j: _to_scalar(K, syms, x) for j, x in enumerate(row) if x})
    return out


def independent_subset(vectors: list[dict]) -> list[int]:
    """Indices of a greedy maximal independent subset (first-come order)."""
    keep: list[int] = []
    current = 0
    for i, v in enumerate(vectors):
        if not v:
            continue
        r = rank([vectors[j] for j in keep] + [v])
        if r > current:
            keep.append(i)
            current = r
    return keep


def same_span(a: list[dict], b: list[dict]) -> bool:
    ra, rb = rank(a), rank(b)
    return ra == rb and rank(list(a) + list(b)) == ra


def pivot_subset(vectors: list[dict]) -> list[int]:
    """Indices of the first-come maximal independent subset, from one rref."""
    idx = [i for i, v in enumerate(vectors) if v]
    if not idx:
        return []
    M, *_ = _matrix([vectors[i] for i in idx])
    _, pivots = M.transpose().rref()
    return [idx[p] for p in pivots]


def in_span(basis: list[dict], v: dict) -> bool:
    if not v:
        return True
    return rank(list(basis) + [v]) == rank(basis)
