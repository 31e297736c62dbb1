"""Finite multi-variable Laurent tables and the Sing projection.

A table maps exponent tuples (one slot per variable) to coefficients in some
module: scalars, or any ``Vec`` subclass.  Only finite tables are ever built;
infinite expansions are truncated by the caller at a bound that a later
``sing`` makes harmless.
"""
from __future__ import annotations

import operator
from typing import Callable

from .scalars import fmt, gbinom, inv_factorial
from .vectors import add_into


class ConfigError(ValueError):
    pass


class LaurentTable:
    __slots__ = ("variables", "terms")

    def __init__(self, variables, terms: dict | None = None):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean = {}
        for e, c in (terms or {}).items():
            if len(e) != n:
                raise ConfigError(f"exponent {e} has wrong arity for {self.variables}")
            if c:
                clean[tuple(e)] = c
        self.terms = clean

    @classmethod
    def from_modes(cls, var: str, modes: dict):
        """Sum of c_n x^{-n-1}: the usual component convention."""
        return cls((var,), {(-n - 1,): c for n, c in modes.items()})

    def modes(self) -> dict:
        """Inverse of from_modes for one-variable tables."""
        assert len(self.variables) == 1
        return {-e[0] - 1: c for e, c in self.terms.items()}

    def _index(self, var: str) -> int:
        try:
            return self.variables.index(var)
        except ValueError:
            raise ConfigError(f"unknown variable {var!r}; table has {self.variables}") from None

    def _like(self, terms: dict) -> "LaurentTable":
        t = LaurentTable.__new__(LaurentTable)
        t.variables = self.variables
        t.terms = terms
        return t

    def __add__(self, other: "LaurentTable"):
        self._same(other)
        d = dict(self.terms)
        for e, c in other.terms.items():
            add_into(d, e, c)
        return self._like(d)

    def __sub__(self, other: "LaurentTable"):
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, s):
        d = {}
        for e, c in self.terms.items():
            c = c * s
            if c:
                d[e] = c
        return self._like(d)

    def map_coeffs(self, f: Callable):
        d = {}
        for e, c in self.terms.items():
            c = f(c)
            if c:
                add_into(d, e, c)
        return self._like(d)

    def _same(self, other):
        if self.variables != other.variables:
            raise ConfigError(f"variable mismatch {self.variables} vs {other.variables}")

    def __eq__(self, other):
        if not isinstance(other, LaurentTable):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    __hash__ = None

    def __bool__(self):
        return bool(self.terms)

    def coeff(self, exps: tuple, default=0):
        return self.terms.get(tuple(exps), default)

    def derivative(self, var: str) -> "LaurentTable":
        i = self._index(var)
        d = {}
        for e, c in self.terms.items():
            if e[i]:
                add_into(d, e[:i] + (e[i] - 1,) + e[i + 1:], c * e[i])
        return self._like(d)

    def reflect(self, var: str) -> "LaurentTable":
        """Substitute var -> -var."""
        i = self._index(var)
        return self._like({e: (-c if e[i] % 2 else c) for e, c in self.terms.items()})

    def embed(self, variables) -> "LaurentTable":
        """Re-express over a superset of variables (missing slots get exponent 0)."""
        variables = tuple(variables)
        pos = [self.variables.index(v) if v in self.variables else None for v in variables]
        for v in self.variables:
            if v not in variables:
                raise ConfigError(f"cannot drop variable {v!r}")
        t = LaurentTable.__new__(LaurentTable)
        t.variables = variables
        t.terms = {tuple(0 if p is None else e[p] for p in pos): c for e, c in self.terms.items()}
        return t

    def mul(self, other: "LaurentTable", product: Callable = operator.mul) -> "LaurentTable":
        """Product of tables over the same variables; product(c1, c2) pairs coefficients."""
        self._same(other)
        d = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                c = product(c1, c2)
                if c:
                    add_into(d, tuple(a + b for a, b in zip(e1, e2)), c)
        return self._like(d)

    def __str__(self):
        return format_table(self)


def sing(f: LaurentTable, vars) -> LaurentTable:
    """Keep the terms whose exponent is <= -1 in every selected variable."""
    if isinstance(vars, str):
        vars = (vars,)
    if not vars:
        raise ConfigError("sing needs at least one variable")
    idx = [f._index(v) for v in vars]
    return f._like({e: c for e, c in f.terms.items() if all(e[i] <= -1 for i in idx)})


def expand_neg_binomial(m: int, i_max: int, variables=("x1", "x2")) -> LaurentTable:
    """(x1 - x2)^m for m < 0, expanded in nonnegative powers of x2 up to x2^i_max."""
    if m >= 0:
        raise ConfigError("expand_neg_binomial needs m < 0; use the finite binomial theorem")
    if i_max < 0:
        raise ConfigError("i_max must be nonnegative")
    return LaurentTable(variables, {(m - k, k): gbinom(m, k) * (-1) ** k for k in range(i_max + 1)})


def apply_exp_partial(f: LaurentTable, var: str, d: Callable, singular_only: bool = False) -> LaurentTable:
    """sum_j x^j/j! d^j(f), kept only as far as a following sing can see.

    Per term, the series stops once the var-exponent reaches 0 (that term is
    kept, later sing drops it) or d^j of the coefficient vanishes.  With
    ``singular_only`` terms of var-exponent >= 0 are never produced.
    """
    i = f._index(var)
    last = -1 if singular_only else 0
    out = {}
    for e, c in f.terms.items():
        j = 0
        while c:
            ej = e[i] + j
            if ej > last:
                break
            add_into(out, e[:i] + (ej,) + e[i + 1:], c * inv_factorial(j) if j > 1 else c)
            if ej >= last:
                break
            c = d(c)
            j += 1
    return f._like(out)


def skew_transform(f: LaurentTable, var: str, d: Callable) -> LaurentTable:
    """Sing(e^{x d} f(-x)): the half skew-symmetry transform."""
    return sing(apply_exp_partial(f.reflect(var), var, d, singular_only=True), (var,))


def format_table(t: LaurentTable, coeff_fmt: Callable = None) -> str:
    if not t.terms:
        return "0"
    coeff_fmt = coeff_fmt or _default_fmt
    parts = []
    for e in sorted(t.terms, reverse=True):
        mono = "*".join(f"{v}^{{{k}}}" for v, k in zip(t.variables, e) if k)
        c = coeff_fmt(t.terms[e])
        parts.append(f"({c})" + (f"*{mono}" if mono else ""))
    return " + ".join(parts)


def _default_fmt(c):
    return str(c) if hasattr(c, "terms") and not hasattr(c, "numerator") else fmt(c)
