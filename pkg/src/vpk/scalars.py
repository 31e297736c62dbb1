"""Exact scalars: rationals, or sparse polynomials in named parameters.

Constants are always plain rationals: ``Q`` (gmpy2's mpq when available,
else ``Fraction``) or ``int``.  Anything that involves a parameter is a
``Scalar``; arithmetic on a ``Scalar`` that cancels every parameter hands
back a ``Q``.  Code elsewhere may therefore test
for zero with ``not x`` and compare with ``==`` regardless of the type.
"""
from __future__ import annotations

import ast
from fractions import Fraction
from math import comb, factorial

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover
    Q = Fraction

# isinstance tuple for exact constants
RATIONAL = (int, Fraction, type(Q(0)))

Mono = tuple  # tuple of (name, exponent) pairs sorted by name


def _mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for name, e in b:
        d[name] = d.get(name, 0) + e
    return tuple(sorted(d.items()))


def _wrap(terms: dict):
    """Normalize a term dict: drop zeros, demote constants to Q."""
    terms = {m: c for m, c in terms.items() if c}
    if not terms:
        return Q(0)
    if len(terms) == 1 and () in terms:
        return Q(terms[()])
    s = Scalar.__new__(Scalar)
    s.terms = terms
    return s


def _terms_of(x) -> dict:
    if isinstance(x, Scalar):
        return x.terms
    return {(): Q(x)} if x else {}


class Scalar:
    """Polynomial in named parameters with rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict):
        clean = {}
        for m, c in terms.items():
            c = Q(c)
            if c:
                clean[tuple(sorted(m))] = c
        self.terms = clean

    @staticmethod
    def param(name: str):
        return _wrap({((name, 1),): Q(1)})

    def __add__(self, other):
        if not isinstance(other, (Scalar, *RATIONAL)):
            return NotImplemented
        d = dict(self.terms)
        for m, c in _terms_of(other).items():
            d[m] = d.get(m, 0) + c
        return _wrap(d)

    __radd__ = __add__

    def __neg__(self):
        return _wrap({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, (Scalar, *RATIONAL)):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, RATIONAL):
            if not other:
                return Q(0)
            return _wrap({m: c * other for m, c in self.terms.items()})
        if not isinstance(other, Scalar):
            return NotImplemented
        d: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                d[m] = d.get(m, 0) + c1 * c2
        return _wrap(d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, RATIONAL):
            return self * (1 / Q(other))
        return NotImplemented

    def __pow__(self, k: int):
        out = Q(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.terms == other.terms
        if isinstance(other, RATIONAL):
            return False  # a Scalar always involves a parameter
        return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __bool__(self):
        return True

    def __repr__(self):
        return f"Scalar({fmt(self)!r})"

    def __str__(self):
        return fmt(self)


def as_scalar(x):
    if isinstance(x, Scalar):
        return x
    if isinstance(x, str):
        return parse_scalar(x)
    return Q(x)


def params_of(x) -> set[str]:
    return {n for m in _terms_of(x) for n, _ in m}


def subs(x, values: dict):
    """Substitute parameters by scalars (partial substitution allowed)."""
    if not isinstance(x, Scalar):
        return x
    out = Q(0)
    for m, c in x.terms.items():
        term = c
        keep = []
        for name, e in m:
            if name in values:
                term = term * as_scalar(values[name]) ** e
            else:
                keep.append((name, e))
        out = out + (_wrap({tuple(keep): Q(1)}) * term if keep else term)
    return out


def coeff_in(x, name: str, k: int):
    """Coefficient of name^k, as a scalar free of name."""
    d = {}
    for m, c in _terms_of(x).items():
        e = dict(m).get(name, 0)
        if e == k:
            d[tuple(p for p in m if p[0] != name)] = c
    return _wrap(d)


def degree_in(x, name: str) -> int:
    """Degree in one parameter; -1 for zero."""
    t = _terms_of(x)
    if not t:
        return -1
    return max(dict(m).get(name, 0) for m in t)


def truncate(x, name: str, n: int):
    """Drop every term divisible by name^n."""
    if not isinstance(x, Scalar):
        return x
    return _wrap({m: c for m, c in x.terms.items() if dict(m).get(name, 0) < n})


def div_param(x, name: str):
    """Exact division by a parameter; raises ArithmeticError if impossible."""
    d = {}
    for m, c in _terms_of(x).items():
        dm = dict(m)
        if dm.get(name, 0) < 1:
            raise ArithmeticError(f"{fmt(x)} is not divisible by {name}")
        dm[name] -= 1
        d[tuple(sorted((k, v) for k, v in dm.items() if v))] = c
    return _wrap(d)


def fmt(x) -> str:
    """Canonical text form: exact fractions, parameters as name^k."""
    if not isinstance(x, Scalar):
        return str(Q(x))
    parts = []
    # constant term last, higher total degree first
    for m in sorted(x.terms, key=lambda m: (-sum(e for _, e in m), m)):
        c = x.terms[m]
        mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in m)
        if not mono:
            body = str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}*{mono}"
        parts.append(("-" if c < 0 else "+", body))
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s


def parse_scalar(text: str, allowed: set[str] | None = None):
    """Parse '2', '-3/4', 'ell', '2*ell^2 - 1/3', '(h+1)*ell' exactly."""
    try:
        tree = ast.parse(text.replace("^", "**").strip(), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse scalar {text!r}") from exc

    def ev(node):
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return Q(node.value)
        if isinstance(node, ast.Name):
            if allowed is not None and node.id not in allowed:
                raise ValueError(f"unknown parameter {node.id!r} in {text!r}")
            return Scalar.param(node.id)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            left, right = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                if isinstance(right, Scalar) or not right:
                    raise ValueError(f"division by a non-constant or zero in {text!r}")
                return left * (1 / right)
            if isinstance(node.op, ast.Pow):
                if isinstance(right, Scalar) or right.denominator != 1 or right < 0:
                    raise ValueError(f"exponent must be a nonnegative integer in {text!r}")
                return left ** int(right)
        raise ValueError(f"unsupported syntax in scalar {text!r}")

    return ev(tree.body)


def gbinom(m: int, k: int) -> int:
    """Binomial coefficient C(m, k) for any integer m and k >= 0."""
    if k < 0:
        return 0
    if m >= 0:
        return comb(m, k)
    return (-1) ** k * comb(k - m - 1, k)


def sign(n: int) -> int:
    """(-1)^n for any integer n."""
    return -1 if n % 2 else 1


def falling(n: int, k: int) -> int:
    """n(n-1)...(n-k+1)."""
    out = 1
    for i in range(k):
        out *= n - i
    return out


def inv_factorial(k: int):
    return Q(1, factorial(k))
