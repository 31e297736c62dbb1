"""Finitely supported linear combinations over exact scalars."""
from __future__ import annotations


from .scalars import RATIONAL, Scalar, subs


def add_into(d: dict, key, c) -> None:
    """d[key] += c, deleting the entry if it cancels."""
    s = d.get(key, 0) + c
    if s:
        d[key] = s
    else:
        d.pop(key, None)


def add_scaled(d: dict, other: dict, c=1) -> None:
    if c == 1:
        for k, v in other.items():
            add_into(d, k, v)
    elif c:
        for k, v in other.items():
            add_into(d, k, v * c)


class Vec:
    """Sparse vector: basis key -> scalar.  Subclasses fix the key shape."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {k: c for k, c in (terms or {}).items() if c}

    @classmethod
    def raw(cls, terms: dict):
        # caller guarantees there are no zero coefficients
        v = cls.__new__(cls)
        v.terms = terms
        return v

    def __add__(self, other):
        if not isinstance(other, Vec):
            return NotImplemented
        d = dict(self.terms)
        add_scaled(d, other.terms)
        return self.raw(d)

    def __radd__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        return NotImplemented

    def __sub__(self, other):
        if not isinstance(other, Vec):
            return NotImplemented
        d = dict(self.terms)
        add_scaled(d, other.terms, -1)
        return self.raw(d)

    def __neg__(self):
        return self.raw({k: -c for k, c in self.terms.items()})

    def scale(self, c):
        if not c:
            return self.raw({})
        if c == 1:
            return self
        d = {}
        for k, v in self.terms.items():
            p = v * c
            if p:
                d[k] = p
        return self.raw(d)

    def __mul__(self, c):
        if isinstance(c, (*RATIONAL, Scalar)):
            return self.scale(c)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, Vec):
            return type(self) is type(other) and self.terms == other.terms
        if isinstance(other, int) and other == 0:
            return not self.terms
        return NotImplemented

    __hash__ = None

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def items(self):
        return self.terms.items()

    def map_coeffs(self, f):
        d = {}
        for k, c in self.terms.items():
            c = f(c)
            if c:
                d[k] = c
        return self.raw(d)

    def subs(self, values: dict):
        return self.map_coeffs(lambda c: subs(c, values))

    def __repr__(self):
        return f"{type(self).__name__}({self.terms!r})"
