"""Algebra definition files (JSON).

Vertex Lie structure::

    {"name": "sl2", "parameters": ["ell"],
     "generators": [{"name": "e", "weight": 1}, ...],
     "centrals": [{"name": "c"}],
     "products": [{"left": "e", "right": "f", "n": 0,
                   "value": [{"coeff": "1", "dpower": 0, "target": "h"}]}, ...],
     "lambda": {"c": "ell"}}

A prestructure on a free differential algebra uses ``"kind": "prestructure"``;
its product values are polynomial terms
``{"coeff": "ell", "factors": [{"target": "e", "dpower": 1}, ...]}`` and
``n`` labels the coefficient of x^{-n-1} in Y⁰₋(left, x) right.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .laurent import LaurentTable
from .poisson import PoissonPoly, WeakPreStructure
from .scalars import Q, as_scalar, fmt, parse_scalar
from .vertex_lie import RElement, VLStructure


class AlgebraFileError(ValueError):
    """All validation errors of one file, each prefixed by its JSON path."""

    def __init__(self, errors: list[str]):
        self.errors = errors
        super().__init__("; ".join(errors))


@dataclass
class AlgebraFile:
    name: str
    kind: str  # "vertex-lie" | "prestructure"
    parameters: list
    generators: list  # [(name, weight)]
    centrals: list  # [name]
    products: list  # [(left, right, n, value)], value in parsed form
    lam: dict = field(default_factory=dict)
    note: str = ""

    def structure(self):
        if self.kind == "prestructure":
            return self._prestructure()
        idx = {g: i for i, g in enumerate([g for g, _ in self.generators] + self.centrals)}
        products: dict = {}
        for left, right, n, value in self.products:
            el = RElement({(idx[t], k): c for t, k, c in value})
            products.setdefault((idx[left], idx[right]), {})[n] = el
        return VLStructure(name=self.name, generators=list(self.generators), centrals=list(self.centrals),
                           products=products, parameters=list(self.parameters), default_lambda=dict(self.lam),
                           note=self.note)

    def _prestructure(self) -> WeakPreStructure:
        idx = {g: i for i, (g, _) in enumerate(self.generators)}
        table: dict = {}
        for left, right, n, value in self.products:
            poly: dict = {}
            for coeff, factors in value:
                d: dict = {}
                for t, k in factors:
                    d[(idx[t], k)] = d.get((idx[t], k), 0) + 1
                key = tuple(sorted(d.items()))
                poly[key] = poly.get(key, 0) + coeff
            table.setdefault((idx[left], idx[right]), {})[(-n - 1,)] = PoissonPoly(poly)
        tables = {k: LaurentTable(("x",), v) for k, v in table.items()}
        return WeakPreStructure(self.name, list(self.generators), tables, list(self.parameters))


def _coeff(text, path: str, params: set, errors: list):
    if isinstance(text, int) and not isinstance(text, bool):
        return Q(text)
    if not isinstance(text, str):
        errors.append(f"{path}: coefficient must be a string")
        return None
    try:
        return parse_scalar(text, params)
    except ValueError as exc:
        errors.append(f"{path}: {exc}")
        return None


def _nonneg_int(x, path, errors, what):
    if not isinstance(x, int) or isinstance(x, bool) or x < 0:
        errors.append(f"{path}: {what} must be an integer >= 0")
        return False
    return True


def parse_dict(doc) -> AlgebraFile:
    errors: list[str] = []
    if not isinstance(doc, dict):
        raise AlgebraFileError(["$: top level must be an object"])
    kind = doc.get("kind", "vertex-lie")
    if kind not in ("vertex-lie", "prestructure"):
        errors.append("kind: must be 'vertex-lie' or 'prestructure'")
    name = doc.get("name")
    if not isinstance(name, str) or not name:
        errors.append("name: required non-empty string")
    params = doc.get("parameters", [])
    if not isinstance(params, list) or not all(isinstance(p, str) and p.isidentifier() for p in params):
        errors.append("parameters: must be a list of identifiers")
        params = []
    pset = set(params)

    gens = []
    for i, g in enumerate(doc.get("generators", []) if isinstance(doc.get("generators"), list) else []):
        p = f"generators[{i}]"
        if not isinstance(g, dict) or not isinstance(g.get("name"), str):
            errors.append(f"{p}.name: required string")
            continue
        w = g.get("weight")
        if not isinstance(w, int) or isinstance(w, bool) or w < 1:
            errors.append(f"{p}.weight: must be an integer >= 1")
            continue
        gens.append((g["name"], w))
    if not isinstance(doc.get("generators"), list) or not doc.get("generators"):
        errors.append("generators: required non-empty list")
    cents = []
    for i, c in enumerate(doc.get("centrals", [])):
        if not isinstance(c, dict) or not isinstance(c.get("name"), str):
            errors.append(f"centrals[{i}].name: required string")
            continue
        cents.append(c["name"])
    if kind == "prestructure" and cents:
        errors.append("centrals: a prestructure has no central elements")
    names = [g for g, _ in gens] + cents
    seen = set()
    for nm in names:
        if nm in seen:
            errors.append(f"generators/centrals: duplicate name {nm!r}")
        if nm in pset:
            errors.append(f"parameters: {nm!r} clashes with an element name")
        seen.add(nm)
    gen_names = {g for g, _ in gens}

    products = []
    keys = set()
    for i, pr in enumerate(doc.get("products", [])):
        p = f"products[{i}]"
        if not isinstance(pr, dict):
            errors.append(f"{p}: must be an object")
            continue
        ok = True
        for side in ("left", "right"):
            if pr.get(side) not in gen_names:
                errors.append(f"{p}.{side}: unknown generator {pr.get(side)!r}")
                ok = False
        n = pr.get("n")
        ok &= _nonneg_int(n, f"{p}.n", errors, "n")
        key = (pr.get("left"), pr.get("right"), n)
        if ok and key in keys:
            errors.append(f"{p}: duplicate product key {key}")
        keys.add(key)
        value = []
        vals = pr.get("value")
        if not isinstance(vals, list):
            errors.append(f"{p}.value: must be a list")
            continue
        for j, t in enumerate(vals):
            q = f"{p}.value[{j}]"
            if not isinstance(t, dict):
                errors.append(f"{q}: must be an object")
                continue
            c = _coeff(t.get("coeff"), f"{q}.coeff", pset, errors)
            if kind == "prestructure":
                facs = []
                for k, f in enumerate(t.get("factors", [])):
                    fp = f"{q}.factors[{k}]"
                    if not isinstance(f, dict) or f.get("target") not in gen_names:
                        errors.append(f"{fp}.target: unknown generator {f.get('target') if isinstance(f, dict) else f!r}")
                        continue
                    if _nonneg_int(f.get("dpower", 0), f"{fp}.dpower", errors, "dpower"):
                        facs.append((f["target"], f.get("dpower", 0)))
                if c is not None:
                    value.append((c, facs))
            else:
                tgt = t.get("target")
                if tgt not in seen:
                    errors.append(f"{q}.target: unknown element {tgt!r}")
                    continue
                k = t.get("dpower", 0)
                if not _nonneg_int(k, f"{q}.dpower", errors, "dpower"):
                    continue
                if tgt in cents and k:
                    errors.append(f"{q}.dpower: central targets are annihilated by ∂")
                    continue
                if c is not None:
                    value.append((tgt, k, c))
        if ok:
            products.append((pr["left"], pr["right"], n, value))

    lam = {}
    raw_lam = doc.get("lambda", {})
    if not isinstance(raw_lam, dict):
        errors.append("lambda: must be an object")
        raw_lam = {}
    for c, v in raw_lam.items():
        if c not in cents:
            errors.append(f"lambda.{c}: not a central element")
            continue
        val = _coeff(v, f"lambda.{c}", pset, errors)
        if val is not None:
            lam[c] = val
    known = {"kind", "name", "parameters", "generators", "centrals", "products", "lambda", "note"}
    for k in doc:
        if k not in known:
            errors.append(f"{k}: unknown field")
    if errors:
        raise AlgebraFileError(errors)
    return AlgebraFile(name, kind, list(params), gens, cents, products, lam, doc.get("note", ""))


def parse(data: bytes | str) -> AlgebraFile:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise AlgebraFileError([f"$: not UTF-8 ({exc.reason})"]) from None
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise AlgebraFileError([f"$: JSON syntax error at line {exc.lineno} column {exc.colno}: {exc.msg}"]) from None
    return parse_dict(doc)


def _coeff_text(c) -> str:
    return fmt(c)


def to_dict(af: AlgebraFile) -> dict:
    """Canonical form: products sorted by (left, right, n), value terms sorted."""
    order = {g: i for i, g in enumerate([g for g, _ in af.generators] + af.centrals)}
    doc: dict = {"name": af.name}
    if af.kind != "vertex-lie":
        doc["kind"] = af.kind
    doc["parameters"] = list(af.parameters)
    doc["generators"] = [{"name": g, "weight": w} for g, w in af.generators]
    doc["centrals"] = [{"name": c} for c in af.centrals]
    prods = []
    for left, right, n, value in sorted(af.products, key=lambda p: (order[p[0]], order[p[1]], p[2])):
        if af.kind == "prestructure":
            terms = [{"coeff": _coeff_text(c), "factors": [{"target": t, "dpower": k} for t, k in sorted(f, key=lambda x: (order[x[0]], x[1]))]}
                     for c, f in value if c]
            terms.sort(key=lambda t: json.dumps(t, sort_keys=True))
        else:
            terms = [{"coeff": _coeff_text(c), "dpower": k, "target": t}
                     for t, k, c in sorted(value, key=lambda x: (order[x[0]], x[1])) if c]
        prods.append({"left": left, "right": right, "n": n, "value": terms})
    doc["products"] = prods
    if af.lam:
        doc["lambda"] = {c: _coeff_text(v) for c, v in sorted(af.lam.items())}
    if af.note:
        doc["note"] = af.note
    return doc


def serialize(af: AlgebraFile) -> str:
    return json.dumps(to_dict(af), indent=2, ensure_ascii=False) + "\n"


def from_structure(R: VLStructure, lam: dict | None = None) -> AlgebraFile:
    """AlgebraFile for a VLStructure: only the declared orientation of each pair is written."""
    prods = []
    for (u, v), table in sorted(R.products.items()):
        for n, el in sorted(table.items()):
            if el:
                prods.append((R.atoms[u], R.atoms[v], n, [(R.atoms[a], k, c) for (a, k), c in sorted(el.terms.items())]))
    lam = dict(R.default_lambda if lam is None else lam)
    return AlgebraFile(R.name, "vertex-lie", list(R.parameters), list(R.generators), list(R.centrals), prods,
                       {c: as_scalar(v) for c, v in lam.items()}, R.note)


def from_prestructure(W: WeakPreStructure) -> AlgebraFile:
    names = [g for g, _ in W.generators]
    prods = []
    for (u, v), t in sorted(W.table.items()):
        for (e,), poly in sorted(t.terms.items(), reverse=True):
            value = [(c, [(names[a], k) for (a, k), m in mono for _ in range(m)]) for mono, c in poly.terms.items()]
            prods.append((names[u], names[v], -e - 1, value))
    return AlgebraFile(W.name, "prestructure", list(W.parameters), list(W.generators), [], prods)


BUILTIN = ("heisenberg", "sl2", "sl2-noninvariant", "sl2-prestructure", "sl2-mutant-prestructure", "virasoro")


def builtin_path(name: str):
    return resources.files("vpk") / "algebras" / f"{name}.json"


def load(path_or_name: str) -> AlgebraFile:
    """Read a file path, or a shipped algebra by name (e.g. 'sl2')."""
    p = Path(path_or_name)
    if p.exists():
        return parse(p.read_bytes())
    stem = p.name[:-5] if p.name.endswith(".json") else p.name
    if stem in BUILTIN:
        return parse(builtin_path(stem).read_bytes())
    raise FileNotFoundError(f"no such file or shipped algebra: {path_or_name}")
