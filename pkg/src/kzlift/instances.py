"""JSON instance files: loading, validation and serialisation.

A category document::

    {"name": "walking arrow",
     "objects": ["a", "b"],
     "morphisms": [{"id": "f", "src": "a", "tgt": "b"}],
     "compose": [["g", "f", "gf"]],          # g after f = gf, non-identity pairs
     "pullbacks": "required"}                 # optional validation flag

A poset document uses the shorthand ``{"poset": {"elements": [...],
"leq_pairs": [[x, y], ...]}}``; preorders are quotiented unless
``"quotient": false``.  A functor document is
``{"functor": {"source": <doc>, "target": <doc>, "obj_map": {...},
"mor_map": {...}}}``.  An algebra document for the list monad is
``{"algebra": {"carrier": <poset doc>, "structure_map": {"mul": [[a, b, ab],
...], "unit": e}}}``; a morphism between two algebras adds
``{"map": {...}, "structure_cell": "lax" | "oplax" | "pseudo"}``.
Ids are case-sensitive strings.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .core2cat import FinCategory, Functor, validate_category
from .errors import StructuralError
from .poset import FinPoset, Map
from .pseudomonad import KINDS, ListMonad, check_algebra, make_morphism, monoid_algebra
from .report import Report
from .spanconv import has_pullbacks


@dataclass
class Instance:
    kind: str            # category | poset | functor | algebra | morphism
    value: object
    document: dict


def _strings(xs, what):
    xs = list(xs)
    if not all(isinstance(x, str) for x in xs):
        raise StructuralError(f"{what} must be strings")
    return xs


def category_from_json(doc: dict) -> FinCategory:
    if "poset" in doc:
        return FinCategory.from_poset(poset_from_json(doc))
    for key in ("objects",):
        if key not in doc:
            raise StructuralError(f"category document lacks {key!r}")
    objects = _strings(doc["objects"], "object ids")
    mors = []
    for m in doc.get("morphisms", []):
        try:
            mors.append((m["id"], m["src"], m["tgt"]))
        except (KeyError, TypeError):
            raise StructuralError(f"malformed morphism entry {m!r}") from None
    _strings([m[0] for m in mors], "morphism ids")
    comp = []
    for row in doc.get("compose", []):
        if not isinstance(row, (list, tuple)) or len(row) != 3:
            raise StructuralError(f"composition entry {row!r} is not a triple")
        comp.append(tuple(row))
    identities = doc.get("identities")
    return FinCategory(objects, mors, comp, identities, name=doc.get("name"))


def poset_from_json(doc: dict) -> FinPoset:
    body = doc.get("poset", doc)
    if "elements" not in body:
        raise StructuralError("poset document lacks 'elements'")
    elements = _strings(body["elements"], "poset elements")
    pairs = []
    for pr in body.get("leq_pairs", []):
        if not isinstance(pr, (list, tuple)) or len(pr) != 2:
            raise StructuralError(f"order entry {pr!r} is not a pair")
        pairs.append(tuple(pr))
    return FinPoset(elements, pairs, quotient=doc.get("quotient", True), name=doc.get("name"))


def _rep(P: FinPoset, x):
    x = P.classes.get(x, x) if P.classes else x
    if x not in P.elements():
        raise StructuralError(f"{x!r} is not an element of {P!r}")
    return x


def functor_from_json(doc: dict) -> Functor:
    body = doc["functor"]
    src, tgt = category_from_json(body["source"]), category_from_json(body["target"])
    F = Functor(src, tgt, body.get("obj_map", {}), body.get("mor_map", {}), name=body.get("name"))
    bad = F.violations()
    if bad:
        raise StructuralError(f"functor laws fail: {bad[:3]!r}")
    return F


def algebra_parts(doc: dict) -> tuple:
    """(carrier, multiplication table, unit, name) from an algebra document."""
    body = doc["algebra"]
    P = poset_from_json(body["carrier"])
    sm = body.get("structure_map")
    if not isinstance(sm, dict) or "mul" not in sm or "unit" not in sm:
        raise StructuralError("algebra needs structure_map with 'mul' and 'unit'")
    table = {}
    for row in sm["mul"]:
        if len(row) != 3:
            raise StructuralError(f"multiplication entry {row!r} is not a triple")
        a, b, c = (_rep(P, x) for x in row)
        table[a, b] = c
    elems = P.elements()
    missing = [(a, b) for a in elems for b in elems if (a, b) not in table]
    if missing:
        raise StructuralError(f"multiplication table misses {missing[0]!r}")
    return P, table, _rep(P, sm["unit"]), body.get("name", doc.get("name", ""))


def algebra_from_json(doc: dict, t=None):
    P, table, unit, name = algebra_parts(doc)
    return monoid_algebra(t or ListMonad(), P, table, unit, name)


def morphism_from_json(doc: dict, t=None):
    body = doc["morphism"]
    t = t or ListMonad()
    src = algebra_from_json({"algebra": body["source"]}, t)
    tgt = algebra_from_json({"algebra": body["target"]}, t)
    kind = body.get("structure_cell", "pseudo")
    if kind not in KINDS:
        raise StructuralError(f"structure_cell must be one of {KINDS}")
    table = {_rep(src.carrier, k): _rep(tgt.carrier, v) for k, v in body["map"].items()}
    L = Map.from_table(src.carrier, tgt.carrier, table, body.get("name", "L"))
    return make_morphism(t, L, src, tgt, kind)


def load_instance(doc: dict) -> Instance:
    if not isinstance(doc, dict):
        raise StructuralError("instance document must be a JSON object")
    if "functor" in doc:
        return Instance("functor", functor_from_json(doc), doc)
    if "algebra" in doc:
        return Instance("algebra", algebra_from_json(doc), doc)
    if "morphism" in doc:
        return Instance("morphism", morphism_from_json(doc), doc)
    if "poset" in doc and doc.get("as") != "category":
        return Instance("poset", poset_from_json(doc), doc)
    return Instance("category", category_from_json(doc), doc)


def read_instance(path) -> Instance:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise StructuralError(f"{path}: not valid JSON ({e.msg} at line {e.lineno})") from None
    return load_instance(doc)


def validate_instance(inst: Instance) -> Report:
    """Law checks for a loaded instance; malformed documents raise while loading."""
    rep = Report()
    name = inst.document.get("name", inst.kind)
    if inst.kind == "category":
        v = validate_category(inst.value)
        rep.add("category_laws", v.ok, name, v.violations[:5] or None)
        if inst.document.get("pullbacks") == "required":
            rep.add("has_pullbacks", has_pullbacks(inst.value), name)
    elif inst.kind == "poset":
        rep.add("order_relation", True, name, detail={"elements": len(inst.value.elements())})
    elif inst.kind == "functor":
        rep.add("functor_laws", inst.value.is_valid(), name)
    elif inst.kind == "algebra":
        rep.extend(check_algebra(ListMonad(), inst.value))
    elif inst.kind == "morphism":
        from .pseudomonad import check_morphism
        rep.extend(check_morphism(ListMonad(), inst.value))
    return rep


def category_to_json(c: FinCategory) -> dict:
    ids = {i: f"id_{x}" for x, i in c.identity.items()}
    name = {m: ids.get(m, str(m)) for m in c.morphisms}
    return {
        "name": repr(c),
        "objects": [str(x) for x in c.objects],
        "morphisms": [{"id": name[m], "src": str(c.src[m]), "tgt": str(c.tgt[m])}
                      for m in c.morphisms if m not in ids],
        "compose": [[name[g], name[f], name[h]] for (g, f), h in c.comp.items()
                    if g not in ids and f not in ids],
        "identities": {str(x): ids[i] for x, i in c.identity.items()},
    }


def poset_to_json(P: FinPoset) -> dict:
    elems = P.elements()
    return {"name": repr(P), "poset": {"elements": [str(x) for x in elems],
                                       "leq_pairs": [[str(a), str(b)] for a in elems for b in elems
                                                     if a != b and P.leq(a, b)]}}
