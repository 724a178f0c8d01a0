"""Finite categories, functors, natural transformations, pullbacks and coends."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable

from .errors import PreconditionError, StructuralError
from .poset import FinPoset


class FinCategory:
    """A finite category given by explicit tables.

    ``morphisms`` is a list of (id, source, target).  ``compose`` maps
    (g, f) to g.f for composable non-identity pairs; composites with
    identities are filled in automatically unless given explicitly.
    Identities default to ids ``("id", x)`` unless ``identities`` names them.
    Construction raises StructuralError on dangling ids, wrong endpoints or
    missing composites; law violations are reported by ``validate_category``.
    """

    def __init__(self, objects, morphisms=(), compose=None, identities=None, name=None):
        self.name = name
        self.objects = tuple(objects)
        if len(set(self.objects)) != len(self.objects):
            raise StructuralError("duplicate object ids")
        objset = set(self.objects)
        src, tgt = {}, {}
        mors = []
        identities = dict(identities or {})
        for x in self.objects:
            if x not in identities:
                identities[x] = ("id", x)
        for x, i in identities.items():
            if x not in objset:
                raise StructuralError(f"identity for unknown object {x!r}")
            src[i], tgt[i] = x, x
            mors.append(i)
        for m, s, t in morphisms:
            if m in src:
                if (src[m], tgt[m]) != (s, t) or m not in identities.values():
                    raise StructuralError(f"duplicate morphism id {m!r}")
                continue
            if s not in objset or t not in objset:
                raise StructuralError(f"morphism {m!r} has a dangling endpoint")
            src[m], tgt[m] = s, t
            mors.append(m)
        self.morphisms = tuple(mors)
        self.src, self.tgt = src, tgt
        self.identity = identities
        comp = {}
        entries = compose.items() if isinstance(compose, dict) else (
            ((g, f), h) for g, f, h in (compose or ()))
        for (g, f), h in entries:
            for m in (g, f, h):
                if m not in src:
                    raise StructuralError(f"composition table mentions unknown morphism {m!r}")
            if tgt[f] != src[g]:
                raise StructuralError(f"composite of non-composable pair ({g!r}, {f!r})")
            if src[h] != src[f] or tgt[h] != tgt[g]:
                raise StructuralError(f"composite {g!r}.{f!r} = {h!r} has wrong endpoints")
            comp[g, f] = h
        idset = set(identities.values())
        for m in self.morphisms:
            comp.setdefault((identities[tgt[m]], m), m)
            comp.setdefault((m, identities[src[m]]), m)
        for g in self.morphisms:
            for f in self.morphisms:
                if tgt[f] == src[g] and (g, f) not in comp:
                    raise StructuralError(f"missing composite for ({g!r}, {f!r})")
        self.comp = comp
        homs = {}
        for m in self.morphisms:
            homs.setdefault((src[m], tgt[m]), []).append(m)
        self._homs = {k: tuple(v) for k, v in homs.items()}
        self._idset = idset

    # basic queries

    def hom(self, x, y) -> tuple:
        return self._homs.get((x, y), ())

    def compose(self, g, f):
        try:
            return self.comp[g, f]
        except KeyError:
            raise PreconditionError(f"{g!r} and {f!r} are not composable") from None

    def compose_path(self, *ms):
        """Compose right-to-left: compose_path(h, g, f) = h.g.f."""
        out = ms[-1]
        for m in reversed(ms[:-1]):
            out = self.compose(m, out)
        return out

    def is_identity(self, m) -> bool:
        return m in self._idset

    def non_identities(self) -> tuple:
        return tuple(m for m in self.morphisms if m not in self._idset)

    @property
    def is_posetal(self) -> bool:
        return all(len(v) <= 1 for v in self._homs.values())

    def is_iso(self, m) -> bool:
        return any(self.comp.get((m, k)) == self.identity[self.src[m]]
                   and self.comp.get((k, m)) == self.identity[self.tgt[m]]
                   for k in self.hom(self.tgt[m], self.src[m]))

    def to_preorder(self, quotient=False) -> FinPoset:
        pairs = [(self.src[m], self.tgt[m]) for m in self.morphisms]
        return FinPoset(self.objects, pairs, quotient=quotient, name=self.name)

    @classmethod
    def from_poset(cls, poset: FinPoset, name=None) -> "FinCategory":
        elems = poset.elements()
        mors = [((x, y), x, y) for x in elems for y in elems if poset.leq(x, y) and x != y]
        ids = {x: (x, x) for x in elems}
        comp = {}
        for (f, x, y) in mors:
            for (g, y2, z) in mors:
                if y2 == y:
                    comp[g, f] = (x, z) if x != z else (x, x)
        return cls(elems, mors, comp, ids, name=name or poset.name)

    def opposite(self) -> "FinCategory":
        mors = [(m, self.tgt[m], self.src[m]) for m in self.non_identities()]
        comp = {(f, g): h for (g, f), h in self.comp.items()
                if not self.is_identity(g) and not self.is_identity(f)}
        return FinCategory(self.objects, mors, comp, self.identity,
                           name=f"{self.name}^op" if self.name else None)

    def to_json(self):
        return {
            "objects": list(self.objects),
            "identities": {str(x): i for x, i in self.identity.items()},
            "morphisms": [{"id": m, "src": self.src[m], "tgt": self.tgt[m]} for m in self.non_identities()],
            "compose": [[g, f, h] for (g, f), h in sorted(self.comp.items(), key=repr)
                        if not self.is_identity(g) and not self.is_identity(f)],
        }

    def __repr__(self):
        return self.name or f"FinCategory({len(self.objects)} objects, {len(self.morphisms)} morphisms)"

    def key(self):
        return (self.objects, tuple((m, self.src[m], self.tgt[m]) for m in self.morphisms),
                tuple(sorted(self.comp.items(), key=repr)))

    def __eq__(self, other):
        return isinstance(other, FinCategory) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def validate_category(c: FinCategory) -> ValidationReport:
    """List every violated identity or associativity instance."""
    rep = ValidationReport()
    for m in c.morphisms:
        if c.compose(c.identity[c.tgt[m]], m) != m:
            rep.violations.append(("left_identity", m))
        if c.compose(m, c.identity[c.src[m]]) != m:
            rep.violations.append(("right_identity", m))
    for f in c.morphisms:
        for g in c.morphisms:
            if c.tgt[f] != c.src[g]:
                continue
            gf = c.comp[g, f]
            for h in c.morphisms:
                if c.tgt[g] != c.src[h]:
                    continue
                if c.comp[h, gf] != c.comp[c.comp[h, g], f]:
                    rep.violations.append(("associativity", (h, g, f)))
    return rep


class Functor:
    """A functor between finite categories given by object and morphism maps."""

    def __init__(self, source: FinCategory, target: FinCategory, obj_map: dict, mor_map: dict | None = None,
                 name=None):
        self.source, self.target = source, target
        self.obj_map = dict(obj_map)
        mor_map = dict(mor_map or {})
        for x in source.objects:
            if x not in self.obj_map:
                raise StructuralError(f"functor object map misses {x!r}")
            if self.obj_map[x] not in target.objects:
                raise StructuralError(f"functor sends {x!r} to unknown object {self.obj_map[x]!r}")
            mor_map.setdefault(source.identity[x], target.identity[self.obj_map[x]])
        for m in source.morphisms:
            if m not in mor_map:
                # posetal targets force the image
                hs = target.hom(self.obj_map[source.src[m]], self.obj_map[source.tgt[m]])
                if len(hs) == 1:
                    mor_map[m] = hs[0]
                else:
                    raise StructuralError(f"functor morphism map misses {m!r}")
            if mor_map[m] not in target.src:
                raise StructuralError(f"functor sends {m!r} to unknown morphism {mor_map[m]!r}")
        self.mor_map = mor_map
        self.name = name

    def __call__(self, x):
        return self.obj_map[x]

    def fmap(self, m):
        return self.mor_map[m]

    def violations(self) -> list:
        s, t = self.source, self.target
        out = []
        for m in s.morphisms:
            fm = self.mor_map[m]
            if t.src[fm] != self.obj_map[s.src[m]] or t.tgt[fm] != self.obj_map[s.tgt[m]]:
                out.append(("endpoints", m))
        for x in s.objects:
            if self.mor_map[s.identity[x]] != t.identity[self.obj_map[x]]:
                out.append(("identity", x))
        for (g, f), h in s.comp.items():
            if out:
                break
            if t.compose(self.mor_map[g], self.mor_map[f]) != self.mor_map[h]:
                out.append(("composition", (g, f)))
        return out

    def is_valid(self) -> bool:
        return not self.violations()

    def then(self, other: "Functor") -> "Functor":
        """other after self."""
        return Functor(self.source, other.target,
                       {x: other.obj_map[self.obj_map[x]] for x in self.source.objects},
                       {m: other.mor_map[self.mor_map[m]] for m in self.source.morphisms})

    @classmethod
    def identity(cls, c: FinCategory) -> "Functor":
        return cls(c, c, {x: x for x in c.objects}, {m: m for m in c.morphisms}, name="id")

    def to_json(self):
        return {"obj_map": {str(k): v for k, v in self.obj_map.items()},
                "mor_map": {str(k): v for k, v in self.mor_map.items()
                            if not self.source.is_identity(k)}}

    def __repr__(self):
        return self.name or f"Functor({self.source!r} -> {self.target!r})"


def all_functors(source: FinCategory, target: FinCategory):
    """Enumerate every functor source -> target (object maps, then morphism choices)."""
    nonid = source.non_identities()
    for images in itertools.product(target.objects, repeat=len(source.objects)):
        om = dict(zip(source.objects, images))
        choices = [target.hom(om[source.src[m]], om[source.tgt[m]]) for m in nonid]
        if any(not c for c in choices):
            continue
        for pick in itertools.product(*choices):
            mm = dict(zip(nonid, pick))
            for x in source.objects:
                mm[source.identity[x]] = target.identity[om[x]]
            ok = True
            for (g, f), h in source.comp.items():
                if target.comp[mm[g], mm[f]] != mm[h]:
                    ok = False
                    break
            if ok:
                yield Functor(source, target, om, mm)


@dataclass
class TwoCell:
    """A natural transformation between parallel functors.

    When the target category is posetal the components are forced; pass
    ``components=None`` to have them filled in.
    """

    source_1cell: Functor
    target_1cell: Functor
    components: dict | None = None

    def __post_init__(self):
        F, G = self.source_1cell, self.target_1cell
        if F.source is not G.source and F.source != G.source:
            raise StructuralError("2-cell between non-parallel functors")
        D = F.target
        if self.components is None:
            comps = {}
            for x in F.source.objects:
                hs = D.hom(F(x), G(x))
                if len(hs) != 1:
                    raise StructuralError(f"no forced component at {x!r}")
                comps[x] = hs[0]
            self.components = comps
        self.posetal_flag = D.is_posetal

    def naturality_violations(self) -> list:
        F, G = self.source_1cell, self.target_1cell
        C, D = F.source, F.target
        out = []
        for x in C.objects:
            c = self.components[x]
            if D.src[c] != F(x) or D.tgt[c] != G(x):
                out.append(("component", x))
        if out:
            return out
        for m in C.morphisms:
            x, y = C.src[m], C.tgt[m]
            if D.compose(self.components[y], F.fmap(m)) != D.compose(G.fmap(m), self.components[x]):
                out.append(("naturality", m))
        return out


@dataclass(frozen=True)
class FinSetObj:
    carrier: tuple

    def __post_init__(self):
        if len(set(self.carrier)) != len(self.carrier):
            raise StructuralError("finite set with repeated elements")

    def __len__(self):
        return len(self.carrier)

    def __iter__(self):
        return iter(self.carrier)


@dataclass(frozen=True)
class PullbackCone:
    apex: Hashable
    left: Hashable   # apex -> source of f
    right: Hashable  # apex -> source of g


def cones(c: FinCategory, f, g) -> list:
    if c.tgt[f] != c.tgt[g]:
        raise PreconditionError(f"({f!r}, {g!r}) is not a cospan")
    out = []
    for p_obj in c.objects:
        for p in c.hom(p_obj, c.src[f]):
            fp = c.compose(f, p)
            for q in c.hom(p_obj, c.src[g]):
                if c.compose(g, q) == fp:
                    out.append(PullbackCone(p_obj, p, q))
    return out


def mediating_morphisms(c: FinCategory, into: PullbackCone, frm: PullbackCone) -> list:
    return [u for u in c.hom(frm.apex, into.apex)
            if c.compose(into.left, u) == frm.left and c.compose(into.right, u) == frm.right]


def pullback(c: FinCategory, f, g) -> PullbackCone | None:
    """The first terminal cone over the cospan f, g (canonical order), or None."""
    cs = cones(c, f, g)
    for cand in cs:
        if all(len(mediating_morphisms(c, cand, other)) == 1 for other in cs):
            return cand
    return None


def cone_isomorphism(c: FinCategory, a: PullbackCone, b: PullbackCone):
    """An invertible cone morphism a -> b, or None."""
    for u in mediating_morphisms(c, b, a):
        for v in mediating_morphisms(c, a, b):
            if c.compose(v, u) == c.identity[a.apex] and c.compose(u, v) == c.identity[b.apex]:
                return u
    return None


class UnionFind:
    def __init__(self, items=()):
        self.parent = {}
        for x in items:
            self.parent[x] = x

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


class Weight:
    """A finite-set valued functor a^op x a -> FinSet.

    ``at(x, y)`` lists the elements; ``contra(f, y, e)`` sends e in w(x', y)
    to w(x, y) for f: x -> x'; ``co(f, x, e)`` sends e in w(x, y) to
    w(x, y') for f: y -> y'.
    """

    def __init__(self, at: Callable, contra: Callable, co: Callable):
        self.at, self.contra, self.co = at, contra, co


def weight_functoriality_violation(a: FinCategory, w: Weight):
    for x in a.objects:
        for y in a.objects:
            for e in w.at(x, y):
                if w.contra(a.identity[x], y, e) != e or w.co(a.identity[y], x, e) != e:
                    return ("identity", x, y, e)
    for (g, f), h in a.comp.items():
        # f: x -> x', g: x' -> x''
        x, x2 = a.src[f], a.tgt[g]
        for y in a.objects:
            for e in w.at(x2, y):
                if w.contra(h, y, e) != w.contra(f, y, w.contra(g, y, e)):
                    return ("contravariant", (g, f), y, e)
            for e in w.at(y, x):
                if w.co(h, y, e) != w.co(g, y, w.co(f, y, e)):
                    return ("covariant", (g, f), y, e)
    for f in a.morphisms:
        for k in a.morphisms:
            # f: x -> x' acts contravariantly, k: y -> y' covariantly on w(x', y)
            x2, y = a.tgt[f], a.src[k]
            for e in w.at(x2, y):
                if w.co(k, a.src[f], w.contra(f, y, e)) != w.contra(f, a.tgt[k], w.co(k, x2, e)):
                    return ("bifunctor", (f, k), e)
    return None


@dataclass
class CoendResult:
    carrier: FinSetObj
    projection: dict     # (x, e) -> class index
    representatives: tuple


def coend(a: FinCategory, w: Weight, check: bool = True) -> CoendResult:
    """Coequalizer of sum_{f: x -> x'} w(x', x) => sum_x w(x, x) by union-find."""
    if check:
        bad = weight_functoriality_violation(a, w)
        if bad is not None:
            raise PreconditionError(f"weight is not functorial: {bad!r}")
    uf = UnionFind()
    order = []
    for x in a.objects:
        for e in w.at(x, x):
            uf.add((x, e))
            order.append((x, e))
    for f in a.morphisms:
        x, x2 = a.src[f], a.tgt[f]
        for e in w.at(x2, x):
            uf.union((x, w.contra(f, x, e)), (x2, w.co(f, x2, e)))
    classes = {}
    reps = []
    projection = {}
    for item in order:
        r = uf.find(item)
        if r not in classes:
            classes[r] = len(reps)
            reps.append(item)
        projection[item] = classes[r]
    return CoendResult(FinSetObj(tuple(range(len(reps)))), projection, tuple(reps))
