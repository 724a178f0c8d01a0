"""Bounded family constructions and the multiadjoint check.

Objects of fam_sigma(a, bound) are tuples of objects of a of length at most
``bound``.  A morphism X -> Y is a reindexing i together with maps
x_j -> y_{i(j)}.  fam_pi is the dual construction, with the reindexing
running backwards and maps x_{i(k)} -> y_k.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .core2cat import FinCategory, Functor, UnionFind
from .errors import PreconditionError


def _families(a: FinCategory, bound: int) -> list:
    out = []
    for n in range(bound + 1):
        out.extend(itertools.product(a.objects, repeat=n))
    return out


def _fam(a: FinCategory, bound: int, dual: bool, name: str) -> FinCategory:
    if bound < 1:
        raise PreconditionError("family bound must be at least 1")
    objs = _families(a, bound)
    mors, ids = [], {}
    for X in objs:
        for Y in objs:
            n, m = (len(Y), len(X)) if dual else (len(X), len(Y))
            for i in itertools.product(range(m), repeat=n):
                if dual:
                    homs = [a.hom(X[i[k]], Y[k]) for k in range(n)]
                else:
                    homs = [a.hom(X[j], Y[i[j]]) for j in range(n)]
                for fs in itertools.product(*homs):
                    mid = (X, Y, i, fs)
                    if X == Y and i == tuple(range(n)) and all(a.is_identity(f) for f in fs):
                        ids[X] = mid
                    else:
                        mors.append((mid, X, Y))
    comp = {}
    allm = [(mid, mid[0], mid[1]) for mid in ids.values()] + mors
    by_src: dict = {}
    for m in allm:
        by_src.setdefault(m[1], []).append(m)
    for (f, X, Y) in allm:
        for (g, _, Z) in by_src.get(Y, ()):
            if g in ids.values() or f in ids.values():
                continue
            comp[g, f] = _compose(a, g, f, dual, ids)
    return FinCategory(objs, mors, comp, ids, name=name)


def _compose(a, g, f, dual, ids):
    X, Y, i, fs = f
    _, Z, k, gs = g
    if dual:
        # f: i maps indices of Y to X, g: k maps indices of Z to Y
        idx = tuple(i[k[c]] for c in range(len(Z)))
        maps = tuple(a.compose(gs[c], fs[k[c]]) for c in range(len(Z)))
    else:
        idx = tuple(k[i[j]] for j in range(len(X)))
        maps = tuple(a.compose(gs[i[j]], fs[j]) for j in range(len(X)))
    mid = (X, Z, idx, maps)
    if X == Z and idx == tuple(range(len(X))) and all(a.is_identity(h) for h in maps):
        return ids[X]
    return mid


@lru_cache(maxsize=256)
def fam_sigma(a: FinCategory, bound: int = 2) -> FinCategory:
    return _fam(a, bound, False, f"FamS({a!r},{bound})")


@lru_cache(maxsize=256)
def fam_pi(a: FinCategory, bound: int = 2) -> FinCategory:
    return _fam(a, bound, True, f"FamP({a!r},{bound})")


def fam_functor(l: Functor, source: FinCategory, target: FinCategory) -> Functor:
    """Apply l entrywise between two family categories built with the same bound."""
    om = {X: tuple(l(x) for x in X) for X in source.objects}
    mm = {}
    for m in source.morphisms:
        X, Y, i, fs = m
        img = (om[X], om[Y], i, tuple(l.fmap(f) for f in fs))
        if img not in target.src:
            img = target.identity[om[X]]
        mm[m] = img
    return Functor(source, target, om, mm, name=f"Fam({l!r})")


# the multiadjoint condition


@dataclass
class MultiadjointResult:
    status: str                                   # multiadjoint | not | inconclusive
    families: dict = field(default_factory=dict)  # target object -> [(object, morphism)]
    reason: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "multiadjoint"


def comma_objects(l: Functor, z) -> list:
    """Objects (x, g: l x -> z)."""
    return [(x, g) for x in l.source.objects for g in l.target.hom(l(x), z)]


def comma_morphisms(l: Functor, u, v) -> list:
    """Maps h: u -> v in the source with v.g . l(h) = u.g."""
    (x, g), (x2, g2) = u, v
    B = l.target
    return [h for h in l.source.hom(x, x2) if B.compose(g2, l.fmap(h)) == g]


def check_left_multiadjoint(l: Functor, bound: int | None = 2) -> MultiadjointResult:
    """Every component of every comma category l|z has a terminal object.

    With a bound, targets needing more universal family members than the
    bound are reported as inconclusive (the witness is not expressible).
    """
    families = {}
    too_big = None
    for z in l.target.objects:
        objs = comma_objects(l, z)
        uf = UnionFind(objs)
        homs = {}
        for u in objs:
            for v in objs:
                hs = comma_morphisms(l, u, v)
                homs[u, v] = hs
                if hs:
                    uf.union(u, v)
        comps: dict = {}
        for u in objs:
            comps.setdefault(uf.find(u), []).append(u)
        fam = []
        for members in sorted(comps.values(), key=repr):
            term = [t for t in members if all(len(homs[u, t]) == 1 for u in members)]
            if not term:
                return MultiadjointResult("not", reason=f"a component over {z!r} has no terminal object")
            fam.append(sorted(term, key=repr)[0])
        if bound is not None and len(fam) > bound and too_big is None:
            too_big = z
        families[z] = fam
    if too_big is not None:
        return MultiadjointResult("inconclusive", families,
                                  f"universal family over {too_big!r} exceeds the bound {bound}")
    return MultiadjointResult("multiadjoint", families)


def brute_force_right_adjoint(l: Functor, bound: int = 2) -> dict | None:
    """Terminal objects of Fam(l) | [z] for every z, searched in the bounded family categories.

    Returns z -> terminal (family, morphism) or None when some z has none.
    """
    FA, FB = fam_sigma(l.source, bound), fam_sigma(l.target, bound)
    Fl = fam_functor(l, FA, FB)
    out = {}
    for z in l.target.objects:
        Z = (z,)
        objs = [(X, phi) for X in FA.objects for phi in FB.hom(Fl(X), Z)]

        def maps(u, v):
            (X, phi), (Y, psi) = u, v
            return [k for k in FA.hom(X, Y) if FB.compose(psi, Fl.fmap(k)) == phi]

        term = [t for t in objs if all(len(maps(u, t)) == 1 for u in objs)]
        if not term:
            return None
        out[z] = term[0]
    return out


def fam_pi_functor(l: Functor, bound: int = 2) -> Functor:
    FA, FB = fam_pi(l.source, bound), fam_pi(l.target, bound)
    return fam_functor(l, FA, FB)
