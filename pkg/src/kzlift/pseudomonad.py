"""Pseudomonads on posets, their algebras, morphisms and T-transformations.

Everything here lives in the locally posetal setting: coherence cells are
order relations, so each axiom is an equality (or inequality) of monotone
maps checked pointwise.  The list monad acts on structural posets of lists;
equations are checked on the bounded fragment of lists whose length and
leaf count are at most the monad's ``bound``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import reduce

from .errors import ConfigurationError, InconsistencyError, PreconditionError, StructuralError
from .poset import (Cell, Certificate, FinPoset, Map, Poset, absolute_lifting_violation,
                    certify_left_extension, first_difference, first_leq_violation, is_join_lattice,
                    monotone_maps)
from .report import Report


class ListPoset(Poset):
    """Finite lists over a base poset; comparable only at equal length, pointwise."""

    finite = False

    def __init__(self, base: Poset, bound: int):
        self.base = base
        self.bound = bound
        self.name = f"T({base!r})"
        self._leq_cache: dict = {}

    def _key(self):
        return ("T", self.base.key(), self.bound)

    def __contains__(self, x):
        return isinstance(x, tuple) and all(e in self.base for e in x)

    def leq(self, x, y) -> bool:
        if len(x) != len(y):
            return False
        try:
            return self._leq_cache[x, y]
        except KeyError:
            bl = self.base.leq
            r = self._leq_cache[x, y] = all(bl(a, b) for a, b in zip(x, y))
            return r

    def leaves(self, x) -> int:
        lv = self.base.leaves
        return sum(lv(e) for e in x)

    def _enumerate(self):
        base = [(e, self.base.leaves(e)) for e in self.base.elements()]
        out = []

        def rec(prefix, budget):
            out.append(tuple(prefix))
            if len(prefix) == self.bound:
                return
            for e, w in base:
                if w <= budget:
                    prefix.append(e)
                    rec(prefix, budget - w)
                    prefix.pop()

        rec([], self.bound)
        return sorted(out, key=lambda l: (len(l), self.leaves(l)))

    def of_length(self, n: int) -> list:
        return [l for l in self.elements() if len(l) == n]


class Pseudomonad:
    """A pseudomonad on posets; coherence witnesses are implicit order relations."""

    name = "monad"
    regime = "posetal"

    def T(self, A: Poset) -> Poset:
        raise NotImplementedError

    def fmap(self, f: Map) -> Map:
        raise NotImplementedError

    def unit(self, A: Poset) -> Map:
        raise NotImplementedError

    def mult(self, A: Poset) -> Map:
        raise NotImplementedError

    def points(self, A: Poset, depth: int = 1) -> tuple:
        """The enumerated fragment of T^depth A."""
        X = A
        for _ in range(depth):
            X = self.T(X)
        return X.elements()

    def __repr__(self):
        return self.name


class IdentityMonad(Pseudomonad):
    name = "identity"

    def T(self, A):
        return A

    def fmap(self, f):
        return f

    def unit(self, A):
        return Map.identity(A, "u")

    def mult(self, A):
        return Map.identity(A, "m")


class ListMonad(Pseudomonad):
    """Free monoid monad on posets, checked on the fragment of lists of size <= bound."""

    name = "list"

    def __init__(self, bound: int = 2):
        if bound < 1:
            raise ConfigurationError("list monad bound must be at least 1")
        self.bound = bound
        self._T: dict = {}
        self._u: dict = {}
        self._m: dict = {}

    def T(self, A):
        try:
            return self._T[A]
        except KeyError:
            TA = ListPoset(A, self.bound)
            self._T[A] = TA
            return TA

    def fmap(self, f):
        return Map(self.T(f.dom), self.T(f.cod), lambda l: tuple(f(e) for e in l),
                   f"T{f.name}" if f.name else None)

    def unit(self, A):
        try:
            return self._u[A]
        except KeyError:
            u = Map(A, self.T(A), lambda a: (a,), "u")
            self._u[A] = u
            return u

    def _concat(self, ls):
        return tuple(itertools.chain.from_iterable(ls))

    def mult(self, A):
        try:
            return self._m[A]
        except KeyError:
            m = Map(self.T(self.T(A)), self.T(A), self._concat, "m")
            self._m[A] = m
            return m


class ReversedListMonad(ListMonad):
    """List monad with multiplication replaced by concatenation in reverse order."""

    name = "list-reversed"

    def _concat(self, ls):
        return tuple(itertools.chain.from_iterable(reversed(ls)))


def monad_by_name(name: str, bound: int = 2) -> Pseudomonad:
    if name == "identity":
        return IdentityMonad()
    if name == "list":
        return ListMonad(bound)
    if name == "list-reversed":
        return ReversedListMonad(bound)
    raise ConfigurationError(f"unknown monad {name!r} for posets; choose identity, list or list-reversed")


def check_pseudomonad_axioms(t: Pseudomonad, corpus, maps=None) -> Report:
    """Unit and associativity laws, naturality, and the coherence consequences."""
    if t.regime != "posetal" and not getattr(t, "witnesses", None):
        raise StructuralError("finite-Cat pseudomonads need explicit coherence witnesses")
    rep = Report()
    for A in corpus:
        inst = repr(A)
        TA = t.T(A)
        u, m = t.unit, t.mult
        ta = TA.elements()
        ident = Map.identity(TA)
        d1 = first_difference(m(A) @ u(TA), ident, ta)
        d2 = first_difference(m(A) @ t.fmap(u(A)), ident, ta)
        rep.add("unit_left", d1 is None, inst, _cx(d1))
        rep.add("unit_right", d2 is None, inst, _cx(d2))
        tta = t.points(A, 3)
        d3 = first_difference(m(A) @ t.fmap(m(A)), m(A) @ m(TA), tta)
        rep.add("associativity", d3 is None, inst, _cx(d3))
        # coherence axioms relate the three cells; posetally they hold once the cells exist
        rep.add("coherence_unit", d1 is None and d2 is None, inst)
        rep.add("coherence_associativity", d3 is None and d1 is None and d2 is None, inst)
        d4 = first_difference(u(TA) @ u(A), t.fmap(u(A)) @ u(A))
        rep.add("coherence_consequence", d4 is None and d1 is None and d2 is None, inst, _cx(d4))
    for f in maps or ():
        A, B = f.dom, f.cod
        inst = repr(f)
        d = first_difference(t.fmap(f) @ t.unit(A), t.unit(B) @ f)
        rep.add("unit_natural", d is None, inst, _cx(d))
        d = first_difference(t.fmap(f) @ t.mult(A), t.mult(B) @ t.fmap(t.fmap(f)), t.points(A, 2))
        rep.add("multiplication_natural", d is None, inst, _cx(d))
    return rep


def _cx(point):
    return None if point is None else {"at": point}


# algebras and morphisms


@dataclass
class Algebra:
    carrier: Poset
    structure: Map
    name: str = ""

    def __repr__(self):
        return self.name or f"Algebra({self.carrier!r})"


def free_algebra(t: Pseudomonad, A: Poset) -> Algebra:
    return Algebra(t.T(A), t.mult(A), f"free({A!r})")


def monoid_algebra(t: Pseudomonad, carrier: Poset, mul, unit, name: str = "") -> Algebra:
    """A monotone monoid as an algebra: lists are sent to iterated products."""
    if isinstance(t, IdentityMonad):
        return Algebra(carrier, Map.identity(carrier), name)
    TA = t.T(carrier)
    table = mul if callable(mul) else (lambda a, b: mul[a, b])
    return Algebra(carrier, Map(TA, carrier, lambda l: reduce(table, l, unit), "x"), name)


def check_algebra(t: Pseudomonad, alg: Algebra) -> Report:
    rep = Report()
    A = alg.carrier
    x = alg.structure
    inst = repr(alg)
    if x.dom != t.T(A) or x.cod != A:
        raise StructuralError(f"structure map of {alg!r} has the wrong type")
    ta = t.points(A, 1)
    mv = x.monotonicity_violation(ta)
    rep.add("structure_monotone", mv is None, inst, None if mv is None else {"pair": mv})
    d = first_difference(x @ t.unit(A), Map.identity(A))
    rep.add("unit_axiom", d is None, inst, _cx(d))
    tta = t.points(A, 2)
    d = first_difference(x @ t.fmap(x), x @ t.mult(A), tta)
    rep.add("associativity_axiom", d is None, inst, _cx(d))
    return rep


def algebra_ok(t, alg) -> bool:
    return check_algebra(t, alg).ok


KINDS = ("lax", "oplax", "pseudo")


@dataclass
class MorphismData:
    """An algebra morphism (L, cell).

    For ``oplax`` the cell is L.x => y.TL, for ``lax`` it is y.TL => L.x,
    and ``pseudo`` stores the oplax orientation with equality required.
    """

    functor: Map
    source: Algebra
    target: Algebra
    kind: str
    cell: Cell | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise StructuralError(f"unknown morphism kind {self.kind!r}")


def oplax_boundary(t, L, src: Algebra, tgt: Algebra) -> Cell:
    return Cell(L @ src.structure, tgt.structure @ t.fmap(L))


def lax_boundary(t, L, src: Algebra, tgt: Algebra) -> Cell:
    return Cell(tgt.structure @ t.fmap(L), L @ src.structure)


def make_morphism(t, L: Map, src: Algebra, tgt: Algebra, kind: str) -> MorphismData:
    cell = lax_boundary(t, L, src, tgt) if kind == "lax" else oplax_boundary(t, L, src, tgt)
    return MorphismData(L, src, tgt, kind, cell)


def identity_morphism(t, alg: Algebra) -> MorphismData:
    return make_morphism(t, Map.identity(alg.carrier), alg, alg, "pseudo")


def check_morphism(t: Pseudomonad, mor: MorphismData) -> Report:
    rep = Report()
    L, src, tgt = mor.functor, mor.source, mor.target
    inst = repr(L)
    if L.dom != src.carrier or L.cod != tgt.carrier:
        raise StructuralError("morphism functor does not match the algebra carriers")
    if mor.cell is None:
        raise StructuralError("morphism without a structure cell")
    pts = t.points(src.carrier, 1)
    expected = lax_boundary(t, L, src, tgt) if mor.kind == "lax" else oplax_boundary(t, L, src, tgt)
    same = (first_difference(mor.cell.source, expected.source, pts) is None
            and first_difference(mor.cell.target, expected.target, pts) is None)
    rep.add("cell_boundary", same, inst)
    v = mor.cell.violation(pts)
    rep.add("cell_exists", v is None, inst, _cx(v))
    if mor.kind == "pseudo":
        d = first_difference(mor.cell.source, mor.cell.target, pts)
        rep.add("cell_invertible", d is None, inst, _cx(d))
    # unit and multiplication coherence are equations between order relations
    rep.add("unit_coherence", v is None and same, inst)
    rep.add("multiplication_coherence", v is None and same, inst)
    return rep


def morphism_structure_exists(t, L, src, tgt, kind) -> bool:
    pts = t.points(src.carrier, 1)
    if kind == "oplax":
        return oplax_boundary(t, L, src, tgt).holds(pts)
    if kind == "lax":
        return lax_boundary(t, L, src, tgt).holds(pts)
    return oplax_boundary(t, L, src, tgt).invertible(pts)


def _as(mor: MorphismData, kind: str) -> bool:
    return mor.kind == kind or mor.kind == "pseudo"


@dataclass
class TTransformation:
    """A square with oplax verticals, lax horizontals and a cell I.M => R.N.

    left = (N, phi): D -> B, right = (I, xi): A -> C,
    top = (R, beta): B -> C, bottom = (M, eps): D -> A.
    """

    left: MorphismData
    right: MorphismData
    top: MorphismData
    bottom: MorphismData
    cell: Cell


def check_t_transformation(t: Pseudomonad, sq: TTransformation) -> Report:
    rep = Report()
    ok_kinds = _as(sq.left, "oplax") and _as(sq.right, "oplax") and _as(sq.top, "lax") and _as(sq.bottom, "lax")
    rep.add("boundary_kinds", ok_kinds, "square")
    for name, mor in (("left", sq.left), ("right", sq.right), ("top", sq.top), ("bottom", sq.bottom)):
        rep.add(f"{name}_morphism", check_morphism(t, mor).ok, "square")
    D = sq.bottom.functor.dom
    IM = sq.right.functor @ sq.bottom.functor
    RN = sq.top.functor @ sq.left.functor
    same = (first_difference(sq.cell.source, IM) is None and first_difference(sq.cell.target, RN) is None)
    rep.add("cell_boundary", same, "square")
    v = sq.cell.violation(D.elements())
    rep.add("cell_exists", v is None, "square", _cx(v))
    # the cube condition equates two pastings of order relations with equal boundary
    rep.add("cube", v is None and same, "square")
    return rep


# left extensions, preservation and induced structures


@dataclass
class LeftExtension:
    """R is asserted to be a left extension of I along L, with cell I <= R.L."""

    R: Map
    I: Map
    L: Map

    @property
    def cell(self) -> Cell:
        return Cell(self.I, self.R @ self.L)

    def certify(self, method="auto") -> Certificate:
        return certify_left_extension(self.R, self.I, self.L, method=method)


def check_t_preserves_extension(t: Pseudomonad, z: Map, ext: LeftExtension) -> Certificate:
    """z.TR is a left extension of z.TI along TL (pointwise join formula)."""
    TR, TI, TL = t.fmap(ext.R), t.fmap(ext.I), t.fmap(ext.L)
    if z.dom != TR.cod:
        raise PreconditionError("z does not start at T of the extension's target")
    if not is_join_lattice(z.cod):
        raise PreconditionError(f"{z.cod!r} carries no join certificate")
    return certify_left_extension(z @ TR, z @ TI, TL, method="pointwise")


def induced_lax_on_left_extension(t: Pseudomonad, ext: LeftExtension, sigma: MorphismData,
                                  alpha: MorphismData, certificates=None) -> MorphismData:
    """The lax structure on R making the extension cell a T-transformation.

    sigma is lax on I: (A,x) -> (C,z), alpha is oplax on L: (A,x) -> (B,y).
    The cell z.TR => R.y exists iff z.TI <= R.y.TL, and that inequality is
    the pasting of sigma, the extension cell and alpha.
    """
    if not (_as(sigma, "lax") and _as(alpha, "oplax")):
        raise PreconditionError("need a lax structure on I and an oplax structure on L")
    Aalg, Calg, Balg = sigma.source, sigma.target, alpha.target
    R, I, L = ext.R, ext.I, ext.L
    z, y, x = Calg.structure, Balg.structure, Aalg.structure
    if certificates is None:
        c_ext = ext.certify()
        c1 = check_t_preserves_extension(t, z, ext)
        c2 = check_t_preserves_extension(t, z, LeftExtension(z @ t.fmap(R), z @ t.fmap(I), t.fmap(L)))
        certificates = (c_ext, c1, c2)
    for c in certificates:
        if not c:
            raise PreconditionError(f"extension or preservation certificate failed: {c}")
    ta = t.points(Aalg.carrier, 1)
    trace = []
    steps = [("sigma", z @ t.fmap(I), I @ x), ("cell.x", I @ x, R @ L @ x),
             ("R.alpha", R @ L @ x, R @ y @ t.fmap(L))]
    for label, lo, hi in steps:
        v = first_leq_violation(lo, hi, ta)
        trace.append((label, v))
        if v is not None:
            raise InconsistencyError(f"pasting step {label} fails at {v!r}", trace)
    beta = Cell(z @ t.fmap(R), R @ y)
    v = beta.violation(t.points(Balg.carrier, 1))
    trace.append(("beta", v))
    if v is not None:
        raise InconsistencyError("no lax structure satisfies the defining equation", trace)
    return MorphismData(R, Balg, Calg, "lax", beta)


@dataclass
class PartialAdjunction:
    """I <= R.L exhibiting L as an absolute left lifting of I through R."""

    L: Map
    I: Map
    R: Map

    def violation(self, a_points=None, b_points=None):
        return absolute_lifting_violation(self.L, self.I, self.R, a_points, b_points)


def induced_oplax_on_partial_adjoint(t: Pseudomonad, padj: PartialAdjunction, xi: MorphismData,
                                     beta: MorphismData) -> MorphismData:
    """The oplax structure on L making the lifting cell a T-transformation.

    xi is oplax on I: (A,x) -> (C,z), beta is lax on R: (B,y) -> (C,z).
    """
    if not (_as(xi, "oplax") and _as(beta, "lax")):
        raise PreconditionError("need an oplax structure on I and a lax structure on R")
    Aalg, Balg, Calg = xi.source, beta.source, xi.target
    L, I, R = padj.L, padj.I, padj.R
    x, y, z = Aalg.structure, Balg.structure, Calg.structure
    bad = padj.violation()
    if bad is not None:
        raise PreconditionError(f"not an absolute left lifting: {bad!r}")
    ta = t.points(Aalg.carrier, 1)
    TL = t.fmap(L)
    trace = []
    steps = [("xi", I @ x, z @ t.fmap(I)), ("T cell", z @ t.fmap(I), z @ t.fmap(R) @ TL),
             ("beta.TL", z @ t.fmap(R) @ TL, R @ y @ TL)]
    for label, lo, hi in steps:
        v = first_leq_violation(lo, hi, ta)
        trace.append((label, v))
        if v is not None:
            raise InconsistencyError(f"pasting step {label} fails at {v!r}", trace)
    alpha = Cell(L @ x, y @ TL)
    v = alpha.violation(ta)
    trace.append(("alpha", v))
    if v is not None:
        raise InconsistencyError("no oplax structure satisfies the defining equation", trace)
    return MorphismData(L, Aalg, Balg, "oplax", alpha)


def candidate_cells(source: Map, target: Map, points=None) -> list:
    """All 2-cells source => target: at most one in the posetal setting."""
    c = Cell(source, target)
    return [c] if c.holds(points) else []


# monoid corpus


def monotone_monoids(P: FinPoset, limit: int | None = None) -> list:
    """Every (mul, unit) making P an ordered monoid, in canonical order."""
    elems = P.elements()
    n = len(elems)
    if n == 0:
        return []
    pairs = [(a, b) for a in elems for b in elems]
    out = []
    for e in elems:
        table = {}
        for a in elems:
            table[e, a] = a
            table[a, e] = a
        free = [pr for pr in pairs if pr not in table]

        def rec(k):
            if k == len(free):
                if _assoc(table, elems) and _monotone_op(table, P):
                    out.append((dict(table), e))
                return
            a, b = free[k]
            for v in elems:
                table[a, b] = v
                if _partial_monotone(table, P, a, b):
                    rec(k + 1)
            del table[a, b]

        rec(0)
        if limit is not None and len(out) >= limit:
            break
    return out


def _assoc(table, elems) -> bool:
    return all(table[table[a, b], c] == table[a, table[b, c]] for a in elems for b in elems for c in elems)


def _monotone_op(table, P) -> bool:
    elems = P.elements()
    for a in elems:
        for a2 in elems:
            if not P.leq(a, a2):
                continue
            for b in elems:
                if not P.leq(table[a, b], table[a2, b]) or not P.leq(table[b, a], table[b, a2]):
                    return False
    return True


def _partial_monotone(table, P, a, b) -> bool:
    v = table[a, b]
    for (c, d), w in table.items():
        if P.leq(a, c) and P.leq(b, d) and not P.leq(v, w):
            return False
        if P.leq(c, a) and P.leq(d, b) and not P.leq(w, v):
            return False
    return True
