"""Structures on admissible maps: oplax on L versus lax on R_L.

For an admissible L: A -> B the admissibility witness gives R_L = res.y_B
and phi_L: y_A <= R_L.L, which is both a left extension and an absolute
left lifting.  Oplax structures on L and lax structures on R_L determine
each other through phi_L.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

from .distlaw import LambdaFamily, day_convolution
from .errors import InconsistencyError, PreconditionError
from .kzdoctrine import Doctrine, check_admissible, check_p_fully_faithful, _sampled
from .poset import (Cell, Certificate, FinPoset, Map, absolute_lifting_violation, certify_left_extension,
                    first_difference, first_leq_violation, is_join_lattice, monotone_maps)
from .pseudomonad import (Algebra, LeftExtension, MorphismData, PartialAdjunction, Pseudomonad,
                          check_morphism, induced_lax_on_left_extension, induced_oplax_on_partial_adjoint,
                          lax_boundary, oplax_boundary)
from .report import Report


@dataclass
class YonedaDiagram:
    L: Map
    R: Map
    phi: Cell
    extension: Certificate
    lifting_violation: object

    @property
    def ok(self) -> bool:
        return self.extension.ok and self.lifting_violation is None


def yoneda_diagram(p: Doctrine, L: Map) -> YonedaDiagram:
    w = check_admissible(p, L)
    if w is None:
        raise PreconditionError(f"{L!r} is not admissible")
    yA = p.unit(L.dom)
    if is_join_lattice(w.R.cod):
        ext = certify_left_extension(w.R, yA, L, method="pointwise")
    else:
        ext = _adjoint_extension(w.R, yA, L)
    lift = absolute_lifting_violation(L, yA, w.R)
    return YonedaDiagram(L, w.R, w.phi, ext, lift)


def _adjoint_extension(R, I, L) -> Certificate:
    """With I the identity, I <= R.L is an absolute lifting exactly when L -| R,
    and then R is the left extension of I along L."""
    bad = absolute_lifting_violation(L, I, R)
    return Certificate(bad is None, "adjoint", bad)


# locally fully faithful facts


def check_locally_ff_preservation(t: Pseudomonad, p: Doctrine, lam: LambdaFamily, corpus,
                                  max_maps: int | None = 20) -> Report:
    """(a) T y_A is an order-embedding; (b) T keeps admissible order-embeddings admissible and ff.

    (b) also confirms omega2 for the law at both ends, so a broken law is flagged.
    """
    rep = Report()
    for A in corpus:
        Ty = t.fmap(p.unit(A))
        pts = t.points(A, 1)
        bad = next(((u, v) for u in pts for v in pts
                     if t.T(A).leq(u, v) != Ty.cod.leq(Ty(u), Ty(v))), None)
        rep.add("T_unit_fully_faithful", bad is None, repr(A), None if bad is None else {"pair": bad})
    for A in corpus:
        for B in corpus:
            for L in _sampled(monotone_maps(A, B), max_maps):
                if not check_p_fully_faithful(p, L) or check_admissible(p, L) is None:
                    continue
                inst = f"{A!r} -> {B!r} {L.table()}"
                TL = t.fmap(L)
                adm = check_admissible(p, TL) is not None
                ff = check_p_fully_faithful(p, TL)
                law = all(first_difference(lam(X) @ t.fmap(p.unit(X)), p.unit(t.T(X))) is None for X in (A, B))
                ok = adm and ff and law
                rep.add("T_preserves_admissible_ff", ok, inst,
                        None if ok else {"admissible": adm, "fully_faithful": ff, "law_omega2": law})
    return rep


def reversed_lambda(t, p) -> LambdaFamily:
    """A broken law: entries of each product taken in reverse order."""

    def comp(A):
        PA, TA = p.P(A), t.T(A)
        PTA = p.P(TA)
        return Map(t.T(PA), PTA, lambda l: PTA.normalize(tuple(reversed(w)) for w in itertools.product(*l)),
                   "lam_reversed")

    return LambdaFamily(t, p, comp, "reversed")


# the bijection


@dataclass
class YonedaSetting:
    t: Pseudomonad
    p: Doctrine
    lam: LambdaFamily
    source: Algebra      # (A, x)
    target: Algebra      # (B, r)
    diagram: YonedaDiagram

    @cached_property
    def lifted(self):
        return day_convolution(self.t, self.p, self.lam, self.source)


def yoneda_setting(t, p, lam, src: Algebra, tgt: Algebra, L: Map) -> YonedaSetting:
    if L.dom != src.carrier or L.cod != tgt.carrier:
        raise PreconditionError("L does not run between the algebra carriers")
    return YonedaSetting(t, p, lam, src, tgt, yoneda_diagram(p, L))


def _preservation_certificates(t, z: Map, ext: LeftExtension, diagram: YonedaDiagram):
    if is_join_lattice(z.cod):
        return None  # computed pointwise by the solver
    # along a left adjoint every extension is absolute: certify T L -| T R' on the fragment
    L = ext.L
    TL, TR = t.fmap(L), t.fmap(ext.R)
    ta, tb = TL.dom.elements(), TL.cod.elements()
    c = Certificate(diagram.ok, "adjoint")
    return (c, c, c) if diagram.ok and _t_adjunction_ok(t, diagram, ta, tb) else (Certificate(False, "adjoint"),)


def _t_adjunction_ok(t, diagram, ta, tb) -> bool:
    TL, TR = t.fmap(diagram.L), t.fmap(diagram.R)
    A, B = TL.dom, TL.cod
    return (all(A.leq(a, TR(TL(a))) for a in ta) and all(B.leq(TL(TR(b)), b) for b in tb))


def yoneda_bijection_forward(s: YonedaSetting, alpha: MorphismData) -> MorphismData:
    """Oplax structure on L -> lax structure on R_L into (P A, z_x)."""
    t, lifted = s.t, s.lifted
    d = s.diagram
    unit = lifted.unit_morphism
    ext = LeftExtension(d.R, unit.functor, d.L)
    sigma = MorphismData(unit.functor, s.source, lifted.algebra, "pseudo", unit.cell)
    certs = _preservation_certificates(t, lifted.z, ext, d)
    beta = induced_lax_on_left_extension(t, ext, sigma, alpha, certs)
    return beta


def yoneda_bijection_backward(s: YonedaSetting, beta: MorphismData) -> MorphismData:
    """Lax structure on R_L -> oplax structure on L."""
    t, lifted = s.t, s.lifted
    d = s.diagram
    unit = lifted.unit_morphism
    xi = MorphismData(unit.functor, s.source, lifted.algebra, "pseudo", unit.cell)
    padj = PartialAdjunction(d.L, unit.functor, d.R)
    return induced_oplax_on_partial_adjoint(t, padj, xi, beta)


def same_structure(t, m1: MorphismData, m2: MorphismData) -> bool:
    pts = t.points(m1.source.carrier, 1)
    return (m1.kind == m2.kind and first_difference(m1.functor, m2.functor) is None
            and first_difference(m1.cell.source, m2.cell.source, pts) is None
            and first_difference(m1.cell.target, m2.cell.target, pts) is None)


def check_yoneda_roundtrip(s: YonedaSetting) -> Report:
    """Both directions, round-trips and morphism checks on one instance."""
    t = s.t
    rep = Report()
    L, R = s.diagram.L, s.diagram.R
    lifted = s.lifted.algebra
    inst = f"{s.source!r} -> {s.target!r} {L.table()}"
    oplax_exists = oplax_boundary(t, L, s.source, s.target).holds(t.points(s.source.carrier, 1))
    lax_exists = lax_boundary(t, R, s.target, lifted).holds(t.points(s.target.carrier, 1))
    rep.add("yoneda_diagram", s.diagram.ok, inst)
    rep.add("structures_correspond", oplax_exists == lax_exists, inst,
            None if oplax_exists == lax_exists else {"oplax_on_L": oplax_exists, "lax_on_R": lax_exists})
    if oplax_exists:
        alpha = MorphismData(L, s.source, s.target, "oplax", oplax_boundary(t, L, s.source, s.target))
        try:
            beta = yoneda_bijection_forward(s, alpha)
            back = yoneda_bijection_backward(s, beta)
            ok = same_structure(t, back, alpha) and check_morphism(t, beta).ok
            rep.add("roundtrip_from_oplax", ok, inst)
        except InconsistencyError as e:
            rep.add("roundtrip_from_oplax", False, inst, {"trace": [list(x) for x in e.trace]})
    if lax_exists:
        beta = MorphismData(R, s.target, lifted, "lax", lax_boundary(t, R, s.target, lifted))
        try:
            alpha = yoneda_bijection_backward(s, beta)
            again = yoneda_bijection_forward(s, alpha)
            ok = same_structure(t, again, beta) and check_morphism(t, alpha).ok
            rep.add("roundtrip_from_lax", ok, inst)
        except InconsistencyError as e:
            rep.add("roundtrip_from_lax", False, inst, {"trace": [list(x) for x in e.trace]})
    return rep


# the mates correspondence for an honest adjunction


def mate_of_oplax(t, L: Map, R: Map, src: Algebra, tgt: Algebra):
    """From L.x <= r.TL derive x.TR <= R.r by unit, cell and counit; None if a step fails."""
    x, r = src.structure, tgt.structure
    TR, TL = t.fmap(R), t.fmap(L)
    tb = t.points(tgt.carrier, 1)
    chain = [x @ TR, R @ L @ x @ TR, R @ r @ TL @ TR, R @ r]
    for lo, hi in zip(chain, chain[1:]):
        if first_leq_violation(lo, hi, tb) is not None:
            return None
    return Cell(x @ TR, R @ r)


def mate_of_lax(t, L: Map, R: Map, src: Algebra, tgt: Algebra):
    """From x.TR <= R.r derive L.x <= r.TL."""
    x, r = src.structure, tgt.structure
    TR, TL = t.fmap(R), t.fmap(L)
    ta = t.points(src.carrier, 1)
    chain = [L @ x, L @ x @ TR @ TL, L @ R @ r @ TL, r @ TL]
    for lo, hi in zip(chain, chain[1:]):
        if first_leq_violation(lo, hi, ta) is not None:
            return None
    return Cell(L @ x, r @ TL)


def check_doctrinal_adjunction(s: YonedaSetting) -> Report:
    """Identity doctrine: the bijection agrees with the mates correspondence."""
    t = s.t
    rep = Report()
    L, R = s.diagram.L, s.diagram.R
    inst = f"{s.source!r} -> {s.target!r} {L.table()}"
    tb = t.points(s.target.carrier, 1)
    ta = t.points(s.source.carrier, 1)
    oplax = oplax_boundary(t, L, s.source, s.target)
    lax_R = lax_boundary(t, R, s.target, s.source)
    if oplax.holds(ta):
        mate = mate_of_oplax(t, L, R, s.source, s.target)
        alpha = MorphismData(L, s.source, s.target, "oplax", oplax)
        beta = yoneda_bijection_forward(s, alpha)
        ok = mate is not None and first_difference(beta.cell.source, mate.source, tb) is None \
            and first_difference(beta.cell.target, mate.target, tb) is None
        rep.add("forward_is_mate", ok, inst)
    if lax_R.holds(tb):
        mate = mate_of_lax(t, L, R, s.source, s.target)
        beta = MorphismData(R, s.target, s.source, "lax", lax_R)
        alpha = yoneda_bijection_backward(s, beta)
        ok = mate is not None and first_difference(alpha.cell.source, mate.source, ta) is None \
            and first_difference(alpha.cell.target, mate.target, ta) is None
        rep.add("backward_is_mate", ok, inst)
    return rep


# posetal bicategories


@dataclass
class PosetalBicategory:
    """Objects with hom-posets, a monotone composition and identities."""

    objects: tuple
    homs: dict            # (X, Y) -> poset
    compose: Callable     # (g, f, X, Y, Z) -> g.f
    identity: Callable    # X -> element of homs[X, X]
    name: str = ""

    def composable(self):
        for X, Y, Z in itertools.product(self.objects, repeat=3):
            for f in self.homs[X, Y].elements():
                for g in self.homs[Y, Z].elements():
                    yield X, Y, Z, f, g


@dataclass
class LocalMap:
    """Object map plus hom-level monotone maps between posetal bicategories."""

    source: PosetalBicategory
    target: PosetalBicategory
    obj: dict
    hom: dict             # (X, Y) -> Map

    def __call__(self, X, Y, f):
        return self.hom[X, Y](f)


def lax_violation(F: LocalMap):
    """First failure of F g . F f <= F(g.f) or id <= F id."""
    S, T = F.source, F.target
    for X in S.objects:
        if not T.homs[F.obj[X], F.obj[X]].leq(T.identity(F.obj[X]), F(X, X, S.identity(X))):
            return ("unit", X)
    for X, Y, Z, f, g in S.composable():
        lhs = T.compose(F(Y, Z, g), F(X, Y, f), F.obj[X], F.obj[Y], F.obj[Z])
        if not T.homs[F.obj[X], F.obj[Z]].leq(lhs, F(X, Z, S.compose(g, f, X, Y, Z))):
            return ("composition", (X, Y, Z, f, g))
    return None


def oplax_violation(F: LocalMap):
    """First failure of F(g.f) <= F g . F f or F id <= id."""
    S, T = F.source, F.target
    for X in S.objects:
        if not T.homs[F.obj[X], F.obj[X]].leq(F(X, X, S.identity(X)), T.identity(F.obj[X])):
            return ("unit", X)
    for X, Y, Z, f, g in S.composable():
        rhs = T.compose(F(Y, Z, g), F(X, Y, f), F.obj[X], F.obj[Y], F.obj[Z])
        if not T.homs[F.obj[X], F.obj[Z]].leq(F(X, Z, S.compose(g, f, X, Y, Z)), rhs):
            return ("composition", (X, Y, Z, f, g))
    return None


def locally_ff_violation(G: LocalMap):
    for (X, Y), P in G.source.homs.items():
        Gm = G.hom[X, Y]
        Q = Gm.cod
        for u in P.elements():
            for v in P.elements():
                if P.leq(u, v) != Q.leq(Gm(u), Gm(v)):
                    return (X, Y, u, v)
    return None


@dataclass
class OplaxStructure:
    functor: LocalMap
    trace: list = field(default_factory=list)


def extend_to_oplax_through_lax_ff(F: LocalMap, G: LocalMap, H: LocalMap) -> OplaxStructure:
    """Oplax cells for F from G.F = H with G lax and locally ff and H oplax.

    Each cell F(g.f) <= F g . F f is obtained by reflecting along G the chain
    G F(g.f) = H(g.f) <= H g . H f = G F g . G F f <= G(F g . F f).
    """
    bad = locally_ff_violation(G)
    if bad is not None:
        raise PreconditionError(f"G is not locally fully faithful at {bad!r}")
    if lax_violation(G) is not None:
        raise PreconditionError("G is not lax")
    if oplax_violation(H) is not None:
        raise PreconditionError("H is not oplax")
    A, C, D = F.source, F.target, G.target
    for (X, Y), P in A.homs.items():
        for f in P.elements():
            if G(F.obj[X], F.obj[Y], F(X, Y, f)) != H(X, Y, f):
                raise PreconditionError(f"G.F and H differ at {f!r}")
    trace = []
    for X in A.objects:
        FX, HX = F.obj[X], H.obj[X]
        chain = [H(X, X, A.identity(X)), D.identity(HX), G(FX, FX, C.identity(FX))]
        Q = D.homs[HX, HX]
        ok = all(Q.leq(a, b) for a, b in zip(chain, chain[1:]))
        reflected = C.homs[FX, FX].leq(F(X, X, A.identity(X)), C.identity(FX))
        if not (ok and reflected):
            raise InconsistencyError(f"unit cell at {X!r} does not reflect", trace)
        trace.append(("unit", X))
    for X, Y, Z, f, g in A.composable():
        FX, FY, FZ = F.obj[X], F.obj[Y], F.obj[Z]
        Ff, Fg = F(X, Y, f), F(Y, Z, g)
        Fgf = F(X, Z, A.compose(g, f, X, Y, Z))
        composite = C.compose(Fg, Ff, FX, FY, FZ)
        chain = [G(FX, FZ, Fgf), H(X, Z, A.compose(g, f, X, Y, Z)),
                 D.compose(H(Y, Z, g), H(X, Y, f), H.obj[X], H.obj[Y], H.obj[Z]),
                 D.compose(G(FY, FZ, Fg), G(FX, FY, Ff), G.obj[FX], G.obj[FY], G.obj[FZ]),
                 G(FX, FZ, composite)]
        Q = D.homs[G.obj[FX], G.obj[FZ]]
        ok = all(Q.leq(a, b) for a, b in zip(chain, chain[1:]))
        reflected = C.homs[FX, FZ].leq(Fgf, composite)
        if not (ok and reflected):
            raise InconsistencyError(f"composition cell at {(f, g)!r} does not reflect", trace)
        trace.append(("composition", (X, Y, Z, f, g)))
    return OplaxStructure(F, trace)


def monoid_bicategory(P: FinPoset, mul, unit, name="") -> PosetalBicategory:
    """One object, hom-poset P, composition given by a monotone monoid."""
    table = mul if callable(mul) else (lambda a, b: mul[a, b])
    return PosetalBicategory(("*",), {("*", "*"): P}, lambda g, f, X, Y, Z: table(g, f), lambda X: unit, name)


def local_downsets(B: PosetalBicategory) -> PosetalBicategory:
    """Hom-wise downsets with composition the down-closure of composites."""
    from .kzdoctrine import DownsetLattice

    homs = {k: DownsetLattice(P) for k, P in B.homs.items()}

    def compose(E, D, X, Y, Z):
        return homs[X, Z].normalize(B.compose(g, f, X, Y, Z) for f in homs[X, Y].members(D)
                                    for g in homs[Y, Z].members(E))

    return PosetalBicategory(B.objects, homs, compose, lambda X: homs[X, X].principal(B.identity(X)),
                             f"P({B.name})")


def local_yoneda(B: PosetalBicategory) -> LocalMap:
    PB = local_downsets(B)
    hom = {k: Map(P, PB.homs[k], PB.homs[k].principal, "y") for k, P in B.homs.items()}
    return LocalMap(B, PB, {X: X for X in B.objects}, hom)


def compose_local(F: LocalMap, G: LocalMap) -> LocalMap:
    """G after F."""
    hom = {(X, Y): G.hom[F.obj[X], F.obj[Y]] @ m for (X, Y), m in F.hom.items()}
    return LocalMap(F.source, G.target, {X: G.obj[F.obj[X]] for X in F.source.objects}, hom)
