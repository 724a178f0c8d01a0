"""The join-completion doctrine, the identity doctrine and their checkers."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable

from .core2cat import FinCategory
from .errors import PreconditionError, ResourceError
from .poset import (DEFAULT_BUDGET, Cell, Certificate, FinJoinLattice, FinPoset, Map, Poset,
                    certify_left_extension, first_difference, first_leq_violation, is_join_lattice,
                    left_extension_oracle, maps_equal, monotone_maps)
from .report import FAIL, INCONCLUSIVE, PASS, Report


class DownsetLattice(Poset):
    """Downsets of a base poset ordered by inclusion, with all joins.

    A downset is stored as the frozenset of its maximal elements, which is a
    canonical form.  Bases may be infinite (structural); only downsets with
    finitely many generators are represented.
    """

    def __init__(self, base: Poset, budget: int = DEFAULT_BUDGET):
        self.base = base
        self.finite = base.finite
        self.budget = budget
        if isinstance(base, FinPoset):
            self._fin = base
        elif base.finite:
            # a finite structural base (say another downset lattice) gets a
            # bitmask copy over the same elements
            self._fin = FinPoset.from_leq(base.elements(), base.leq, name=repr(base))
        else:
            self._fin = None
        self._fast = self._fin is not None
        self._masks: dict = {}
        self.bottom = frozenset()
        self.name = f"P({base!r})"

    def _key(self):
        return ("P", self.base.key())

    # canonical forms

    def _mask(self, D) -> int:
        try:
            return self._masks[D]
        except KeyError:
            b = self._fin
            m = 0
            for g in D:
                m |= b.below[b.index[g]]
            self._masks[D] = m
            return m

    def _from_mask(self, m: int) -> frozenset:
        b = self._fin
        out = []
        for j, e in enumerate(b.elements()):
            if (m >> j) & 1 and not (b.above[j] & ~b.below[j] & m):
                out.append(e)
        D = frozenset(out)
        self._masks[D] = m
        return D

    def normalize(self, gens: Iterable) -> frozenset:
        cls = getattr(self.base, "classes", None)
        gens = [cls.get(g, g) for g in gens] if cls else list(gens)
        if self._fast:
            m = 0
            b = self._fin
            for g in gens:
                m |= b.below[b.index[g]]
            return self._from_mask(m)
        return self.base.maxima(gens)

    def __contains__(self, D) -> bool:
        if not isinstance(D, frozenset) or not all(g in self.base for g in D):
            return False
        return self.normalize(D) == D

    def leq(self, D, E) -> bool:
        if self._fast:
            return not (self._mask(D) & ~self._mask(E))
        if D is E:
            return True
        bl = self.base.leq
        return all(any(bl(g, h) for h in E) for g in D)

    def member(self, x, D) -> bool:
        bl = self.base.leq
        return any(bl(x, g) for g in D)

    def principal(self, x) -> frozenset:
        return self.normalize((x,))

    def join(self, Ds: Iterable) -> frozenset:
        if self._fast:
            m = 0
            for D in Ds:
                m |= self._mask(D)
            return self._from_mask(m)
        gens = set()
        for D in Ds:
            gens.update(D)
        return self.base.maxima(gens)

    def meet(self, D, E) -> frozenset:
        if self._fast:
            return self._from_mask(self._mask(D) & self._mask(E))
        return self.base.maxima(x for x in self.base.elements() if self.member(x, D) and self.member(x, E))

    @property
    def top(self) -> frozenset:
        return self.normalize(self.base.elements())

    def members(self, D) -> tuple:
        """All base elements of the downset (base must be enumerable)."""
        if self._fast:
            return self._fin.from_mask(self._mask(D))
        return tuple(x for x in self.base.elements() if self.member(x, D))

    def _enumerate(self):
        if not self._fast:
            return self._fragment()
        b = self._fin
        n = len(b.elements())
        groups = []
        seen = 0
        for i in sorted(range(n), key=lambda i: (bin(b.below[i]).count("1"), i)):
            if (seen >> i) & 1:
                continue
            cls = b.below[i] & b.above[i]
            seen |= cls
            groups.append((cls, b.below[i] & ~cls))
        out = []

        def rec(k, mask):
            if k == len(groups):
                out.append(mask)
                if len(out) > self.budget:
                    raise ResourceError(f"more than {self.budget} downsets of {b!r}")
                return
            cls, strictly_below = groups[k]
            rec(k + 1, mask)
            if strictly_below & ~mask == 0:
                rec(k + 1, mask | cls)

        rec(0, 0)
        return [self._from_mask(m) for m in sorted(out, key=lambda m: (bin(m).count("1"), m))]

    def _fragment(self):
        """Bottom, principals and binary joins of principals over the base fragment."""
        prin = list(dict.fromkeys(self.principal(x) for x in self.base.elements()))
        out = [self.bottom] + prin
        for D, E in itertools.combinations(prin, 2):
            out.append(self.join((D, E)))
        return list(dict.fromkeys(out))

    def to_bits(self, D) -> tuple:
        members = set(self.members(D))
        return tuple(int(x in members) for x in self.base.elements())


@dataclass(frozen=True)
class BoolPresheaf:
    """A 2-valued presheaf on a finite (pre)order as a bit vector.

    Construction rejects vectors that are not down-closed.
    """

    carrier: FinPoset
    bits: tuple

    def __post_init__(self):
        elems = self.carrier.elements()
        if len(self.bits) != len(elems):
            raise PreconditionError("bit vector length differs from the carrier size")
        for i, x in enumerate(elems):
            if self.bits[i]:
                for j, s in enumerate(elems):
                    if self.carrier.leq(s, x) and not self.bits[j]:
                        raise PreconditionError(f"not a presheaf: 1 at {x!r} but 0 at {s!r} <= {x!r}")

    @classmethod
    def from_downset(cls, lattice: DownsetLattice, D) -> "BoolPresheaf":
        return cls(lattice.base, lattice.to_bits(D))

    def to_downset(self, lattice: DownsetLattice) -> frozenset:
        return lattice.normalize(x for x, b in zip(self.carrier.elements(), self.bits) if b)


def carrier_poset(a) -> Poset:
    if isinstance(a, FinCategory):
        return a.to_preorder(quotient=False)
    return a


def complete_under_joins(a) -> DownsetLattice:
    """All 2-valued presheaves on ``a`` under pointwise order."""
    return DownsetLattice(carrier_poset(a))


def certify_joins(lattice) -> Certificate:
    """Exhaustively check that ``lattice.join`` returns least upper bounds."""
    elems = lattice.elements()
    bot = lattice.join(())
    if not all(lattice.leq(bot, x) for x in elems):
        return Certificate(False, "exhaustive", (), "empty join is not the bottom")
    for x in elems:
        for y in elems:
            j = lattice.join((x, y))
            if not (lattice.leq(x, j) and lattice.leq(y, j)):
                return Certificate(False, "exhaustive", (x, y), "join is not an upper bound")
            for z in elems:
                if lattice.leq(x, z) and lattice.leq(y, z) and not lattice.leq(j, z):
                    return Certificate(False, "exhaustive", (x, y, z), "join is not least")
    return Certificate(True, "exhaustive")


# doctrines


class Doctrine:
    """A KZ doctrine on posets: P, units and extension along units."""

    name = "doctrine"

    def P(self, A: Poset) -> Poset:
        raise NotImplementedError

    def unit(self, A: Poset) -> Map:
        raise NotImplementedError

    def extend(self, F: Map) -> Map:
        """Extension of F: A -> X along the unit of A; X must be cocomplete."""
        raise NotImplementedError

    def is_cocomplete(self, X: Poset) -> bool:
        raise NotImplementedError

    def apply(self, L: Map) -> Map:
        """P on 1-cells: the extension of y_B.L along y_A."""
        return self.extend(self.unit(L.cod) @ L)

    def mu(self, A: Poset) -> Map:
        return self.extend(Map.identity(self.P(A)))

    def right_adjoint_formula(self, L: Map):
        return None

    def key(self):
        return (type(self).__name__, self.name)

    def __repr__(self):
        return self.name


class JoinCompletion(Doctrine):
    name = "joins"

    def __init__(self, budget: int = DEFAULT_BUDGET):
        self.budget = budget
        self._P: dict = {}
        self._units: dict = {}

    def P(self, A):
        try:
            return self._P[A]
        except KeyError:
            PA = DownsetLattice(A, self.budget)
            self._P[A] = PA
            return PA

    def unit(self, A):
        try:
            return self._units[A]
        except KeyError:
            PA = self.P(A)
            y = Map(A, PA, PA.principal, f"y[{A!r}]")
            self._units[A] = y
            return y

    def extend(self, F: Map) -> Map:
        X = F.cod
        if not is_join_lattice(X):
            raise PreconditionError(f"{X!r} carries no join certificate")
        PA = self.P(F.dom)
        # F is monotone, so the join over a downset is the join over its generators
        return Map(PA, X, lambda H: X.join(F(g) for g in H), f"ext({F.name})" if F.name else None)

    def apply(self, L: Map) -> Map:
        PA, PB = self.P(L.dom), self.P(L.cod)
        return Map(PA, PB, lambda D: PB.normalize(L(g) for g in D), f"P({L.name})" if L.name else None)

    def mu(self, A):
        PA = self.P(A)
        PPA = self.P(PA)
        return Map(PPA, PA, lambda DD: PA.join(DD), f"mu[{A!r}]")

    def is_cocomplete(self, X) -> bool:
        if is_join_lattice(X):
            return True
        if isinstance(X, FinPoset):
            return FinJoinLattice.try_certify(X) is not None
        return False

    def right_adjoint_formula(self, L: Map):
        """Preimage along L; needs an enumerable (fragment of the) domain."""
        PA, PB = self.P(L.dom), self.P(L.cod)
        A = L.dom
        points = A.elements()

        def res(E):
            return PA.normalize(a for a in points if PB.member(L(a), E))

        return Map(PB, PA, res, f"res({L.name})" if L.name else None)


class IdentityDoctrine(Doctrine):
    name = "identity"

    def P(self, A):
        return A

    def unit(self, A):
        return Map.identity(A, "id")

    def extend(self, F):
        return F

    def apply(self, L):
        return L

    def mu(self, A):
        return Map.identity(A)

    def is_cocomplete(self, X):
        return True


class ConstantBottomDoctrine(JoinCompletion):
    """Join completion with the extension replaced by the constant-bottom map.

    Used to exercise the checkers on a known violation.
    """

    name = "mutant-bottom"

    def extend(self, F):
        X = F.cod
        if not is_join_lattice(X):
            raise PreconditionError(f"{X!r} carries no join certificate")
        bottom = X.join(())
        return Map(self.P(F.dom), X, lambda H: bottom, "bottom")

    def apply(self, L):
        return self.extend(self.unit(L.cod) @ L)

    def mu(self, A):
        return self.extend(Map.identity(self.P(A)))


def doctrine_by_name(name: str, budget: int = DEFAULT_BUDGET) -> Doctrine:
    from .errors import ConfigurationError
    table = {"joins": JoinCompletion, "identity": IdentityDoctrine, "mutant-bottom": ConstantBottomDoctrine}
    if name not in table:
        raise ConfigurationError(f"unknown doctrine {name!r}; choose from {sorted(table)}")
    cls = table[name]
    return cls(budget) if cls is not IdentityDoctrine else cls()


def extend_along_unit(F: Map, d=None) -> Map:
    """The join formula: H |-> join of F(x) over x in H."""
    if d is not None and d != F.cod:
        F = Map(F.dom, d, F, F.name)
    return JoinCompletion().extend(F)


# KZ doctrine axioms


def _sampled(seq, limit):
    seq = list(seq)
    if limit is None or len(seq) <= limit:
        return seq
    step = len(seq) / limit
    return [seq[int(k * step)] for k in range(limit)]


def small_targets() -> list:
    return [FinPoset([], name="empty"), FinPoset.chain(1, "point"), FinPoset.chain(2, "chain2"),
            FinPoset.antichain(2, "antichain2")]


def check_kz_doctrine_axioms(p: Doctrine, corpus, targets=None, max_maps: int | None = 24,
                             oracle_limit: int = 20000) -> Report:
    """(a) the extension of the unit is the identity; (b) extensions preserve extensions."""
    rep = Report()
    targets = small_targets() if targets is None else targets
    for A in corpus:
        inst = repr(A)
        PA = p.P(A)
        yA = p.unit(A)
        ext_y = p.extend(yA)
        bad = first_difference(ext_y, Map.identity(PA))
        bad_c = first_difference(ext_y @ yA, yA)
        rep.add("unit_extension_identity", bad is None and bad_c is None, inst,
                counterexample=None if bad is None and bad_c is None else {"at": bad if bad is not None else bad_c})
        for B in targets:
            PB = p.P(B)
            Fs = _sampled(monotone_maps(A, PB), max_maps)
            for F in Fs:
                Fbar = p.extend(F)
                d = first_difference(Fbar @ yA, F)
                if d is not None:
                    rep.add("extension_cell_invertible", False, inst, {"F": F.table(), "at": d})
                    break
            else:
                rep.add("extension_cell_invertible", True, f"{inst} -> P({B!r})")
            for C in targets:
                PC = p.P(C)
                Gs = _sampled(monotone_maps(B, PC), max_maps)
                failure = None
                method = "pointwise"
                for F in Fs:
                    Fbar = p.extend(F)
                    for G in Gs:
                        Gbar = p.extend(G)
                        use = "oracle" if _oracle_feasible(PA, PC, oracle_limit) else "pointwise"
                        cert = _certify(Gbar @ Fbar, Gbar @ F, yA, use, oracle_limit)
                        method = cert.method
                        if not cert.ok:
                            failure = {"F": F.table(), "G": G.table(), "at": cert.counterexample, "note": cert.note}
                            break
                    if failure:
                        break
                rep.add("extensions_preserve_extensions", failure is None, f"{inst} -> P({B!r}) -> P({C!r})",
                        failure, detail={"method": method, "F": len(Fs), "G": len(Gs)})
    return rep


def _oracle_feasible(dom, cod, limit) -> bool:
    if not (dom.finite and cod.finite):
        return False
    return len(cod.elements()) ** len(dom.elements()) <= limit


def _certify(R, of, along, method, budget) -> Certificate:
    try:
        return certify_left_extension(R, of, along, method=method, budget=budget)
    except ResourceError:
        return certify_left_extension(R, of, along, method="pointwise")


# admissibility


@dataclass
class AdmissibilityWitness:
    L: Map
    PL: Map
    res: Map
    unit: Cell      # id <= res.PL
    counit: Cell    # PL.res <= id
    R: Map          # res . y_B
    phi: Cell       # y_A <= R.L
    mode: str


def check_admissible(p: Doctrine, L: Map, budget: int = DEFAULT_BUDGET, mode: str = "auto"):
    """Search for a right adjoint of P(L); returns a certified witness or None."""
    A, B = L.dom, L.cod
    PA, PB = p.P(A), p.P(B)
    PL = p.apply(L)
    if mode == "auto":
        mode = "exhaustive"
        if not (PA.finite and PB.finite):
            mode = "generators"
        else:
            try:
                if len(PA.elements()) * len(PB.elements()) > budget:
                    mode = "generators"
            except (ResourceError, PreconditionError):
                mode = "generators"
    if mode == "exhaustive":
        pa, pb = PA.elements(), PB.elements()
        table = {}
        images = [(D, PL(D)) for D in pa]
        for E in pb:
            cands = [D for D, img in images if PB.leq(img, E)]
            top = [D for D in cands if all(PA.leq(C, D) for C in cands)]
            if not top:
                return None
            table[E] = top[0]
        res = Map.from_table(PB, PA, table, f"res({L.name})" if L.name else "res")
        if res.monotonicity_violation() is not None:
            return None
        d_pts, e_pts = pa, pb
    else:
        res = p.right_adjoint_formula(L)
        searched = res is None
        if searched:
            res = _fragment_search(PL, PA, PB)
            if res is None:
                return None
        d_pts = _generator_points(p, A)
        e_pts = _generator_points(p, B)
        # preimage formulas are monotone by construction
        if searched and res.monotonicity_violation(e_pts) is not None:
            return None
    unit = Cell(Map.identity(PA), res @ PL)
    counit = Cell(PL @ res, Map.identity(PB))
    if not unit.holds(d_pts) or not counit.holds(e_pts):
        return None
    yA, yB = p.unit(A), p.unit(B)
    R = res @ yB
    phi = Cell(yA, R @ L)
    return AdmissibilityWitness(L, PL, res, unit, counit, R, phi, mode)


def _fragment_search(PL, PA, PB):
    pa = PA.elements()
    images = [(D, PL(D)) for D in pa]

    def res(E):
        cands = [D for D, img in images if PB.leq(img, E)]
        top = [D for D in cands if all(PA.leq(C, D) for C in cands)]
        if not top:
            raise PreconditionError("no greatest candidate")
        return top[0]

    m = Map(PB, PA, res, "res")
    try:
        for E in PB.elements():
            m(E)
    except PreconditionError:
        return None
    return m


def _generator_points(p: Doctrine, A) -> list:
    """Principal downsets, the bottom and binary joins of principals."""
    PA = p.P(A)
    y = p.unit(A)
    prin = list(dict.fromkeys(y(a) for a in A.elements()))
    if not hasattr(PA, "join"):
        return prin
    pts = [PA.join(())] + prin
    for D, E in itertools.combinations(prin, 2):
        pts.append(PA.join((D, E)))
    return list(dict.fromkeys(pts))


def check_p_fully_faithful(p: Doctrine, L: Map) -> bool:
    """For join completion: x <= y iff L x <= L y over all pairs."""
    if isinstance(p, JoinCompletion):
        A, B = L.dom, L.cod
        xs = A.elements()
        return all(A.leq(x, y) == B.leq(L(x), L(y)) for x in xs for y in xs)
    return p_fully_faithful_generic(p, L)


def p_fully_faithful_generic(p: Doctrine, L: Map) -> bool:
    """P(L) reflects the order on the whole of P(A)."""
    PA, PB = p.P(L.dom), p.P(L.cod)
    PL = p.apply(L)
    ds = PA.elements()
    return all(PA.leq(D, E) == PB.leq(PL(D), PL(E)) for D in ds for E in ds)


# cocompleteness and homomorphisms


def default_shapes() -> list:
    return [FinPoset([], name="empty"), FinPoset.chain(1, "point"), FinPoset.chain(2, "chain2"),
            FinPoset.antichain(2, "antichain2")]


def _extension_by_oracle(p: Doctrine, G: Map, budget: int):
    """Extension of G along the unit, found by search when the target has no joins."""
    y = p.unit(G.dom)
    if is_join_lattice(G.cod):
        return p.extend(G)
    found = left_extension_oracle(y, G, budget)
    return None if found is None else found[0]


def check_cocomplete(p: Doctrine, X: Poset, shapes=None, budget: int = 200000, detail: bool = False):
    """Every extension along a unit into X exists and is preserved by the others."""
    shapes = default_shapes() if shapes is None else shapes
    for B in shapes:
        for G in monotone_maps(B, X, budget):
            Gbar = _extension_by_oracle(p, G, budget)
            if Gbar is None:
                return (False, {"shape": repr(B), "G": G.table()}) if detail else False
            for A in shapes:
                yA = p.unit(A)
                for F in monotone_maps(A, p.P(B), budget):
                    Fbar = p.extend(F)
                    cert = _certify(Gbar @ Fbar, Gbar @ F, yA,
                                    "pointwise" if is_join_lattice(X) else "oracle", budget)
                    if not cert.ok:
                        out = {"shape": repr(B), "G": G.table(), "F": F.table()}
                        return (False, out) if detail else False
    return (True, None) if detail else True


def check_homomorphism(p: Doctrine, E: Map, shapes=None, budget: int = 200000) -> bool:
    """E: X -> Y preserves every extension along a unit into X."""
    shapes = default_shapes() if shapes is None else shapes
    X, Y = E.dom, E.cod
    for B in shapes:
        yB = p.unit(B)
        for G in monotone_maps(B, X, budget):
            Gbar = _extension_by_oracle(p, G, budget)
            if Gbar is None:
                continue
            cert = _certify(E @ Gbar, E @ G, yB, "pointwise" if is_join_lattice(Y) else "oracle", budget)
            if not cert.ok:
                return False
    return True


# theta and the KZ pseudomonad axioms


def theta_and_kz_check(p: Doctrine, corpus) -> Report:
    rep = Report()
    for A in corpus:
        inst = repr(A)
        PA = p.P(A)
        yA = p.unit(A)
        yPA = p.unit(PA)
        Py = p.apply(yA)
        mu = p.mu(A)
        pts = PA.elements()
        theta = Cell(Py, yPA)
        v = theta.violation(pts)
        rep.add("theta_exists", v is None, inst, None if v is None else {"at": v})
        d = first_difference(Py @ yA, yPA @ yA)
        rep.add("axiom_theta_unit", d is None, inst, None if d is None else {"at": d})
        d1 = first_difference(mu @ Py, Map.identity(PA), pts)
        d2 = first_difference(mu @ yPA, Map.identity(PA), pts)
        rep.add("axiom_theta_multiplication", d1 is None and d2 is None, inst,
                None if d1 is None and d2 is None else {"mu.Py": d1, "mu.yP": d2})
    return rep


# doctrine morphisms


@dataclass
class DoctrineMorphismData:
    source: Doctrine
    target: Doctrine
    component: Callable  # A |-> map P(A) -> P'(A), or None where it does not exist


def unit_as_morphism(target: Doctrine) -> DoctrineMorphismData:
    """Identity doctrine -> target with components the units of the target."""
    return DoctrineMorphismData(IdentityDoctrine(), target, target.unit)


def identity_morphism(p: Doctrine) -> DoctrineMorphismData:
    return DoctrineMorphismData(p, p, lambda A: Map.identity(p.P(A)))


def join_to_identity_morphism() -> DoctrineMorphismData:
    """Joins -> identity with the join map where the object has joins."""
    j = JoinCompletion()

    def comp(A):
        lat = FinJoinLattice.try_certify(A) if isinstance(A, FinPoset) else None
        if lat is None:
            return None
        return j.extend(Map(A, lat, lambda x: x, "id"))

    return DoctrineMorphismData(j, IdentityDoctrine(), comp)


def check_doctrine_morphism(m: DoctrineMorphismData, corpus, budget: int = DEFAULT_BUDGET,
                            max_maps: int | None = 40) -> Report:
    p, q = m.source, m.target
    rep = Report()
    for A in corpus:
        for B in corpus:
            bad = None
            for L in _sampled(monotone_maps(A, B), max_maps):
                if check_admissible(p, L, budget) is not None and check_admissible(q, L, budget) is None:
                    bad = L.table()
                    break
            rep.add("admissibility_inclusion", bad is None, f"{A!r} -> {B!r}", bad)
    for A in corpus:
        alpha = m.component(A)
        if alpha is None:
            rep.add("unit_comparison_invertible", False, repr(A), {"missing_component": repr(A)})
            continue
        y, y2 = p.unit(A), q.unit(A)
        d = first_difference(alpha @ y, y2)
        ok = d is None
        if ok and is_join_lattice(q.P(A)):
            ok = certify_left_extension(alpha, y2, y, method="pointwise").ok
        rep.add("unit_comparison_invertible", ok, repr(A), None if ok else {"at": d})
        for B in corpus:
            alphaB = m.component(B)
            if alphaB is None:
                continue
            yA = p.unit(A)
            bad = None
            for F in _sampled(monotone_maps(A, p.P(B)), max_maps):
                Fbar = p.extend(F)
                method = "pointwise" if is_join_lattice(q.P(B)) else "oracle"
                cert = _certify(alphaB @ Fbar, alphaB @ F, yA, method, budget)
                if not cert.ok:
                    bad = {"F": F.table(), "at": cert.counterexample}
                    break
            rep.add("preserves_extensions", bad is None, f"{A!r} -> P({B!r})", bad)
    return rep


def preorder_property(m1: DoctrineMorphismData, m2: DoctrineMorphismData, corpus) -> bool:
    """Two doctrine morphisms between the same doctrines agree componentwise."""
    for A in corpus:
        a1, a2 = m1.component(A), m2.component(A)
        if a1 is None or a2 is None:
            if a1 is not a2:
                return False
            continue
        if not maps_equal(a1, a2):
            return False
    return True
