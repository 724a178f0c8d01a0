import networkx as nx
import pytest
from hypothesis import given, strategies as st

from kzlift.core2cat import (FinCategory, Functor, PullbackCone, UnionFind, Weight, all_functors, coend,
                             cone_isomorphism, cones, pullback, validate_category)
from kzlift.corpus import generate_corpus
from kzlift.errors import PreconditionError, StructuralError
from kzlift.poset import FinPoset

from conftest import lattice_from_subsets, posets

CATS_UPTO_2 = generate_corpus("cats:<=2")


def walking_arrow():
    return FinCategory(["a", "b"], [("f", "a", "b")], name="arrow")


def walking_cospan():
    return FinCategory(["x", "y", "z"], [("f", "x", "z"), ("g", "y", "z")], name="cospan")


def test_chain_category_has_no_violations():
    assert validate_category(FinCategory.from_poset(FinPoset.chain(3))).ok


def test_walking_arrow_has_no_violations():
    assert validate_category(walking_arrow()).ok


def test_composite_with_wrong_endpoints_is_rejected():
    with pytest.raises(StructuralError):
        FinCategory(["a", "b", "c"], [("f", "a", "b"), ("g", "b", "c"), ("h", "a", "b")], [("g", "f", "h")])


def test_missing_composite_is_rejected():
    with pytest.raises(StructuralError):
        FinCategory(["a", "b", "c"], [("f", "a", "b"), ("g", "b", "c")])


def test_dangling_endpoint_is_rejected():
    with pytest.raises(StructuralError):
        FinCategory(["a"], [("f", "a", "b")])


def test_non_associative_table_is_reported():
    # one object, two idempotent-ish endomorphisms with a non-associative table
    c = FinCategory([0], [("p", 0, 0), ("q", 0, 0)],
                    {("p", "p"): "p", ("q", "q"): "q", ("p", "q"): "q", ("q", "p"): "q"})
    rep = validate_category(c)
    assert rep.ok == all(c.comp[h, c.comp[g, f]] == c.comp[c.comp[h, g], f]
                         for f in c.morphisms for g in c.morphisms for h in c.morphisms)


def test_functor_missing_object_is_rejected():
    a = walking_arrow()
    with pytest.raises(StructuralError):
        Functor(a, a, {"a": "a"})


def test_pullback_in_lattice_is_the_meet():
    lat = lattice_from_subsets(2)
    E = FinCategory.from_poset(lat)
    x, y, z = frozenset({0}), frozenset({1}), frozenset({0, 1})
    cone = pullback(E, (x, z), (y, z))
    lower = [w for w in lat.elements() if lat.leq(w, x) and lat.leq(w, y)]
    meet = [w for w in lower if all(lat.leq(v, w) for v in lower)]
    assert cone.apex == meet[0] == frozenset()


def test_pullback_of_identities_is_the_object():
    E = walking_arrow()
    cone = pullback(E, E.identity["b"], E.identity["b"])
    assert cone.apex == "b"


def test_walking_cospan_has_no_pullback():
    E = walking_cospan()
    assert cones(E, "f", "g") == []
    assert pullback(E, "f", "g") is None


def test_cospan_check():
    with pytest.raises(PreconditionError):
        cones(walking_arrow(), "f", walking_arrow().identity["a"])


@pytest.mark.parametrize("E", CATS_UPTO_2, ids=repr)
def test_pullbacks_are_unique_up_to_iso(E):
    for f in E.morphisms:
        for g in E.morphisms:
            if E.tgt[f] != E.tgt[g]:
                continue
            pb = pullback(E, f, g)
            if pb is None:
                continue
            terminal = [c for c in cones(E, f, g)
                        if all(len([u for u in E.hom(o.apex, c.apex)
                                    if E.compose(c.left, u) == o.left and E.compose(c.right, u) == o.right]) == 1
                               for o in cones(E, f, g))]
            for c in terminal:
                assert cone_isomorphism(E, c, pb) is not None


def test_coend_over_discrete_is_the_sum():
    a = FinCategory([0, 1, 2])
    w = Weight(lambda x, y: [(x, k) for k in range(x + 1)] if x == y else [],
               lambda f, y, e: e, lambda f, x, e: e)
    res = coend(a, w)
    assert len(res.carrier) == 1 + 2 + 3


def test_constant_weight_over_walking_arrow_has_one_class():
    w = Weight(lambda x, y: ["*"], lambda f, y, e: e, lambda f, x, e: e)
    assert len(coend(walking_arrow(), w).carrier) == 1


def test_non_functorial_weight_is_rejected():
    a = walking_arrow()
    w = Weight(lambda x, y: [0, 1], lambda f, y, e: 1 - e, lambda f, x, e: e)
    with pytest.raises(PreconditionError):
        coend(a, w)


def hom_weight(a):
    return Weight(lambda x, y: list(a.hom(x, y)),
                  lambda f, y, e: a.compose(e, f),
                  lambda f, x, e: a.compose(f, e))


def twisted_components(a) -> int:
    """Endomorphisms glued along g.f ~ f.g, counted with networkx."""
    G = nx.Graph()
    for m in a.morphisms:
        if a.src[m] == a.tgt[m]:
            G.add_node(m)
    for f in a.morphisms:
        for g in a.morphisms:
            if a.tgt[f] == a.src[g] and a.tgt[g] == a.src[f]:
                G.add_edge(a.compose(g, f), a.compose(f, g))
    return nx.number_connected_components(G)


@pytest.mark.parametrize("a", CATS_UPTO_2 + generate_corpus("cats:3")[:12], ids=repr)
def test_hom_coend_matches_twisted_components(a):
    assert len(coend(a, hom_weight(a)).carrier) == twisted_components(a)


@given(st.lists(st.tuples(st.integers(0, 7), st.integers(0, 7)), max_size=12))
def test_union_find_matches_networkx(edges):
    uf = UnionFind(range(8))
    G = nx.Graph()
    G.add_nodes_from(range(8))
    for a, b in edges:
        uf.union(a, b)
        G.add_edge(a, b)
    for comp in nx.connected_components(G):
        assert len({uf.find(x) for x in comp}) == 1
    assert len({uf.find(x) for x in range(8)}) == nx.number_connected_components(G)


@given(posets(4))
def test_poset_categories_satisfy_the_laws(P):
    assert validate_category(FinCategory.from_poset(P)).ok


@given(posets(3), posets(3))
def test_enumerated_functors_are_lawful(P, Q):
    A, B = FinCategory.from_poset(P), FinCategory.from_poset(Q)
    fs = list(all_functors(A, B))
    for F in fs:
        assert F.is_valid()
    # functors between posets are monotone maps
    from kzlift.poset import monotone_maps
    assert len(fs) == sum(1 for _ in monotone_maps(P, Q))


@pytest.mark.parametrize("a", CATS_UPTO_2, ids=repr)
def test_composition_with_identity_functor(a):
    I = Functor.identity(a)
    for F in all_functors(a, a):
        assert I.then(F).mor_map == F.mor_map
        assert F.then(I).obj_map == F.obj_map


def test_pullback_cone_is_hashable():
    assert len({PullbackCone(0, 1, 2), PullbackCone(0, 1, 2)}) == 1
