import itertools

import pytest
from hypothesis import given, strategies as st

from kzlift.corpus import generate_corpus
from kzlift.errors import ConfigurationError, StructuralError
from kzlift.poset import Cell, FinPoset, Map, monotone_maps
from kzlift.pseudomonad import (Algebra, IdentityMonad, ListMonad, MorphismData, ReversedListMonad,
                                candidate_cells, check_algebra, check_morphism, check_pseudomonad_axioms,
                                free_algebra, identity_morphism, make_morphism, monad_by_name,
                                monoid_algebra, monotone_monoids, morphism_structure_exists)

from conftest import nonempty_posets, posets


def brute_monoids(P) -> set:
    """All (table, unit) ordered monoid structures, by trying every table."""
    els = P.elements()
    pairs = [(a, b) for a in els for b in els]
    out = set()
    for vals in itertools.product(els, repeat=len(pairs)):
        t = dict(zip(pairs, vals))
        if not all(t[t[a, b], c] == t[a, t[b, c]] for a in els for b in els for c in els):
            continue
        if not all(P.leq(t[a, b], t[c, d]) for a, b in pairs for c, d in pairs if P.leq(a, c) and P.leq(b, d)):
            continue
        for e in els:
            if all(t[e, a] == a == t[a, e] for a in els):
                out.add((tuple(sorted(t.items())), e))
    return out


@pytest.mark.parametrize("P", generate_corpus("posets:<=3"), ids=repr)
def test_monoid_enumeration_matches_brute_force(P):
    got = {(tuple(sorted(t.items())), e) for t, e in monotone_monoids(P)}
    assert got == brute_monoids(P)


def test_list_monad_laws():
    t = ListMonad()
    maps = [f for A in generate_corpus("posets:<=2") for B in generate_corpus("posets:<=2")
            for f in monotone_maps(A, B)]
    assert check_pseudomonad_axioms(t, generate_corpus("posets:<=3"), maps).ok


def test_identity_monad_laws():
    assert check_pseudomonad_axioms(IdentityMonad(), generate_corpus("posets:<=3")).ok


def test_reversed_concatenation_breaks_associativity():
    rep = check_pseudomonad_axioms(ReversedListMonad(), [FinPoset.antichain(2)])
    failed = {f.check for f in rep.failures}
    # m.Tu reverses [a, b]; m.uT does not
    assert {"associativity", "unit_right"} <= failed
    assert "unit_left" not in failed


def test_monad_names():
    assert isinstance(monad_by_name("list", 3), ListMonad)
    with pytest.raises(ConfigurationError):
        monad_by_name("tree")
    with pytest.raises(ConfigurationError):
        ListMonad(0)


def test_list_fragment_sizes():
    # lists of length <= 2 over 2 points: 1 + 2 + 4
    assert len(ListMonad(2).T(FinPoset.antichain(2)).elements()) == 7
    # lists are only comparable at equal length
    TA = ListMonad(2).T(FinPoset.chain(2))
    assert TA.leq((0, 0), (0, 1)) and not TA.leq((0,), (0, 1))


@given(nonempty_posets(3))
def test_free_algebras_are_algebras(A):
    t = ListMonad()
    assert check_algebra(t, free_algebra(t, A)).ok


@pytest.mark.parametrize("P", generate_corpus("posets:<=3"), ids=repr)
def test_monoids_give_algebras(P):
    t = ListMonad()
    for table, e in monotone_monoids(P):
        assert check_algebra(t, monoid_algebra(t, P, table, e)).ok


def test_non_associative_product_is_not_an_algebra():
    # "last element, else 0": [[1], []] gives 0 one way and 1 the other
    t = ListMonad()
    P = FinPoset.antichain(2)
    alg = monoid_algebra(t, P, {(a, b): b for a in (0, 1) for b in (0, 1)}, 0)
    rep = check_algebra(t, alg)
    assert not rep.ok
    assert [f.check for f in rep.failures] == ["associativity_axiom"]


def test_structure_map_with_wrong_type():
    t = ListMonad()
    P = FinPoset.chain(2)
    with pytest.raises(StructuralError):
        check_algebra(t, Algebra(P, Map.identity(P)))


def test_identity_morphisms_are_pseudo():
    t = ListMonad()
    for P in generate_corpus("posets:<=2"):
        for table, e in monotone_monoids(P):
            assert check_morphism(t, identity_morphism(t, monoid_algebra(t, P, table, e))).ok


def test_morphism_kinds_on_chain_monoids():
    # max and min on the two-chain
    t = ListMonad()
    C = FinPoset.chain(2)
    mx = monoid_algebra(t, C, {(a, b): max(a, b) for a in (0, 1) for b in (0, 1)}, 0, "max")
    mn = monoid_algebra(t, C, {(a, b): min(a, b) for a in (0, 1) for b in (0, 1)}, 1, "min")
    I = Map.identity(C)
    # min of a list <= max of it, except for the empty list (unit 1 vs 0)
    assert not morphism_structure_exists(t, I, mx, mn, "oplax")
    assert not morphism_structure_exists(t, I, mx, mn, "lax")
    const = Map(C, C, lambda a: 1, "top")
    # the min of a list of ones is one, even when empty
    assert morphism_structure_exists(t, const, mx, mn, "pseudo")
    # the max of the empty list is zero, below the constant
    assert morphism_structure_exists(t, const, mx, mx, "lax")
    assert not morphism_structure_exists(t, const, mx, mx, "oplax")


def test_reported_cell_must_hold():
    t = ListMonad()
    C = FinPoset.chain(2)
    mx = monoid_algebra(t, C, {(a, b): max(a, b) for a in (0, 1) for b in (0, 1)}, 0, "max")
    mn = monoid_algebra(t, C, {(a, b): min(a, b) for a in (0, 1) for b in (0, 1)}, 1, "min")
    mor = make_morphism(t, Map.identity(C), mx, mn, "pseudo")
    rep = check_morphism(t, mor)
    assert not rep.ok
    with pytest.raises(StructuralError):
        MorphismData(Map.identity(C), mx, mn, "strict")


@given(posets(3))
def test_at_most_one_cell(P):
    f = Map.identity(P)
    assert len(candidate_cells(f, f, P.elements())) == 1
