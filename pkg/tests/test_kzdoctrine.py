import itertools

import pytest
from hypothesis import given, strategies as st

from kzlift.corpus import generate_corpus
from kzlift.errors import ConfigurationError, PreconditionError
from kzlift.kzdoctrine import (BoolPresheaf, ConstantBottomDoctrine, DownsetLattice, IdentityDoctrine,
                               JoinCompletion, certify_joins, check_admissible, check_cocomplete,
                               check_doctrine_morphism, check_homomorphism, check_kz_doctrine_axioms,
                               check_p_fully_faithful, doctrine_by_name, identity_morphism,
                               join_to_identity_morphism, p_fully_faithful_generic, preorder_property,
                               theta_and_kz_check, unit_as_morphism)
from kzlift.poset import FinJoinLattice, FinPoset, Map, monotone_maps

from conftest import nonempty_posets, posets

SMALL = generate_corpus("posets:<=2")


def brute_downsets(P) -> set:
    """Down-closed subsets by enumerating all subsets."""
    els = P.elements()
    out = set()
    for k in range(len(els) + 1):
        for S in itertools.combinations(els, k):
            if all(s in S for x in S for s in els if P.leq(s, x)):
                out.add(frozenset(S))
    return out


def brute_has_right_adjoint(L) -> bool:
    A, B = L.dom, L.cod
    for b in B.elements():
        below = [a for a in A.elements() if B.leq(L(a), b)]
        if not any(all(A.leq(c, a) for c in below) for a in below):
            return False
    return True


def test_two_chain_has_three_presheaves():
    assert len(DownsetLattice(FinPoset.chain(2)).elements()) == 3


@pytest.mark.parametrize("n", range(5))
def test_discrete_completion_is_the_powerset(n):
    PA = DownsetLattice(FinPoset.antichain(n))
    elems = PA.elements()
    assert len(elems) == 2 ** n
    # order is inclusion of member sets
    for D in elems:
        for E in elems:
            assert PA.leq(D, E) == (set(PA.members(D)) <= set(PA.members(E)))


@given(posets(5))
def test_downsets_match_brute_force(P):
    PA = DownsetLattice(P)
    got = {frozenset(PA.members(D)) for D in PA.elements()}
    assert got == brute_downsets(P)


@given(posets(4))
def test_downset_joins_are_certified(P):
    assert certify_joins(DownsetLattice(P)).ok


def test_bit_vectors_must_be_down_closed():
    c = FinPoset.chain(2)
    with pytest.raises(PreconditionError):
        BoolPresheaf(c, (0, 1))
    PA = DownsetLattice(c)
    for D in PA.elements():
        assert BoolPresheaf.from_downset(PA, D).to_downset(PA) == D


def test_unknown_doctrine_name():
    with pytest.raises(ConfigurationError):
        doctrine_by_name("nope")


def test_join_completion_satisfies_the_axioms():
    rep = check_kz_doctrine_axioms(JoinCompletion(), generate_corpus("posets:<=3"), max_maps=6)
    assert rep.ok, rep.failures[:3]


def test_constant_bottom_breaks_the_unit_axiom():
    rep = check_kz_doctrine_axioms(ConstantBottomDoctrine(), SMALL, max_maps=4)
    assert not rep.ok
    assert any(f.check == "unit_extension_identity" for f in rep.failures)


def test_theta_and_axioms_hold_for_joins():
    assert theta_and_kz_check(JoinCompletion(), generate_corpus("posets:<=3")).ok


@given(nonempty_posets(3), nonempty_posets(3), st.data())
def test_every_map_is_admissible_for_joins(A, B, data):
    maps = list(monotone_maps(A, B))
    L = data.draw(st.sampled_from(maps))
    w = check_admissible(JoinCompletion(), L)
    assert w is not None
    assert w.phi.holds(A.elements())


@given(nonempty_posets(3), nonempty_posets(3), st.data())
def test_identity_doctrine_admissibility_is_having_a_right_adjoint(A, B, data):
    L = data.draw(st.sampled_from(list(monotone_maps(A, B))))
    assert (check_admissible(IdentityDoctrine(), L) is not None) == brute_has_right_adjoint(L)


def test_generators_mode_agrees_with_exhaustive():
    p = JoinCompletion()
    for A in generate_corpus("posets:<=2"):
        for B in generate_corpus("posets:<=3"):
            for L in monotone_maps(A, B):
                w1 = check_admissible(p, L, mode="exhaustive")
                w2 = check_admissible(p, L, mode="generators")
                assert w1 is not None and w2 is not None
                for E in p.P(B).elements():
                    assert w1.res(E) == w2.res(E)


@given(posets(3), posets(3), st.data())
def test_fully_faithful_shortcut_matches_generic(A, B, data):
    maps = list(monotone_maps(A, B))
    if not maps:
        return
    L = data.draw(st.sampled_from(maps))
    p = JoinCompletion()
    assert check_p_fully_faithful(p, L) == p_fully_faithful_generic(p, L)


def test_fully_faithful_examples():
    p = JoinCompletion()
    c2, a2 = FinPoset.chain(2), FinPoset.antichain(2)
    assert check_p_fully_faithful(p, Map.from_table(a2, c2, {0: 0, 1: 1})) is False
    assert check_p_fully_faithful(p, Map.identity(c2)) is True


def test_cocomplete_means_joins_for_the_join_doctrine():
    p = JoinCompletion()
    assert check_cocomplete(p, FinJoinLattice.certify(FinPoset.chain(2)))
    assert not check_cocomplete(p, FinPoset.antichain(2))
    vee = FinPoset(["p", "q", "t"], [("p", "t"), ("q", "t")])
    assert not check_cocomplete(p, vee)


def test_homomorphisms_preserve_bottom():
    p = JoinCompletion()
    C = FinJoinLattice.certify(FinPoset.chain(3))
    assert check_homomorphism(p, Map.identity(C))
    lift = Map(C, C, lambda x: max(x, 1), "lift")
    assert not check_homomorphism(p, lift)


def test_doctrine_morphisms():
    corpus = generate_corpus("posets:<=2")
    assert check_doctrine_morphism(identity_morphism(JoinCompletion()), corpus, max_maps=8).ok
    rep = check_doctrine_morphism(join_to_identity_morphism(), corpus, max_maps=8)
    # the two-element antichain has no joins
    assert not rep.ok
    assert any(f.check == "unit_comparison_invertible" for f in rep.failures)
    u = unit_as_morphism(JoinCompletion())
    assert preorder_property(u, u, corpus)
