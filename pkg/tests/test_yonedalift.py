import itertools

import pytest

from kzlift.corpus import generate_corpus
from kzlift.distlaw import LambdaFamily
from kzlift.errors import PreconditionError
from kzlift.kzdoctrine import IdentityDoctrine, JoinCompletion
from kzlift.poset import FinPoset, Map, monotone_maps
from kzlift.pseudomonad import ListMonad, monoid_algebra, monotone_monoids
from kzlift.yonedalift import (LocalMap, check_doctrinal_adjunction, check_locally_ff_preservation,
                               check_yoneda_roundtrip, compose_local, extend_to_oplax_through_lax_ff,
                               lax_violation, local_yoneda, locally_ff_violation, monoid_bicategory,
                               oplax_violation, reversed_lambda, yoneda_diagram, yoneda_setting)


@pytest.fixture(scope="module")
def law():
    t, p = ListMonad(), JoinCompletion()
    return t, p, LambdaFamily(t, p)


def algebras_on(t, P):
    return [monoid_algebra(t, P, table, e, f"{P!r}#{k}") for k, (table, e) in enumerate(monotone_monoids(P))]


def test_locally_ff_facts_hold(law):
    t, p, lam = law
    assert check_locally_ff_preservation(t, p, lam, generate_corpus("posets:<=2")).ok


def test_reversed_law_is_flagged(law):
    t, p, _ = law
    rep = check_locally_ff_preservation(t, p, reversed_lambda(t, p), [FinPoset.antichain(2)])
    assert not rep.ok
    assert all(f.counterexample["law_omega2"] is False for f in rep.failures)


def test_yoneda_diagram_of_an_embedding():
    p = JoinCompletion()
    L = Map.from_table(FinPoset.chain(1), FinPoset.chain(2), {0: 1})
    d = yoneda_diagram(p, L)
    assert d.ok


def test_roundtrips_on_two_chain_monoids(law):
    t, p, lam = law
    P = FinPoset.chain(2, "chain2")
    algs = algebras_on(t, P)
    assert len(algs) >= 2
    seen = 0
    for a, b in itertools.product(algs, algs):
        for L in monotone_maps(P, P):
            rep = check_yoneda_roundtrip(yoneda_setting(t, p, lam, a, b, L))
            assert rep.ok, rep.failures
            seen += len(rep.records)
    assert seen > 0


def test_setting_needs_matching_carriers(law):
    t, p, lam = law
    a = algebras_on(t, FinPoset.chain(2))[0]
    b = algebras_on(t, FinPoset.chain(1))[0]
    with pytest.raises(PreconditionError):
        yoneda_setting(t, p, lam, a, b, Map.identity(FinPoset.chain(2)))


def test_identity_doctrine_gives_the_mates(law):
    t = law[0]
    p = IdentityDoctrine()
    lam = LambdaFamily(t, p)
    P = FinPoset.chain(2, "chain2")
    algs = algebras_on(t, P)
    ran = 0
    for a, b in itertools.product(algs, algs):
        for L in monotone_maps(P, P):
            try:
                s = yoneda_setting(t, p, lam, a, b, L)
            except PreconditionError:
                continue  # no right adjoint
            rep = check_doctrinal_adjunction(s)
            assert rep.ok, rep.failures
            ran += len(rep.records)
    assert ran > 0


def _min_bicategory():
    C = FinPoset.chain(2)
    return monoid_bicategory(C, lambda g, f: min(g, f), 1, "min")


def test_local_yoneda_is_pseudo_and_locally_ff():
    y = local_yoneda(_min_bicategory())
    assert lax_violation(y) is None
    assert oplax_violation(y) is None
    assert locally_ff_violation(y) is None


def test_oplax_structure_reflects_through_yoneda():
    B = _min_bicategory()
    ident = LocalMap(B, B, {"*": "*"}, {("*", "*"): Map.identity(B.homs["*", "*"])})
    y = local_yoneda(B)
    out = extend_to_oplax_through_lax_ff(ident, y, compose_local(ident, y))
    assert out.trace


def test_reflection_needs_a_locally_ff_map():
    B = _min_bicategory()
    C = B.homs["*", "*"]
    ident = LocalMap(B, B, {"*": "*"}, {("*", "*"): Map.identity(C)})
    const = LocalMap(B, B, {"*": "*"}, {("*", "*"): Map.constant(C, C, 1)})
    with pytest.raises(PreconditionError):
        extend_to_oplax_through_lax_ff(ident, const, const)
