import pytest

from kzlift.corpus import generate_corpus
from kzlift.distlaw import (LambdaFamily, LiftedDoctrine, beck_violation, check_dist_law_algebraic,
                            check_dist_law_assertions, check_dist_law_uniqueness, constant_bottom_lambda,
                            day_convolution, downset_complex_multiplication, forced_cells, imkelly_equivalence,
                            join_preserving, lambda_from_free_algebra, lambda_naturality_violation,
                            lambda_product_formula, perturbed_omega1, pseudo_morphisms)
from kzlift.errors import PreconditionError
from kzlift.kzdoctrine import JoinCompletion
from kzlift.poset import FinJoinLattice, FinPoset, Map, first_difference, monotone_maps
from kzlift.pseudomonad import ListMonad, check_algebra, free_algebra, monoid_algebra, monotone_monoids

UPTO2 = generate_corpus("posets:<=2")


@pytest.fixture(scope="module")
def law():
    t, p = ListMonad(), JoinCompletion()
    return t, p, LambdaFamily(t, p)


@pytest.mark.parametrize("A", generate_corpus("posets:<=3"), ids=repr)
def test_lambda_matches_the_product_formula(law, A):
    t, p, lam = law
    assert first_difference(lam(A), lambda_product_formula(t, p, A), t.points(p.P(A), 1)) is None


@pytest.mark.parametrize("A", UPTO2, ids=repr)
def test_lambda_matches_the_free_algebra_route(law, A):
    t, p, lam = law
    assert first_difference(lam(A), lambda_from_free_algebra(t, p, A), t.points(p.P(A), 1)) is None


def test_assertions_hold(law):
    t, p, lam = law
    rep = check_dist_law_assertions(t, p, lam, UPTO2, max_maps=6)
    assert rep.ok, rep.failures[:3]


def test_constant_bottom_law_fails_omega2(law):
    t, p, _ = law
    rep = check_dist_law_assertions(t, p, constant_bottom_lambda(t, p), [FinPoset.chain(1)], max_maps=2)
    assert "omega2_invertible" in {f.check for f in rep.failures}


def test_algebraic_presentation_holds(law):
    t, p, lam = law
    rep = check_dist_law_algebraic(forced_cells(t, p, lam), UPTO2)
    assert rep.ok, rep.failures[:3]


def test_perturbed_omega1_breaks_coherence(law):
    t, p, lam = law
    rep = check_dist_law_algebraic(perturbed_omega1(forced_cells(t, p, lam)), [FinPoset.chain(1)],
                                   cross_check=False)
    failed = {f.check for f in rep.failures}
    assert {"omega1", "coh2"} <= failed
    assert "omega2" not in failed


def test_uniqueness(law):
    t, p, lam = law
    formula = LambdaFamily(t, p, lambda A: lambda_product_formula(t, p, A), "formula")
    assert check_dist_law_uniqueness(t, p, lam, formula, UPTO2) is not None
    assert check_dist_law_uniqueness(t, p, lam, constant_bottom_lambda(t, p), [FinPoset.chain(1)]) is None


def test_beck_and_naturality(law):
    t, p, lam = law
    for A in UPTO2:
        for B in UPTO2:
            for L in monotone_maps(A, B):
                assert beck_violation(t, p, lam, L) is None
                assert lambda_naturality_violation(t, p, lam, L) is None


@pytest.mark.parametrize("P", generate_corpus("posets:<=2"), ids=repr)
def test_day_convolution_is_complex_multiplication(law, P):
    t, p, lam = law
    for table, e in monotone_monoids(P):
        lifted = day_convolution(t, p, lam, monoid_algebra(t, P, table, e))
        assert check_algebra(t, lifted.algebra).ok
        cm = downset_complex_multiplication(t, p, P, table, e)
        assert first_difference(lifted.z, cm, t.points(p.P(P), 1)) is None


def test_lifted_doctrine_axioms_on_a_monoid(law):
    t, p, lam = law
    rep = LiftedDoctrine(t, p, lam).check_axioms([_max_algebra(t, 2)], [])
    assert rep.ok, rep.failures


@pytest.mark.parametrize("A", UPTO2, ids=repr)
def test_free_algebra_multiplication_matches_reconstruction(law, A):
    # P(m).lam at T A against the join over lists of lists below the argument
    t, p, lam = law
    TA, PTA = t.T(A), p.P(t.T(A))
    z = p.apply(t.mult(A)) @ lam(TA)
    yTA = p.unit(TA)
    images = [(t.fmap(yTA)(W), yTA(t.mult(A)(W))) for W in t.points(A, 2)]
    TPTA = t.T(PTA)
    direct = Map(TPTA, PTA, lambda l: PTA.join(v for img, v in images if TPTA.leq(img, l)), "direct")
    assert first_difference(z, direct, t.points(PTA, 1)) is None


def test_free_algebra_lifts_on_the_singleton_fragment():
    t, p = ListMonad(1), JoinCompletion()
    lifted = day_convolution(t, p, LambdaFamily(t, p), free_algebra(t, FinPoset.chain(1)))
    assert check_algebra(t, lifted.algebra).ok


def test_join_preserving():
    p = JoinCompletion()
    PA = p.P(FinPoset.antichain(2))
    B = FinJoinLattice.certify(FinPoset.chain(2))
    maps = list(monotone_maps(PA, B))
    # a join-preserving map out of the 4-element powerset is fixed by the two atoms
    assert sum(join_preserving(H, PA) for H in maps) == 4


def _max_algebra(t, n):
    C = FinJoinLattice.certify(FinPoset.chain(n, f"chain{n}"))
    return monoid_algebra(t, C, {(a, b): max(a, b) for a in range(n) for b in range(n)}, 0, f"max{n}")


def test_imkelly_into_a_quantale(law):
    # min on the two-chain distributes over joins and absorbs bottom
    t, p, lam = law
    A = monoid_algebra(t, FinPoset.chain(1), {(0, 0): 0}, 0, "trivial")
    C = FinJoinLattice.certify(FinPoset.chain(2))
    B = monoid_algebra(t, C, {(a, b): min(a, b) for a in (0, 1) for b in (0, 1)}, 1, "min2")
    rep = imkelly_equivalence(t, p, lam, A, B)
    assert rep.ok, rep.failures


def test_imkelly_is_inconclusive_when_bottom_is_not_absorbing(law):
    t, p, lam = law
    A = monoid_algebra(t, FinPoset.chain(1), {(0, 0): 0}, 0, "trivial")
    rep = imkelly_equivalence(t, p, lam, A, _max_algebra(t, 2))
    assert {r.check: r.status for r in rep.records} == {
        "imkelly_oplax": "pass", "imkelly_lax": "inconclusive", "imkelly_pseudo": "inconclusive"}


def test_imkelly_needs_a_cocomplete_target(law):
    t, p, lam = law
    A = monoid_algebra(t, FinPoset.chain(1), {(0, 0): 0}, 0)
    bad = monoid_algebra(t, FinPoset.antichain(1), {(0, 0): 0}, 0)
    with pytest.raises(PreconditionError):
        imkelly_equivalence(t, p, lam, A, bad)


def test_pseudo_morphisms_between_max_monoids(law):
    t, _, _ = law
    # monotone maps of the 2-chain preserving max and its unit 0
    ms = pseudo_morphisms(t, _max_algebra(t, 2), _max_algebra(t, 2))
    assert sorted(tuple(sorted(m.functor.table().items())) for m in ms) == [((0, 0), (1, 0)), ((0, 0), (1, 1))]
