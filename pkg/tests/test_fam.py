import pytest

from kzlift.core2cat import FinCategory, Functor, all_functors
from kzlift.corpus import generate_corpus
from kzlift.errors import PreconditionError
from kzlift.fam import (brute_force_right_adjoint, check_left_multiadjoint, fam_pi, fam_pi_functor,
                        fam_sigma)

CATS = generate_corpus("cats:<=2")


def functor_pairs(cats):
    for a in cats:
        for b in cats:
            for l in all_functors(a, b):
                yield l


@pytest.mark.parametrize("a", CATS[:6], ids=repr)
def test_family_object_counts(a):
    n = len(a.objects)
    assert len(fam_sigma(a, 2).objects) == 1 + n + n * n
    assert len(fam_pi(a, 2).objects) == 1 + n + n * n


def test_families_over_the_point():
    # maps between index sets of size <= 2: sum of m ** n over n, m in {0, 1, 2}
    point = FinCategory([0])
    assert len(fam_sigma(point, 2).morphisms) == 11
    assert len(fam_pi(point, 2).morphisms) == 11


def test_bound_must_be_positive():
    with pytest.raises(PreconditionError):
        fam_sigma(FinCategory([0]), 0)


def test_identity_is_multiadjoint_with_singletons():
    a = FinCategory.from_poset(generate_corpus("posets:2")[0])
    res = check_left_multiadjoint(Functor.identity(a))
    assert res.ok
    assert all(len(f) == 1 for f in res.families.values())


def test_discrete_two_to_the_point():
    two, one = FinCategory([0, 1]), FinCategory(["*"])
    l = Functor(two, one, {0: "*", 1: "*"})
    res = check_left_multiadjoint(l)
    assert res.ok
    assert len(res.families["*"]) == 2
    # no single object of the source is universal
    assert brute_force_right_adjoint(l, bound=2) is not None
    assert check_left_multiadjoint(l, bound=1).status == "inconclusive"


def test_idempotent_breaks_uniqueness():
    # one object with an idempotent e: both id and e map the only comma object to itself
    e = FinCategory([0], [("e", 0, 0)], {("e", "e"): "e"})
    l = Functor(e, FinCategory(["*"]), {0: "*"})
    assert check_left_multiadjoint(l).status == "not"


def test_agrees_with_brute_force_search():
    seen = 0
    for l in functor_pairs(CATS):
        res = check_left_multiadjoint(l)
        if res.status == "inconclusive":
            continue
        assert res.ok == (brute_force_right_adjoint(l) is not None), repr(l)
        seen += 1
    assert seen > 50


def test_fam_pi_keeps_multiadjoints():
    for l in functor_pairs(CATS[:5]):
        if check_left_multiadjoint(l).ok:
            assert check_left_multiadjoint(fam_pi_functor(l), bound=None).ok, repr(l)
