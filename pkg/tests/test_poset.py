import itertools
import random

import pytest
from hypothesis import given, strategies as st

from kzlift.errors import PreconditionError
from kzlift.poset import (FinJoinLattice, FinPoset, Map, certify_left_extension, first_difference,
                          left_extension_oracle, left_extension_search, monotone_maps, pointwise_left_extension,
                          random_monotone_map)

from conftest import SMALL_LATTICES, lattice_from_subsets, monotone_into_lattice, posets


def brute_monotone_count(P, Q) -> int:
    pe, qe = P.elements(), Q.elements()
    n = 0
    for vals in itertools.product(qe, repeat=len(pe)):
        f = dict(zip(pe, vals))
        if all(Q.leq(f[a], f[b]) for a in pe for b in pe if P.leq(a, b)):
            n += 1
    return n


@given(posets(3), posets(3))
def test_monotone_enumeration_matches_brute_force(P, Q):
    maps = list(monotone_maps(P, Q))
    assert len(maps) == brute_monotone_count(P, Q)
    assert len({f.graph() for f in maps}) == len(maps)


@given(posets(4), st.sampled_from(SMALL_LATTICES), st.integers(0, 1000))
def test_random_monotone_maps_are_monotone(P, C, seed):
    f = random_monotone_map(P, C, random.Random(seed))
    assert f.is_monotone()


def test_preorders_are_quotiented():
    P = FinPoset(["a", "b", "c"], [("a", "b"), ("b", "a"), ("b", "c")])
    assert P.elements() == ("a", "c")
    assert P.classes == {"a": "a", "b": "a", "c": "c"}


def test_join_certification_fails_without_joins(antichain2):
    assert FinJoinLattice.try_certify(antichain2) is None
    assert FinJoinLattice.try_certify(FinPoset.chain(3)).top == 2


def test_extension_along_identity_is_the_map(chain2):
    C = FinJoinLattice.certify(FinPoset.chain(3))
    F = Map.from_table(chain2, C, {0: 1, 1: 2})
    R, cell = left_extension_search(Map.identity(chain2), F)
    assert first_difference(R, F) is None


def test_extension_from_a_point_picking_bottom(chain2):
    X = FinPoset.chain(1, "point")
    along = Map.from_table(X, chain2, {0: 0})
    C = FinJoinLattice.certify(FinPoset.chain(2))
    F = Map.from_table(X, C, {0: 0})
    for found in (left_extension_oracle(along, F), left_extension_search(along, F)):
        assert found[0].table() == {0: 0, 1: 0}


def test_extension_is_absent_without_upper_bounds(antichain2):
    vee = FinPoset(["p", "q", "t"], [("p", "t"), ("q", "t")])
    along = Map.from_table(antichain2, vee, {0: "p", 1: "q"})
    F = Map.identity(antichain2)
    assert left_extension_oracle(along, F) is None
    assert left_extension_search(along, F) is None


def test_pointwise_extension_needs_joins(antichain2):
    with pytest.raises(PreconditionError):
        pointwise_left_extension(Map.identity(antichain2), Map.identity(antichain2))


def test_diamond_top_from_two_atoms():
    D = lattice_from_subsets(2)
    A = FinPoset.antichain(2)
    F = Map.from_table(A, D, {0: frozenset({0}), 1: frozenset({1})})
    V = FinPoset(["p", "q", "t"], [("p", "t"), ("q", "t")])
    along = Map.from_table(A, V, {0: "p", 1: "q"})
    R, _ = left_extension_search(along, F)
    assert R("t") == frozenset({0, 1})


@given(monotone_into_lattice(3), st.integers(0, 1000))
def test_three_extension_methods_agree(data, seed):
    A, C, F = data
    # a random monotone "along" into a random bigger poset with a top
    rng = random.Random(seed)
    n = len(A.elements()) + 1
    B = FinPoset(range(n + 1), [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.5]
                 + [(i, n) for i in range(n)])
    along = random_monotone_map(A, B, rng)
    R = pointwise_left_extension(F, along)
    s = left_extension_search(along, F)
    o = left_extension_oracle(along, F)
    assert s is not None and o is not None
    assert first_difference(R, s[0]) is None
    assert first_difference(R, o[0]) is None
    assert certify_left_extension(R, F, along, method="oracle").ok


@given(monotone_into_lattice(3))
def test_a_wrong_extension_is_not_certified(data):
    A, C, F = data
    along = Map.identity(A)
    shifted = Map(A, C, lambda a: C.top, "top")
    if first_difference(shifted, F) is not None:
        assert not certify_left_extension(shifted, F, along, method="pointwise").ok
        assert not certify_left_extension(shifted, F, along, method="oracle").ok
