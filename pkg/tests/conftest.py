import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from kzlift.poset import FinJoinLattice, FinPoset, random_monotone_map

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def posets(draw, max_size=4):
    """A poset on range(n) whose order refines the natural order, closed transitively by FinPoset."""
    n = draw(st.integers(0, max_size))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return FinPoset(range(n), chosen, name=f"P{n}:{sorted(chosen)}")


@st.composite
def nonempty_posets(draw, max_size=4):
    P = draw(posets(max_size))
    if not P.elements():
        return FinPoset([0], name="point")
    return P


def lattice_from_subsets(n: int) -> FinJoinLattice:
    """Subsets of range(n) under inclusion, built directly as an oracle lattice."""
    import itertools
    elems = [frozenset(c) for k in range(n + 1) for c in itertools.combinations(range(n), k)]
    pairs = [(a, b) for a in elems for b in elems if a <= b]
    lat = FinJoinLattice.try_certify(FinPoset(elems, pairs, name=f"subsets{n}"))
    assert lat is not None
    return lat


SMALL_LATTICES = [FinJoinLattice.try_certify(FinPoset.chain(k, f"chain{k}")) for k in (1, 2, 3)] + [
    lattice_from_subsets(2)]


@st.composite
def monotone_into_lattice(draw, max_size=4):
    """(A, C, F) with F: A -> C monotone and C a small join lattice."""
    A = draw(posets(max_size))
    C = draw(st.sampled_from(SMALL_LATTICES))
    seed = draw(st.integers(0, 10 ** 6))
    return A, C, random_monotone_map(A, C, random.Random(seed), "F")


@pytest.fixture
def chain2():
    return FinPoset.chain(2, "chain2")


@pytest.fixture
def antichain2():
    return FinPoset.antichain(2, "antichain2")
