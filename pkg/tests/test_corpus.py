import itertools

import networkx as nx
import pytest

from kzlift.core2cat import validate_category
from kzlift.corpus import generate_corpus
from kzlift.errors import ConfigurationError

# posets up to isomorphism on 0..5 points
POSET_COUNTS = [1, 1, 2, 5, 16, 63]


@pytest.mark.parametrize("n", range(len(POSET_COUNTS)))
def test_poset_counts(n):
    assert len(generate_corpus(f"posets:{n}")) == POSET_COUNTS[n]


def test_six_point_posets():
    assert len(generate_corpus("posets:6")) == 318


def test_cumulative_selector():
    assert len(generate_corpus("posets:<=3")) == sum(POSET_COUNTS[:4])


@pytest.mark.parametrize("bad", ["posets", "sets:3", "posets:7", "cats:9", "posets:-1"])
def test_bad_selectors(bad):
    with pytest.raises(ConfigurationError):
        generate_corpus(bad)


def test_posets_are_pairwise_non_isomorphic():
    for n in range(5):
        graphs = [nx.DiGraph([(a, b) for a in P.elements() for b in P.elements() if a != b and P.leq(a, b)])
                  for P in generate_corpus(f"posets:{n}")]
        for G, P in zip(graphs, generate_corpus(f"posets:{n}")):
            G.add_nodes_from(P.elements())
        for G, H in itertools.combinations(graphs, 2):
            assert not nx.is_isomorphic(G, H)


def test_one_object_categories_are_small_monoids():
    # monoids of order 1, 2, 3 up to isomorphism: 1 + 2 + 7
    assert len(generate_corpus("cats:1")) == 10


# an independent enumeration: every endpoint assignment and composition table, validated by hand
# and deduplicated by graph isomorphism


def _valid(n, arrows, comp) -> bool:
    src = {("a", i): s for i, (s, _) in enumerate(arrows)}
    tgt = {("a", i): t for i, (_, t) in enumerate(arrows)}
    for x in range(n):
        src["id", x] = tgt["id", x] = x
    mors = list(src)

    def c(g, f):
        if g[0] == "id":
            return f
        if f[0] == "id":
            return g
        return comp[g[1], f[1]]

    for f in mors:
        for g in mors:
            if tgt[f] != src[g]:
                continue
            h = c(g, f)
            if src[h] != src[f] or tgt[h] != tgt[g]:
                return False
            for e in mors:
                if tgt[e] == src[f] and c(c(g, f), e) != c(g, c(f, e)):
                    return False
    return True


def _graph(n, arrows, comp) -> nx.DiGraph:
    """Objects, arrows and composites as nodes; each incidence gets its own role node."""
    G = nx.DiGraph()

    def link(a, b, role):
        r = ("r", a, b, role)
        G.add_node(r, kind=role)
        G.add_edge(a, r)
        G.add_edge(r, b)

    for x in range(n):
        G.add_node(("o", x), kind="obj")
        G.add_node(("id", x), kind="id")
        link(("id", x), ("o", x), "src")
        link(("id", x), ("o", x), "tgt")
    for i, (s, t) in enumerate(arrows):
        G.add_node(("a", i), kind="arr")
        link(("a", i), ("o", s), "src")
        link(("a", i), ("o", t), "tgt")
    for (g, f), h in comp.items():
        node = ("c", g, f)
        G.add_node(node, kind="comp")
        link(node, ("a", g), "g")
        link(node, ("a", f), "f")
        link(node, h if h[0] == "id" else ("a", h[1]), "h")
    return G


def independent_category_count(n: int, max_arrows: int) -> int:
    ends = [(s, t) for s in range(n) for t in range(n)]
    reps: list = []
    for k in range(max_arrows + 1):
        for arrows in itertools.product(ends, repeat=k):
            pairs = [(g, f) for g in range(k) for f in range(k) if arrows[f][1] == arrows[g][0]]
            choices = []
            for g, f in pairs:
                s, t = arrows[f][0], arrows[g][1]
                opts = [("a", h) for h in range(k) if arrows[h] == (s, t)]
                if s == t:
                    opts.append(("id", s))
                choices.append(opts)
            for pick in itertools.product(*choices):
                comp = dict(zip(pairs, pick))
                if not _valid(n, arrows, comp):
                    continue
                G = _graph(n, arrows, comp)
                if not any(nx.is_isomorphic(G, H, node_match=lambda a, b: a["kind"] == b["kind"]) for H in reps):
                    reps.append(G)
    return len(reps)


@pytest.mark.parametrize("n", [1, 2])
def test_category_counts_match_independent_enumeration(n):
    assert len(generate_corpus(f"cats:{n}")) == independent_category_count(n, 2)


def test_three_object_category_count():
    assert len(generate_corpus("cats:3")) == independent_category_count(3, 2)


@pytest.mark.parametrize("c", generate_corpus("cats:<=2"), ids=repr)
def test_generated_categories_are_valid(c):
    assert validate_category(c).ok
