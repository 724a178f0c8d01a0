"""Exhaustive instance corpora: posets and small categories up to isomorphism."""
from __future__ import annotations

import itertools
import re
from functools import lru_cache

from .core2cat import FinCategory, validate_category
from .errors import ConfigurationError, StructuralError
from .poset import FinPoset


def _canonical_relation(n: int, rel: frozenset) -> tuple:
    return min(tuple(sorted((p[a], p[b]) for a, b in rel)) for p in itertools.permutations(range(n)))


@lru_cache(maxsize=None)
def _poset_relations(n: int) -> tuple:
    """Strict orders on range(n) up to iso, each naturally labelled."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    seen = {}
    for bits in range(1 << len(pairs)):
        rel = frozenset(p for k, p in enumerate(pairs) if (bits >> k) & 1)
        if any((a, c) not in rel for a, b in rel for b2, c in rel if b == b2):
            continue
        key = _canonical_relation(n, rel)
        seen.setdefault(key, rel)
    return tuple(sorted(seen.values(), key=lambda r: (len(r), _canonical_relation(n, r))))


def posets_up_to_iso(n: int) -> list:
    out = []
    rels = _poset_relations(n)
    full = n * (n - 1) // 2
    for k, rel in enumerate(rels):
        if n == 0:
            name = "empty"
        elif n == 1:
            name = "point"
        elif not rel:
            name = f"antichain{n}"
        elif len(rel) == full:
            name = f"chain{n}"
        else:
            name = f"poset{n}.{k}"
        out.append(FinPoset(range(n), sorted(rel), name=name))
    return out


def _canonical_category(n: int, arrows: tuple, comp: dict) -> tuple:
    best = None
    k = len(arrows)
    for p in itertools.permutations(range(n)):
        for q in itertools.permutations(range(k)):
            inv = {q[i]: i for i in range(k)}   # new position -> old index
            arr = tuple((p[arrows[inv[j]][0]], p[arrows[inv[j]][1]]) for j in range(k))

            def rename(h):
                return ("id", p[h[1]]) if h[0] == "id" else ("a", q[h[1]])

            table = tuple(sorted((q[g], q[f], rename(h)) for (g, f), h in comp.items()))
            key = (arr, table)
            if best is None or key < best:
                best = key
    return best


@lru_cache(maxsize=None)
def _category_tables(n: int, max_arrows: int) -> tuple:
    ends = [(s, t) for s in range(n) for t in range(n)]
    found = {}
    for k in range(max_arrows + 1):
        for arrows in itertools.combinations_with_replacement(ends, k):
            composable = [(g, f) for g in range(k) for f in range(k) if arrows[f][1] == arrows[g][0]]
            options = []
            for g, f in composable:
                s, t = arrows[f][0], arrows[g][1]
                opts = [("a", h) for h in range(k) if arrows[h] == (s, t)]
                if s == t:
                    opts.append(("id", s))
                options.append(opts)
            for pick in itertools.product(*options):
                comp = dict(zip(composable, pick))
                try:
                    c = _build_category(n, arrows, comp)
                except StructuralError:
                    continue
                if not validate_category(c).ok:
                    continue
                key = _canonical_category(n, arrows, comp)
                found.setdefault(key, (arrows, tuple(sorted(comp.items()))))
    return tuple(found[k] for k in sorted(found))


def _build_category(n, arrows, comp, name=None) -> FinCategory:
    def mid(h):
        return ("id", h[1]) if h[0] == "id" else f"a{h[1]}"

    mors = [(f"a{i}", s, t) for i, (s, t) in enumerate(arrows)]
    table = {(f"a{g}", f"a{f}"): mid(h) for (g, f), h in dict(comp).items()}
    return FinCategory(range(n), mors, table, name=name)


def categories_up_to_iso(n: int, max_arrows: int = 2) -> list:
    """Categories with exactly n objects and at most max_arrows non-identity arrows."""
    return [_build_category(n, arrows, comp, name=f"cat{n}.{k}")
            for k, (arrows, comp) in enumerate(_category_tables(n, max_arrows))]


_SELECTOR = re.compile(r"^(posets|cats):(<=)?(\d+)$")


def generate_corpus(selector: str, max_arrows: int = 2) -> list:
    """``posets:N`` (exactly N elements), ``posets:<=N``, ``cats:N``, ``cats:<=N``."""
    m = _SELECTOR.match(selector.strip())
    if not m:
        raise ConfigurationError(f"unknown corpus selector {selector!r}")
    kind, cumulative, n = m.group(1), bool(m.group(2)), int(m.group(3))
    sizes = range(n + 1) if cumulative else [n]
    out = []
    for k in sizes:
        if kind == "posets":
            if k > 6:
                raise ConfigurationError("poset corpora are limited to 6 elements")
            out.extend(posets_up_to_iso(k))
        else:
            if k > 4:
                raise ConfigurationError("category corpora are limited to 4 objects")
            out.extend(categories_up_to_iso(k, max_arrows))
    return out
