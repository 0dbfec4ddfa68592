import itertools
import random
from collections import Counter

from acmatch.bipartite import (
    BipartiteGraph,
    BipartiteMatchGraph,
    _is_canonical_indexed,
    _maximum_matchings_indexed,
    _uses_first_copies,
    enumerate_maximum_matchings,
    hopcroft_karp,
    is_canonical,
)
from helpers import brute_matchings

# pattern nodes x¹, x², a³ and subject nodes h(a)¹, h(a)², a³
FIG_EDGES = {
    1: (("x", 1), ("h(a)", 1)),
    2: (("x", 1), ("h(a)", 2)),
    3: (("x", 2), ("h(a)", 1)),
    4: (("x", 2), ("h(a)", 2)),
    5: (("x", 1), ("a", 3)),
    6: (("x", 2), ("a", 3)),
    7: (("a", 3), ("a", 3)),
}


def fig_graph():
    return BipartiteGraph(FIG_EDGES.values())


def edge_numbers(matching):
    inverse = {e: n for n, e in FIG_EDGES.items()}
    return sorted(inverse[item] for item in matching.items())


def test_fig_hopcroft_karp():
    assert len(hopcroft_karp(fig_graph())) == 3


def test_fig_enumeration_and_canonical():
    found = [edge_numbers(m) for m in enumerate_maximum_matchings(fig_graph())]
    assert sorted(found) == [[1, 4, 7], [2, 3, 7]]
    by_edges = {tuple(edge_numbers(m)): is_canonical(m) for m in enumerate_maximum_matchings(fig_graph())}
    assert by_edges == {(1, 4, 7): True, (2, 3, 7): False}


def test_duplicated_graph_matches_figure():
    labels = {("x", "h(a)"): "x->h(a)", ("x", "a"): "x->a", ("a", "a"): "{}"}
    g = BipartiteMatchGraph.duplicated([("x", 2), ("a", 1)], [("h(a)", 2), ("a", 1)], labels)
    assert set(g.edges) == set(FIG_EDGES.values())
    assert g.label(("x", 1), ("a", 3)) == "x->a"


def test_trivial_graphs():
    assert hopcroft_karp(BipartiteGraph()) == {}
    assert list(enumerate_maximum_matchings(BipartiteGraph())) == [{}]
    star = BipartiteGraph([(0, "a"), (0, "b"), (0, "c")])
    assert len(hopcroft_karp(star)) == 1
    assert list(enumerate_maximum_matchings(BipartiteGraph([(0, 0)]))) == [{0: 0}]
    k33 = BipartiteGraph(itertools.product(range(3), range(3)))
    assert len(list(enumerate_maximum_matchings(k33))) == 6


def test_all_distinct_terms_canonical():
    assert is_canonical({("p", 1): ("s", 1), ("q", 1): ("t", 1)})


def _random_graph(rng, max_side=6):
    nl, nr = rng.randint(1, max_side), rng.randint(1, max_side)
    p = rng.random()
    edges = [(l, r) for l in range(nl) for r in range(nr) if rng.random() < p]
    return nl, nr, edges


def test_hopcroft_karp_size_vs_brute_force():
    rng = random.Random(3)
    for _ in range(300):
        nl, nr, edges = _random_graph(rng, 8)
        if len(edges) > 18:
            edges = rng.sample(edges, 18)
        best = max((len(m) for m in brute_matchings(nl, nr, edges)), default=0)
        g = BipartiteGraph(edges)
        assert len(hopcroft_karp(g)) == best


def test_enumeration_vs_brute_force():
    rng = random.Random(4)
    for _ in range(300):
        nl, nr, edges = _random_graph(rng)
        g = BipartiteGraph(edges)
        got = [frozenset(m.items()) for m in enumerate_maximum_matchings(g)]
        assert len(got) == len(set(got))
        if edges:
            assert set(got) == brute_matchings(nl, nr, edges)


def test_canonical_is_a_transversal():
    rng = random.Random(9)
    for _ in range(200):
        pmult = [rng.randint(1, 2) for _ in range(rng.randint(1, 3))]
        smult = [rng.randint(1, 3) for _ in range(rng.randint(1, 3))]
        pterm = [t for t, m in enumerate(pmult) for _ in range(m)]
        sterm = [t for t, m in enumerate(smult) for _ in range(m)]
        term_edges = {(p, s) for p in range(len(pmult)) for s in range(len(smult)) if rng.random() < 0.6}
        edges = [(i, j) for i, p in enumerate(pterm) for j, s in enumerate(sterm) if (p, s) in term_edges]
        if not edges:
            continue
        all_max = list(_maximum_matchings_indexed(len(pterm), len(sterm), edges))

        def collapse(match_l):
            return frozenset(Counter((pterm[i], sterm[j]) for i, j in enumerate(match_l) if j >= 0).items())

        canonical = [m for m in all_max if _is_canonical_indexed(m, pterm, sterm)]
        collapsed = [collapse(m) for m in canonical]
        assert set(collapsed) == {collapse(m) for m in all_max}
        # with unmatched copies left over, the choice of copy is not fixed by
        # the index condition alone; using the first copies fixes it
        if len(pterm) == len(sterm) and all(j >= 0 for j in all_max[0]):
            assert len(collapsed) == len(set(collapsed))
        chosen = [collapse(m) for m in canonical if _uses_first_copies(m, pterm, sterm)]
        assert len(chosen) == len(set(chosen))
        assert set(chosen) == {collapse(m) for m in all_max}
