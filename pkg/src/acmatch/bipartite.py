"""Bipartite graphs: Hopcroft-Karp, enumeration of all maximum matchings and
the canonical-matching filter for graphs with duplicated nodes."""
from __future__ import annotations

from collections import deque
from typing import Dict, Hashable, Iterable, Iterator, List, Mapping, Optional, Sequence, Set, Tuple

__all__ = [
    "BipartiteGraph",
    "BipartiteMatchGraph",
    "hopcroft_karp",
    "enumerate_maximum_matchings",
    "is_canonical",
]

Edge = Tuple[int, int]


def _sorted(items: Iterable[Hashable]) -> List[Hashable]:
    items = list(dict.fromkeys(items))
    try:
        return sorted(items)
    except TypeError:
        return items


class BipartiteGraph:
    """A bipartite graph with labelled edges between left and right nodes.

    Nodes are arbitrary hashable values kept in sorted order when they are
    orderable, which makes every traversal deterministic.
    """

    def __init__(self, edges: Optional[Iterable] = None, left: Iterable = (), right: Iterable = ()):
        self._edges: Dict[Tuple[Hashable, Hashable], object] = {}
        self._left = list(left)
        self._right = list(right)
        if edges is not None:
            pairs = edges.items() if isinstance(edges, Mapping) else ((e, None) for e in edges)
            for (l, r), label in pairs:
                self.add_edge(l, r, label)

    def add_edge(self, left: Hashable, right: Hashable, label: object = None) -> None:
        self._edges[(left, right)] = label
        self._left.append(left)
        self._right.append(right)

    @property
    def left(self) -> List[Hashable]:
        return _sorted(self._left)

    @property
    def right(self) -> List[Hashable]:
        return _sorted(self._right)

    @property
    def edges(self) -> List[Tuple[Hashable, Hashable]]:
        lidx = {n: i for i, n in enumerate(self.left)}
        ridx = {n: i for i, n in enumerate(self.right)}
        return sorted(self._edges, key=lambda e: (lidx[e[0]], ridx[e[1]]))

    def label(self, left: Hashable, right: Hashable) -> object:
        return self._edges[(left, right)]

    def __contains__(self, edge) -> bool:
        return edge in self._edges

    def __len__(self) -> int:
        return len(self._edges)

    def _indexed(self) -> Tuple[List[Hashable], List[Hashable], List[Edge]]:
        left, right = self.left, self.right
        lidx = {n: i for i, n in enumerate(left)}
        ridx = {n: i for i, n in enumerate(right)}
        edges = sorted((lidx[l], ridx[r]) for l, r in self._edges)
        return left, right, edges


class BipartiteMatchGraph(BipartiteGraph):
    """Graph whose nodes are ``(term, duplication index)`` pairs; edge labels are substitution sets."""

    @classmethod
    def duplicated(
        cls,
        patterns: Sequence[Tuple[Hashable, int]],
        subjects: Sequence[Tuple[Hashable, int]],
        labels: Mapping[Tuple[Hashable, Hashable], object],
    ) -> "BipartiteMatchGraph":
        """Duplicate every pattern and subject term by its multiplicity.

        Indices are consecutive from 1 per side, following the given term order.
        """
        graph = cls()
        pnodes, snodes = [], []
        i = 0
        for term, mult in patterns:
            for _ in range(mult):
                i += 1
                pnodes.append((term, i))
        j = 0
        for term, mult in subjects:
            for _ in range(mult):
                j += 1
                snodes.append((term, j))
        graph._left = list(pnodes)
        graph._right = list(snodes)
        for pn in pnodes:
            for sn in snodes:
                key = (pn[0], sn[0])
                if key in labels:
                    graph.add_edge(pn, sn, labels[key])
        return graph


def _hopcroft_karp(n_left: int, n_right: int, adj: Sequence[Sequence[int]]) -> List[int]:
    """Maximum matching as a list mapping left index to right index (or -1)."""
    match_l = [-1] * n_left
    match_r = [-1] * n_right
    inf = n_left + n_right + 1
    while True:
        dist = [inf] * n_left
        queue = deque()
        for u in range(n_left):
            if match_l[u] < 0:
                dist[u] = 0
                queue.append(u)
        found = False
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                w = match_r[v]
                if w < 0:
                    found = True
                elif dist[w] == inf:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        if not found:
            break

        def augment(u: int) -> bool:
            for v in adj[u]:
                w = match_r[v]
                if w < 0 or (dist[w] == dist[u] + 1 and augment(w)):
                    match_l[u] = v
                    match_r[v] = u
                    return True
            dist[u] = inf
            return False

        for u in range(n_left):
            if match_l[u] < 0:
                augment(u)
    return match_l


def _adjacency(n_left: int, edges: Iterable[Edge]) -> List[List[int]]:
    adj: List[List[int]] = [[] for _ in range(n_left)]
    for l, r in sorted(edges):
        adj[l].append(r)
    return adj


def _find_cycle(n_left: int, n_right: int, edges: Set[Edge], match_l: Sequence[int]) -> Optional[List[Edge]]:
    """An alternating cycle as a list of edges, or None.

    Arcs go left to right along matched edges and right to left along the others.
    """
    back: List[List[int]] = [[] for _ in range(n_right)]
    for l, r in sorted(edges):
        if match_l[l] != r:
            back[r].append(l)
    # nodes: left l -> l, right r -> n_left + r
    color = [0] * (n_left + n_right)
    parent = [-1] * (n_left + n_right)

    def successors(node: int) -> List[int]:
        if node < n_left:
            r = match_l[node]
            return [n_left + r] if r >= 0 else []
        return back[node - n_left]

    for start in range(n_left):
        if color[start] or match_l[start] < 0:
            continue
        stack = [(start, iter(successors(start)))]
        color[start] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                color[node] = 2
                stack.pop()
                continue
            if color[nxt] == 0:
                color[nxt] = 1
                parent[nxt] = node
                stack.append((nxt, iter(successors(nxt))))
            elif color[nxt] == 1:
                path = [nxt]
                cur = node
                while cur != nxt:
                    path.append(cur)
                    cur = parent[cur]
                path.reverse()
                # path lists the cycle nodes in arc order starting at nxt
                cycle = []
                for a, b in zip(path, path[1:] + path[:1]):
                    if a < n_left:
                        cycle.append((a, b - n_left))
                    else:
                        cycle.append((b, a - n_left))
                return cycle
    return None


def _find_path(n_left: int, n_right: int, edges: Set[Edge], match_l: Sequence[int]) -> Optional[Tuple[Edge, Edge]]:
    """A length-two alternating path from a free node: (matched edge to drop, edge to add)."""
    match_r = [-1] * n_right
    for l, r in enumerate(match_l):
        if r >= 0:
            match_r[r] = l
    for l, r in sorted(edges):
        if match_l[l] < 0 and match_r[r] >= 0:
            return (match_r[r], r), (l, r)
        if match_r[r] < 0 and match_l[l] >= 0:
            return (l, match_l[l]), (l, r)
    return None


def _enumerate(n_left: int, n_right: int, edges: Set[Edge], match_l: List[int]) -> Iterator[List[int]]:
    cycle = _find_cycle(n_left, n_right, edges, match_l)
    if cycle is not None:
        other = list(match_l)
        matched = [e for e in cycle if match_l[e[0]] == e[1]]
        for l, r in cycle:
            if match_l[l] != r:
                other[l] = r
        e = matched[0]
    else:
        path = _find_path(n_left, n_right, edges, match_l)
        if path is None:
            return
        e, add = path
        other = list(match_l)
        other[e[0]] = -1
        other[add[0]] = add[1]
    # matchings containing e
    plus = {(l, r) for l, r in edges if (l, r) == e or (l != e[0] and r != e[1])}
    yield from _enumerate(n_left, n_right, plus, match_l)
    # matchings avoiding e
    minus = set(edges)
    minus.discard(e)
    yield other
    yield from _enumerate(n_left, n_right, minus, other)


def _maximum_matchings_indexed(n_left: int, n_right: int, edges: Iterable[Edge]) -> Iterator[List[int]]:
    edges = set(edges)
    seed = _hopcroft_karp(n_left, n_right, _adjacency(n_left, edges))
    yield seed
    yield from _enumerate(n_left, n_right, edges, seed)


def hopcroft_karp(graph: BipartiteGraph) -> Dict[Hashable, Hashable]:
    """A maximum-cardinality matching as a dict from left to right nodes."""
    left, right, edges = graph._indexed()
    match_l = _hopcroft_karp(len(left), len(right), _adjacency(len(left), edges))
    return {left[l]: right[r] for l, r in enumerate(match_l) if r >= 0}


def enumerate_maximum_matchings(graph: BipartiteGraph) -> Iterator[Dict[Hashable, Hashable]]:
    """Lazily yield every maximum matching exactly once, starting with the Hopcroft-Karp one."""
    left, right, edges = graph._indexed()
    if not edges:
        yield {}
        return
    for match_l in _maximum_matchings_indexed(len(left), len(right), edges):
        yield {left[l]: right[r] for l, r in enumerate(match_l) if r >= 0}


def is_canonical(matching) -> bool:
    """Check the index-monotonicity condition on a matching of duplicated nodes.

    ``matching`` maps (or is an iterable of pairs) ``(p, n_p) -> (s, n_s)``.
    Edges into copies of the same subject term must keep the pattern indices in
    the order of the subject indices, and the same holds for edges out of
    copies of one pattern term.
    """
    pairs = list(matching.items()) if isinstance(matching, Mapping) else list(matching)
    for (p, np), (s, ns) in pairs:
        for (p2, np2), (s2, ns2) in pairs:
            if s == s2 and np > np2 and not ns > ns2:
                return False
            if p == p2 and ns > ns2 and not np > np2:
                return False
    return True


def _is_canonical_indexed(match_l: Sequence[int], pterm: Sequence[int], sterm: Sequence[int]) -> bool:
    # indices of equal terms are contiguous, so it suffices to compare each pair once
    n = len(match_l)
    for a in range(n):
        ra = match_l[a]
        if ra < 0:
            continue
        for b in range(a + 1, n):
            rb = match_l[b]
            if rb < 0:
                continue
            if (sterm[ra] == sterm[rb] or pterm[a] == pterm[b]) and rb < ra:
                return False
    return True


def _uses_first_copies(match_l: Sequence[int], pterm: Sequence[int], sterm: Sequence[int]) -> bool:
    """True when, on both sides, a matched copy of a term is preceded only by matched copies.

    Together with the index condition this picks exactly one matching per
    duplication class even when some copies stay unmatched.
    """
    for a in range(1, len(pterm)):
        if match_l[a] >= 0 and match_l[a - 1] < 0 and pterm[a] == pterm[a - 1]:
            return False
    used = [False] * len(sterm)
    for r in match_l:
        if r >= 0:
            used[r] = True
    for r in range(1, len(sterm)):
        if used[r] and not used[r - 1] and sterm[r] == sterm[r - 1]:
            return False
    return True
