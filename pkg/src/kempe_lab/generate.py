"""Exhaustive generators for small graph corpora.

Isomorphism classes are separated with a canonical certificate computed by
individualization and refinement; it is exact but exponential in the worst
case, which is fine at the sizes used here (n <= 12).
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterator, Optional

from .graph import Graph, encode_graph6, is_connected


def _refine(g: Graph, cells: list[list[int]]) -> list[list[int]]:
    while True:
        where = {}
        for i, cell in enumerate(cells):
            for v in cell:
                where[v] = i
        out = []
        changed = False
        for cell in cells:
            if len(cell) == 1:
                out.append(cell)
                continue
            groups: dict[tuple, list[int]] = {}
            for v in cell:
                sig = [0] * len(cells)
                for w in g.neighbors(v):
                    sig[where[w]] += 1
                groups.setdefault(tuple(sig), []).append(v)
            if len(groups) > 1:
                changed = True
            for sig in sorted(groups):
                out.append(groups[sig])
        cells = out
        if not changed:
            return cells


def certificate(g: Graph) -> str:
    """A string equal for two graphs exactly when they are isomorphic."""
    if g.n == 0:
        return encode_graph6(g)
    best: list[Optional[tuple]] = [None]

    def leaf_key(order):
        pos = {v: i for i, v in enumerate(order)}
        return tuple(sorted((min(pos[u], pos[v]), max(pos[u], pos[v])) for u, v in g.edges))

    def search(cells):
        cells = _refine(g, cells)
        target = next((i for i, c in enumerate(cells) if len(c) > 1), None)
        if target is None:
            key = leaf_key([c[0] for c in cells])
            if best[0] is None or key < best[0]:
                best[0] = key
            return
        cell = cells[target]
        for v in cell:
            rest = [w for w in cell if w != v]
            search(cells[:target] + [[v], rest] + cells[target + 1:])

    search([list(range(g.n))])
    canon = Graph(g.n, best[0])
    return encode_graph6(canon)


def canonical_graph(g: Graph) -> Graph:
    from .graph import parse_graph6
    return parse_graph6(certificate(g))


def connected_graphs(n: int, min_deg: int = 0, max_deg: Optional[int] = None) -> Iterator[Graph]:
    """Every connected graph on ``n`` vertices up to isomorphism, by edge-subset enumeration.

    Degree bounds filter (and prune) the enumeration. Output is in canonical
    form, sorted by graph6 string.
    """
    if n < 1:
        return
    if max_deg is None:
        max_deg = n - 1
    pairs = list(combinations(range(n), 2))
    deg = [0] * n
    chosen: list[tuple[int, int]] = []
    found: dict[str, None] = {}

    def rec(k):
        if k == len(pairs):
            if min(deg) < min_deg:
                return
            g = Graph(n, chosen)
            if is_connected(g):
                found.setdefault(certificate(g), None)
            return
        u, v = pairs[k]
        # once every pair at u is decided, u's degree is final
        if deg[u] < max_deg and deg[v] < max_deg:
            deg[u] += 1
            deg[v] += 1
            chosen.append((u, v))
            rec(k + 1)
            chosen.pop()
            deg[u] -= 1
            deg[v] -= 1
        if v == n - 1 and deg[u] < min_deg:
            return
        rec(k + 1)

    rec(0)
    from .graph import parse_graph6
    for cert in sorted(found):
        yield parse_graph6(cert)


def regular_graphs(n: int, k: int) -> list[Graph]:
    """Connected ``k``-regular graphs on ``n`` vertices up to isomorphism.

    Graphs are built directly in breadth-first labelling (the neighbors of
    each vertex that are not yet discovered receive the next free ids), which
    every connected graph admits, then deduplicated by certificate.
    """
    if n < k + 1 or (n * k) % 2:
        return []
    masks = [0] * n
    deg = [0] * n
    found: dict[str, None] = {}

    def rec(i, nxt):
        if i == n:
            if nxt == n:
                g = Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if (masks[u] >> v) & 1])
                found.setdefault(certificate(g), None)
            return
        if i >= nxt:
            return
        r = k - deg[i]
        candidates = [j for j in range(i + 1, nxt) if deg[j] < k and not (masks[i] >> j) & 1]
        for fresh in range(0, min(r, n - nxt) + 1):
            for old in combinations(candidates, r - fresh):
                targets = list(old) + list(range(nxt, nxt + fresh))
                for j in targets:
                    masks[i] |= 1 << j
                    masks[j] |= 1 << i
                    deg[j] += 1
                deg[i] += len(targets)
                rec(i + 1, nxt + fresh)
                deg[i] -= len(targets)
                for j in targets:
                    masks[i] &= ~(1 << j)
                    masks[j] &= ~(1 << i)
                    deg[j] -= 1

    rec(0, 1)
    from .graph import parse_graph6
    return [parse_graph6(c) for c in sorted(found)]
