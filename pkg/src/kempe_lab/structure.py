"""Blocks, Gallai trees and the induced gadgets used to certify degree-swappability."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

from .coloring import ListAssignment, find_L_coloring
from .graph import Graph, bits, components, is_connected, to_mask

BRUTE_FORCE_MAX_N = 8


@dataclass(frozen=True)
class BlockDecomposition:
    blocks: tuple[tuple[int, ...], ...]
    cut_vertices: frozenset[int]

    def blocks_of(self, v: int) -> list[int]:
        return [i for i, b in enumerate(self.blocks) if v in b]


@dataclass(frozen=True)
class StructureWitness:
    """An induced gadget found in a host graph.

    ``vertices`` is ordered per kind: the cycle order for ``GoodCycle``,
    ``(v, w, x, y)`` for ``K4Plus`` (v, w the ends of the subdivided edge),
    ``(hub, r0, r1, r2, r3)`` for ``W4``; for ``Theta``/``BipartiteTheta``
    and ``GoodCyclePair`` it is the sorted vertex set and the parts live in
    ``metadata``.
    """

    kind: str
    vertices: tuple[int, ...]
    chord: Optional[tuple[int, int]] = None
    metadata: dict = field(default_factory=dict, compare=False)

    def vertex_set(self) -> frozenset[int]:
        extra = set()
        for key in ("paths", "h1", "h2", "path"):
            val = self.metadata.get(key)
            if val is None:
                continue
            if key == "paths":
                for p in val:
                    extra.update(p)
            else:
                extra.update(val)
        return frozenset(self.vertices) | extra

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "vertices": list(self.vertices),
            "chord": list(self.chord) if self.chord else None,
            "metadata": _jsonable(self.metadata),
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _require_connected(g: Graph) -> None:
    if not is_connected(g) or g.n == 0:
        raise ValueError("graph must be connected (split components first)")


# -- blocks -------------------------------------------------------------------

def block_decomposition(g: Graph) -> BlockDecomposition:
    """Biconnected components (bridges as 2-vertex blocks, isolated vertices as 1-vertex blocks)."""
    n = g.n
    disc = [-1] * n
    low = [0] * n
    timer = 0
    blocks = []
    cuts = set()
    for root in range(n):
        if disc[root] >= 0:
            continue
        if g.degree(root) == 0:
            disc[root] = timer
            timer += 1
            blocks.append((root,))
            continue
        disc[root] = low[root] = timer
        timer += 1
        edge_stack = []
        stack = [(root, -1, iter(g.neighbors(root)))]
        root_children = 0
        while stack:
            u, parent, it = stack[-1]
            advanced = False
            for w in it:
                if disc[w] < 0:
                    edge_stack.append((u, w))
                    disc[w] = low[w] = timer
                    timer += 1
                    if u == root:
                        root_children += 1
                    stack.append((w, u, iter(g.neighbors(w))))
                    advanced = True
                    break
                if w != parent and disc[w] < disc[u]:
                    edge_stack.append((u, w))
                    low[u] = min(low[u], disc[w])
            if advanced:
                continue
            stack.pop()
            if parent >= 0:
                low[parent] = min(low[parent], low[u])
                if low[u] >= disc[parent]:
                    if parent != root:
                        cuts.add(parent)
                    members = set()
                    while True:
                        a, b = edge_stack.pop()
                        members.update((a, b))
                        if (a, b) == (parent, u):
                            break
                    blocks.append(tuple(sorted(members)))
        if root_children > 1:
            cuts.add(root)
    blocks.sort()
    return BlockDecomposition(tuple(blocks), frozenset(cuts))


def _is_clique(g: Graph, block: tuple[int, ...]) -> bool:
    k = len(block)
    return g.induced_edge_count(to_mask(block)) == k * (k - 1) // 2


def _is_odd_cycle_block(g: Graph, block: tuple[int, ...]) -> bool:
    k = len(block)
    return k >= 3 and k % 2 == 1 and g.induced_edge_count(to_mask(block)) == k


def is_gallai_tree(g: Graph) -> bool:
    """Connected graph whose blocks are all cliques or odd cycles."""
    _require_connected(g)
    return all(_is_clique(g, b) or _is_odd_cycle_block(g, b) for b in block_decomposition(g).blocks)


def is_degree_choosable(g: Graph) -> bool:
    return not is_gallai_tree(g)


def brute_force_degree_choosable(g: Graph, prune: bool = True) -> bool:
    """Check degree-choosability by searching all degree-assignments up to color relabeling.

    With ``prune`` the search skips assignments that are colorable for a
    simple reason: if ``v`` is not a cut vertex and some color of ``L(v)`` is
    missing from a neighbor's list, color ``v`` with it and finish greedily
    toward that neighbor. So a bad assignment has ``L(v)`` inside every
    neighbor's list whenever ``v`` is not a cut vertex.
    """
    _require_connected(g)
    if g.n > BRUTE_FORCE_MAX_N:
        raise ValueError(f"brute force is limited to n <= {BRUTE_FORCE_MAX_N}, got {g.n}")
    degrees = g.degrees()
    if min(degrees) == 0:
        return False
    full = (1 << g.n) - 1
    noncut = [len(components(g, full & ~(1 << v))) == 1 for v in range(g.n)]
    from .reconfig import enumerate_canonical_assignments

    def accept(v, prefix):
        for u in g.neighbors(v):
            if u > v:
                continue
            if noncut[v] and not prefix[v] <= prefix[u]:
                return False
            if noncut[u] and not prefix[u] <= prefix[v]:
                return False
        return True

    for lists in enumerate_canonical_assignments(g, degrees, sum(degrees), accept if prune else None):
        if find_L_coloring(g, lists) is None:
            return False
    return True


def bad_degree_assignment(g: Graph) -> Optional[ListAssignment]:
    """The block-disjoint degree-assignment with no coloring when ``g`` is a Gallai tree."""
    if not is_gallai_tree(g):
        return None
    return gallai_block_lists(g)


def gallai_block_lists(g: Graph, first_color: int = 0) -> ListAssignment:
    """Disjoint per-block lists of size ``d_B(v)``, unioned at each vertex."""
    lists: list[set[int]] = [set() for _ in range(g.n)]
    nxt = first_color
    for block in block_decomposition(g).blocks:
        if len(block) == 1:
            continue
        v0 = block[0]
        d = (g.mask(v0) & to_mask(block)).bit_count()
        colors = set(range(nxt, nxt + d))
        nxt += d
        for v in block:
            lists[v] |= colors
    return ListAssignment.from_lists(lists)


# -- good cycles --------------------------------------------------------------

def _good_cycles_of_length(g: Graph, length: int, first_only: bool):
    masks = g.masks
    found = []
    for s in range(g.n):
        path = [s]
        path_mask = 1 << s

        def dfs(chords):
            nonlocal path_mask
            last = path[-1]
            depth = len(path)
            for x in g.neighbors(last):
                if x <= s or (path_mask >> x) & 1:
                    continue
                touching = (masks[x] & path_mask).bit_count() - 1
                closing = depth == length - 1
                if closing:
                    if not (masks[x] >> s) & 1:
                        continue
                    touching -= 1
                    if depth > 2 and path[1] > x:
                        continue
                total = chords + touching
                if total > 1:
                    continue
                path.append(x)
                path_mask |= 1 << x
                if closing:
                    found.append((tuple(path), total))
                    if first_only:
                        return True
                else:
                    if dfs(total):
                        return True
                path.pop()
                path_mask &= ~(1 << x)
            return False

        if dfs(0) and first_only:
            return found
    return found


def _chord_of(g: Graph, cycle: tuple[int, ...]) -> Optional[tuple[int, int]]:
    k = len(cycle)
    for i in range(k):
        for j in range(i + 2, k):
            if i == 0 and j == k - 1:
                continue
            if g.has_edge(cycle[i], cycle[j]):
                u, v = cycle[i], cycle[j]
                return (min(u, v), max(u, v))
    return None


def find_good_cycle(g: Graph) -> Optional[StructureWitness]:
    """Shortest induced even cycle with at most one chord (lexicographically least)."""
    _require_connected(g)
    for length in range(4, g.n + 1, 2):
        hits = _good_cycles_of_length(g, length, first_only=True)
        if hits:
            cycle, _ = hits[0]
            return StructureWitness("GoodCycle", cycle, _chord_of(g, cycle), {"length": length})
    return None


def all_good_cycles(g: Graph, max_length: Optional[int] = None) -> list[StructureWitness]:
    out = []
    top = g.n if max_length is None else min(max_length, g.n)
    for length in range(4, top + 1, 2):
        for cycle, _ in _good_cycles_of_length(g, length, first_only=False):
            out.append(StructureWitness("GoodCycle", cycle, _chord_of(g, cycle), {"length": length}))
    return out


def verify_good_cycle(g: Graph, cycle, chord=None) -> bool:
    k = len(cycle)
    if k < 4 or k % 2 or len(set(cycle)) != k:
        return False
    if any(not g.has_edge(cycle[i], cycle[(i + 1) % k]) for i in range(k)):
        return False
    edges = g.induced_edge_count(to_mask(cycle))
    if edges == k:
        return chord is None
    if edges == k + 1:
        return chord is not None and g.has_edge(*chord) and set(chord) <= set(cycle) \
            and _chord_of(g, tuple(cycle)) == (min(chord), max(chord))
    return False


# -- theta graphs -------------------------------------------------------------

def _induced_paths(g: Graph, x: int, y: int) -> list[tuple[int, ...]]:
    """Induced x-y paths (ignoring a possible x-y edge), sorted by (length, vertices)."""
    out = [(x, y)] if g.has_edge(x, y) else []
    masks = g.masks
    path = [x]

    def dfs(pmask):
        last = path[-1]
        for z in g.neighbors(last):
            if z == y or (pmask >> z) & 1 or (masks[z] & pmask) != (1 << last):
                continue
            if (masks[z] >> y) & 1:
                out.append(tuple(path) + (z, y))
                continue
            path.append(z)
            dfs(pmask | (1 << z))
            path.pop()

    dfs(1 << x)
    out.sort(key=lambda p: (len(p), p))
    return out


def _theta_from_paths(paths) -> StructureWitness:
    lengths = sorted(len(p) - 1 for p in paths)
    paths = sorted(paths, key=lambda p: (len(p), p))
    verts = sorted({v for p in paths for v in p})
    bip = len({ell % 2 for ell in lengths}) == 1
    return StructureWitness(
        "BipartiteTheta" if bip else "Theta",
        tuple(verts),
        None,
        {"x": paths[0][0], "y": paths[0][-1], "lengths": lengths, "paths": [list(p) for p in paths]},
    )


def find_induced_theta(g: Graph, bipartite: Optional[bool] = None) -> Optional[StructureWitness]:
    """Smallest induced theta graph (ties by vertex set).

    ``bipartite=True`` keeps only thetas whose three paths have equal parity,
    ``False`` only the others. When ``g`` is itself a theta graph this returns
    the whole graph.
    """
    degs = g.degrees()
    best = None
    for x in range(g.n):
        if degs[x] < 3:
            continue
        for y in range(x + 1, g.n):
            if degs[y] < 3:
                continue
            paths = _induced_paths(g, x, y)
            if len(paths) < 3:
                continue
            direct = g.has_edge(x, y)
            inner = [to_mask(p[1:-1]) for p in paths]
            reach = []
            for m in inner:
                r = m
                for z in bits(m):
                    r |= g.mask(z)
                reach.append(r)
            # the direct edge, if present, must be one of the three paths
            firsts = [0] if direct else range(len(paths))
            for i in firsts:
                for j, k in combinations(range(i + 1, len(paths)), 2):
                    if reach[i] & inner[j] or reach[i] & inner[k] or reach[j] & inner[k]:
                        continue
                    size = len(paths[i]) + len(paths[j]) + len(paths[k]) - 4
                    if best is not None and size > best[0]:
                        continue
                    w = _theta_from_paths([paths[i], paths[j], paths[k]])
                    if bipartite is not None and (w.kind == "BipartiteTheta") != bipartite:
                        continue
                    key = (size, w.vertices)
                    if best is None or key < best[:2]:
                        best = (size, w.vertices, w)
    return best[2] if best else None


def is_bipartite_theta(witness: StructureWitness) -> bool:
    lengths = witness.metadata["lengths"]
    return len({ell % 2 for ell in lengths}) == 1


def verify_theta(g: Graph, witness: StructureWitness) -> bool:
    paths = witness.metadata["paths"]
    if len(paths) != 3:
        return False
    x, y = paths[0][0], paths[0][-1]
    if any(p[0] != x or p[-1] != y for p in paths):
        return False
    inner = [v for p in paths for v in p[1:-1]]
    if len(set(inner)) != len(inner) or x == y or x in inner or y in inner:
        return False
    if sum(1 for p in paths if len(p) == 2) > 1:
        return False
    for p in paths:
        if any(not g.has_edge(p[i], p[i + 1]) for i in range(len(p) - 1)):
            return False
    total = sum(len(p) - 1 for p in paths)
    verts = set(inner) | {x, y}
    return g.induced_edge_count(to_mask(verts)) == total


# -- K4+ and W4 ---------------------------------------------------------------

def _shortest_path(g: Graph, src: int, dst: int, allowed: int) -> Optional[list[int]]:
    prev = {src: None}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        if u == dst:
            break
        for w in g.neighbors(u):
            if w not in prev and (allowed >> w) & 1:
                prev[w] = u
                queue.append(w)
    if dst not in prev:
        return None
    out = [dst]
    while prev[out[-1]] is not None:
        out.append(prev[out[-1]])
    return out[::-1]


def find_induced_K4_plus(g: Graph) -> Optional[StructureWitness]:
    """Induced K4 with one edge subdivided; shortest subdivided path first."""
    best = None
    for x, y in g.sorted_edges():
        common = bits(g.mask(x) & g.mask(y))
        if len(common) < 2:
            continue
        blocked = g.mask(x) | g.mask(y) | (1 << x) | (1 << y)
        for v, w in combinations(common, 2):
            if g.has_edge(v, w):
                continue
            allowed = (((1 << g.n) - 1) & ~blocked) | (1 << v) | (1 << w)
            path = _shortest_path(g, v, w, allowed)
            if path is None:
                continue
            key = (len(path), (v, w, x, y), path)
            if best is None or key < best:
                best = key
    if best is None:
        return None
    _, quad, path = best
    return StructureWitness("K4Plus", quad, None, {"path": path, "path_length": len(path) - 1})


def verify_k4_plus(g: Graph, witness: StructureWitness) -> bool:
    v, w, x, y = witness.vertices
    path = witness.metadata["path"]
    if path[0] != v or path[-1] != w or len(path) < 3:
        return False
    if not all(g.has_edge(a, b) for a, b in ((v, x), (v, y), (w, x), (w, y), (x, y))):
        return False
    if g.has_edge(v, w):
        return False
    if any(not g.has_edge(path[i], path[i + 1]) for i in range(len(path) - 1)):
        return False
    verts = set(path) | {x, y}
    if len(verts) != len(path) + 2:
        return False
    return g.induced_edge_count(to_mask(verts)) == 5 + len(path) - 1


def find_induced_W4(g: Graph) -> Optional[StructureWitness]:
    """Hub plus an induced 4-cycle in its neighborhood."""
    for h in range(g.n):
        nb = g.mask(h)
        for a in bits(nb):
            for b, d in combinations(bits(nb & g.mask(a)), 2):
                if b <= a or d <= a or g.has_edge(b, d):
                    continue
                for c in bits(nb & g.mask(b) & g.mask(d)):
                    if c == a or c < a or g.has_edge(a, c):
                        continue
                    return StructureWitness("W4", (h, a, b, c, d))
    return None


def verify_w4(g: Graph, witness: StructureWitness) -> bool:
    h, *rim = witness.vertices
    if len(set(witness.vertices)) != 5:
        return False
    if not all(g.has_edge(h, r) for r in rim):
        return False
    if not all(g.has_edge(rim[i], rim[(i + 1) % 4]) for i in range(4)):
        return False
    return g.induced_edge_count(to_mask(witness.vertices)) == 8


# -- pairs of good cycles -----------------------------------------------------

def _set_distance_path(g: Graph, a: frozenset, b: frozenset) -> list[int]:
    if a & b:
        return [min(a & b)]
    prev = {s: None for s in sorted(a)}
    queue = deque(sorted(a))
    hit = None
    while queue:
        u = queue.popleft()
        if u in b:
            hit = u
            break
        for w in g.neighbors(u):
            if w not in prev:
                prev[w] = u
                queue.append(w)
    if hit is None:
        return []
    out = [hit]
    while prev[out[-1]] is not None:
        out.append(prev[out[-1]])
    return out[::-1]


def _pair_ok(g: Graph, c1: frozenset, c2: frozenset) -> bool:
    shared = c1 & c2
    if len(shared) > 1:
        return False
    cross = 0
    only1, only2 = c1 - shared, c2 - shared
    for u in only1:
        cross += (g.mask(u) & to_mask(only2)).bit_count()
    if cross > 1:
        return False
    return not (cross == 1 and shared)


def find_good_cycle_pair(g: Graph, max_length: Optional[int] = None) -> Optional[StructureWitness]:
    """Two good cycles meeting the pair conditions, joined by a shortest path.

    Minimizes the number of vertices of the union; ties broken by vertex lists.
    """
    _require_connected(g)
    cycles = all_good_cycles(g, max_length)
    best = None
    for i, j in combinations(range(len(cycles)), 2):
        h1, h2 = cycles[i], cycles[j]
        s1, s2 = frozenset(h1.vertices), frozenset(h2.vertices)
        if not _pair_ok(g, s1, s2):
            continue
        path = _set_distance_path(g, s1, s2)
        if not path:
            continue
        union = s1 | s2 | set(path)
        key = (len(union), h1.vertices, h2.vertices)
        if best is None or key < best[0]:
            best = (key, h1, h2, path, union)
    if best is None:
        return None
    _, h1, h2, path, union = best
    meta = {
        "h1": list(h1.vertices), "h1_chord": list(h1.chord) if h1.chord else None,
        "h2": list(h2.vertices), "h2_chord": list(h2.chord) if h2.chord else None,
        "path": path, "path_length": len(path) - 1,
    }
    return StructureWitness("GoodCyclePair", tuple(sorted(union)), None, meta)


def verify_good_cycle_pair(g: Graph, witness: StructureWitness) -> bool:
    m = witness.metadata
    h1, h2, path = m["h1"], m["h2"], m["path"]
    c1 = tuple(m["h1_chord"]) if m["h1_chord"] else None
    c2 = tuple(m["h2_chord"]) if m["h2_chord"] else None
    if not (verify_good_cycle(g, h1, c1) and verify_good_cycle(g, h2, c2)):
        return False
    s1, s2 = frozenset(h1), frozenset(h2)
    if not _pair_ok(g, s1, s2):
        return False
    if path[0] not in s1 or path[-1] not in s2:
        return False
    if any(not g.has_edge(path[i], path[i + 1]) for i in range(len(path) - 1)):
        return False
    return len(path) - 1 == len(_set_distance_path(g, s1, s2)) - 1


def verify_witness(g: Graph, witness: StructureWitness) -> bool:
    """Re-check a witness with raw adjacency tests (induced-ness included)."""
    kind = witness.kind
    if kind == "GoodCycle":
        return verify_good_cycle(g, witness.vertices, witness.chord)
    if kind in ("Theta", "BipartiteTheta"):
        return verify_theta(g, witness) and (kind == "BipartiteTheta") == is_bipartite_theta(witness)
    if kind == "K4Plus":
        return verify_k4_plus(g, witness)
    if kind == "W4":
        return verify_w4(g, witness)
    if kind == "GoodCyclePair":
        return verify_good_cycle_pair(g, witness)
    raise ValueError(f"unknown witness kind {kind!r}")


def detect_structures(g: Graph) -> dict[str, Optional[StructureWitness]]:
    """Run every detector; used by survey records."""
    return {
        "good_cycle": find_good_cycle(g),
        "bipartite_theta": find_induced_theta(g, bipartite=True),
        "k4_plus": find_induced_K4_plus(g),
        "w4": find_induced_W4(g),
    }
