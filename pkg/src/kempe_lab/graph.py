"""Simple undirected graphs on dense vertex ids, graph6 I/O and constructors."""

from __future__ import annotations

from collections import deque
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .errors import Graph6Error

GRAPH6_MAX_N = 62


class Graph:
    """Immutable simple graph on vertices ``0..n-1``.

    Adjacency is kept both as neighbor tuples (for iteration) and as integer
    bitmasks (for O(1) membership and induced-subgraph checks).
    """

    __slots__ = ("n", "edges", "_nbrs", "_masks", "_hash")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError(f"vertex count must be nonnegative, got {n}")
        norm = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            norm.add((u, v) if u < v else (v, u))
        masks = [0] * n
        for u, v in norm:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        self.n = n
        self.edges = frozenset(norm)
        self._masks = tuple(masks)
        self._nbrs = tuple(tuple(_bits(m)) for m in masks)
        self._hash = None

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={len(self.edges)})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.edges))
        return self._hash

    def __len__(self) -> int:
        return self.n

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._nbrs[v]

    def mask(self, v: int) -> int:
        """Neighborhood of ``v`` as a bitmask."""
        return self._masks[v]

    @property
    def masks(self) -> tuple[int, ...]:
        return self._masks

    def has_edge(self, u: int, v: int) -> bool:
        return (self._masks[u] >> v) & 1 == 1

    def degree(self, v: int) -> int:
        return len(self._nbrs[v])

    def degrees(self) -> list[int]:
        return [len(nb) for nb in self._nbrs]

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def subgraph(self, vertices: Iterable[int]) -> tuple["Graph", tuple[int, ...]]:
        """Induced subgraph on ``vertices``.

        Returns the subgraph (relabelled ``0..k-1`` in ascending order of the
        original ids) and the tuple mapping new ids back to original ids.
        """
        keep = tuple(sorted(set(vertices)))
        index = {v: i for i, v in enumerate(keep)}
        sub_edges = [(index[u], index[v]) for u, v in self.edges if u in index and v in index]
        return Graph(len(keep), sub_edges), keep

    def without(self, vertices: Iterable[int]) -> tuple["Graph", tuple[int, ...]]:
        drop = set(vertices)
        return self.subgraph(v for v in range(self.n) if v not in drop)

    def add_edges(self, edges: Iterable[tuple[int, int]]) -> "Graph":
        return Graph(self.n, list(self.edges) + list(edges))

    def remove_edges(self, edges: Iterable[tuple[int, int]]) -> "Graph":
        drop = {(min(u, v), max(u, v)) for u, v in edges}
        return Graph(self.n, [e for e in self.edges if e not in drop])

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``v`` renamed ``perm[v]``."""
        return Graph(self.n, [(perm[u], perm[v]) for u, v in self.edges])

    def induced_edge_count(self, vertex_mask: int) -> int:
        total = 0
        for v in _bits(vertex_mask):
            total += (self._masks[v] & vertex_mask).bit_count()
        return total // 2


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bits(mask: int) -> list[int]:
    """Ascending list of set bit positions."""
    return list(_bits(mask))


def to_mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


# -- graph6 -------------------------------------------------------------------

def parse_graph6(text: str) -> Graph:
    """Decode a single short-form graph6 record (n <= 62)."""
    record = text.strip("\r\n")
    start = 0
    if record.startswith(">>graph6<<"):
        start = len(">>graph6<<")
    if len(record) <= start:
        raise Graph6Error("empty record", start)
    header = ord(record[start])
    if header == 126:
        raise Graph6Error("long-form graph6 (n > 62) is not supported", start)
    if not 63 <= header < 126:
        raise Graph6Error(f"invalid header byte {record[start]!r}", start)
    n = header - 63
    nbits = n * (n - 1) // 2
    nchars = (nbits + 5) // 6
    body = record[start + 1:]
    if len(body) < nchars:
        raise Graph6Error(
            f"truncated bit field: expected {nchars} bytes, found {len(body)}",
            start + 1 + len(body),
        )
    if len(body) > nchars:
        raise Graph6Error("trailing garbage after bit field", start + 1 + nchars)
    values = []
    for i, ch in enumerate(body):
        val = ord(ch) - 63
        if not 0 <= val < 64:
            raise Graph6Error(f"invalid data byte {ch!r}", start + 1 + i)
        values.append(val)
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if (values[k // 6] >> (5 - k % 6)) & 1:
                edges.append((i, j))
            k += 1
    if nchars:
        pad = 6 * nchars - nbits
        if values[-1] & ((1 << pad) - 1):
            raise Graph6Error("nonzero padding bits", start + nchars)
    return Graph(n, edges)


def encode_graph6(g: Graph) -> str:
    """Encode ``g`` in short-form graph6."""
    n = g.n
    if n > GRAPH6_MAX_N:
        raise ValueError(f"graph6 short form supports n <= {GRAPH6_MAX_N}, got n = {n}")
    out = [chr(63 + n)]
    acc = 0
    nacc = 0
    for j in range(1, n):
        mj = g.mask(j)
        for i in range(j):
            acc = (acc << 1) | ((mj >> i) & 1)
            nacc += 1
            if nacc == 6:
                out.append(chr(63 + acc))
                acc = nacc = 0
    if nacc:
        out.append(chr(63 + (acc << (6 - nacc))))
    return "".join(out)


def read_graph6_lines(lines: Iterable[str]) -> Iterator[tuple[int, str, Graph]]:
    """Yield ``(line_number, record, graph)`` skipping blanks and ``#`` comments."""
    for lineno, line in enumerate(lines, 1):
        record = line.strip()
        if not record or record.startswith("#"):
            continue
        try:
            g = parse_graph6(record)
        except Graph6Error as exc:
            raise Graph6Error(f"line {lineno}: {exc}", exc.offset) from None
        yield lineno, record, g


def read_graph6_file(path) -> list[Graph]:
    with open(path) as fh:
        return [g for _, _, g in read_graph6_lines(fh)]


# -- constructors -------------------------------------------------------------

def make_cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError(f"a cycle needs at least 3 vertices, got {n}")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def make_path(n: int) -> Graph:
    if n < 1:
        raise ValueError(f"a path needs at least 1 vertex, got {n}")
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def make_complete(n: int) -> Graph:
    if n < 1:
        raise ValueError(f"a clique needs at least 1 vertex, got {n}")
    return Graph(n, combinations(range(n), 2))


def make_complete_bipartite(a: int, b: int) -> Graph:
    return Graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def make_cartesian_product(g1: Graph, g2: Graph) -> Graph:
    """Cartesian product; vertex ``(i, j)`` gets id ``i * g2.n + j``."""
    n2 = g2.n
    edges = []
    for i in range(g1.n):
        for a, b in g2.edges:
            edges.append((i * n2 + a, i * n2 + b))
    for a, b in g1.edges:
        for j in range(n2):
            edges.append((a * n2 + j, b * n2 + j))
    return Graph(g1.n * n2, edges)


def make_prism() -> Graph:
    """The 3-prism K2 x K3."""
    return make_cartesian_product(make_complete(2), make_complete(3))


def make_wheel(rim: int) -> Graph:
    """Wheel with ``rim`` spokes; the hub is the last vertex."""
    g = make_cycle(rim)
    return Graph(rim + 1, list(g.edges) + [(i, rim) for i in range(rim)])


def make_theta(a: int, b: int, c: int) -> Graph:
    """Two branch vertices 0 and 1 joined by internally disjoint paths of lengths a, b, c."""
    lengths = sorted((a, b, c))
    if lengths[0] < 1 or lengths[1] < 2:
        raise ValueError(f"theta({a},{b},{c}) is not a simple graph")
    edges = []
    nxt = 2
    for length in (a, b, c):
        prev = 0
        for _ in range(length - 1):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
        edges.append((prev, 1))
    return Graph(nxt, edges)


def make_k4_plus(path_length: int) -> Graph:
    """K4 with the edge 0-1 replaced by a path of ``path_length`` edges.

    Vertices 0 and 1 are the ends of the subdivided edge; 2 and 3 are the
    other two clique vertices.
    """
    if path_length < 2:
        raise ValueError(f"subdivided path must have length >= 2, got {path_length}")
    edges = [(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    prev = 0
    nxt = 4
    for _ in range(path_length - 1):
        edges.append((prev, nxt))
        prev = nxt
        nxt += 1
    edges.append((prev, 1))
    return Graph(nxt, edges)


def make_petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def disjoint_union(*graphs: Graph) -> Graph:
    edges = []
    offset = 0
    for g in graphs:
        edges.extend((u + offset, v + offset) for u, v in g.edges)
        offset += g.n
    return Graph(offset, edges)


# -- structural primitives ----------------------------------------------------

def bfs_distances(g: Graph, sources: Iterable[int], allowed: int | None = None) -> dict[int, int]:
    """Distances from a source set, optionally restricted to a vertex mask."""
    dist = {}
    queue = deque()
    for s in sources:
        if s not in dist:
            dist[s] = 0
            queue.append(s)
    while queue:
        u = queue.popleft()
        for w in g.neighbors(u):
            if w not in dist and (allowed is None or (allowed >> w) & 1):
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def components(g: Graph, allowed: int | None = None) -> list[list[int]]:
    """Connected components (sorted vertex lists) of ``g`` or of ``g[allowed]``."""
    if allowed is None:
        allowed = (1 << g.n) - 1
    seen = 0
    comps = []
    for v in range(g.n):
        if not (allowed >> v) & 1 or (seen >> v) & 1:
            continue
        comp = v_mask = 1 << v
        frontier = v_mask
        while frontier:
            nxt = 0
            for u in _bits(frontier):
                nxt |= g.mask(u)
            nxt &= allowed & ~comp
            comp |= nxt
            frontier = nxt
        seen |= comp
        comps.append(bits(comp))
    return comps


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    return len(components(g)) == 1


def is_k_regular(g: Graph) -> int | None:
    degs = set(g.degrees())
    if len(degs) == 1:
        return degs.pop()
    return None


def max_degree(g: Graph) -> int:
    return max(g.degrees(), default=0)


def min_degree(g: Graph) -> int:
    return min(g.degrees(), default=0)


def _local_vertex_connectivity(g: Graph, s: int, t: int) -> int:
    # unit vertex capacities: split v into v_in = 2v and v_out = 2v + 1
    cap: dict[tuple[int, int], int] = {}
    adj: dict[int, set[int]] = {}

    def arc(a, b, c):
        cap[(a, b)] = cap.get((a, b), 0) + c
        cap.setdefault((b, a), 0)
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)

    big = g.n
    for v in range(g.n):
        arc(2 * v, 2 * v + 1, big if v in (s, t) else 1)
    for u, v in g.edges:
        arc(2 * u + 1, 2 * v, big)
        arc(2 * v + 1, 2 * u, big)
    source, sink = 2 * s + 1, 2 * t
    flow = 0
    while True:
        parent = {source: None}
        queue = deque([source])
        while queue and sink not in parent:
            a = queue.popleft()
            for b in sorted(adj.get(a, ())):
                if b not in parent and cap[(a, b)] > 0:
                    parent[b] = a
                    queue.append(b)
        if sink not in parent:
            return flow
        b = sink
        while parent[b] is not None:
            a = parent[b]
            cap[(a, b)] -= 1
            cap[(b, a)] += 1
            b = a
        flow += 1


def vertex_connectivity(g: Graph) -> int:
    """Minimum number of vertices whose removal disconnects ``g``.

    Complete graphs return ``n - 1``; disconnected graphs return 0.
    """
    if g.n <= 1 or not is_connected(g):
        return 0
    best = g.n - 1
    for s in range(g.n):
        for t in range(s + 1, g.n):
            if not g.has_edge(s, t):
                best = min(best, _local_vertex_connectivity(g, s, t))
    return best
