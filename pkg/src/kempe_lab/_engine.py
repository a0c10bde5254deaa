"""Compiled kernels for exhaustive reconfiguration-graph search.

Colorings are encoded as mixed-radix integers over per-vertex list positions,
vertex 0 most significant, so that numeric order on codes equals lexicographic
order on color tuples (lists are sorted ascending). Colors inside the kernels
are palette indices; vertex sets are int64 bitmasks, hence n <= 62 and at most
62 distinct colors per instance.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .errors import CapacityError

MAX_VERTICES = 62
MAX_PALETTE = 62
MAX_CODE = 1 << 62


@njit(cache=True)
def _enumerate(n, order, adjm, lst, lens, radix, cap):
    colmask = np.zeros(MAX_PALETTE, dtype=np.int64)
    color = np.full(n, -1, dtype=np.int64)
    idx = np.full(n, -1, dtype=np.int64)
    size = 1024
    out = np.empty(size, dtype=np.int64)
    count = 0
    if n == 0:
        out[0] = 0
        return out[:1], 1, False
    depth = 0
    code = 0
    while depth >= 0:
        v = order[depth]
        if color[v] >= 0:
            colmask[color[v]] &= ~(np.int64(1) << v)
            code -= idx[depth] * radix[v]
            color[v] = -1
        idx[depth] += 1
        if idx[depth] >= lens[v]:
            idx[depth] = -1
            depth -= 1
            continue
        c = lst[v, idx[depth]]
        if adjm[v] & colmask[c]:
            continue
        color[v] = c
        colmask[c] |= np.int64(1) << v
        code += idx[depth] * radix[v]
        if depth == n - 1:
            if count >= cap:
                return out[:count], count, True
            if count == size:
                bigger = np.empty(size * 2, dtype=np.int64)
                bigger[:size] = out
                out = bigger
                size *= 2
            out[count] = code
            count += 1
        else:
            depth += 1
    return out[:count], count, False


@njit(cache=True)
def _find(parent, i):
    while parent[i] != i:
        parent[i] = parent[parent[i]]
        i = parent[i]
    return i


@njit(cache=True)
def _lookup(codes, key):
    lo = 0
    hi = codes.shape[0] - 1
    while lo <= hi:
        mid = (lo + hi) >> 1
        if codes[mid] < key:
            lo = mid + 1
        elif codes[mid] > key:
            hi = mid - 1
        else:
            return mid
    return -1


@njit(cache=True)
def _decode(code, n, lst, lens, radix, color):
    for v in range(n):
        color[v] = lst[v, (code // radix[v]) % lens[v]]


@njit(cache=True)
def _chain(v, pair_mask, adjm, n):
    chain = np.int64(1) << v
    frontier = chain
    while frontier:
        nxt = np.int64(0)
        for u in range(n):
            if (frontier >> u) & 1:
                nxt |= adjm[u]
        nxt &= pair_mask & ~chain
        chain |= nxt
        frontier = nxt
    return chain


@njit(cache=True)
def _neighbor_code(code, chain, a, b, color, pos, radix, n):
    new = code
    for x in range(n):
        if (chain >> x) & 1:
            c = color[x]
            other = b if c == a else a
            new += (pos[x, other] - pos[x, c]) * radix[x]
    return new


@njit(cache=True)
def _components(codes, n, adjm, lst, lens, radix, pos, inlist):
    total = codes.shape[0]
    parent = np.arange(total)
    color = np.empty(n, dtype=np.int64)
    colmask = np.zeros(MAX_PALETTE, dtype=np.int64)
    directed = 0
    for i in range(total):
        code = codes[i]
        _decode(code, n, lst, lens, radix, color)
        for v in range(n):
            colmask[color[v]] |= np.int64(1) << v
        for v in range(n):
            a = color[v]
            below = (np.int64(1) << v) - 1
            for p in range(lens[v]):
                b = lst[v, p]
                if b == a:
                    continue
                chain = _chain(v, colmask[a] | colmask[b], adjm, n)
                if chain & below:
                    continue  # counted from the chain's least vertex
                if (chain & colmask[a]) & ~inlist[b]:
                    continue
                if (chain & colmask[b]) & ~inlist[a]:
                    continue
                j = _lookup(codes, _neighbor_code(code, chain, a, b, color, pos, radix, n))
                directed += 1
                ri = _find(parent, i)
                rj = _find(parent, j)
                if ri != rj:
                    if ri < rj:
                        parent[rj] = ri
                    else:
                        parent[ri] = rj
        for v in range(n):
            colmask[color[v]] = 0
    for i in range(total):
        parent[i] = _find(parent, i)
    return parent, directed


@njit(cache=True)
def _bfs(codes, src, dst, n, adjm, lst, lens, radix, pos, inlist):
    total = codes.shape[0]
    prev = np.full(total, -1, dtype=np.int64)
    move_anchor = np.full(total, -1, dtype=np.int64)
    move_a = np.full(total, -1, dtype=np.int64)
    move_b = np.full(total, -1, dtype=np.int64)
    queue = np.empty(total, dtype=np.int64)
    seen = np.zeros(total, dtype=np.bool_)
    color = np.empty(n, dtype=np.int64)
    colmask = np.zeros(MAX_PALETTE, dtype=np.int64)
    head = 0
    tail = 1
    queue[0] = src
    seen[src] = True
    while head < tail:
        i = queue[head]
        head += 1
        if i == dst:
            break
        code = codes[i]
        _decode(code, n, lst, lens, radix, color)
        for v in range(n):
            colmask[color[v]] |= np.int64(1) << v
        for v in range(n):
            a = color[v]
            below = (np.int64(1) << v) - 1
            for p in range(lens[v]):
                b = lst[v, p]
                if b == a:
                    continue
                chain = _chain(v, colmask[a] | colmask[b], adjm, n)
                if chain & below:
                    continue
                if (chain & colmask[a]) & ~inlist[b]:
                    continue
                if (chain & colmask[b]) & ~inlist[a]:
                    continue
                j = _lookup(codes, _neighbor_code(code, chain, a, b, color, pos, radix, n))
                if not seen[j]:
                    seen[j] = True
                    prev[j] = i
                    move_anchor[j] = v
                    move_a[j] = a
                    move_b[j] = b
                    queue[tail] = j
                    tail += 1
        for v in range(n):
            colmask[color[v]] = 0
    return seen, prev, move_anchor, move_a, move_b


class Instance:
    """Array form of a (graph, list assignment) pair for the kernels."""

    def __init__(self, g, lists):
        n = g.n
        if n > MAX_VERTICES:
            raise ValueError(f"engine supports at most {MAX_VERTICES} vertices, got {n}")
        palette = lists.palette()
        if len(palette) > MAX_PALETTE:
            raise ValueError(f"engine supports at most {MAX_PALETTE} distinct colors, got {len(palette)}")
        self.n = n
        self.palette = palette
        self.color_index = {c: i for i, c in enumerate(palette)}
        sorted_lists = lists.sorted_lists()
        maxlen = max((len(lst) for lst in sorted_lists), default=1)
        self.lens = np.array([len(lst) for lst in sorted_lists], dtype=np.int64)
        self.lst = np.zeros((n, maxlen), dtype=np.int64)
        self.pos = np.full((n, max(len(palette), 1)), -1, dtype=np.int64)
        self.inlist = np.zeros(MAX_PALETTE, dtype=np.int64)
        for v, lst in enumerate(sorted_lists):
            for p, c in enumerate(lst):
                ci = self.color_index[c]
                self.lst[v, p] = ci
                self.pos[v, ci] = p
                self.inlist[ci] |= 1 << v
        radix = [1] * n
        for v in range(n - 2, -1, -1):
            radix[v] = radix[v + 1] * len(sorted_lists[v + 1])
        if n and radix[0] * len(sorted_lists[0]) >= MAX_CODE:
            raise ValueError("product of list sizes is too large for the coloring encoding")
        self.radix = np.array(radix, dtype=np.int64)
        self.adjm = np.array(g.masks, dtype=np.int64) if n else np.zeros(0, dtype=np.int64)
        self.order = np.array(_search_order(g), dtype=np.int64)
        self.sorted_lists = sorted_lists

    def encode(self, phi) -> int:
        code = 0
        for v in range(self.n):
            p = self.pos[v, self.color_index[phi[v]]]
            code += int(p) * int(self.radix[v])
        return code

    def decode(self, code: int) -> tuple[int, ...]:
        code = int(code)
        return tuple(
            self.sorted_lists[v][(code // int(self.radix[v])) % int(self.lens[v])]
            for v in range(self.n)
        )

    def enumerate(self, cap: int) -> np.ndarray:
        codes, count, overflow = _enumerate(self.n, self.order, self.adjm, self.lst,
                                            self.lens, self.radix, cap)
        if overflow:
            raise CapacityError("number of L-colorings", cap)
        codes = codes.copy()
        codes.sort()
        return codes

    def components(self, codes: np.ndarray) -> tuple[np.ndarray, int]:
        """Component root per coloring index and the number of reconfiguration edges."""
        roots, directed = _components(codes, self.n, self.adjm, self.lst, self.lens,
                                      self.radix, self.pos, self.inlist)
        return roots, directed // 2

    def bfs(self, codes: np.ndarray, src: int, dst: int):
        return _bfs(codes, src, dst, self.n, self.adjm, self.lst, self.lens, self.radix,
                    self.pos, self.inlist)


def _search_order(g) -> list[int]:
    # BFS order per component, so each vertex after the first sees colored neighbors early
    seen = [False] * g.n
    order = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        queue = [s]
        for u in queue:
            order.append(u)
            for w in g.neighbors(u):
                if not seen[w]:
                    seen[w] = True
                    queue.append(w)
    return order
