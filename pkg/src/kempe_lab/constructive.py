"""Constructive swap-sequence lifting and the counterexample builders.

All procedures work in host vertex ids. A sequence "on G - v" or "on G - H"
given by the caller uses the ids of ``Graph.without`` (ascending original
ids), and is mapped back through the returned ``keep`` tuple.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .coloring import (
    Coloring,
    KempeMove,
    ListAssignment,
    _chain_is_valid,
    _swapped,
    is_proper_L_coloring,
    kempe_chain_mask,
)
from .errors import InvariantViolation, NotSwappableError, WitnessInvalidError
from .graph import Graph, bfs_distances, bits, components, to_mask
from .reconfig import SwapSequence, kempe_equivalent
from .structure import block_decomposition, find_good_cycle, gallai_block_lists, is_gallai_tree


@dataclass
class LiftContext:
    """Bookkeeping for one lift: host, removed part, lists and per-step extensions."""

    host: Graph
    removed: tuple[int, ...]
    lists: ListAssignment
    extensions: list[Coloring] = field(default_factory=list)

    @property
    def removed_mask(self) -> int:
        return to_mask(self.removed)

    def reduced_sizes(self) -> dict[int, int]:
        """List size minus the number of outside neighbors, per removed vertex."""
        inside = self.removed_mask
        return {
            x: len(self.lists[x]) - (self.host.mask(x) & ~inside).bit_count()
            for x in self.removed
        }

    def inner_degrees(self) -> dict[int, int]:
        inside = self.removed_mask
        return {x: (self.host.mask(x) & inside).bit_count() for x in self.removed}


def _apply(g: Graph, lists: ListAssignment, phi: list, move: KempeMove, allowed: int) -> list:
    a, b = move.pair
    chain = kempe_chain_mask(g, phi, move.anchor, a, b, allowed)
    if not _chain_is_valid(lists, phi, chain, a, b):
        raise InvariantViolation(f"lifted move {move} is not L-valid")
    return _swapped(phi, chain, a, b)


def _restricted(phi: Sequence, mask: int) -> tuple:
    return tuple(c if (mask >> v) & 1 else None for v, c in enumerate(phi))


def _check_sub_sequence(sub: Graph, sub_lists: ListAssignment, seq: SwapSequence,
                        start: tuple, end: tuple) -> None:
    if tuple(seq.start) != start or tuple(seq.end) != end:
        raise WitnessInvalidError("sequence endpoints do not match the restricted colorings")
    seq.replay(sub, sub_lists)


# -- lifting over one vertex --------------------------------------------------

def _lift_vertex(g: Graph, lists: ListAssignment, v: int, allowed: int,
                 moves: Sequence[KempeMove], start: Sequence, v_final: int) -> tuple[list[KempeMove], list]:
    """Lift ``moves`` (valid on ``allowed``) to ``allowed + v``; ``start`` is colored on both."""
    full = allowed | (1 << v)
    psi = list(start)
    out: list[KempeMove] = []
    nbrs = bits(g.mask(v) & allowed)
    for move in moves:
        a, b = move.pair
        expect = _swapped(psi, kempe_chain_mask(g, psi, move.anchor, a, b, allowed), a, b)
        chain = kempe_chain_mask(g, psi, move.anchor, a, b, full)
        if (chain >> v) & 1:
            chain_degree = (g.mask(v) & chain).bit_count()
            both = a in lists[v] and b in lists[v]
            if not both or chain_degree >= 2:
                used = {psi[u] for u in nbrs} | {psi[v]}
                gamma = min(c for c in lists[v] if c not in used)
                recolor = KempeMove.of(v, psi[v], gamma)
                psi = _apply(g, lists, psi, recolor, full)
                out.append(recolor)
        psi = _apply(g, lists, psi, move, full)
        out.append(move)
        if any(psi[u] != expect[u] for u in bits(allowed)):
            raise InvariantViolation(f"lifting {move} changed colors outside the chain")
    if psi[v] != v_final:
        recolor = KempeMove.of(v, psi[v], v_final)
        psi = _apply(g, lists, psi, recolor, full)
        out.append(recolor)
    return out, psi


def lift_over_vertex(g: Graph, lists: ListAssignment, v: int, seq: Optional[SwapSequence],
                     phi1: Sequence[int], phi2: Sequence[int]) -> SwapSequence:
    """Turn a swap sequence on ``G - v`` into one on ``G`` between ``phi1`` and ``phi2``.

    Whenever the next swap would drag ``v`` along badly (``v`` is on the chain
    and either misses one of the two colors or sits inside the chain), ``v``
    is first moved to its smallest list color unused on its closed
    neighborhood. ``seq=None`` searches the sequence on ``G - v``.
    """
    if len(lists[v]) <= g.degree(v):
        raise ValueError(f"vertex {v} needs more than {g.degree(v)} colors, has {len(lists[v])}")
    for name, phi in (("phi1", phi1), ("phi2", phi2)):
        if not is_proper_L_coloring(g, lists, phi):
            raise ValueError(f"{name} is not an L-coloring")
    sub, keep = g.without([v])
    sub_lists = lists.restrict(keep)
    start = tuple(phi1[u] for u in keep)
    end = tuple(phi2[u] for u in keep)
    if seq is None:
        seq = kempe_equivalent(sub, sub_lists, start, end)
        if seq is None:
            raise NotSwappableError("the restrictions are not equivalent on G - v", sub_lists)
    else:
        _check_sub_sequence(sub, sub_lists, seq, start, end)
    moves = [KempeMove(keep[m.anchor], m.pair) for m in seq.moves]
    allowed = to_mask(keep)
    out, psi = _lift_vertex(g, lists, v, allowed, moves, list(phi1), phi2[v])
    if tuple(psi) != tuple(phi2):
        raise InvariantViolation("vertex lift did not reach phi2")
    return SwapSequence(tuple(phi1), tuple(phi2), tuple(out))


def swappable_order_transform(g: Graph, lists: ListAssignment, order: Sequence[int],
                              phi1: Sequence[int], phi2: Sequence[int]) -> SwapSequence:
    """Swap sequence from ``phi1`` to ``phi2`` when each vertex of ``order`` has
    fewer earlier neighbors than list colors (vertex lifts, innermost first)."""
    if sorted(order) != list(range(g.n)):
        raise ValueError("order must be a permutation of the vertices")
    for name, phi in (("phi1", phi1), ("phi2", phi2)):
        if not is_proper_L_coloring(g, lists, phi):
            raise ValueError(f"{name} is not an L-coloring")
    seen = 0
    for x in order:
        earlier = (g.mask(x) & seen).bit_count()
        if earlier >= len(lists[x]):
            raise ValueError(f"vertex {x} is preceded by {earlier} neighbors but has "
                             f"{len(lists[x])} colors")
        seen |= 1 << x
    if g.n == 0:
        return SwapSequence((), (), ())
    first = order[0]
    moves: list[KempeMove] = []
    if phi1[first] != phi2[first]:
        moves.append(KempeMove.of(first, phi1[first], phi2[first]))
    allowed = 1 << first
    # lift the sequence one vertex at a time; the start stays phi1 throughout
    for x in order[1:]:
        start = list(_restricted(phi1, allowed | (1 << x)))
        moves, _ = _lift_vertex(g, lists, x, allowed, moves, start, phi2[x])
        allowed |= 1 << x
    result = SwapSequence(tuple(phi1), tuple(phi2), tuple(moves))
    try:
        result.replay(g, lists)
    except WitnessInvalidError as exc:
        raise InvariantViolation(str(exc)) from None
    return result


# -- versatile extensions -----------------------------------------------------

class _Extender:
    """Incremental coloring of H with lists restricted by already-colored neighbors."""

    def __init__(self, g: Graph, lists: ListAssignment, phi: list, alpha: int, beta: int):
        self.g = g
        self.lists = lists
        self.phi = phi
        self.alpha = alpha
        self.beta = beta

    def options(self, x: int) -> list[int]:
        a, b = self.alpha, self.beta
        colored = [self.phi[u] for u in self.g.neighbors(x) if self.phi[u] is not None]
        out = set(self.lists[x]) - set(colored)
        na, nb = colored.count(a), colored.count(b)
        if (na and a not in self.lists[x]) or na >= 2:
            out.discard(b)
        if (nb and b not in self.lists[x]) or nb >= 2:
            out.discard(a)
        return sorted(out)

    def color(self, x: int, c: Optional[int] = None) -> None:
        opts = self.options(x)
        if not opts or (c is not None and c not in opts):
            raise InvariantViolation(f"no admissible color for vertex {x} (options {opts}, wanted {c})")
        self.phi[x] = opts[0] if c is None else c

    def color_in_order(self, order: Sequence[int]) -> None:
        for x in order:
            self.color(x)


def _greedy_toward(g: Graph, vertices: Sequence[int], target: int) -> list[int]:
    """Vertices by non-increasing distance from ``target`` inside ``vertices``; ties by id."""
    dist = bfs_distances(g, [target], to_mask(vertices))
    if len(dist) != len(vertices):
        raise InvariantViolation("greedy region is not connected to its target")
    return sorted(vertices, key=lambda u: (-dist[u], u))


def versatile_extension(g: Graph, h_vertices: Sequence[int], lists: ListAssignment,
                        partial: Sequence[Optional[int]], w: int, alpha: int, beta: int) -> Coloring:
    """Extend a coloring of ``G - H`` to ``G`` keeping the (alpha, beta)-swap at ``w`` valid.

    ``partial`` has ``None`` exactly on ``H``. Besides staying valid, the swap
    at ``w`` only grows: each (alpha, beta)-component of the result contains
    at most one such component of ``partial``.
    """
    h_set = sorted(set(h_vertices))
    h_mask = to_mask(h_set)
    outside = ((1 << g.n) - 1) & ~h_mask
    if alpha == beta:
        raise ValueError("alpha and beta must differ")
    if any((partial[v] is None) != bool((h_mask >> v) & 1) for v in range(g.n)):
        raise ValueError("partial must be uncolored exactly on H")
    h, keep = g.subgraph(h_set)
    if len(components(h)) != 1 or h.n == 0:
        raise ValueError("H must be connected")
    if is_gallai_tree(h):
        raise ValueError("H is a Gallai tree")
    for v in h_set:
        if len(lists[v]) < g.degree(v):
            raise ValueError(f"vertex {v} of H has {len(lists[v])} colors, degree {g.degree(v)}")
    for v in bits(outside):
        if partial[v] not in lists[v] or any(partial[u] == partial[v] for u in g.neighbors(v)):
            raise ValueError(f"partial is not an L-coloring at vertex {v}")
    if (h_mask >> w) & 1 or partial[w] not in (alpha, beta):
        raise ValueError(f"w={w} must be outside H and colored alpha or beta")
    chain = kempe_chain_mask(g, partial, w, alpha, beta, outside)
    if not _chain_is_valid(lists, partial, chain, alpha, beta):
        raise ValueError("the (alpha, beta)-swap at w is not L-valid for partial")

    cycle_w = find_good_cycle(h)
    cycle = [keep[i] for i in cycle_w.vertices]
    chord = (keep[cycle_w.chord[0]], keep[cycle_w.chord[1]]) if cycle_w.chord else None
    ext = _Extender(g, lists, list(partial), alpha, beta)

    rest = [v for v in h_set if v not in cycle]
    dist = bfs_distances(g, cycle, h_mask)
    ext.color_in_order(sorted(rest, key=lambda u: (-dist[u], u)))

    k = len(cycle)
    if chord is None:
        _color_chordless(ext, cycle)
    else:
        _color_with_chord(g, ext, cycle, chord)
    phi = tuple(ext.phi)
    problems = check_versatile(g, h_set, lists, partial, phi, w, alpha, beta)
    if problems:
        raise InvariantViolation("; ".join(problems))
    return phi


def _color_chordless(ext: _Extender, cycle: list[int]) -> None:
    k = len(cycle)
    ab = {ext.alpha, ext.beta}
    opts = {v: ext.options(v) for v in cycle}
    # gamma available at one end of a cycle edge but not the other
    for i in range(k):
        for step in (1, -1):
            x, y = cycle[i], cycle[(i + step) % k]
            for gamma in opts[x]:
                if gamma in ab or gamma in opts[y]:
                    continue
                ext.color(x, gamma)
                walk = [cycle[(i - step * j) % k] for j in range(1, k)]
                ext.color_in_order(walk)
                return
    common = set.intersection(*(set(o) for o in opts.values())) - ab
    if common:
        gamma = min(common)
        for v in cycle[0::2]:
            ext.color(v, gamma)
        ext.color_in_order(cycle[1::2])
        return
    if any(set(o) != ab for o in opts.values()):
        raise InvariantViolation(f"chordless cycle lists fit no case: {opts}")
    # every restricted list is {alpha, beta}: alternate directly
    for i, v in enumerate(cycle):
        ext.phi[v] = ext.alpha if i % 2 == 0 else ext.beta


def _color_with_chord(g: Graph, ext: _Extender, cycle: list[int], chord: tuple[int, int]) -> None:
    k = len(cycle)
    x = min(chord)
    i = cycle.index(x)
    y, z = cycle[(i + 1) % k], cycle[(i - 1) % k]
    ab = {ext.alpha, ext.beta}
    opts = {v: ext.options(v) for v in cycle}
    candidates = [c for c in opts[x] if c not in ab]
    if not candidates:
        raise InvariantViolation(f"chord end {x} has no color outside the swap pair")
    gamma = candidates[0]
    if gamma in opts[y] and gamma in opts[z]:
        ext.color(y, gamma)
        ext.color(z, gamma)
        rest = [v for v in cycle if v not in (y, z)]
        ext.color_in_order(_greedy_toward(g, rest, x))
        return
    if gamma in opts[z]:
        y, z = z, y
    ext.color(x, gamma)
    rest = [v for v in cycle if v != x]
    ext.color_in_order(_greedy_toward(g, rest, z))


def check_versatile(g: Graph, h_vertices: Sequence[int], lists: ListAssignment,
                    partial: Sequence[Optional[int]], phi: Sequence[int],
                    w: int, alpha: int, beta: int) -> list[str]:
    """Postcondition failures of a versatile extension (empty when it is fine)."""
    problems = []
    h_mask = to_mask(h_vertices)
    outside = ((1 << g.n) - 1) & ~h_mask
    if any(phi[v] != partial[v] for v in bits(outside)):
        problems.append("does not extend the partial coloring")
    if not is_proper_L_coloring(g, lists, phi):
        problems.append("not an L-coloring")
        return problems
    if phi[w] not in (alpha, beta):
        problems.append("w is not colored alpha or beta")
        return problems
    if not _chain_is_valid(lists, phi, kempe_chain_mask(g, phi, w, alpha, beta), alpha, beta):
        problems.append("the swap at w is not L-valid")
    pair = to_mask(v for v in range(g.n) if phi[v] in (alpha, beta))
    old = to_mask(v for v in bits(outside) if partial[v] in (alpha, beta))
    for comp in components(g, pair):
        inner = to_mask(comp) & old
        if inner and len(components(g, inner)) > 1:
            problems.append(f"component {comp} merges several components of the partial coloring")
    return problems


# -- lifting over a subgraph --------------------------------------------------

def _equalize_inside(g: Graph, lists: ListAssignment, h_set: list[int], phi: Sequence[int],
                     target: Sequence[int]) -> list[KempeMove]:
    """Moves inside H turning ``phi`` into ``target`` (both agree off H)."""
    h_mask = to_mask(h_set)
    h, keep = g.subgraph(h_set)
    reduced = []
    for x in keep:
        blocked = {phi[u] for u in g.neighbors(x) if not (h_mask >> u) & 1}
        reduced.append(frozenset(lists[x]) - blocked)
    if any(not r for r in reduced):
        raise InvariantViolation("restricted list on H is empty")
    h_lists = ListAssignment(tuple(reduced))
    seq = kempe_equivalent(h, h_lists, tuple(phi[x] for x in keep), tuple(target[x] for x in keep))
    if seq is None:
        raise NotSwappableError("H is not swappable for a restricted list assignment", h_lists)
    return [KempeMove(keep[m.anchor], m.pair) for m in seq.moves]


def lift_over_subgraph(g: Graph, h_vertices: Sequence[int], lists: ListAssignment,
                       seq: Optional[SwapSequence], phi1: Sequence[int], phi2: Sequence[int],
                       context: Optional[LiftContext] = None) -> SwapSequence:
    """Turn a swap sequence on ``G - H`` into one on ``G`` between ``phi1`` and ``phi2``.

    Before each outer swap the coloring of H is moved (by swaps inside H)
    to a versatile extension, so the swap carries over unchanged. ``seq=None``
    searches the outer sequence. Pass a ``LiftContext`` to collect the
    extensions used.
    """
    h_set = sorted(set(h_vertices))
    h_mask = to_mask(h_set)
    ctx = context if context is not None else LiftContext(g, tuple(h_set), lists)
    ctx.host, ctx.removed, ctx.lists = g, tuple(h_set), lists
    inner = ctx.inner_degrees()
    for x, size in ctx.reduced_sizes().items():
        if size < inner[x]:
            raise ValueError(f"vertex {x}: {size} colors left after outside neighbors, "
                             f"degree {inner[x]} in H")
    for name, phi in (("phi1", phi1), ("phi2", phi2)):
        if not is_proper_L_coloring(g, lists, phi):
            raise ValueError(f"{name} is not an L-coloring")
    sub, keep = g.without(h_set)
    sub_lists = lists.restrict(keep)
    start = tuple(phi1[u] for u in keep)
    end = tuple(phi2[u] for u in keep)
    if seq is None:
        seq = kempe_equivalent(sub, sub_lists, start, end)
        if seq is None:
            raise NotSwappableError("the restrictions are not equivalent on G - H", sub_lists)
    else:
        _check_sub_sequence(sub, sub_lists, seq, start, end)
    full = (1 << g.n) - 1
    psi = list(phi1)
    out: list[KempeMove] = []
    for m in seq.moves:
        w = keep[m.anchor]
        a, b = m.pair
        partial = [None if (h_mask >> v) & 1 else psi[v] for v in range(g.n)]
        tilde = versatile_extension(g, h_set, lists, partial, w, a, b)
        ctx.extensions.append(tilde)
        for inner_move in _equalize_inside(g, lists, h_set, psi, tilde):
            psi = _apply(g, lists, psi, inner_move, full)
            out.append(inner_move)
        if tuple(psi) != tilde:
            raise InvariantViolation("inner equalization missed the versatile extension")
        move = KempeMove(w, m.pair)
        psi = _apply(g, lists, psi, move, full)
        out.append(move)
    for inner_move in _equalize_inside(g, lists, h_set, psi, phi2):
        psi = _apply(g, lists, psi, inner_move, full)
        out.append(inner_move)
    result = SwapSequence(tuple(phi1), tuple(phi2), tuple(out))
    try:
        result.replay(g, lists)
    except WitnessInvalidError as exc:
        raise InvariantViolation(str(exc)) from None
    return result


# -- counterexample builders --------------------------------------------------

def build_example1_cycle(n: int) -> tuple[Graph, ListAssignment]:
    """Cycle ``v_1 .. v_n`` (ids ``0 .. n-1``) with ``L(v_i) = {i, i+1} mod n``."""
    if n < 3:
        raise ValueError(f"cycle needs n >= 3, got {n}")
    g = Graph(n, [(i, (i + 1) % n) for i in range(n)])
    lists = ListAssignment.from_lists([{i % n, (i + 1) % n} for i in range(1, n + 1)])
    return g, lists


def build_gallai_plus_edge(tree: Graph, x: int, y: int,
                           alpha: Optional[int] = None) -> tuple[Graph, ListAssignment]:
    """Add ``xy`` to a Gallai tree and give x, y a shared extra color on top of block lists.

    The block lists are pairwise disjoint, so the tree alone has no coloring
    and every coloring of the result puts ``alpha`` on ``x`` or ``y``.
    """
    if not is_gallai_tree(tree):
        raise ValueError("input graph is not a Gallai tree")
    if x == y or not (0 <= x < tree.n and 0 <= y < tree.n):
        raise ValueError(f"x={x}, y={y} must be two distinct vertices")
    if tree.has_edge(x, y):
        raise ValueError(f"{x}{y} is already an edge")
    if any(x in b and y in b for b in block_decomposition(tree).blocks):
        raise ValueError(f"{x} and {y} lie in a common block")
    g = tree.add_edges([(x, y)])
    if is_gallai_tree(g):
        raise ValueError("adding the edge leaves a Gallai tree")
    base = gallai_block_lists(tree)
    palette = set(base.palette())
    if alpha is None:
        alpha = max(palette, default=-1) + 1
    elif alpha in palette:
        raise ValueError(f"alpha={alpha} already appears in a block list")
    lists = [set(base[v]) for v in range(tree.n)]
    lists[x].add(alpha)
    lists[y].add(alpha)
    return g, ListAssignment.from_lists(lists)
