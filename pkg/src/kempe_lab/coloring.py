"""List assignments, L-colorings and Kempe swaps.

A coloring is a plain tuple of color ids indexed by vertex. Partial colorings
(used while extending) are lists holding ``None`` for uncolored vertices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Sequence

from .errors import InvalidSwapError, MoveUndefinedError
from .graph import Graph, bits

Coloring = tuple[int, ...]


@dataclass(frozen=True)
class ListAssignment:
    """Per-vertex finite color lists for one host graph."""

    lists: tuple[frozenset[int], ...]

    def __post_init__(self):
        for v, lst in enumerate(self.lists):
            if not lst:
                raise ValueError(f"list of vertex {v} is empty")
            if any((not isinstance(c, int)) or c < 0 for c in lst):
                raise ValueError(f"list of vertex {v} holds a non-color {sorted(lst, key=str)}")

    @classmethod
    def from_lists(cls, lists: Iterable[Iterable[int]]) -> "ListAssignment":
        return cls(tuple(frozenset(int(c) for c in lst) for lst in lists))

    @classmethod
    def uniform(cls, n: int, colors: Iterable[int]) -> "ListAssignment":
        colors = frozenset(colors)
        return cls((colors,) * n)

    def __len__(self) -> int:
        return len(self.lists)

    def __getitem__(self, v: int) -> frozenset[int]:
        return self.lists[v]

    def sorted_lists(self) -> list[list[int]]:
        return [sorted(lst) for lst in self.lists]

    def sizes(self) -> list[int]:
        return [len(lst) for lst in self.lists]

    def palette(self) -> list[int]:
        return sorted(set().union(*self.lists)) if self.lists else []

    def is_k_assignment(self, k: int) -> bool:
        return all(len(lst) == k for lst in self.lists)

    def is_f_assignment(self, f: Sequence[int]) -> bool:
        return len(f) == len(self.lists) and all(len(lst) == fv for lst, fv in zip(self.lists, f))

    def is_degree_assignment(self, g: Graph) -> bool:
        return self.is_f_assignment(g.degrees())

    def is_identical(self) -> bool:
        return len(set(self.lists)) <= 1

    def restrict(self, vertices: Sequence[int]) -> "ListAssignment":
        """Lists of ``vertices`` in the given order (matches ``Graph.subgraph`` ids)."""
        return ListAssignment(tuple(self.lists[v] for v in vertices))

    def relabel_colors(self, mapping) -> "ListAssignment":
        return ListAssignment(tuple(frozenset(mapping[c] for c in lst) for lst in self.lists))

    def relabel_vertices(self, perm: Sequence[int]) -> "ListAssignment":
        """Assignment where vertex ``perm[v]`` receives the old list of ``v``."""
        out = [None] * len(self.lists)
        for v, lst in enumerate(self.lists):
            out[perm[v]] = lst
        return ListAssignment(tuple(out))

    def to_json(self) -> list[list[int]]:
        return self.sorted_lists()


class KempeMove(NamedTuple):
    """An (alpha, beta)-swap at ``anchor``; ``pair`` is stored sorted."""

    anchor: int
    pair: tuple[int, int]

    @classmethod
    def of(cls, anchor: int, a: int, b: int) -> "KempeMove":
        if a == b:
            raise ValueError(f"a Kempe move needs two distinct colors, got {a} twice")
        return cls(anchor, (a, b) if a < b else (b, a))

    def to_json(self) -> dict:
        return {"anchor": self.anchor, "pair": list(self.pair)}

    @classmethod
    def from_json(cls, obj) -> "KempeMove":
        a, b = obj["pair"]
        return cls.of(int(obj["anchor"]), int(a), int(b))


def _check_total(g: Graph, phi: Sequence) -> None:
    if len(phi) != g.n:
        raise ValueError(f"coloring has {len(phi)} entries for a graph on {g.n} vertices")


def _check_lists(g: Graph, lists: ListAssignment) -> None:
    if len(lists) != g.n:
        raise ValueError(f"list assignment has {len(lists)} lists for a graph on {g.n} vertices")


def is_proper(g: Graph, phi: Sequence[int]) -> bool:
    _check_total(g, phi)
    return all(phi[u] != phi[v] for u, v in g.edges)


def is_proper_L_coloring(g: Graph, lists: ListAssignment, phi: Sequence[int]) -> bool:
    """True iff ``phi`` is proper and respects ``lists``."""
    _check_total(g, phi)
    _check_lists(g, lists)
    if any(c is None for c in phi):
        raise ValueError("coloring is not total")
    return all(phi[v] in lists[v] for v in range(g.n)) and is_proper(g, phi)


def kempe_chain_mask(g: Graph, phi: Sequence, v: int, a: int, b: int, allowed: int | None = None) -> int:
    """Bitmask of the (a, b)-component containing ``v``.

    ``allowed`` restricts the search to a vertex subset (an induced subgraph);
    vertices colored ``None`` never belong to a chain.
    """
    if a == b:
        raise ValueError(f"Kempe chain needs two distinct colors, got {a} twice")
    if phi[v] != a and phi[v] != b:
        raise MoveUndefinedError(f"vertex {v} has color {phi[v]}, not in {{{a}, {b}}}")
    pair_mask = 0
    for x, c in enumerate(phi):
        if c == a or c == b:
            pair_mask |= 1 << x
    if allowed is not None:
        pair_mask &= allowed
        if not (allowed >> v) & 1:
            raise ValueError(f"anchor {v} is outside the allowed vertex set")
    chain = frontier = 1 << v
    masks = g.masks
    while frontier:
        nxt = 0
        f = frontier
        while f:
            low = f & -f
            nxt |= masks[low.bit_length() - 1]
            f ^= low
        nxt &= pair_mask & ~chain
        chain |= nxt
        frontier = nxt
    return chain


def kempe_chain(g: Graph, phi: Sequence[int], v: int, a: int, b: int) -> frozenset[int]:
    """Vertex set of the (a, b)-Kempe chain through ``v``."""
    _check_total(g, phi)
    return frozenset(bits(kempe_chain_mask(g, phi, v, a, b)))


def _chain_is_valid(lists: ListAssignment, phi: Sequence, chain: int, a: int, b: int) -> bool:
    while chain:
        low = chain & -chain
        x = low.bit_length() - 1
        chain ^= low
        if (b if phi[x] == a else a) not in lists[x]:
            return False
    return True


def swap_is_L_valid(g: Graph, lists: ListAssignment, phi: Sequence[int], move: KempeMove,
                    allowed: int | None = None) -> bool:
    """True iff every chain vertex has the opposite pair color in its list."""
    _check_total(g, phi)
    a, b = move.pair
    chain = kempe_chain_mask(g, phi, move.anchor, a, b, allowed)
    return _chain_is_valid(lists, phi, chain, a, b)


def _swapped(phi: Sequence, chain: int, a: int, b: int) -> list:
    out = list(phi)
    for x in bits(chain):
        out[x] = b if out[x] == a else a
    return out


def apply_swap(g: Graph, lists: ListAssignment, phi: Sequence[int], move: KempeMove,
               allowed: int | None = None) -> Coloring:
    """Perform an L-valid Kempe swap; invalid moves raise and leave ``phi`` untouched."""
    _check_total(g, phi)
    a, b = move.pair
    chain = kempe_chain_mask(g, phi, move.anchor, a, b, allowed)
    if not _chain_is_valid(lists, phi, chain, a, b):
        raise InvalidSwapError(f"{move} is not L-valid: some chain vertex lacks the opposite color")
    return tuple(_swapped(phi, chain, a, b))


def apply_partial_swap(g: Graph, lists: ListAssignment, phi: Sequence, move: KempeMove,
                       allowed: int) -> list:
    """``apply_swap`` for a coloring defined only on ``allowed``."""
    a, b = move.pair
    chain = kempe_chain_mask(g, phi, move.anchor, a, b, allowed)
    if not _chain_is_valid(lists, phi, chain, a, b):
        raise InvalidSwapError(f"{move} is not L-valid on the given subgraph")
    return _swapped(phi, chain, a, b)


def greedy_extend(g: Graph, lists: ListAssignment, partial: Sequence[Optional[int]],
                  order: Sequence[int]) -> Optional[Coloring]:
    """Color the vertices of ``order`` in turn with their smallest available list color.

    Returns ``None`` when some vertex has every list color blocked by an
    already-colored neighbor.
    """
    _check_total(g, partial)
    uncolored = sorted(v for v, c in enumerate(partial) if c is None)
    if sorted(order) != uncolored:
        raise ValueError("order must list each uncolored vertex exactly once")
    phi = list(partial)
    for v in order:
        used = {phi[u] for u in g.neighbors(v)}
        choice = next((c for c in sorted(lists[v]) if c not in used), None)
        if choice is None:
            return None
        phi[v] = choice
    return tuple(phi)


def find_L_coloring(g: Graph, lists: ListAssignment) -> Optional[Coloring]:
    """Some L-coloring of ``g`` (backtracking with fewest-options-first), or None."""
    _check_lists(g, lists)
    phi: list = [None] * g.n
    options = [sorted(lists[v]) for v in range(g.n)]

    def pick():
        best, best_avail = None, None
        for v in range(g.n):
            if phi[v] is not None:
                continue
            used = {phi[u] for u in g.neighbors(v)}
            avail = [c for c in options[v] if c not in used]
            if best is None or len(avail) < len(best_avail):
                best, best_avail = v, avail
                if not avail:
                    break
        return best, best_avail

    def solve():
        v, avail = pick()
        if v is None:
            return True
        for c in avail:
            phi[v] = c
            if solve():
                return True
        phi[v] = None
        return False

    return tuple(phi) if solve() else None


# -- JSON ---------------------------------------------------------------------

def instance_to_json(lists: ListAssignment, colors: Optional[Sequence[int]] = None) -> dict:
    out = {"lists": lists.to_json()}
    if colors is not None:
        out["colors"] = list(colors)
    return out


def instance_from_json(obj) -> tuple[ListAssignment, Optional[Coloring]]:
    """Parse ``{"lists": [[...], ...], "colors": [...]}``; colors optional."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    if isinstance(obj, list):
        obj = {"lists": obj}
    if "lists" not in obj:
        raise ValueError("instance JSON needs a 'lists' field")
    lists = ListAssignment.from_lists(obj["lists"])
    colors = obj.get("colors")
    return lists, (tuple(int(c) for c in colors) if colors is not None else None)
