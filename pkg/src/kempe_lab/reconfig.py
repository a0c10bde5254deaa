"""Reconfiguration graphs of L-colorings under L-valid Kempe swaps."""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional, Sequence

import numpy as np

from ._engine import Instance
from .coloring import (
    Coloring,
    KempeMove,
    ListAssignment,
    _chain_is_valid,
    _check_lists,
    _swapped,
    apply_swap,
    is_proper_L_coloring,
    kempe_chain_mask,
)
from .errors import CapacityError, WitnessInvalidError
from .graph import Graph

DEFAULT_CAP = 10**7


@dataclass(frozen=True)
class SwapSequence:
    """Moves transforming ``start`` into ``end``, each L-valid when applied."""

    start: Coloring
    end: Coloring
    moves: tuple[KempeMove, ...] = ()

    def __len__(self) -> int:
        return len(self.moves)

    def replay(self, g: Graph, lists: ListAssignment) -> list[Coloring]:
        """Apply every move; returns the visited colorings or raises ``WitnessInvalidError``."""
        if not is_proper_L_coloring(g, lists, self.start):
            raise WitnessInvalidError("start is not an L-coloring")
        trail = [tuple(self.start)]
        phi = tuple(self.start)
        for i, move in enumerate(self.moves):
            try:
                phi = apply_swap(g, lists, phi, move)
            except ValueError as exc:
                raise WitnessInvalidError(f"move {i} ({move}) does not replay: {exc}") from None
            trail.append(phi)
        if phi != tuple(self.end):
            raise WitnessInvalidError("replay does not end at the stated coloring")
        return trail

    def to_json(self) -> list[dict]:
        return [m.to_json() for m in self.moves]


@dataclass(frozen=True)
class SwappabilityReport:
    coloring_count: int
    component_count: int
    move_count: int = 0
    witness: Optional[tuple[Coloring, Coloring]] = None

    @property
    def swappable(self) -> bool:
        return self.coloring_count >= 1 and self.component_count == 1

    def to_json(self) -> dict:
        witness = None
        if self.witness is not None:
            witness = {"first": list(self.witness[0]), "second": list(self.witness[1])}
        return {
            "colorings": self.coloring_count,
            "components": self.component_count,
            "swappable": self.swappable,
            "witness": witness,
        }


@dataclass
class ReconfigGraph:
    """Explicit reconfiguration graph: nodes are L-colorings, edges single swaps."""

    colorings: list[Coloring]
    adjacency: list[list[int]]
    labels: list[int] = field(default_factory=list)

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    @property
    def component_count(self) -> int:
        return len(set(self.labels))


# -- enumeration --------------------------------------------------------------

def _python_colorings(g: Graph, lists: ListAssignment, cap: int) -> list[Coloring]:
    out: list[Coloring] = []
    phi: list = [None] * g.n
    options = lists.sorted_lists()

    def extend(v):
        if v == g.n:
            if len(out) >= cap:
                raise CapacityError("number of L-colorings", cap)
            out.append(tuple(phi))
            return
        earlier = [phi[u] for u in g.neighbors(v) if u < v]
        for c in options[v]:
            if c not in earlier:
                phi[v] = c
                extend(v + 1)
        phi[v] = None

    extend(0)
    return out


def enumerate_L_colorings(g: Graph, lists: ListAssignment, cap: int = DEFAULT_CAP,
                          method: str = "engine") -> list[Coloring]:
    """All L-colorings of ``g`` in lexicographic order.

    ``method="python"`` uses a plain recursive enumerator instead of the
    compiled kernel (the two are cross-checked in the test suite).
    """
    _check_lists(g, lists)
    if method == "python":
        return _python_colorings(g, lists, cap)
    if method != "engine":
        raise ValueError(f"unknown method {method!r}")
    inst = Instance(g, lists)
    return [inst.decode(c) for c in inst.enumerate(cap)]


def count_L_colorings(g: Graph, lists: ListAssignment, cap: int = DEFAULT_CAP) -> int:
    return len(Instance(g, lists).enumerate(cap))


def valid_moves(g: Graph, lists: ListAssignment, phi: Sequence[int],
                allowed: int | None = None) -> list[tuple[KempeMove, Coloring]]:
    """Every L-valid swap of ``phi`` with its result, one entry per distinct result.

    Moves are anchored at the least vertex of their chain and sorted by
    ``(anchor, pair)``.
    """
    out = []
    seen = set()
    for v in range(g.n):
        if allowed is not None and not (allowed >> v) & 1:
            continue
        a = phi[v]
        below = (1 << v) - 1
        for b in sorted(lists[v]):
            if b == a:
                continue
            chain = kempe_chain_mask(g, phi, v, a, b, allowed)
            if chain & below:
                continue
            if not _chain_is_valid(lists, phi, chain, a, b):
                continue
            result = tuple(_swapped(phi, chain, a, b))
            if result not in seen:
                seen.add(result)
                out.append((KempeMove.of(v, a, b), result))
    return out


def build_reconfiguration_graph(g: Graph, lists: ListAssignment,
                                cap: int = DEFAULT_CAP) -> ReconfigGraph:
    """Materialize the reconfiguration graph with pure-Python chain computations."""
    colorings = _python_colorings(g, lists, cap)
    index = {phi: i for i, phi in enumerate(colorings)}
    adjacency = []
    for phi in colorings:
        adjacency.append(sorted(index[res] for _, res in valid_moves(g, lists, phi)))
    labels = [-1] * len(colorings)
    for s in range(len(colorings)):
        if labels[s] >= 0:
            continue
        labels[s] = s
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in adjacency[u]:
                if labels[w] < 0:
                    labels[w] = s
                    queue.append(w)
    return ReconfigGraph(colorings, adjacency, labels)


def is_L_swappable(g: Graph, lists: ListAssignment, cap: int = DEFAULT_CAP) -> SwappabilityReport:
    """Decide L-swappability by exhaustive search of the reconfiguration graph."""
    _check_lists(g, lists)
    inst = Instance(g, lists)
    codes = inst.enumerate(cap)
    if len(codes) == 0:
        return SwappabilityReport(0, 0, 0, None)
    roots, edges = inst.components(codes)
    ncomp = len(np.unique(roots))
    witness = None
    if ncomp > 1:
        other = int(np.argmax(roots != roots[0]))
        witness = (inst.decode(codes[0]), inst.decode(codes[other]))
    return SwappabilityReport(len(codes), ncomp, edges, witness)


def coloring_set_components(g: Graph, lists: ListAssignment, member: Callable[[Coloring], bool],
                            cap: int = DEFAULT_CAP) -> tuple[int, int]:
    """How many L-colorings satisfy ``member`` and how many components they meet.

    The set mixes exactly when the second number is 1 (and it is nonempty).
    """
    inst = Instance(g, lists)
    codes = inst.enumerate(cap)
    if len(codes) == 0:
        return 0, 0
    roots, _ = inst.components(codes)
    hit = set()
    count = 0
    for i, code in enumerate(codes):
        if member(inst.decode(code)):
            count += 1
            hit.add(int(roots[i]))
    return count, len(hit)


def component_labels(g: Graph, lists: ListAssignment, colorings: Sequence[Coloring],
                     cap: int = DEFAULT_CAP) -> list[int]:
    """Reconfiguration component id (smallest member index) for each given coloring."""
    inst = Instance(g, lists)
    codes = inst.enumerate(cap)
    roots, _ = inst.components(codes)
    out = []
    for phi in colorings:
        i = int(np.searchsorted(codes, inst.encode(phi)))
        if i >= len(codes) or codes[i] != inst.encode(phi):
            raise ValueError(f"{phi} is not an L-coloring")
        out.append(int(roots[i]))
    return out


def kempe_equivalent(g: Graph, lists: ListAssignment, phi1: Sequence[int], phi2: Sequence[int],
                     cap: int = DEFAULT_CAP) -> Optional[SwapSequence]:
    """Shortest swap sequence from ``phi1`` to ``phi2``, or None when they are separated."""
    for name, phi in (("first", phi1), ("second", phi2)):
        if not is_proper_L_coloring(g, lists, phi):
            raise ValueError(f"{name} coloring is not an L-coloring")
    phi1, phi2 = tuple(phi1), tuple(phi2)
    if phi1 == phi2:
        return SwapSequence(phi1, phi2, ())
    inst = Instance(g, lists)
    codes = inst.enumerate(cap)
    src = int(np.searchsorted(codes, inst.encode(phi1)))
    dst = int(np.searchsorted(codes, inst.encode(phi2)))
    seen, prev, anchor, ca, cb = inst.bfs(codes, src, dst)
    if not seen[dst]:
        return None
    moves = []
    j = dst
    while j != src:
        moves.append(KempeMove.of(int(anchor[j]), inst.palette[ca[j]], inst.palette[cb[j]]))
        j = int(prev[j])
    moves.reverse()
    return SwapSequence(phi1, phi2, tuple(moves))


# -- assignment enumeration ---------------------------------------------------

def enumerate_canonical_assignments(
    g: Graph | int,
    sizes: Sequence[int],
    palette_bound: int,
    accept: Optional[Callable[[int, list[frozenset[int]]], bool]] = None,
) -> Iterator[ListAssignment]:
    """One assignment per color-relabeling class, colors drawn from ``0..palette_bound-1``.

    The representative of a class sorts colors by their membership vectors
    (which vertices' lists contain them, vertices in id order), largest
    first. Within a run of colors whose membership agrees on the vertices
    seen so far, the lists therefore always take an initial segment of the
    run; new colors take the next unused ids.

    ``accept(v, prefix)`` may prune: it sees the lists of vertices ``0..v``
    and returns False to skip every completion.
    """
    n = g if isinstance(g, int) else g.n
    if len(sizes) != n:
        raise ValueError(f"need {n} list sizes, got {len(sizes)}")
    if any(s < 1 for s in sizes):
        raise ValueError("list sizes must be positive")
    if palette_bound < max(sizes, default=0):
        raise ValueError("palette_bound is smaller than the largest list")

    prefix: list[frozenset[int]] = []

    def choose(runs, k, need, picked, split):
        # runs: list of (start, length); pick an initial segment of each run
        if k == len(runs):
            yield picked, split
            return
        start, length = runs[k]
        top = min(length, need)
        for j in range(top, -1, -1):
            parts = []
            if j:
                parts.append((start, j))
            if length - j:
                parts.append((start + j, length - j))
            yield from choose(runs, k + 1, need - j, picked + list(range(start, start + j)), split + parts)

    def extend(v, runs, used):
        if v == n:
            yield ListAssignment(tuple(prefix))
            return
        size = sizes[v]
        for picked, split in choose(runs, 0, size, [], []):
            fresh = size - len(picked)
            if used + fresh > palette_bound:
                continue
            new_runs = split + ([(used, fresh)] if fresh else [])
            prefix.append(frozenset(picked) | frozenset(range(used, used + fresh)))
            if accept is None or accept(v, prefix):
                yield from extend(v + 1, new_runs, used + fresh)
            prefix.pop()

    yield from extend(0, [], 0)


def canonical_form(lists: ListAssignment) -> ListAssignment:
    """Relabel colors to the class representative used by ``enumerate_canonical_assignments``."""
    n = len(lists)
    vectors = {}
    for c in lists.palette():
        vectors[c] = tuple(1 if c in lists[v] else 0 for v in range(n))
    ranked = sorted(vectors, key=lambda c: vectors[c], reverse=True)
    mapping = {c: i for i, c in enumerate(ranked)}
    return lists.relabel_colors(mapping)


def random_assignment(sizes: Sequence[int], palette: int, rng: random.Random) -> ListAssignment:
    """Uniform random lists of the given sizes from ``0..palette-1``."""
    colors = range(palette)
    return ListAssignment(tuple(frozenset(rng.sample(colors, s)) for s in sizes))
