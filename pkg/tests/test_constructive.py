import itertools
import random

import networkx as nx
import pytest
from hypothesis import assume, given, strategies as st

from conftest import graphs
from kempe_lab.coloring import KempeMove, ListAssignment, find_L_coloring, is_proper_L_coloring, kempe_chain
from kempe_lab.constructive import (
    LiftContext,
    build_example1_cycle,
    build_gallai_plus_edge,
    check_versatile,
    lift_over_subgraph,
    lift_over_vertex,
    swappable_order_transform,
    versatile_extension,
)
from kempe_lab.errors import NotSwappableError, WitnessInvalidError
from kempe_lab.graph import Graph, is_connected, make_cycle, make_path, make_wheel
from kempe_lab.reconfig import (
    SwapSequence,
    enumerate_L_colorings,
    is_L_swappable,
    kempe_equivalent,
    random_assignment,
)
from kempe_lab.structure import brute_force_degree_choosable, is_gallai_tree
from oracles import colorings as oracle_colorings, nx_graph


def assert_replays(g, lists, seq, phi1, phi2):
    assert tuple(seq.start) == tuple(phi1)
    assert tuple(seq.end) == tuple(phi2)
    seq.replay(g, lists)


# -- lift_over_vertex ---------------------------------------------------------

def test_empty_sequence_gives_single_recolor():
    g = make_path(3)
    lists = ListAssignment.from_lists([{1, 2}, {1, 2}, {1, 2, 3}])
    phi1, phi2 = (1, 2, 1), (1, 2, 3)
    seq = lift_over_vertex(g, lists, 2, SwapSequence((1, 2), (1, 2), ()), phi1, phi2)
    assert seq.moves == (KempeMove.of(2, 1, 3),)
    assert_replays(g, lists, seq, phi1, phi2)


def test_vertex_lift_rejects_small_list():
    g = make_path(3)
    lists = ListAssignment.from_lists([{1, 2}, {1, 2}, {1}])
    with pytest.raises(ValueError, match="vertex 1"):
        lift_over_vertex(g, lists, 1, None, (1, 2, 1), (1, 2, 1))


def test_vertex_lift_rejects_bad_sequence():
    g = make_path(3)
    lists = ListAssignment.from_lists([{1, 2}, {1, 2}, {1, 2, 3}])
    bad = SwapSequence((1, 2), (2, 1), (KempeMove.of(0, 1, 3),))
    with pytest.raises(WitnessInvalidError):
        lift_over_vertex(g, lists, 2, bad, (1, 2, 1), (2, 1, 2))
    wrong_end = SwapSequence((1, 2), (1, 2), ())
    with pytest.raises(WitnessInvalidError):
        lift_over_vertex(g, lists, 2, wrong_end, (1, 2, 1), (2, 1, 2))


def test_vertex_lift_reports_separated_rest():
    # G - v is the 4-cycle with its two non-equivalent colorings
    c4, lists4 = build_example1_cycle(4)
    g = Graph(5, c4.sorted_edges() + [(0, 4)])
    lists = ListAssignment(lists4.lists + (frozenset({7, 8}),))
    a, b = enumerate_L_colorings(c4, lists4)
    with pytest.raises(NotSwappableError) as info:
        lift_over_vertex(g, lists, 4, None, a + (7,), b + (7,))
    assert info.value.lists == lists4


@given(st.lists(st.frozensets(st.integers(0, 4), min_size=1, max_size=3), min_size=3, max_size=3),
       st.randoms(use_true_random=False))
def test_star_leaf_swaps_lift_with_at_most_one_recolor(leaf_lists, rnd):
    g = Graph(4, [(0, 1), (0, 2), (0, 3)])
    lists = ListAssignment((frozenset({0, 1, 2, 3}),) + tuple(leaf_lists))
    cols = enumerate_L_colorings(g, lists)
    phi1, phi2 = rnd.choice(cols), rnd.choice(cols)
    seq = lift_over_vertex(g, lists, 0, None, phi1, phi2)
    assert_replays(g, lists, seq, phi1, phi2)
    anchors = [m.anchor for m in seq.moves]
    assert sum(a != 0 for a in anchors) == sum(phi1[u] != phi2[u] for u in (1, 2, 3))
    assert all(not (a == b == 0) for a, b in zip(anchors, anchors[1:]))


@st.composite
def vertex_lift_instances(draw):
    g = draw(graphs(2, 7, connected=True))
    v = draw(st.integers(0, g.n - 1))
    lists = []
    for u in range(g.n):
        size = g.degree(u) + 1 if u == v else draw(st.integers(1, 3))
        lists.append(frozenset(draw(st.permutations(range(8)))[:size]))
    return g, v, ListAssignment(tuple(lists))


@given(vertex_lift_instances(), st.randoms(use_true_random=False))
def test_vertex_lift_matches_reachability(inst, rnd):
    g, v, lists = inst
    cols = enumerate_L_colorings(g, lists)
    assume(cols)
    phi1, phi2 = rnd.choice(cols), rnd.choice(cols)
    sub, keep = g.without([v])
    sub_lists = lists.restrict(keep)
    inner = kempe_equivalent(sub, sub_lists, [phi1[u] for u in keep], [phi2[u] for u in keep])
    reachable = kempe_equivalent(g, lists, phi1, phi2) is not None
    if inner is None:
        with pytest.raises(NotSwappableError):
            lift_over_vertex(g, lists, v, None, phi1, phi2)
        return
    seq = lift_over_vertex(g, lists, v, inner, phi1, phi2)
    assert_replays(g, lists, seq, phi1, phi2)
    assert reachable


# -- swappable_order_transform -----------------------------------------------

def test_order_transform_path_all_pairs():
    g = make_path(4)
    lists = ListAssignment.from_lists([{1, 2}, {2, 3}, {1, 3}, {1, 2}])
    cols = enumerate_L_colorings(g, lists)
    assert len(cols) == len(oracle_colorings(4, g.edges, lists.sorted_lists()))
    for phi1, phi2 in itertools.product(cols, repeat=2):
        seq = swappable_order_transform(g, lists, [0, 1, 2, 3], phi1, phi2)
        assert_replays(g, lists, seq, phi1, phi2)


def test_order_transform_single_vertex():
    g = Graph(1)
    lists = ListAssignment.from_lists([{1, 2}])
    assert len(swappable_order_transform(g, lists, [0], (1,), (1,))) == 0
    seq = swappable_order_transform(g, lists, [0], (1,), (2,))
    assert seq.moves == (KempeMove.of(0, 1, 2),)


def test_order_transform_names_violating_vertex():
    g = make_cycle(3)
    lists = ListAssignment.uniform(3, {1, 2, 3})
    with pytest.raises(ValueError, match="vertex 2"):
        swappable_order_transform(g, ListAssignment.from_lists([{1, 2}, {1, 2, 3}, {1, 2}]),
                                  [0, 1, 2], (1, 3, 2), (2, 3, 1))
    with pytest.raises(ValueError, match="permutation"):
        swappable_order_transform(g, lists, [0, 1], (1, 2, 3), (1, 2, 3))


@st.composite
def trees_with_two_lists(draw):
    n = draw(st.integers(1, 8))
    parents = [draw(st.integers(0, v - 1)) for v in range(1, n)]
    g = Graph(n, [(p, v) for v, p in zip(range(1, n), parents)])
    lists = [frozenset(draw(st.permutations(range(4)))[:2]) for _ in range(n)]
    return g, ListAssignment(tuple(lists))


@given(trees_with_two_lists(), st.randoms(use_true_random=False))
def test_order_transform_trees_with_two_lists(inst, rnd):
    g, lists = inst
    cols = enumerate_L_colorings(g, lists)
    phi1, phi2 = rnd.choice(cols), rnd.choice(cols)
    # BFS order from the root: every vertex has one earlier neighbor
    seq = swappable_order_transform(g, lists, list(range(g.n)), phi1, phi2)
    assert_replays(g, lists, seq, phi1, phi2)


# -- versatile_extension ------------------------------------------------------

def _swap_pairs(g, lists, partial, outside):
    """(w, alpha, beta) with a valid (alpha, beta)-swap at w for the partial coloring."""
    sub, keep = g.subgraph(outside)
    phi = [partial[u] for u in keep]
    palette = sorted(set().union(*(lists[u] for u in range(g.n))))
    out = []
    for i, w in enumerate(keep):
        for beta in palette:
            if beta == phi[i]:
                continue
            chain = kempe_chain(sub, phi, i, phi[i], beta)
            if all({phi[i], beta} - {phi[x]} <= lists[keep[x]] for x in chain):
                out.append((w, phi[i], beta))
    return out


def _merges(g, partial, phi, alpha, beta):
    """Largest number of old (alpha, beta)-components inside one new component (oracle)."""
    G = nx_graph(g.n, g.edges)
    old = G.subgraph([v for v in G if partial[v] in (alpha, beta)])
    new = G.subgraph([v for v in G if phi[v] in (alpha, beta)])
    worst = 0
    for comp in nx.connected_components(new):
        worst = max(worst, sum(1 for c in nx.connected_components(old) if c <= comp))
    return worst


def _versatile_instance(rng, n_max=8):
    """Random host, connected non-Gallai H, lists |L| >= d_G on H, partial coloring, swap pair."""
    while True:
        n = rng.randint(4, n_max)
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.4]
        edges += [(rng.randrange(v), v) for v in range(1, n)]
        g = Graph(n, edges)
        size = rng.randint(3, n - 1)
        h_set = sorted(rng.sample(range(n), size))
        h, _ = g.subgraph(h_set)
        if not is_connected(h) or is_gallai_tree(h):
            continue
        outside = [v for v in range(n) if v not in h_set]
        lists = []
        for v in range(n):
            k = g.degree(v) + (rng.random() < 0.3) if v in h_set else rng.randint(1, 3)
            lists.append(frozenset(rng.sample(range(7), min(k, 7))))
        lists = ListAssignment(tuple(lists))
        sub, keep = g.subgraph(outside)
        sub_phi = find_L_coloring(sub, lists.restrict(keep))
        if sub_phi is None:
            continue
        partial = [None] * n
        for u, c in zip(keep, sub_phi):
            partial[u] = c
        pairs = _swap_pairs(g, lists, partial, outside)
        if not pairs:
            continue
        w, alpha, beta = rng.choice(pairs)
        return g, h_set, lists, partial, w, alpha, beta


def test_versatile_extension_randomized():
    rng = random.Random(20261015)
    for _ in range(500):
        g, h_set, lists, partial, w, alpha, beta = _versatile_instance(rng)
        phi = versatile_extension(g, h_set, lists, partial, w, alpha, beta)
        assert check_versatile(g, h_set, lists, partial, phi, w, alpha, beta) == []
        assert all(phi[v] == partial[v] for v in range(g.n) if partial[v] is not None)
        assert is_proper_L_coloring(g, lists, phi)
        chain = kempe_chain(g, phi, w, alpha, beta)
        assert all({alpha, beta} <= lists[x] for x in chain)
        assert _merges(g, partial, phi, alpha, beta) <= 1


@given(st.data())
def test_versatile_c4_hanging_off_path(data):
    # path 0-1-2, edge 2-3, cycle 3-4-5-6
    g = Graph(7, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 3)])
    h_set = [3, 4, 5, 6]
    lists = [frozenset(data.draw(st.permutations(range(5)))[:s])
             for s in (data.draw(st.integers(1, 3)), 2, 2, 3, 2, 2, 2)]
    lists = ListAssignment(tuple(lists))
    sub, keep = g.subgraph([0, 1, 2])
    cols = enumerate_L_colorings(sub, lists.restrict(keep))
    assume(cols)
    partial = list(data.draw(st.sampled_from(cols))) + [None] * 4
    pairs = _swap_pairs(g, lists, partial, [0, 1, 2])
    assume(pairs)
    w, alpha, beta = data.draw(st.sampled_from(pairs))
    phi = versatile_extension(g, h_set, lists, partial, w, alpha, beta)
    assert check_versatile(g, h_set, lists, partial, phi, w, alpha, beta) == []
    assert _merges(g, partial, phi, alpha, beta) <= 1


def test_versatile_alternates_when_every_list_is_the_swap_pair():
    # H = cycle 0..3; 4 hangs off 0 with a color outside the pair; w = 5 behind it
    g = Graph(6, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 5)])
    lists = ListAssignment.from_lists([{1, 2, 3}, {1, 2}, {1, 2}, {1, 2}, {3}, {1, 2}])
    partial = [None, None, None, None, 3, 1]
    phi = versatile_extension(g, [0, 1, 2, 3], lists, partial, 5, 1, 2)
    cycle = [phi[v] for v in (0, 1, 2, 3)]
    assert set(cycle) == {1, 2}
    assert all(cycle[i] != cycle[(i + 1) % 4] for i in range(4))
    assert phi[4:] == (3, 1)


def test_versatile_with_chord_colors_gamma_first():
    # diamond: cycle 0-1-2-3 with chord 0-2; w = 4 hangs off 1
    g = Graph(5, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 4)])
    lists = ListAssignment.from_lists([{1, 2, 3}, {1, 2, 4}, {1, 2, 3}, {1, 2}, {1, 2}])
    partial = [None] * 4 + [1]
    phi = versatile_extension(g, [0, 1, 2, 3], lists, partial, 4, 1, 2)
    assert check_versatile(g, [0, 1, 2, 3], lists, partial, phi, 4, 1, 2) == []
    # chord end 0 keeps three colors, so it takes the smallest one outside the pair
    assert phi[0] == 3 or (phi[1] == phi[3] == 3)


@given(st.data())
def test_versatile_chord_random_lists(data):
    g = Graph(6, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 4), (3, 5)])
    sizes = [3, 3, 3, 3]
    lists = [frozenset(data.draw(st.permutations(range(5)))[:s]) for s in sizes]
    lists += [frozenset(data.draw(st.permutations(range(5)))[:data.draw(st.integers(1, 2))])
              for _ in range(2)]
    lists = ListAssignment(tuple(lists))
    partial = [None] * 4 + [data.draw(st.sampled_from(sorted(lists[4]))),
                            data.draw(st.sampled_from(sorted(lists[5])))]
    pairs = _swap_pairs(g, lists, partial, [4, 5])
    assume(pairs)
    w, alpha, beta = data.draw(st.sampled_from(pairs))
    phi = versatile_extension(g, [0, 1, 2, 3], lists, partial, w, alpha, beta)
    assert check_versatile(g, [0, 1, 2, 3], lists, partial, phi, w, alpha, beta) == []


def test_versatile_preconditions():
    g = Graph(5, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4)])
    lists = ListAssignment.from_lists([{1, 2, 3}, {1, 2}, {1, 2}, {1, 2}, {1, 2}])
    partial = [None] * 4 + [1]
    with pytest.raises(ValueError, match="differ"):
        versatile_extension(g, [0, 1, 2, 3], lists, partial, 4, 1, 1)
    with pytest.raises(ValueError, match="uncolored exactly"):
        versatile_extension(g, [0, 1, 2, 3], lists, [1, None, None, None, 1], 4, 1, 2)
    with pytest.raises(ValueError, match="w=0"):
        versatile_extension(g, [0, 1, 2, 3], lists, partial, 0, 1, 2)
    with pytest.raises(ValueError, match="colors, degree"):
        versatile_extension(g, [0, 1, 2, 3], ListAssignment.uniform(5, {1, 2}), partial, 4, 1, 2)
    tri = Graph(4, [(0, 1), (1, 2), (2, 0), (0, 3)])
    with pytest.raises(ValueError, match="Gallai"):
        versatile_extension(tri, [0, 1, 2], ListAssignment.from_lists([{1, 2, 3}] * 3 + [{1, 2}]),
                            [None, None, None, 1], 3, 1, 2)
    with pytest.raises(ValueError, match="not L-valid"):
        versatile_extension(g, [0, 1, 2, 3], ListAssignment.from_lists(
            [{1, 2, 3}, {1, 2}, {1, 2}, {1, 2}, {1}]), partial, 4, 1, 2)


def test_check_versatile_flags_problems():
    g = Graph(5, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4)])
    lists = ListAssignment.from_lists([{1, 2, 3}, {1, 2}, {1, 2}, {1, 2}, {1, 2}])
    partial = [None] * 4 + [1]
    assert check_versatile(g, range(4), lists, partial, (1, 2, 1, 2, 1), 4, 1, 2) == \
        ["not an L-coloring"]
    assert check_versatile(g, range(4), lists, partial, (3, 1, 2, 1, 2), 4, 1, 2) == \
        ["does not extend the partial coloring"]
    assert check_versatile(g, range(4), lists, partial, (3, 1, 2, 1, 1), 4, 1, 2) == []


# -- lift_over_subgraph -------------------------------------------------------

def _cube():
    return Graph(8, [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4),
                     (0, 4), (1, 5), (2, 6), (3, 7)])


def test_subgraph_lift_c4_in_cube():
    g = _cube()
    rng = random.Random(7)
    lifted = inner_fail = 0
    for _ in range(20):
        lists = random_assignment(g.degrees(), 5, rng)
        cols = enumerate_L_colorings(g, lists)
        phi1, phi2 = rng.choice(cols), rng.choice(cols)
        try:
            seq = lift_over_subgraph(g, [0, 1, 2, 3], lists, None, phi1, phi2)
        except NotSwappableError as exc:
            # the offending restricted assignment really is not swappable
            part = [0, 1, 2, 3] if "H is not" in str(exc) else [4, 5, 6, 7]
            sub, _ = g.subgraph(part)
            assert not is_L_swappable(sub, exc.lists).swappable
            inner_fail += 1
            continue
        assert_replays(g, lists, seq, phi1, phi2)
        assert kempe_equivalent(g, lists, phi1, phi2) is not None
        lifted += 1
    assert lifted > 0


def test_subgraph_lift_pure_inner_sequence():
    g = make_wheel(4)  # hub is 4
    host = Graph(6, g.sorted_edges() + [(0, 5)])
    lists = ListAssignment.from_lists([{1, 2, 3, 4}, {1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {1, 2, 3, 4}, {5, 6}])
    cols = [c for c in enumerate_L_colorings(host, lists) if c[5] == 5]
    h_set = [0, 1, 2, 3, 4]
    for phi1, phi2 in [(cols[0], cols[-1]), (cols[1], cols[len(cols) // 2])]:
        seq = lift_over_subgraph(host, h_set, lists, SwapSequence((5,), (5,), ()), phi1, phi2)
        assert_replays(host, lists, seq, phi1, phi2)
        trail = seq.replay(host, lists)
        assert all(c[5] == 5 for c in trail)
        for m in seq.moves:
            assert m.anchor in h_set


def test_subgraph_lift_key_lemma_specialization():
    # W4 with a pendant path; degree lists so f' equals the degree inside H
    g = Graph(7, make_wheel(4).sorted_edges() + [(0, 5), (5, 6)])
    h_set = [0, 1, 2, 3, 4]
    rng = random.Random(11)
    for _ in range(15):
        lists = random_assignment(g.degrees(), 6, rng)
        ctx = LiftContext(g, tuple(h_set), lists)
        assert all(ctx.reduced_sizes()[x] == ctx.inner_degrees()[x] for x in h_set)
        cols = enumerate_L_colorings(g, lists)
        if not cols:
            continue
        phi1, phi2 = rng.choice(cols), rng.choice(cols)
        seq = lift_over_subgraph(g, h_set, lists, None, phi1, phi2, context=ctx)
        assert_replays(g, lists, seq, phi1, phi2)
        assert len(ctx.extensions) == sum(1 for m in seq.moves if m.anchor not in h_set)
        assert is_L_swappable(g, lists).swappable


def test_subgraph_lift_preconditions():
    g = Graph(6, make_wheel(4).sorted_edges() + [(0, 5)])
    lists = ListAssignment.from_lists([{1, 2, 3}, {1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {1, 2, 3, 4}, {5}])
    with pytest.raises(ValueError, match="vertex 0"):
        lift_over_subgraph(g, [0, 1, 2, 3, 4], lists, None, (1, 2, 1, 3, 4, 5), (1, 2, 1, 3, 4, 5))
    ok = ListAssignment.from_lists([{1, 2, 3, 4}, {1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {1, 2, 3, 4}, {5}])
    with pytest.raises(ValueError, match="phi1"):
        lift_over_subgraph(g, [0, 1, 2, 3, 4], ok, None, (1, 1, 1, 3, 4, 5), (1, 2, 1, 3, 4, 5))


# -- builders -----------------------------------------------------------------

@pytest.mark.parametrize("n", [4, 5, 6, 8])
def test_example_cycle_two_isolated_colorings(n):
    g, lists = build_example1_cycle(n)
    report = is_L_swappable(g, lists)
    assert (report.coloring_count, report.component_count, report.move_count) == (2, 2, 0)
    assert len(oracle_colorings(n, g.edges, lists.sorted_lists())) == 2


def test_example_cycle_six_lists():
    g, lists = build_example1_cycle(6)
    assert g == make_cycle(6)
    assert lists.sorted_lists() == [[1, 2], [2, 3], [3, 4], [4, 5], [0, 5], [0, 1]]
    with pytest.raises(ValueError):
        build_example1_cycle(2)


def _two_triangles():
    return Graph(5, [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)])


def _chorded_cycle(n):
    edges = [(i, (i + 1) % n) for i in range(n) if i != 3] + [(0, 2)]
    return Graph(n, edges)


@pytest.mark.parametrize("tree,x,y", [
    (_two_triangles(), 1, 3),
    (_chorded_cycle(6), 3, 4),
    (_chorded_cycle(8), 3, 4),
    (make_path(4), 0, 3),
])
def test_gallai_plus_edge_is_choosable_but_not_swappable(tree, x, y):
    g, lists = build_gallai_plus_edge(tree, x, y)
    alpha = max(lists.palette())
    assert lists.is_degree_assignment(g)
    assert not is_gallai_tree(g)
    if g.n <= 8:
        assert brute_force_degree_choosable(g)
    cols = enumerate_L_colorings(g, lists)
    assert len(cols) >= 2
    assert all(alpha in (phi[x], phi[y]) for phi in cols)
    report = is_L_swappable(g, lists)
    assert not report.swappable and report.component_count >= 2


def test_gallai_plus_edge_preconditions():
    with pytest.raises(ValueError, match="not a Gallai tree"):
        build_gallai_plus_edge(make_cycle(4), 0, 2)
    with pytest.raises(ValueError, match="common block"):
        build_gallai_plus_edge(make_cycle(5), 0, 2)
    with pytest.raises(ValueError, match="already an edge"):
        build_gallai_plus_edge(_two_triangles(), 0, 1)
    with pytest.raises(ValueError, match="distinct"):
        build_gallai_plus_edge(_two_triangles(), 1, 1)
    with pytest.raises(ValueError, match="alpha=0"):
        build_gallai_plus_edge(_two_triangles(), 1, 3, alpha=0)
