from collections import Counter
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mimicnet.errors import InputError, InvariantError
from mimicnet.graph import (Multigraph, attach_pendant_terminals, build_piece,
                            contract_edges, from_weighted, merge_pendant_groups,
                            separating_contraction)
from mimicnet.pipeline import BuildConfig, build_network
from mimicnet.verify import tc_equivalent

from conftest import multigraph, nx_edge_mincut, weighted_mincut


def multiplicities(G):
    return Counter(tuple(sorted(uv)) for uv in G.edges.values())


def test_multigraph_basics():
    G = multigraph([(1, 2), (1, 2), (2, 3)])
    assert (G.n, G.m) == (3, 3)
    assert G.degree(2) == 3 and G.degree(3) == 1
    assert sorted(G.neighbors(2)) == [1, 1, 3]
    assert G.other_end(2, 3) == 2
    assert G == multigraph([(1, 2), (1, 2), (2, 3)])
    with pytest.raises(InputError):
        Multigraph({1}, {0: (1, 1)})
    with pytest.raises(InputError):
        Multigraph({1}, {0: (1, 2)})


def test_from_weighted_single_unit_edge():
    assert multiplicities(from_weighted([(1, 2, 1)], 3)) == {(1, 2): 1}


def test_from_weighted_caps_at_c_plus_one():
    G = from_weighted([(1, 2, 10)], 3)
    assert multiplicities(G) == {(1, 2): 4}
    # the capped edge inside a 4-vertex host graph: every bipartition agrees after capping
    host = [(1, 2, 10), (2, 3, 1), (3, 4, 2), (4, 1, 1)]
    Gc = from_weighted(host, 3)
    for r in range(1, 4):
        for S in combinations([1, 2, 3, 4], r):
            full = sum(w for u, v, w in host if (u in S) != (v in S))
            capped = sum(1 for u, v in Gc.edges.values() if (u in S) != (v in S))
            assert min(full, 3) == min(capped, 3)


def test_from_weighted_triangle():
    G = from_weighted([(1, 2, 1), (2, 3, 2), (1, 3, 5)], 2)
    assert multiplicities(G) == {(1, 2): 1, (2, 3): 2, (1, 3): 3}


def test_from_weighted_ids_follow_input_order_and_drop_loops():
    G = from_weighted([(1, 1, 3), (2, 1, 2), (3, 2, 1)], 5)
    assert G.edges == {0: (2, 1), 1: (2, 1), 2: (3, 2)}
    assert G.vertices == {1, 2, 3}


@pytest.mark.parametrize("w", [0, -1, 1.5, "2", True])
def test_from_weighted_rejects_bad_weights(w):
    with pytest.raises(InputError):
        from_weighted([(1, 2, w)], 2)


def test_from_weighted_rejects_bad_c():
    with pytest.raises(InputError):
        from_weighted([(1, 2, 1)], 0)


@given(seed=st.integers(0, 2**32), c=st.integers(1, 4))
def test_capping_preserves_capped_cuts(seed, c):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 9))
    edges = [(int(u), int(v), int(w)) for u, v, w in
             zip(rng.integers(1, n + 1, 12), rng.integers(1, n + 1, 12), rng.integers(1, 9, 12))]
    G = from_weighted(edges, c, range(1, n + 1))
    A = {1}
    B = {n}
    for extra in range(2, n):
        if rng.random() < 0.3:
            (A if rng.random() < 0.5 else B).add(extra)
    assert min(nx_edge_mincut(G, A, B), c) == min(weighted_mincut(edges, A, B), c)


def test_attach_pendants_counts():
    G = multigraph([(1, 2), (2, 3)])
    G2, T2, pm = attach_pendant_terminals(G, (1, 3), 3)
    assert len(T2) == 6
    assert all(G2.degree(t) == 1 for t in T2)
    assert pm.groups[1] == (4, 5, 6) and pm.groups[3] == (7, 8, 9)
    G1, T1, _ = attach_pendant_terminals(multigraph([(1, 2)]), (1,), 1)
    assert len(T1) == 1 and G1.m == 2


def test_attach_pendants_on_path_caps_group_cut_at_one():
    G = multigraph([(1, 2), (2, 3)])
    G2, T2, pm = attach_pendant_terminals(G, (1, 3), 2)
    assert (G2.n, len(T2)) == (7, 4)
    assert min(nx_edge_mincut(G2, pm.groups[1], pm.groups[3]), 2) == 1


def test_contract_nothing_is_identity():
    G = multigraph([(1, 2), (2, 3), (1, 3)])
    H, vm = contract_edges(G, [])
    assert H == G and all(vm[v] == v for v in G.vertices)


def test_contract_triangle_edge():
    G = multigraph([(1, 2), (2, 3), (1, 3)])
    H, vm = contract_edges(G, [0])
    assert H.n == 2 and H.m == 2
    assert vm[1] == vm[2] == 1
    assert set(H.edges) == {1, 2}


def test_contract_prefers_named_vertex_and_rejects_unknown_ids():
    G = multigraph([(1, 2), (2, 3)])
    H, vm = contract_edges(G, [0, 1], prefer=[3])
    assert H.vertices == {3} and vm[1] == 3
    with pytest.raises(InputError):
        contract_edges(G, [7])


@given(seed=st.integers(0, 2**32))
def test_contraction_never_decreases_mincut(seed):
    rng = np.random.default_rng(seed)
    n = 10
    pairs = []
    while len(pairs) < 18:
        u, v = (int(x) for x in rng.integers(0, n, 2))
        if u != v:
            pairs.append((u, v))
    G = multigraph(pairs, range(n))
    E = [e for e in G.edges if rng.random() < 0.3]
    H, vm = contract_edges(G, E)
    for _ in range(5):
        verts = rng.permutation(n)
        A, B = set(int(x) for x in verts[:2]), set(int(x) for x in verts[2:4])
        if {vm[a] for a in A} & {vm[b] for b in B}:
            continue
        before = nx_edge_mincut(G, A, B)
        after = nx_edge_mincut(H, {vm[a] for a in A}, {vm[b] for b in B})
        assert after >= before


def test_separating_contraction_keeps_marked_vertices_apart():
    G = multigraph([(1, 2), (2, 3), (3, 4), (4, 1), (2, 4)])
    keep = separating_contraction(G, G.edges, apart=[1, 3])
    H, vm = contract_edges(G, keep)
    assert vm[1] != vm[3]
    assert H.n == 2


def test_build_piece_examples():
    G = multigraph([(1, 2), (2, 3), (3, 4), (4, 1)])
    empty = build_piece(multigraph([(1, 2)], [1, 2, 3]), (), {3})
    assert empty.terminals == () and empty.graph.m == 0
    star = multigraph([(0, 1), (0, 2), (0, 3)])
    p = build_piece(star, (1, 2, 3), {0})
    assert len(p.terminals) == 3 and p.graph.m == 3
    assert all(p.graph.degree(t) == 1 for t in p.terminals)
    assert sorted(p.stub_edge.values()) == [0, 1, 2]
    with pytest.raises(InputError):
        build_piece(G, (1,), {1, 2})


def test_six_cycle_split_into_two_pieces():
    cyc = multigraph([(i, (i + 1) % 6) for i in range(6)])
    a = build_piece(cyc, (), {0, 1, 2})
    b = build_piece(cyc, (), {3, 4, 5})
    assert len(a.terminals) == len(b.terminals) == 2
    assert set(a.stub_edge.values()) == set(b.stub_edge.values()) == {2, 5}


def test_merge_pendant_groups_renaming_for_c_one():
    G = multigraph([(1, 2), (2, 3)])
    G2, T2, pm = attach_pendant_terminals(G, (1, 3), 1)
    H, vm = contract_edges(G2, [0, 1])  # collapse the path onto vertex 1
    M, vm2 = merge_pendant_groups(H, pm)
    assert set(M.vertices) >= {1, 3}
    assert vm2[4] == 1 and vm2[5] == 3
    assert vm2[1] not in (1, 3)  # the old path vertex collided with terminal 1


def test_merge_pendant_groups_with_parallel_edges():
    G = multigraph([(1, 2)])
    G2, T2, pm = attach_pendant_terminals(G, (1, 2), 2)
    M, _ = merge_pendant_groups(G2, pm)
    assert M.n == 4  # the old terminals survive under fresh ids next to the merged ones


def test_merge_pendant_groups_missing_pendant():
    G = multigraph([(1, 2)])
    G2, T2, pm = attach_pendant_terminals(G, (1, 2), 1)
    H, _ = contract_edges(G2, [pm.edges[1][0]])
    with pytest.raises(InvariantError):
        merge_pendant_groups(H, pm)


def test_pipeline_on_path_is_equivalent_for_c_two(path_t1_a_t2):
    G, T = path_t1_a_t2
    net = build_network(G, T, BuildConfig(c=2))
    assert tc_equivalent(G, net.graph, T, 2).equivalent
