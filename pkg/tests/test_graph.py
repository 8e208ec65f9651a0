import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from refgraph.graph import (DirectedGraph, GraphFormatError, Partition, Permutation, apply_permutation,
                            induced_subgraph, is_symmetric, largest_scc, load_edge_list, load_snapshot,
                            save_snapshot, strongly_connected_components, symmetrize, write_edge_list)

from conftest import random_graph


def test_load_basic():
    g = load_edge_list("1 2\n1 3\n2 3\n")
    assert (g.n, g.m) == (3, 3)
    assert g.successors(1).tolist() == [2, 3]


def test_load_dedups_and_skips_comments():
    g = load_edge_list("# header\n1 2\n1 2\n")
    assert g.m == 1
    text = "# FromNodeId ToNodeId\n10 20\n20 30\n30 10\n10 30\n"
    g = load_edge_list(text)
    assert (g.n, g.m) == (3, 4)


def test_load_remaps_first_seen():
    g, labels = load_edge_list("100 7\n7 100\n7 55\n", return_labels=True)
    assert labels.tolist() == ["100", "7", "55"]
    assert g.successors(2).tolist() == [1, 3]


def test_load_errors_carry_line_numbers():
    with pytest.raises(GraphFormatError, match="line 2"):
        load_edge_list("1 2\nfoo\n")
    with pytest.raises(GraphFormatError):
        load_edge_list("# only a comment\n")


def test_edge_list_roundtrip(tmp_path, small_graph):
    path = tmp_path / "g.txt"
    write_edge_list(small_graph, path)
    assert load_edge_list(path) == small_graph


def test_written_lists_keep_isolated_vertices():
    g = DirectedGraph.from_lists([[3], [], [], []])
    buf = io.StringIO()
    write_edge_list(g, buf)
    assert load_edge_list(buf.getvalue()) == g


def test_snapshot_roundtrip(tmp_path, small_graph):
    save_snapshot(small_graph, tmp_path / "g.rga")
    assert load_snapshot(tmp_path / "g.rga") == small_graph


def test_snapshot_bad_magic(tmp_path):
    (tmp_path / "x.rga").write_bytes(b"nope" + bytes(20))
    with pytest.raises(GraphFormatError):
        load_snapshot(tmp_path / "x.rga")


def test_symmetrize_examples():
    g = DirectedGraph.from_edges(2, [(1, 2)])
    assert symmetrize(g).edges().tolist() == [[1, 2], [2, 1]]
    cyc = DirectedGraph.from_edges(3, [(1, 2), (2, 3), (3, 1)])
    s = symmetrize(cyc)
    assert s.m == 6 and is_symmetric(s)
    assert symmetrize(s) == s


def test_induced_subgraph_examples():
    loop = DirectedGraph.from_edges(2, [(1, 1), (1, 2)])
    sub, l2g = induced_subgraph(loop, [1])
    assert (sub.n, sub.m) == (1, 1) and l2g.tolist() == [1]
    k4 = DirectedGraph.from_edges(4, [(a, b) for a in range(1, 5) for b in range(1, 5) if a != b])
    sub, l2g = induced_subgraph(k4, [1, 2, 4])
    assert (sub.n, sub.m) == (3, 6)
    assert l2g.tolist() == [1, 2, 4]
    with pytest.raises(ValueError):
        induced_subgraph(k4, [])
    full, _ = induced_subgraph(k4, range(1, 5))
    assert full == k4


def test_largest_scc_examples():
    g = DirectedGraph.from_edges(4, [(1, 2), (2, 3), (3, 1)])
    assert largest_scc(g).tolist() == [1, 2, 3]
    dag = DirectedGraph.from_edges(3, [(1, 2), (2, 3)])
    assert largest_scc(dag).tolist() == [1]
    two = DirectedGraph.from_edges(8, [(1, 2), (2, 3), (3, 1), (4, 5), (5, 6), (6, 7), (7, 8), (8, 4)])
    assert largest_scc(two).tolist() == [4, 5, 6, 7, 8]


def test_scc_deep_chain_does_not_recurse():
    n = 200_000
    edges = np.array([(i, i + 1) for i in range(1, n)] + [(n, 1)])
    g = DirectedGraph.from_edges(n, edges)
    assert np.unique(strongly_connected_components(g)).size == 1


def test_permutation_examples():
    cyc = DirectedGraph.from_edges(3, [(1, 2), (2, 3), (3, 1)])
    assert apply_permutation(cyc, Permutation.identity(3)) == cyc
    rev = apply_permutation(cyc, Permutation(np.array([3, 2, 1])))
    assert rev.m == 3 and largest_scc(rev).size == 3
    with pytest.raises(ValueError):
        Permutation(np.array([1, 1, 2]))


def test_permutation_preserves_structure():
    g = random_graph(100, 0.05, seed=1)
    p = Permutation.random(100, seed=5)
    h = apply_permutation(g, p)
    assert h.n == g.n and h.m == g.m
    assert sorted(h.degrees().tolist()) == sorted(g.degrees().tolist())
    fwd = p.forward
    for u, v in g.edges()[:50]:
        assert h.has_edge(int(fwd[u - 1]), int(fwd[v - 1]))
    assert apply_permutation(h, p.inverse()) == g


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 40), st.floats(0.0, 0.3), st.integers(0, 10 ** 6))
def test_symmetrize_commutes_with_relabelling(n, p, seed):
    g = random_graph(n, p, seed)
    perm = Permutation.random(n, seed)
    assert symmetrize(apply_permutation(g, perm)) == apply_permutation(symmetrize(g), perm)


def test_partition_invariants():
    part = Partition.from_labels(np.array([7, 7, 3, 9, 3]))
    assert part.cluster_of.tolist() == [0, 0, 1, 2, 1]
    assert part.cluster_sizes.tolist() == [2, 2, 1]
    assert part.k == 3
    with pytest.raises(ValueError):
        Partition(np.array([0, 2]))


def test_successor_lists_sorted_and_validated():
    g = DirectedGraph.from_lists([[3, 2], [], [1]])
    assert g.successors(1).tolist() == [2, 3]
    g.validate()
    assert g.lists() == [[2, 3], [], [1]]
