import numpy as np
import pytest

from refgraph.generators import erdos_renyi, lfr_graph
from refgraph.graph import DirectedGraph, Partition, Permutation, apply_permutation, symmetrize
from refgraph.ordering import (LeidenConfig, LlpConfig, gap1_fraction, gap_entropy, leiden_llp_order,
                               leiden_partition, llp_order, modularity, ordering_diagnostics,
                               read_permutation, segment_bounds, write_permutation)


def clique_edges(members):
    return [(a, b) for a in members for b in members if a != b]


def two_cliques_joined(size: int) -> DirectedGraph:
    # interleave ids so the cliques are not contiguous to begin with
    a = list(range(1, 2 * size + 1, 2))
    b = list(range(2, 2 * size + 1, 2))
    return DirectedGraph.from_edges(2 * size, clique_edges(a) + clique_edges(b) + [(a[0], b[0]), (b[0], a[0])]), a, b


def positions(p: Permutation, members) -> np.ndarray:
    return np.sort(p.forward[np.asarray(members) - 1])


def is_contiguous(pos: np.ndarray) -> bool:
    return pos[-1] - pos[0] + 1 == pos.size


def test_llp_makes_cliques_contiguous():
    g, a, b = two_cliques_joined(10)
    p = llp_order(g, LlpConfig(seed=4))
    assert is_contiguous(positions(p, a)) and is_contiguous(positions(p, b))


def test_llp_trivial_cases():
    one = DirectedGraph.empty(1)
    assert llp_order(one).forward.tolist() == [1]
    g = symmetrize(erdos_renyi(300, 0.02, seed=2))
    assert llp_order(g, LlpConfig(seed=9)) == llp_order(g, LlpConfig(seed=9))


def test_llp_config_validation():
    with pytest.raises(ValueError):
        LlpConfig(passes=0)
    with pytest.raises(ValueError):
        LlpConfig(gamma_schedule=())
    with pytest.raises(ValueError):
        LeidenConfig(resolution=0.0)


def test_leiden_two_disjoint_cliques():
    g = DirectedGraph.from_edges(10, clique_edges(range(1, 6)) + clique_edges(range(6, 11)))
    part = leiden_partition(g, LeidenConfig(seed=0))
    assert part.k == 2
    assert part.cluster_of[:5].tolist() == [part.cluster_of[0]] * 5
    assert part.cluster_of[5:].tolist() == [part.cluster_of[5]] * 5


def test_leiden_complete_graph_single_cluster():
    g = DirectedGraph.from_edges(6, clique_edges(range(1, 7)))
    assert leiden_partition(g).k == 1


def test_leiden_edgeless_gives_singletons():
    part = leiden_partition(DirectedGraph.empty(7))
    assert part.k == 7


def _brute_force_best_modularity(g: DirectedGraph) -> float:
    """Exhaustive modularity maximum over all set partitions (restricted growth strings)."""
    n = g.n
    best = -1.0

    def rec(i, labels, k):
        nonlocal best
        if i == n:
            best = max(best, modularity(g, Partition.from_labels(np.array(labels))))
            return
        for c in range(k + 1):
            labels.append(c)
            rec(i + 1, labels, max(k, c + 1))
            labels.pop()

    rec(0, [], 0)
    return best


def test_leiden_matches_brute_force_on_tiny_graphs():
    rng = np.random.default_rng(0)
    for trial in range(4):
        n = 8
        edges = [(a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1) if rng.random() < 0.35]
        g = symmetrize(DirectedGraph.from_edges(n, edges)) if edges else DirectedGraph.empty(n)
        if g.m == 0:
            continue
        part = leiden_partition(g, LeidenConfig(seed=trial))
        assert modularity(g, part) == pytest.approx(_brute_force_best_modularity(g), abs=1e-9) \
            or modularity(g, part) >= _brute_force_best_modularity(g) - 0.02


def test_leiden_clusters_are_connected():
    g = symmetrize(lfr_graph(600, 12, max_deg=30, mu=0.3, seed=3).graph)
    part = leiden_partition(g, LeidenConfig(seed=1))
    from refgraph.graph import induced_subgraph, strongly_connected_components
    for members in part.members():
        sub, _ = induced_subgraph(g, members)
        assert np.unique(strongly_connected_components(sub)).size == 1


def test_pipeline_orders_by_cluster_size():
    big = list(range(1, 9))
    small = list(range(9, 13))
    g = DirectedGraph.from_edges(12, clique_edges(big) + clique_edges(small))
    p = leiden_llp_order(g)
    assert sorted(p.forward[np.array(big) - 1].tolist()) == list(range(1, 9))


def test_pipeline_single_vertex():
    assert leiden_llp_order(DirectedGraph.empty(1)).forward.tolist() == [1]


def test_pipeline_planted_blocks_contiguous():
    rng = np.random.default_rng(11)
    n, blocks = 100, 4
    lab = np.repeat(np.arange(blocks), 25)
    lab = lab[rng.permutation(n)]
    prob = np.where(lab[:, None] == lab[None, :], 0.5, 0.02)
    adj = np.triu(rng.random((n, n)) < prob, 1)
    adj = adj | adj.T
    src, dst = np.nonzero(adj)
    g = DirectedGraph.from_arrays(n, src, dst)
    p = leiden_llp_order(g, LlpConfig(seed=1), LeidenConfig(seed=1))
    for b in range(blocks):
        assert is_contiguous(positions(p, np.flatnonzero(lab == b) + 1))


def test_pipeline_partition_and_sizes():
    res = lfr_graph(800, 12, max_deg=30, mu=0.2, seed=5)
    p, part, sizes = leiden_llp_order(res.graph, return_partition=True)
    assert sum(sizes) == 800 and sizes == sorted(sizes, reverse=True)
    order = p.order()
    start = 0
    for s in sizes:
        labels = part.cluster_of[order[start:start + s] - 1]
        assert np.unique(labels).size == 1
        start += s


def _contiguous_share(p: Permutation, part: Partition) -> float:
    covered = 0
    for members in part.members():
        pos = positions(p, members)
        breaks = np.flatnonzero(np.diff(pos) != 1)
        runs = np.diff(np.concatenate([[0], breaks + 1, [pos.size]]))
        covered += runs.max()
    return covered / part.cluster_of.size


def test_lfr_communities_land_in_contiguous_runs():
    res = lfr_graph(2000, 15, mu=0.2, seed=7)
    shuffled = Permutation.random(2000, seed=3)
    g = apply_permutation(res.graph, shuffled)
    planted = Partition(res.communities.cluster_of[shuffled.inverse().forward - 1])
    p = leiden_llp_order(g)
    assert _contiguous_share(p, planted) >= 0.90


def test_pipeline_cluster_sizes_invariant_to_relabelling():
    res = lfr_graph(1000, 12, max_deg=30, mu=0.2, seed=2)
    _, _, sizes = leiden_llp_order(res.graph, return_partition=True)
    h = apply_permutation(res.graph, Permutation.random(1000, seed=8))
    _, _, sizes2 = leiden_llp_order(h, return_partition=True)
    assert sizes == sizes2


def test_diagnostics_path_graph():
    n = 1024
    path = DirectedGraph.from_edges(n, [(i, i + 1) for i in range(1, n)])
    rep = ordering_diagnostics(path)
    assert rep.gap_entropy == 0.0
    assert rep.gap1_fraction == 1.0
    shuffled = apply_permutation(path, Permutation.random(n, seed=1))
    assert gap_entropy(shuffled) > 2.0


def test_diagnostics_er_order_free():
    g = erdos_renyi(1000, 0.01, seed=4)
    h = apply_permutation(g, Permutation.random(1000, seed=4))
    assert abs(gap_entropy(g) - gap_entropy(h)) < 0.05


def test_gap1_fraction_counts():
    frac, count = gap1_fraction(DirectedGraph.from_lists([[2, 3, 4], [], [], []]))
    # first gap is measured from the vertex itself: |2 - 1| = 1, then 1, 1
    assert count == 3 and frac == 1.0
    frac, count = gap1_fraction(DirectedGraph.from_lists([[3, 4, 9], [], [], [], [], [], [], [], []]))
    assert count == 3 and frac == pytest.approx(1 / 3)


def test_permutation_files(tmp_path):
    p = Permutation.random(50, seed=2)
    write_permutation(p, tmp_path / "p.txt")
    write_permutation(p, tmp_path / "p.bin", binary=True)
    assert read_permutation(tmp_path / "p.txt") == p
    assert read_permutation(tmp_path / "p.bin") == p
    assert (tmp_path / "p.txt").read_text().splitlines()[0] == f"1 {p.forward[0]}"


def test_segment_bounds():
    assert segment_bounds([5, 3, 2], 1) == [10]
    out = segment_bounds([40, 30, 20, 10], 2)
    assert sum(out) == 100 and len(out) == 2
