import numpy as np
import pytest

from refgraph.bench import order_graph
from refgraph.bitcodes import CodeFamily
from refgraph.codecs import (BV_COMPONENTS, BvParams, CorruptStream, action_histogram, bg_config,
                             bv_vertex_parts, cg_config, encode, encode_bv, encode_kernel)
from refgraph.container import build_container, decompress
from refgraph.generators import erdos_renyi, lfr_graph, web_graph
from refgraph.graph import DirectedGraph, apply_permutation
from refgraph.kernel import action_parts
from refgraph.ordering import leiden_llp_order, segment_bounds

from conftest import random_graph

CODECS = ("bv", "bg", "cs", "cg")


def worked_example_graph() -> DirectedGraph:
    lists = [[] for _ in range(500)]
    lists[497] = [12, 13, 15, 20, 33, 45, 46, 47, 88]
    lists[499] = [12, 13, 14, 15, 20, 45, 46, 47, 100]
    return DirectedGraph.from_lists(lists)


def roundtrip(g, codec, **kw):
    data = build_container(encode(g, codec, **kw))
    assert decompress(data) == g
    return data


def test_bv_worked_example():
    g = worked_example_graph()
    stream = encode_bv(g)
    assert int(stream.actions[499]) == 2
    parts = bv_vertex_parts(g, 500, 2)
    assert parts.reference == 498
    assert parts.blocks == [4, 1, 3, 1]
    assert parts.copied == 7
    assert parts.intervals == []
    assert parts.residual_gaps == [14, 86]
    roundtrip(g, "bv")


def test_bv_budget_sums_to_record_bits():
    g = web_graph(2000, seed=1)
    stream = encode_bv(g)
    assert set(stream.budget) == set(BV_COMPONENTS)
    assert sum(stream.budget.values()) == stream.bits - stream.preamble_bits
    data = build_container(stream)
    assert 8 * len(data) - stream.bits < 8 + 8 * 12


def test_bv_empty_vertex_is_one_gamma_bit():
    g = DirectedGraph.from_lists([[], [1]])
    stream = encode_bv(g)
    assert int(stream.record_bits[0]) == 1


def test_bv_chain_depth_bounded():
    n = 60
    base = list(range(1, 30))
    g = DirectedGraph.from_lists([base] * n)
    stream = encode_bv(g, BvParams(max_ref=3))
    offs = stream.actions
    depth = np.zeros(n, dtype=int)
    for v in range(n):
        if offs[v]:
            depth[v] = depth[v - offs[v]] + 1
    assert depth.max() <= 3
    roundtrip(g, "bv")


@pytest.mark.parametrize("codec", CODECS)
@pytest.mark.parametrize("p", [0.001, 0.01, 0.1])
def test_roundtrip_er(codec, p):
    roundtrip(erdos_renyi(400, p, seed=3), codec)


@pytest.mark.parametrize("codec", CODECS)
@pytest.mark.parametrize("window", [8, 64, 256])
def test_roundtrip_web_windows(codec, window):
    roundtrip(web_graph(1500, seed=4), codec, window=window)


@pytest.mark.parametrize("codec", CODECS)
@pytest.mark.parametrize("mu", [0.1, 0.3, 0.5, 0.7, 0.9])
def test_roundtrip_lfr(codec, mu):
    roundtrip(lfr_graph(600, 12, max_deg=30, mu=mu, seed=2).graph, codec, window=16)


@pytest.mark.parametrize("codec", CODECS)
@pytest.mark.parametrize("ordering", ["original", "llp", "leiden_llp"])
def test_roundtrip_orderings(codec, ordering):
    g = web_graph(800, seed=6)
    h = apply_permutation(g, order_graph(g, ordering, seed=1))
    roundtrip(h, codec)


@pytest.mark.parametrize("codec", ["bg", "cs", "cg"])
def test_roundtrip_with_self_loops_and_zeta(codec, small_graph):
    roundtrip(small_graph, codec)
    roundtrip(small_graph, codec, family=CodeFamily.zeta(3))
    roundtrip(small_graph, codec, cost_model="fast")


@pytest.mark.parametrize("k", [1, 2, 4])
def test_cg_clusters_roundtrip(k):
    res = lfr_graph(900, 12, max_deg=30, mu=0.2, seed=8)
    perm, _, sizes = leiden_llp_order(res.graph, return_partition=True)
    g = apply_permutation(res.graph, perm)
    stream = encode(g, "cg", window=16, clusters=segment_bounds(sizes, k))
    assert len(stream.cluster_sizes) == k
    assert decompress(build_container(stream)) == g


def test_cg_two_communities_use_local_ids():
    n = 40
    blocks = [range(1, 21), range(21, 41)]
    edges = [(a, b) for blk in blocks for a in blk for b in blk if a != b and (a + b) % 3 == 0]
    edges += [(1, 40), (40, 1)]
    g = DirectedGraph.from_edges(n, edges)
    stream = encode(g, "cg", clusters=[20, 20])
    assert stream.cluster_sizes == (20, 20)
    assert decompress(build_container(stream)) == g


def test_cg_rejects_non_contiguous_clusters():
    g = random_graph(10, 0.3, seed=1)
    with pytest.raises(ValueError):
        encode(g, "cg", clusters=[4, 4])


def test_cg_k1_is_fixed_width_kernel():
    g = web_graph(500, seed=2)
    a = encode(g, "cg", window=64)
    b = encode_kernel(g, "cg", cg_config(64))
    assert a.data == b.data
    assert a.config.fixed_offsets and a.config.offset_bits == 6


def test_bg_clique_members_reference():
    edges = [(a, b) for a in range(1, 11) for b in range(1, 11) if a != b]
    edges += [(a, b) for a in range(11, 21) for b in range(11, 21) if a != b]
    g = DirectedGraph.from_edges(20, edges)
    stream = encode(g, "bg", window=8)
    ref_modes = [action_parts(int(a))[0] if a else 0 for a in stream.actions]
    assert all(m >= 1 for m in ref_modes[1:10])
    assert all(m >= 1 for m in ref_modes[11:20])


def test_bg_modal_action_on_web_graph():
    # natural generator order is the locality order
    hist = action_histogram(encode(web_graph(5000, seed=0), "bg"))
    assert next(iter(hist)) == "ref+delta", hist


def test_low_degree_search_never_worse():
    for g in (web_graph(1500, seed=3), erdos_renyi(500, 0.01, seed=1),
              lfr_graph(600, 12, max_deg=30, mu=0.3, seed=4).graph):
        hi = encode_kernel(g, "bg", bg_config(min_ref_degree=3)).bits
        lo = encode_kernel(g, "bg", bg_config(min_ref_degree=1)).bits
        assert lo <= hi


def test_best_encoder_beats_baseline_on_ordered_web_graph():
    g = web_graph(5000, seed=2)
    h = apply_permutation(g, order_graph(g, "leiden_llp", seed=0))
    bv = len(build_container(encode(h, "bv")))
    best = min(len(build_container(encode(h, c, window=8))) for c in ("bg", "cs", "cg"))
    assert best <= bv


def test_encoders_reject_unsupported_family():
    with pytest.raises(ValueError):
        encode(random_graph(10, 0.3, 0), "bg", family=CodeFamily.gamma())


@pytest.mark.parametrize("codec", CODECS)
def test_truncated_stream_raises_with_position(codec):
    g = web_graph(300, seed=1)
    data = build_container(encode(g, codec))
    with pytest.raises(CorruptStream) as exc:
        decompress(data[: len(data) // 2])
    assert exc.value.position >= 0


@pytest.mark.parametrize("codec", CODECS)
def test_empty_graph(codec):
    data = build_container(encode(DirectedGraph.empty(0), codec))
    assert decompress(data).n == 0


@pytest.mark.parametrize("codec", CODECS)
def test_edgeless_graph(codec):
    roundtrip(DirectedGraph.empty(17), codec)


def test_encoding_is_deterministic():
    g = web_graph(700, seed=5)
    for codec in CODECS:
        assert build_container(encode(g, codec)) == build_container(encode(g, codec))
