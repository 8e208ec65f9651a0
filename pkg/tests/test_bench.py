import csv
import io

import pytest

from refgraph.bench import (ABLATION_BASELINE, ABLATION_STEPS, CSV_FIELDS, BenchRow, Dataset,
                            VerificationError, budget_table, feature_ablation, format_budget, measure,
                            order_graph, ordered_variants, run_matrix, transfer_deltas, window_sweep,
                            write_csv)
from refgraph.codecs import bg_config, encode_kernel
from refgraph.container import build_container
from refgraph.generators import lfr_graph, web_graph
from refgraph.graph import Permutation

# CNR-2000 bit budget of the BV baseline (published figures, used as printer fixture)
CNR_EDGES = 3_216_152
CNR_BUDGET = {"outdegrees": 1_660_205, "references": 781_540, "copy blocks": 1_353_080,
              "intervals": 829_187, "residuals": 4_694_729}


@pytest.fixture(scope="module")
def lfr_small():
    return Dataset("lfr600", lfr_graph(600, 10, max_deg=30, mu=0.2, seed=1).graph)


@pytest.fixture(scope="module")
def matrix_rows(lfr_small):
    return run_matrix([lfr_small], windows=(8,))


def test_matrix_cardinality(matrix_rows):
    assert len(matrix_rows) == 12
    assert {(r.ordering, r.codec) for r in matrix_rows} == \
        {(o, c) for o in ("original", "llp", "leiden_llp") for c in ("bv", "bg", "cs", "cg")}
    assert all(r.bpe > 0 for r in matrix_rows)


def test_matrix_two_windows_measures_bv_once(lfr_small):
    rows = run_matrix([lfr_small], orderings=("llp",), windows=(8, 64))
    assert [r.codec for r in rows].count("bv") == 1
    assert len(rows) == 1 + 3 * 2


def test_transfer_spread_is_max_minus_min(matrix_rows):
    t = transfer_deltas(matrix_rows)
    (key, entry), = t.items()
    assert key == ("lfr600", "w=8")
    d = entry["deltas"]
    assert set(d) == {"bg", "cs", "cg"}
    by = {(r.codec, r.ordering): r.bpe for r in matrix_rows}
    for c in d:
        assert d[c] == pytest.approx(by[c, "leiden_llp"] - by[c, "llp"])
    assert entry["spread"] == pytest.approx(max(d.values()) - min(d.values()))


def test_csv_schema(matrix_rows, tmp_path):
    buf = io.StringIO()
    write_csv(matrix_rows, buf)
    rows = list(csv.DictReader(io.StringIO(buf.getvalue())))
    assert tuple(rows[0]) == CSV_FIELDS
    assert len(rows) == 12
    write_csv(matrix_rows, tmp_path / "m.csv")
    assert (tmp_path / "m.csv").read_bytes().decode() == buf.getvalue()


def test_bench_row_rejects_nonpositive_bpe():
    with pytest.raises(ValueError):
        BenchRow("d", "o", "bg", "", 0.0, 1, 1)


def test_original_ordering_is_random_for_synthetic_only():
    g = web_graph(300, seed=1)
    assert order_graph(g, "original", 4) == Permutation.random(300, 4)
    assert order_graph(g, "original", 4, synthetic=False) == Permutation.identity(300)
    with pytest.raises(ValueError):
        order_graph(g, "bfs")


def test_ordered_variants_share_a_base(lfr_small):
    v = ordered_variants(lfr_small, ("original", "llp"), seed=0)
    assert v["original"].m == v["llp"].m == lfr_small.graph.m
    assert sorted(v["original"].degrees()) == sorted(v["llp"].degrees())


def test_measure_detects_a_broken_roundtrip(monkeypatch):
    import refgraph.bench as bench
    g = web_graph(200, seed=2)
    monkeypatch.setattr(bench, "decompress", lambda data: web_graph(200, seed=3))
    with pytest.raises(VerificationError):
        measure(g, "bg", 8)


def test_window_sweep_rows():
    g = web_graph(1000, seed=3)
    rows = window_sweep(g, dataset="web1k")
    assert [r.params for r in rows] == [f"w={w},cost_model=exact" for w in (8, 16, 32, 64, 128, 256)]
    assert all(r.codec == "bg" and r.dataset == "web1k" for r in rows)


@pytest.fixture(scope="module")
def ablation():
    return feature_ablation(web_graph(3000, seed=0))


def test_ablation_baseline_equals_plain_bg_with_features_off(ablation):
    g = web_graph(3000, seed=0)
    cfg = bg_config(**{**ABLATION_BASELINE, "shortlist": 8})
    data = build_container(encode_kernel(g, "bg", cfg))
    assert ablation[0].step == "baseline"
    assert ablation[0].bpe == 8 * len(data) / g.m
    assert [r.step for r in ablation[1:]] == [s for s, _ in ABLATION_STEPS]


def test_ablation_deltas_are_consecutive_differences(ablation):
    for prev, cur in zip(ablation, ablation[1:]):
        assert cur.delta == pytest.approx(cur.bpe - prev.bpe)


def test_ablation_low_degree_step_negative(ablation):
    g = web_graph(3000, seed=0)
    assert (g.degrees() <= 2).mean() >= 0.10
    assert ablation[-1].delta < 0


def test_ablation_no_step_materially_hurts(ablation):
    bad = [(r.step, round(r.delta, 4)) for r in ablation[1:] if r.delta > 0.005]
    assert not bad, f"steps with delta above +0.005 bpe: {bad}"


def test_budget_fixture_total():
    lines = budget_table(CNR_BUDGET, CNR_EDGES)
    total = lines[-1]
    assert total.component == "total" and total.bits == 9_318_741
    rounded = [round(ln.bpe, 3) for ln in lines[:-1]]
    assert rounded == [0.516, 0.243, 0.421, 0.258, 1.460]
    assert round(sum(rounded), 3) == 2.898
    assert [round(100 * ln.share, 1) for ln in lines[:-1]] == [17.8, 8.4, 14.5, 8.9, 50.4]
    text = format_budget(CNR_BUDGET, CNR_EDGES)
    assert "9,318,741" in text and "1.460" in text
    with pytest.raises(ValueError):
        budget_table(CNR_BUDGET, 0)
