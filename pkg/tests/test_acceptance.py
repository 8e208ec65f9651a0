"""Acceptance suite: one printed PASS/FAIL line per criterion."""
import gzip
import math
import os
import time
import urllib.request
from pathlib import Path

import numpy as np
import pytest

import conftest
from refgraph.bench import Dataset, feature_ablation, measure, order_graph, run_matrix, transfer_deltas
from refgraph.bitcodes import ALL_FAMILIES, CodeFamily, decode_many, encode_many
from refgraph.codecs import bv_vertex_parts, encode
from refgraph.container import RandomAccess, build_container, bpe, index_overhead_bits, open_container
from refgraph.generators import erdos_renyi, lfr_graph, web_graph
from refgraph.graph import DirectedGraph, apply_permutation, load_edge_list
from refgraph.kernel import KernelConfig, KernelContext
from refgraph.ordering import leiden_llp_order

X_MAX = 10 ** 6
PUBLISHED_INDEX_OVERHEAD = 0.036
CNR = dict(n=325_557, m=3_216_152)
AMAZON_URL = "https://snap.stanford.edu/data/amazon0601.txt.gz"


def report(criterion: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}"
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


# ----------------------------------------------------------------------------- 1: code lengths
def _floor_log2(x: np.ndarray) -> np.ndarray:
    return np.floor(np.log2(x)).astype(np.int64)


def zeckendorf_lengths(x: np.ndarray) -> np.ndarray:
    """Zeckendorf oracle: digits up to the largest Fibonacci number <= x, plus the terminator."""
    fibs = [1, 2]
    while fibs[-1] <= x.max():
        fibs.append(fibs[-1] + fibs[-2])
    top = np.searchsorted(np.array(fibs), x, side="right") - 1
    return top + 2


def zeta_shell_lengths(x: np.ndarray, k: int) -> np.ndarray:
    """Unary shell selector h+1 plus the minimal binary code of x - 2^(hk)
    among the 2^((h+1)k) - 2^(hk) members of the shell."""
    h = _floor_log2(x) // k
    lo = 2 ** (h * k)
    size = 2 ** ((h + 1) * k) - lo
    s = np.ceil(np.log2(size)).astype(np.int64)
    short = (x - lo) < (2 ** s - size)
    return h + 1 + np.where(short, s - 1, s)


def closed_form(family: CodeFamily, x: np.ndarray) -> np.ndarray:
    lg = _floor_log2(x)
    if family.name == "gamma" or family.name == "zeta1":
        return 2 * lg + 1
    if family.name == "delta":
        return lg + 2 * _floor_log2(lg + 1) + 1
    if family.name == "fibonacci":
        return zeckendorf_lengths(x)
    return zeta_shell_lengths(x, family.k)


def test_criterion_1a_code_conformance():
    t0 = time.perf_counter()
    x = np.arange(1, X_MAX + 1, dtype=np.int64)
    failures = []
    for fam in ALL_FAMILIES:
        data, ends = encode_many(x, fam)
        vals, dends = decode_many(data, X_MAX, fam)
        lengths = np.diff(np.concatenate([[0], ends]))
        if not np.array_equal(vals, x) or not np.array_equal(dends, ends):
            failures.append(f"{fam.name} roundtrip")
        if not np.array_equal(lengths, closed_form(fam, x)):
            failures.append(f"{fam.name} length")
    elapsed = time.perf_counter() - t0
    phi = (1 + math.sqrt(5)) / 2
    literal_fib = np.floor(np.log(x * math.sqrt(5)) / math.log(phi)).astype(np.int64) + 1
    fib_off = int(np.sum(literal_fib != zeckendorf_lengths(x)))
    ok = not failures and elapsed < 60
    report("1a", ok, f"{len(ALL_FAMILIES)} families x 1..10^6 roundtrip + closed-form lengths "
                     f"(gamma/zeta1/delta formulas, fibonacci vs Zeckendorf oracle, zeta-k shell form) "
                     f"in {elapsed:.1f}s; failures={failures or 'none'}; "
                     f"note: floor(log_phi(x*sqrt5))+1 differs from the Zeckendorf length on {fib_off} values")


def test_criterion_1b_literal_zeta_formula():
    x = np.arange(1, X_MAX + 1, dtype=np.int64)
    parts = []
    ok = True
    for k in range(2, 8):
        fam = CodeFamily.zeta(k)
        literal = (_floor_log2(x) // k) * (k + 1) + k
        diff = int(np.sum(fam.lengths(x) != literal))
        kraft = float(np.sum(np.exp2(-literal.astype(np.float64))))
        parts.append(f"k={k}: {diff} mismatches, Kraft sum {kraft:.2f}")
        ok &= diff == 0
    report("1b", ok, "zeta-k (k>=2) lengths vs floor(log_{2^k} x)*(k+1)+k; " + "; ".join(parts))


# ----------------------------------------------------------------------------- 2: worked example
def test_criterion_2_worked_example():
    lists = [[] for _ in range(500)]
    lists[497] = [12, 13, 15, 20, 33, 45, 46, 47, 88]
    lists[499] = [12, 13, 14, 15, 20, 45, 46, 47, 100]
    g = DirectedGraph.from_lists(lists)
    stream = encode(g, "bv")
    p = bv_vertex_parts(g, 500, int(stream.actions[499]))
    ok = (p.reference == 498 and p.blocks == [4, 1, 3, 1] and p.copied == 7 and len(lists[497]) == 9
          and p.residual_gaps == [14, 86])
    report("2", ok, f"reference={p.reference} blocks={p.blocks} copied={p.copied}/9 "
                    f"residual gaps={p.residual_gaps}")


# ----------------------------------------------------------------------------- 3: roundtrip matrix
def test_criterion_3_roundtrip_matrix():
    t0 = time.perf_counter()
    datasets = [Dataset("er", erdos_renyi(10_000, 0.005, seed=1)), Dataset("web", web_graph(10_000, seed=1))]
    datasets += [Dataset(f"lfr-mu{mu}", lfr_graph(10_000, 15, mu=mu, seed=1).graph) for mu in (0.1, 0.5, 0.9)]
    rows = run_matrix(datasets, windows=(8, 64))  # every cell is decode-verified or raises
    elapsed = time.perf_counter() - t0
    expected = len(datasets) * 3 * (1 + 3 * 2)
    ok = len(rows) == expected and elapsed < 600
    report("3", ok, f"{len(rows)}/{expected} cells decode-equal (4 codecs x 3 orderings x 5 graphs x w in "
                    f"{{8,64}}) in {elapsed:.0f}s")


# ----------------------------------------------------------------------------- 4: optimality
def test_criterion_4_planner_equals_brute_force():
    g = web_graph(500, seed=4)
    configs = {"bg": KernelConfig(window=8, shortlist=8, multi_ref_topk=8),
               "cs": KernelConfig(window=8, shortlist=8, header="cs", multi_ref=False),
               "cg": KernelConfig(window=8, shortlist=8, header="cg", multi_ref=False)}
    bad = []
    for name, cfg in configs.items():
        ctx = KernelContext(g, cfg)
        bad += [(name, v + 1) for v in range(g.n) if ctx.plan(v)[0] != ctx.brute_force(v)]
    report("4", not bad, f"500-vertex web graph, w=8, {len(configs)} header styles: "
                         f"{3 * g.n - len(bad)}/{3 * g.n} vertices with planner cost == brute-force cost")


# ----------------------------------------------------------------------------- 5, 6: ordering gains
@pytest.fixture(scope="module")
def lfr_rows():
    ds = Dataset("lfr2000", lfr_graph(2000, 15, mu=0.2, seed=7).graph)
    return run_matrix([ds], windows=(8, 64))


def test_criterion_5_ordering_gain(lfr_rows):
    by = {(r.codec, r.params, r.ordering): r.bpe for r in lfr_rows}
    cells = sorted({(c, p) for c, p, _ in by})
    details, ok = [], True
    for c, p in cells:
        rnd, llp, ll = by[c, p, "original"], by[c, p, "llp"], by[c, p, "leiden_llp"]
        ok &= (rnd - ll >= 1.5) and (llp - ll > 0)
        details.append(f"{c}/{p}: random {rnd:.3f} llp {llp:.3f} leiden+llp {ll:.3f}")
    report("5", ok, "LFR(2000, 15, mu=0.2, seed 7) gain >= 1.5 over random and > 0 over llp; " + "; ".join(details))


def test_criterion_6_transfer_spread(lfr_rows):
    t = transfer_deltas(lfr_rows)[("lfr2000", "w=64")]
    d = " ".join(f"{c}={v:+.3f}" for c, v in t["deltas"].items())
    report("6", t["spread"] <= 0.3, f"w=64 leiden+llp - llp deltas {d}; spread {t['spread']:.3f} (<= 0.3)")


# ----------------------------------------------------------------------------- 7: sampled index
def test_criterion_7_sampled_index():
    base = web_graph(10_000, avg_deg=10, seed=7)
    perm = leiden_llp_order(base)
    g = apply_permutation(base, perm)
    k = 64
    rng = np.random.default_rng(7)
    queries = rng.integers(1, g.n + 1, size=10_000)
    mismatches, formula_ok, parts = 0, True, []
    for codec, kw in (("bv", {}), ("bg", {"window": 64}), ("cs", {"window": 64}),
                      ("cg", {"window": 64, "clusters": [g.n // 2, g.n - g.n // 2]})):
        stream = encode(g, codec, stride=k, **kw)
        data = build_container(stream, "index")
        ra = RandomAccess(data)
        for v in queries:
            got = ra.successors(int(v))
            mismatches += (not np.array_equal(got, g.successors(int(v)))) or ra.records_decoded > k
        c = open_container(data)
        clusters = len(stream.cluster_sizes) if codec == "cg" else None
        formula = index_overhead_bits(g.n, k, clusters)
        measured = 8 * c.index_bytes
        formula_ok &= measured == formula
        children = measure(g, codec, kw.get("window"), clusters=kw.get("clusters")) if codec == "cg" \
            else measure(g, codec, kw.get("window"))
        delta_file = bpe(data, g.m) - children[0]
        parts.append(f"{codec}: index {measured / g.m:.4f} bpe (formula {formula / g.m:.4f}), "
                     f"file delta vs children {delta_file:+.4f}")
    # scale: our 64-bit offsets at CNR-2000's n/m; the published +0.036 implies narrower offsets
    ours_cnr = index_overhead_bits(CNR["n"], k) / CNR["m"]
    implied_width = PUBLISHED_INDEX_OVERHEAD * CNR["m"] / math.ceil(CNR["n"] / k)
    band_ok = PUBLISHED_INDEX_OVERHEAD <= ours_cnr <= PUBLISHED_INDEX_OVERHEAD * 64 / 16
    ok = mismatches == 0 and formula_ok and band_ok
    report("7", ok, f"{4 * len(queries)} queries, {mismatches} mismatches, index section == "
                    f"ceil(n/k)*64 (+ CG directory) bits: {formula_ok}; at CNR-2000 size our overhead is "
                    f"{ours_cnr:.4f} bpe vs published 0.036 (implies {implied_width:.1f}-bit offsets; "
                    f"band [0.036, 0.144] for 16..64-bit offsets); " + "; ".join(parts))


# ----------------------------------------------------------------------------- 8: SNAP dataset
def _amazon_path() -> Path | None:
    env = os.environ.get("REFGRAPH_AMAZON0601")
    if env and Path(env).exists():
        return Path(env)
    dest = Path(os.environ.get("REFGRAPH_DATA", Path.home() / ".cache" / "refgraph")) / "amazon0601.txt.gz"
    if dest.exists():
        return dest
    try:
        dest.parent.mkdir(parents=True, exist_ok=True)
        with urllib.request.urlopen(AMAZON_URL, timeout=20) as resp:
            dest.write_bytes(resp.read())
        return dest
    except OSError:
        return None


def test_criterion_8_amazon_smoke():
    path = _amazon_path()
    if path is None:
        conftest.ACCEPTANCE_LINES.append("[SKIP] criterion 8: amazon-0601 unavailable "
                                         "(set REFGRAPH_AMAZON0601 to a local edge list)")
        pytest.skip("amazon-0601 not available offline")
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "rt") as fh:
        g = load_edge_list(fh)
    orig = measure(g, "cg", 64)[0]
    ll = apply_permutation(g, order_graph(g, "leiden_llp"))
    best = {c: measure(ll, c, 64)[0] for c in ("bg", "cs", "cg")}
    bv = measure(ll, "bv")[0]
    gain = 1 - best["cg"] / orig
    ok = gain >= 0.20 and min(best.values()) <= bv
    report("8", ok, f"amazon-0601 cg w=64: file order {orig:.3f} -> leiden+llp {best['cg']:.3f} "
                    f"({100 * gain:.1f}% smaller); best kernel {min(best.values()):.3f} vs bv {bv:.3f}")


# ----------------------------------------------------------------------------- 9: ablation
def test_criterion_9_low_degree_ablation():
    g = web_graph(10_000, seed=0)
    rows = feature_ablation(g)
    steps = rows[1:]
    low = steps[-1]
    gains = sorted(steps, key=lambda r: r.delta)
    rank = [r.step for r in gains].index(low.step) + 1
    ok = low.delta < 0 and rank <= 2
    table = ", ".join(f"{r.step} {r.delta:+.3f}" for r in steps)
    report("9", ok, f"web(10^4) low-degree ref search delta {low.delta:+.3f}, rank {rank} by gain; {table}")
